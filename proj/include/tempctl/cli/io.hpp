#ifndef TEMPCTL_CLI_IO_HPP_
#define TEMPCTL_CLI_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "tempctl/hjb.hpp"
#include "tempctl/simulate.hpp"

namespace tempctl::cli {

// "%.12g"; every CSV goes through this.
std::string format_number(double x);

// k,mean_f,std_err,min_f,max_f
void write_stats_csv(std::ostream& out, const RunResult& result);

// k,<name>_mean_f,<name>_std_err,... in the given order. All runs must have
// the same number of iterations.
void write_wide_csv(std::ostream& out,
                    const std::vector<std::pair<std::string, RunResult>>& runs);

// x,v,vx,vxx,h,temperature at every node.
void write_solution_csv(std::ostream& out, const HjbSolution& sol);

// x,v,vxx,h,temperature on n evenly spaced points of [lo, hi]; n = 1 gives
// the single point lo.
void write_profile_csv(std::ostream& out, const HjbSolution& sol, double lo, double hi, int n);

// Creates parent directories; throws std::runtime_error on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace tempctl::cli

#endif  // TEMPCTL_CLI_IO_HPP_
