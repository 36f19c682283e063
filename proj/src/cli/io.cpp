#include "tempctl/cli/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace tempctl::cli {

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_stats_csv(std::ostream& out, const RunResult& result) {
  out << "k,mean_f,std_err,min_f,max_f\n";
  for (const auto& s : result.stats) {
    out << s.k << ',' << format_number(s.mean_f) << ',' << format_number(s.std_err) << ','
        << format_number(s.min_f) << ',' << format_number(s.max_f) << '\n';
  }
}

void write_wide_csv(std::ostream& out,
                    const std::vector<std::pair<std::string, RunResult>>& runs) {
  if (runs.empty()) throw std::invalid_argument("no runs to write");
  const std::size_t n = runs.front().second.stats.size();
  out << 'k';
  for (const auto& [name, r] : runs) {
    if (r.stats.size() != n) throw std::invalid_argument("runs differ in length");
    out << ',' << name << "_mean_f," << name << "_std_err";
  }
  out << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    out << runs.front().second.stats[i].k;
    for (const auto& [name, r] : runs) {
      out << ',' << format_number(r.stats[i].mean_f) << ',' << format_number(r.stats[i].std_err);
    }
    out << '\n';
  }
}

void write_solution_csv(std::ostream& out, const HjbSolution& sol) {
  out << "x,v,vx,vxx,h,temperature\n";
  const auto& p = sol.params;
  for (std::size_t i = 0; i < sol.nodes.size(); ++i) {
    const double h = diffusion_coeff(sol.vxx[i], p.lambda, p.range);
    out << format_number(sol.nodes[i]) << ',' << format_number(sol.v[i]) << ','
        << format_number(sol.vx[i]) << ',' << format_number(sol.vxx[i]) << ','
        << format_number(h) << ',' << format_number(0.5 * h * h) << '\n';
  }
}

void write_profile_csv(std::ostream& out, const HjbSolution& sol, double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("profile grid needs at least one point");
  if (!(lo <= hi)) throw std::invalid_argument("profile grid needs lo <= hi");
  out << "x,v,vxx,h,temperature\n";
  for (int i = 0; i < n; ++i) {
    const double x = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    const double h = eval_h(sol, x);
    out << format_number(x) << ',' << format_number(eval_v(sol, x)) << ','
        << format_number(eval_vxx(sol, x)) << ',' << format_number(h) << ','
        << format_number(0.5 * h * h) << '\n';
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace tempctl::cli
