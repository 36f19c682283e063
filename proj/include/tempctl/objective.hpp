#ifndef TEMPCTL_OBJECTIVE_HPP_
#define TEMPCTL_OBJECTIVE_HPP_

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace tempctl {

// A scalar objective f : R -> R together with its derivative.
//
// grad_bound is a documented uniform bound on |f'| (infinite when unknown).
// It is metadata only and is never enforced. breakpoints lists the points
// where f'' may jump, in increasing order.
struct Objective1D {
  std::string name;
  std::function<double(double)> eval;
  std::function<double(double)> grad;
  double grad_bound = std::numeric_limits<double>::infinity();
  std::vector<double> breakpoints;
};

// Asymmetric double well with local minima at -3 (f = 2) and 4 (f = 0):
//
//   4x - 20          x > 6
//   (x - 4)^2        2 < x <= 6
//   8 - x^2         -2 < x <= 2
//   2(x + 3)^2 + 2  -6 < x <= -2
//   -12x - 52        x <= -6
Objective1D double_well();

// Throw std::invalid_argument for non-finite x.
double eval_f(const Objective1D& obj, double x);
double eval_grad(const Objective1D& obj, double x);

using ObjectiveFactory = std::function<Objective1D()>;

// Name -> constructor map used by the CLI. "double-well" is always present.
class ObjectiveRegistry {
 public:
  static ObjectiveRegistry& instance();

  void add(const std::string& name, ObjectiveFactory factory);
  bool contains(const std::string& name) const;
  // Throws std::out_of_range for unknown names.
  Objective1D make(const std::string& name) const;
  std::vector<std::string> names() const;

 private:
  ObjectiveRegistry();
  std::vector<std::pair<std::string, ObjectiveFactory>> entries_;
};

}  // namespace tempctl

#endif  // TEMPCTL_OBJECTIVE_HPP_
