#include "tempctl/objective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tempctl {

namespace {

double double_well_value(double x) {
  if (x > 6.0) return 4.0 * x - 20.0;
  if (x > 2.0) return (x - 4.0) * (x - 4.0);
  if (x > -2.0) return 8.0 - x * x;
  if (x > -6.0) return 2.0 * (x + 3.0) * (x + 3.0) + 2.0;
  return -12.0 * x - 52.0;
}

double double_well_slope(double x) {
  if (x > 6.0) return 4.0;
  if (x > 2.0) return 2.0 * (x - 4.0);
  if (x > -2.0) return -2.0 * x;
  if (x > -6.0) return 4.0 * (x + 3.0);
  return -12.0;
}

void require_finite(double x) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("objective evaluated at a non-finite point");
  }
}

}  // namespace

Objective1D double_well() {
  Objective1D obj;
  obj.name = "double-well";
  obj.eval = double_well_value;
  obj.grad = double_well_slope;
  obj.grad_bound = 12.0;
  obj.breakpoints = {-6.0, -2.0, 2.0, 6.0};
  return obj;
}

double eval_f(const Objective1D& obj, double x) {
  require_finite(x);
  return obj.eval(x);
}

double eval_grad(const Objective1D& obj, double x) {
  require_finite(x);
  return obj.grad(x);
}

ObjectiveRegistry::ObjectiveRegistry() { add("double-well", double_well); }

ObjectiveRegistry& ObjectiveRegistry::instance() {
  static ObjectiveRegistry registry;
  return registry;
}

void ObjectiveRegistry::add(const std::string& name, ObjectiveFactory factory) {
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [&](const auto& e) { return e.first == name; });
  if (it != entries_.end()) {
    it->second = std::move(factory);
  } else {
    entries_.emplace_back(name, std::move(factory));
  }
}

bool ObjectiveRegistry::contains(const std::string& name) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const auto& e) { return e.first == name; });
}

Objective1D ObjectiveRegistry::make(const std::string& name) const {
  for (const auto& [key, factory] : entries_) {
    if (key == name) return factory();
  }
  throw std::out_of_range("unknown objective '" + name + "'");
}

std::vector<std::string> ObjectiveRegistry::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.first);
  return out;
}

}  // namespace tempctl
