#include "tempctl/truncexp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tempctl {

namespace {

// Closed forms are written in terms of t = |rate| * (hi - lo) with the density
// shifted to its dominant endpoint (lo for rate >= 0, hi for rate < 0).

// 1/t - 1/expm1(t): mean offset from the dominant endpoint in units of width.
double mean_offset(double t) {
  if (t < 1e-2) {
    const double t2 = t * t;
    return 0.5 - t / 12.0 + t * t2 / 720.0 - t * t2 * t2 / 30240.0;
  }
  return 1.0 / t - 1.0 / std::expm1(t);
}

// ln((1 - exp(-t)) / t).
double log_shape(double t) { return std::log(-std::expm1(-t) / t); }

// Entropy minus ln(width).
double entropy_offset(double t) {
  if (t < 1e-2) {
    const double t2 = t * t;
    return -t2 / 24.0 + t2 * t2 / 960.0 - t2 * t2 * t2 / 36288.0;
  }
  return 1.0 + log_shape(t) - t / std::expm1(t);
}

bool use_series(const TruncExpDist& d) {
  return std::abs(d.rate()) * d.range().width() < kSeriesThreshold;
}

double scaled_rate(const TruncExpDist& d) {
  return std::abs(d.rate()) * d.range().width();
}

double dominant_endpoint(const TruncExpDist& d) {
  return d.rate() >= 0.0 ? d.range().lo() : d.range().hi();
}

// log_partition + rate * dominant_endpoint; O(1) even for huge |rate|.
double shifted_log_partition(const TruncExpDist& d) {
  const double w = d.range().width();
  if (use_series(d)) {
    const double y = d.rate();
    const double mid = 0.5 * (d.range().lo() + d.range().hi());
    return std::log(w) - y * (mid - dominant_endpoint(d)) + y * y * w * w / 24.0;
  }
  return std::log(w) + log_shape(scaled_rate(d));
}

}  // namespace

TemperatureRange::TemperatureRange(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo > 0.0 && lo < hi)) {
    throw std::invalid_argument("temperature range requires 0 < lo < hi");
  }
}

TruncExpDist::TruncExpDist(double rate, TemperatureRange range)
    : rate_(rate), range_(range) {
  if (std::isnan(rate)) throw std::invalid_argument("rate is NaN");
}

namespace detail {

double log_partition_series(const TruncExpDist& dist) {
  const auto& r = dist.range();
  const double y = dist.rate();
  const double w = r.width();
  return std::log(w) - y * 0.5 * (r.lo() + r.hi()) + y * y * w * w / 24.0;
}

double log_partition_closed(const TruncExpDist& dist) {
  return std::log(dist.range().width()) + log_shape(scaled_rate(dist)) -
         dist.rate() * dominant_endpoint(dist);
}

double mean_series(const TruncExpDist& dist) {
  const auto& r = dist.range();
  return 0.5 * (r.lo() + r.hi()) - dist.rate() * r.width() * r.width() / 12.0;
}

double mean_closed(const TruncExpDist& dist) {
  const auto& r = dist.range();
  const double offset = r.width() * mean_offset(scaled_rate(dist));
  return dist.rate() > 0.0 ? r.lo() + offset : r.hi() - offset;
}

// First-order expansion of the inverse CDF in rate * width.
double sample_series(const TruncExpDist& dist, double u01) {
  const double w = dist.range().width();
  const double eps = dist.rate() * w;
  return dist.range().lo() + w * u01 * (1.0 - 0.5 * eps * (1.0 - u01));
}

double sample_closed(const TruncExpDist& dist, double u01) {
  const auto& r = dist.range();
  const double y = std::abs(dist.rate());
  const double tail = std::expm1(-scaled_rate(dist));
  // Distance from the dominant endpoint at probability q.
  auto offset = [&](double q) { return -std::log1p(q * tail) / y; };
  const double u =
      dist.rate() > 0.0 ? r.lo() + offset(u01) : r.hi() - offset(1.0 - u01);
  return std::clamp(u, r.lo(), r.hi());
}

}  // namespace detail

double log_partition(const TruncExpDist& dist) {
  return use_series(dist) ? detail::log_partition_series(dist)
                          : detail::log_partition_closed(dist);
}

double mean(const TruncExpDist& dist) {
  return use_series(dist) ? detail::mean_series(dist) : detail::mean_closed(dist);
}

double entropy(const TruncExpDist& dist) {
  const double t = scaled_rate(dist);
  const double w = dist.range().width();
  if (use_series(dist)) return std::log(w) - t * t / 24.0;
  return std::log(w) + entropy_offset(t);
}

double pdf(const TruncExpDist& dist, double u) {
  if (!dist.range().contains(u)) {
    throw std::invalid_argument("pdf evaluated outside the temperature range");
  }
  const double gap = u - dominant_endpoint(dist);
  return std::exp(-dist.rate() * gap - shifted_log_partition(dist));
}

double cdf(const TruncExpDist& dist, double u) {
  const auto& r = dist.range();
  if (u <= r.lo()) return 0.0;
  if (u >= r.hi()) return 1.0;
  if (use_series(dist)) {
    const double s = (u - r.lo()) / r.width();
    return s + 0.5 * dist.rate() * r.width() * s * (1.0 - s);
  }
  const double y = std::abs(dist.rate());
  const double denom = std::expm1(-scaled_rate(dist));
  if (dist.rate() > 0.0) return std::expm1(-y * (u - r.lo())) / denom;
  return 1.0 - std::expm1(-y * (r.hi() - u)) / denom;
}

double sample(const TruncExpDist& dist, double u01) {
  if (!(u01 >= 0.0 && u01 < 1.0)) {
    throw std::invalid_argument("sample requires u01 in [0, 1)");
  }
  return use_series(dist) ? detail::sample_series(dist, u01)
                          : detail::sample_closed(dist, u01);
}

double diffusion_coeff(double vxx, double lambda, const TemperatureRange& range) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("entropy weight lambda must be positive");
  }
  return std::sqrt(2.0 * mean(TruncExpDist(vxx / lambda, range)));
}

}  // namespace tempctl
