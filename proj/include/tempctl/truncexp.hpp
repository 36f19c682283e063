#ifndef TEMPCTL_TRUNCEXP_HPP_
#define TEMPCTL_TRUNCEXP_HPP_

namespace tempctl {

// Admissible temperature interval [lo, hi] with 0 < lo < hi.
class TemperatureRange {
 public:
  // Throws std::invalid_argument unless 0 < lo < hi (both finite).
  TemperatureRange(double lo, double hi);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double width() const { return hi_ - lo_; }
  bool contains(double u) const { return u >= lo_ && u <= hi_; }

  friend bool operator==(const TemperatureRange&, const TemperatureRange&) = default;

 private:
  double lo_;
  double hi_;
};

// Density proportional to exp(-rate * u) on [lo, hi]. rate may take either
// sign; rate = 0 is the uniform distribution.
class TruncExpDist {
 public:
  TruncExpDist(double rate, TemperatureRange range);

  double rate() const { return rate_; }
  const TemperatureRange& range() const { return range_; }

 private:
  double rate_;
  TemperatureRange range_;
};

// Below this value of |rate| * (hi - lo) the closed forms are replaced by
// their expansions around rate = 0.
inline constexpr double kSeriesThreshold = 1e-8;

// ln of the integral of exp(-rate * u) over [lo, hi]. Finite for any finite
// rate that keeps |rate| * max(|lo|, |hi|) representable in the log domain.
double log_partition(const TruncExpDist& dist);

// E[u], strictly inside (lo, hi) for finite rate and strictly decreasing in
// rate.
double mean(const TruncExpDist& dist);

// Differential entropy -E[ln pdf(u)] <= ln(hi - lo).
double entropy(const TruncExpDist& dist);

// Density at u. Throws std::invalid_argument when u is outside [lo, hi].
double pdf(const TruncExpDist& dist, double u);

// Distribution function; 0 below lo and 1 above hi.
double cdf(const TruncExpDist& dist, double u);

// Inverse-CDF transform of u01 in [0, 1). Monotone increasing; returns lo at
// u01 = 0. Throws std::invalid_argument for u01 outside [0, 1).
double sample(const TruncExpDist& dist, double u01);

// Noise scale of the entropy-regularized Langevin dynamics:
// sqrt(2 * mean(TruncExpDist{vxx / lambda, range})). Lies in
// [sqrt(2 lo), sqrt(2 hi)]. Throws std::invalid_argument unless lambda > 0.
double diffusion_coeff(double vxx, double lambda, const TemperatureRange& range);

namespace detail {

// The two evaluation routes behind log_partition / mean / sample. The public
// functions pick the series when |rate| * width < kSeriesThreshold.
double log_partition_series(const TruncExpDist& dist);
double log_partition_closed(const TruncExpDist& dist);
double mean_series(const TruncExpDist& dist);
double mean_closed(const TruncExpDist& dist);
double sample_series(const TruncExpDist& dist, double u01);
double sample_closed(const TruncExpDist& dist, double u01);

}  // namespace detail

}  // namespace tempctl

#endif  // TEMPCTL_TRUNCEXP_HPP_
