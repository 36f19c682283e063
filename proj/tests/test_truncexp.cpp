#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "oracle/quadrature.hpp"
#include "tempctl/truncexp.hpp"

using namespace tempctl;

namespace {

const TemperatureRange kRange(0.0001, 500.0);

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(b), 1e-300);
}

const std::vector<double> kRateGrid = {-1e4, -1e2, -1.0, -1e-10, 0.0,
                                       1e-10, 1.0, 1e2, 1e4};

}  // namespace

TEST_CASE("temperature range validation") {
  CHECK_THROWS_AS(TemperatureRange(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(TemperatureRange(2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(TemperatureRange(1.0, 1.0), std::invalid_argument);
  CHECK_NOTHROW(TemperatureRange(0.0001, 500.0));
}

TEST_CASE("oracle quadrature sanity") {
  // Closed forms computed by hand for a rate-1 law on [0.5, 1].
  const oracle::TruncExp q{1.0, 0.5, 1.0};
  const double z = std::exp(-0.5) - std::exp(-1.0);
  CHECK(close_rel(q.log_partition(), std::log(z), 1e-13));
  const double m = (1.5 * std::exp(-0.5) - 2.0 * std::exp(-1.0)) / z;
  CHECK(close_rel(q.mean(), m, 1e-13));
}

TEST_CASE("log partition") {
  SUBCASE("uniform case") {
    CHECK(log_partition(TruncExpDist(0.0, kRange)) ==
          doctest::Approx(std::log(499.9999)).epsilon(1e-15));
    CHECK(std::log(499.9999) == doctest::Approx(6.2146).epsilon(1e-4));
  }
  SUBCASE("rate 1 on [1/2, 1]") {
    const TruncExpDist d(1.0, TemperatureRange(0.5, 1.0));
    CHECK(log_partition(d) == doctest::Approx(-1.4327).epsilon(1e-4));
    CHECK(close_rel(log_partition(d), oracle::TruncExp{1.0, 0.5, 1.0}.log_partition(),
                    1e-12));
  }
  SUBCASE("negative rate is the reflected positive rate") {
    // rate -1 on [a, c] equals rate +1 on [-c, -a] after u -> -u.
    const oracle::TruncExp reflected{1.0, -500.0, -0.0001};
    CHECK(close_rel(log_partition(TruncExpDist(-1.0, kRange)),
                    reflected.log_partition(), 1e-12));
  }
  SUBCASE("no overflow at large rates") {
    for (double rate : {-1e5, 1e5, -1e7, 1e7}) {
      CHECK(std::isfinite(log_partition(TruncExpDist(rate, kRange))));
    }
  }
}

TEST_CASE("closed forms agree with quadrature across the rate grid") {
  for (double rate : kRateGrid) {
    CAPTURE(rate);
    const TruncExpDist d(rate, kRange);
    const oracle::TruncExp q{rate, kRange.lo(), kRange.hi()};
    CHECK(close_rel(log_partition(d), q.log_partition(), 1e-8));
    CHECK(close_rel(mean(d), q.mean(), 1e-8));
    CHECK(close_rel(entropy(d), q.entropy(), 1e-8));
  }
}

TEST_CASE("mean") {
  CHECK(mean(TruncExpDist(0.0, kRange)) == doctest::Approx(250.00005));
  CHECK(std::abs(mean(TruncExpDist(1e6, kRange)) - 0.0001) < 1e-4);
  CHECK(std::abs(mean(TruncExpDist(-1e6, kRange)) - 500.0) < 1e-4);
  const oracle::TruncExp q{0.01, 0.0001, 500.0};
  CHECK(close_rel(mean(TruncExpDist(0.01, kRange)), q.mean(), 1e-8));

  SUBCASE("strictly inside the range and strictly decreasing in rate") {
    double prev = kRange.hi();
    for (double e = -6.0; e <= 6.0; e += 0.01) {
      const double rate = std::sinh(e * 2.3);
      const double m = mean(TruncExpDist(rate, kRange));
      CAPTURE(rate);
      CHECK(m > kRange.lo());
      CHECK(m < kRange.hi());
      CHECK(m < prev);
      prev = m;
    }
  }
}

TEST_CASE("diffusion coefficient") {
  CHECK(diffusion_coeff(0.0, 0.3125, kRange) ==
        doctest::Approx(std::sqrt(500.0001)).epsilon(1e-15));
  CHECK(diffusion_coeff(0.0, 0.3125, kRange) == doctest::Approx(22.3607).epsilon(1e-5));
  CHECK(std::abs(diffusion_coeff(1e6 * 0.3125, 0.3125, kRange) - 0.01414) < 1e-3);

  const oracle::TruncExp q{1.0, 0.0001, 500.0};
  CHECK(close_rel(diffusion_coeff(0.3125, 0.3125, kRange), std::sqrt(2.0 * q.mean()),
                  1e-8));

  CHECK_THROWS_AS(diffusion_coeff(1.0, 0.0, kRange), std::invalid_argument);
  CHECK_THROWS_AS(diffusion_coeff(1.0, -1.0, kRange), std::invalid_argument);

  SUBCASE("bounded and strictly decreasing in vxx") {
    const double lo = std::sqrt(2.0 * kRange.lo());
    const double hi = std::sqrt(2.0 * kRange.hi());
    double prev = hi;
    for (double e = -5.0; e <= 5.0; e += 0.01) {
      const double vxx = std::sinh(e * 2.3);
      const double h = diffusion_coeff(vxx, 0.3125, kRange);
      CAPTURE(vxx);
      CHECK(h > lo);
      CHECK(h < hi);
      CHECK(h < prev);
      prev = h;
    }
  }
}

TEST_CASE("entropy") {
  CHECK(entropy(TruncExpDist(0.0, kRange)) ==
        doctest::Approx(std::log(499.9999)).epsilon(1e-15));

  // Negentropy on [a, 1] is at least a.
  const TemperatureRange unit(0.0001, 1.0);
  CHECK(-entropy(TruncExpDist(1.0, unit)) >= unit.lo());

  const TemperatureRange half(0.5, 1.0);
  const oracle::TruncExp q{5.0, 0.5, 1.0};
  CHECK(close_rel(entropy(TruncExpDist(5.0, half)), q.entropy(), 1e-8));

  SUBCASE("uniform maximizes entropy") {
    // The deficit is (rate * width)^2 / 24 for small rates, so it is below
    // double resolution at |rate| = 1e-10 and only <= can be checked there.
    const double h0 = entropy(TruncExpDist(0.0, kRange));
    for (double rate : kRateGrid) {
      CAPTURE(rate);
      CHECK(entropy(TruncExpDist(rate, kRange)) <= h0);
      if (std::abs(rate) * kRange.width() > 1e-6) {
        CHECK(entropy(TruncExpDist(rate, kRange)) < h0);
      }
    }
  }
  SUBCASE("entropy is log partition plus rate times mean") {
    for (double rate : {-3.0, -0.1, 0.02, 0.7, 4.0}) {
      const TruncExpDist d(rate, TemperatureRange(0.2, 3.0));
      CHECK(entropy(d) == doctest::Approx(log_partition(d) + rate * mean(d)).epsilon(1e-13));
    }
  }
}

TEST_CASE("pdf") {
  for (double u : {0.0001, 1.0, 250.0, 500.0}) {
    CHECK(pdf(TruncExpDist(0.0, kRange), u) == doctest::Approx(1.0 / 499.9999));
  }
  CHECK_THROWS_AS(pdf(TruncExpDist(1.0, kRange), 600.0), std::invalid_argument);
  CHECK_THROWS_AS(pdf(TruncExpDist(1.0, kRange), 0.0), std::invalid_argument);

  SUBCASE("normalized") {
    std::vector<double> rates = kRateGrid;
    rates.insert(rates.end(), {-10.0, 10.0});
    for (double rate : rates) {
      CAPTURE(rate);
      const TruncExpDist d(rate, kRange);
      const oracle::TruncExp q{rate, kRange.lo(), kRange.hi()};
      const double mass = oracle::integrate([&](double u) { return pdf(d, u); },
                                            kRange.lo(), kRange.hi(), q.splits());
      CHECK(std::abs(mass - 1.0) <= 1e-10);
    }
  }
  SUBCASE("monotone in u according to the sign of the rate") {
    const TruncExpDist up(-0.02, kRange);
    const TruncExpDist down(0.02, kRange);
    for (int i = 1; i <= 1000; ++i) {
      const double u0 = 0.0001 + (i - 1) * 0.4999999;
      const double u1 = 0.0001 + i * 0.4999999;
      CHECK(pdf(down, u1) < pdf(down, u0));
      CHECK(pdf(up, u1) > pdf(up, u0));
    }
  }
}

TEST_CASE("sampling") {
  const TruncExpDist d(2.0, kRange);
  CHECK(sample(d, 0.0) == kRange.lo());
  CHECK(sample(TruncExpDist(-2.0, kRange), 0.0) == doctest::Approx(kRange.lo()));
  CHECK(sample(d, std::nextafter(1.0, 0.0)) <= kRange.hi());
  CHECK(sample(TruncExpDist(-2.0, kRange), std::nextafter(1.0, 0.0)) ==
        doctest::Approx(kRange.hi()));
  CHECK(sample(TruncExpDist(0.0, kRange), 0.5) == doctest::Approx(250.00005));
  CHECK_THROWS_AS(sample(d, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(sample(d, -0.1), std::invalid_argument);

  SUBCASE("monotone in u01") {
    for (double rate : {-1.0, -1e-9, 0.0, 0.01, 3.0}) {
      const TruncExpDist dd(rate, kRange);
      double prev = sample(dd, 0.0);
      for (int i = 1; i < 1000; ++i) {
        const double s = sample(dd, i / 1000.0);
        CHECK(s >= prev);
        prev = s;
      }
    }
  }

  SUBCASE("inverse of the distribution function") {
    // Rates up to 1e2: beyond that pdf * ulp(hi) alone exceeds 1e-10.
    for (double rate : {-1e2, -1.0, -1e-10, 0.0, 1e-10, 0.01, 1.0, 1e2}) {
      const TruncExpDist dd(rate, kRange);
      for (double p : {0.01, 0.5, 0.99}) {
        CAPTURE(rate);
        CAPTURE(p);
        CHECK(std::abs(cdf(dd, sample(dd, p)) - p) <= 1e-10);
      }
    }
    // Cross-check the closed-form distribution function against quadrature.
    const oracle::TruncExp q{0.02, kRange.lo(), kRange.hi()};
    const TruncExpDist dd(0.02, kRange);
    for (double u : {1.0, 30.0, 120.0, 400.0}) {
      CHECK(std::abs(cdf(dd, u) - q.cdf(u)) <= 1e-10);
    }
  }

  SUBCASE("Monte Carlo mean") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int n = 1000000;
    double sum = 0.0;
    double sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double s = sample(d, unif(rng));
      sum += s;
      sum2 += s * s;
    }
    const double m = sum / n;
    const double sd = std::sqrt((sum2 - n * m * m) / (n - 1));
    CHECK(std::abs(m - mean(d)) <= 3.0 * sd / 1000.0);
  }
}

TEST_CASE("series and closed forms agree at the threshold") {
  for (double sign : {-1.0, 1.0}) {
    const double rate = sign * 2e-8 / kRange.width();
    const TruncExpDist d(rate, kRange);
    CHECK(close_rel(detail::log_partition_series(d), detail::log_partition_closed(d), 1e-9));
    CHECK(close_rel(detail::mean_series(d), detail::mean_closed(d), 1e-9));
    for (double p : {0.1, 0.5, 0.9}) {
      CHECK(close_rel(detail::sample_series(d, p), detail::sample_closed(d, p), 1e-9));
    }
  }
}
