#ifndef TEMPCTL_RANDOM_HPP_
#define TEMPCTL_RANDOM_HPP_

#include <cstdint>
#include <random>

namespace tempctl {

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

// Seed for the stream identified by (seed, tag, index). Streams with distinct
// keys are statistically independent; the same key always yields the same
// sequence.
std::uint64_t stream_key(std::uint64_t seed, std::uint64_t tag, std::uint64_t index);

// A deterministic random stream. std::mt19937_64 output is fixed by the
// standard, and the uniform / normal transforms below are implemented here,
// so sequences are identical across standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key) : engine_(key) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on the open interval (0, 1).
  double open_uniform();
  // Standard normal by inverse transform.
  double normal();

 private:
  std::mt19937_64 engine_;
};

// Inverse of the standard normal CDF on (0, 1).
double normal_quantile(double p);

}  // namespace tempctl

#endif  // TEMPCTL_RANDOM_HPP_
