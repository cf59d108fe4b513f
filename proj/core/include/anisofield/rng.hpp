#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace anisofield {

// Derives a child seed from (master seed, label, index). Labels are part of
// the stable interface: "arrivals", "spectral", "multipliers", "subsample".
std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                          std::uint64_t index = 0);

// Seeded random stream with fully specified draw algorithms, so that outputs
// are bit-reproducible across platforms sharing IEEE doubles. Distributions
// are implemented explicitly (inverse CDF / Box-Muller) instead of through
// std::*_distribution, whose algorithms are implementation-defined.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  RngStream(std::uint64_t master, std::string_view label,
            std::uint64_t index = 0)
      : engine_(derive_seed(master, label, index)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0,1).
  double uniform01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller; generates pairs, caches the second value.
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  std::complex<double> complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
  }

  // Unit-rate exponential.
  double exponential() { return -std::log(uniform01()); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Rejection-free 128-bit multiply reduction (Lemire); bias < 2^-64.
    const unsigned __int128 m =
        static_cast<unsigned __int128>(engine_()) * n;
    return static_cast<std::uint64_t>(m >> 64);
  }

  int sign() { return (engine_() >> 63) ? 1 : -1; }

  // Uniform direction on the Euclidean unit sphere in R^d.
  std::vector<double> unit_vector(int d);

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace anisofield
