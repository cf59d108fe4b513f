#pragma once

#include <complex>
#include <span>
#include <vector>

#include "anisofield/rng.hpp"

namespace anisofield {

// Symmetric complex-valued sub-Gaussian multiplier laws, all with parameter
// s = 1:  E exp(Re(conj(z) g)) <= exp(|z|^2 / 2).
enum class SourceKind {
  ComplexGaussian,   // Re, Im independent standard normal (equality case)
  RademacherReal,    // +-1 with probability 1/2
  RademacherComplex  // Rademacher times a uniform phase in {1, i, -1, -i}
};

struct SubGaussianSource {
  SourceKind kind = SourceKind::ComplexGaussian;

  std::complex<double> draw_one(RngStream& rng) const;
};

std::vector<std::complex<double>> draw(const SubGaussianSource& source,
                                       std::size_t n, RngStream& rng);

// One row of a Monte-Carlo verifier report. A violation means the empirical
// value exceeded bound + 3 * se.
struct VerifierCell {
  double t_or_abs_z = 0.0;
  std::complex<double> z{};
  double empirical = 0.0;
  double bound = 0.0;
  double se = 0.0;
  bool violated = false;
};

// Tail verifier: empirical P(|Z| > t) against 4 exp(-t^2/8).
std::vector<VerifierCell> tail_check(const SubGaussianSource& source,
                                     std::span<const double> t_grid,
                                     std::size_t m_samples,
                                     std::uint64_t seed);

// MGF verifier: (empirical E exp(Re(conj(z) Z))) / exp(|z|^2/2) against 1.
// Requires |z| <= 3.
std::vector<VerifierCell> mgf_check(const SubGaussianSource& source,
                                    std::span<const std::complex<double>> z_grid,
                                    std::size_t m_samples, std::uint64_t seed);

// Verifier for the sup-of-partial-sums bound:
//   P( sup_N |sum_{n<=N} a_n g_n| > t ||a|| ) <= 8 exp(-t^2/8),
// with the sup tracked over N <= weights.size().
VerifierCell sup_partial_sum_tail(std::span<const double> weights,
                                  const SubGaussianSource& source, double t,
                                  std::size_t m_samples, std::uint64_t seed);

// Two-sample symmetry diagnostic: KS p-values of Re/Im of one sample against
// the sign-flipped other. Returns min of the two p-values.
double symmetry_pvalue(const SubGaussianSource& source, std::size_t n,
                       std::uint64_t seed);

}  // namespace anisofield
