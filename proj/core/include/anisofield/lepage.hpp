#pragma once

#include <nlohmann/json_fwd.hpp>

#include "anisofield/kernel.hpp"
#include "anisofield/spectral_density.hpp"

namespace anisofield {

// Stability index field alpha(u): a constant in (0,2) or an affine map
// clamped to [a,b] subset (0,2).
class AlphaField {
 public:
  static AlphaField constant(double alpha0);
  static AlphaField affine(double c0, Eigen::VectorXd c, double clamp_lo,
                           double clamp_hi);

  double operator()(const Eigen::VectorXd& u) const;
  bool is_constant() const { return constant_; }
  double min_alpha() const { return lo_; }
  double max_alpha() const { return hi_; }
  nlohmann::json to_json() const;

 private:
  AlphaField() = default;
  bool constant_ = true;
  double c0_ = 1.0;
  Eigen::VectorXd c_;
  double lo_ = 1.0;
  double hi_ = 1.0;
};

struct GridSpec {
  Box box;
  std::vector<int> resolution;  // points per axis, >= 1

  int dim() const { return int(resolution.size()); }
  std::size_t size() const;
  // Row-major flat index (last axis fastest) -> coordinates.
  Eigen::VectorXd point(std::size_t flat) const;
  double axis_coord(int axis, int i) const;
};

// Sampled complex field values on a box grid, with enough metadata to
// reproduce the grid bit-exactly.
struct FieldGrid {
  GridSpec spec;
  std::vector<std::complex<double>> values;
  nlohmann::json metadata;
};

struct SimulateOptions {
  std::size_t n_terms = 100000;
  std::uint64_t seed = 0;
  SubGaussianSource source{};
  bool apply_d_alpha = false;
  int threads = 0;  // 0 = hardware concurrency
};

// One SeriesRealization drawn from the seed and shared across the grid:
//   S(u) = sum_n T_n^{-1/alpha(u)} f_{alpha(u)}(u, xi_n) m(xi_n)^{-1/alpha(u)} g_n
// Values are independent of the thread count.
FieldGrid simulate_field(const Kernel& kernel, const SpectralDensity& density,
                         const AlphaField& alpha, const GridSpec& grid,
                         const SimulateOptions& opt);

// Evaluate the series at a handful of points without a grid (replication
// studies); same per-point values as simulate_field.
std::vector<std::complex<double>> evaluate_series(
    const Kernel& kernel, const SpectralDensity& density,
    const AlphaField& alpha, std::span<const Eigen::VectorXd> points,
    std::size_t n_terms, std::uint64_t seed, const SubGaussianSource& source);

// d_alpha from the isotropic-stable characteristic function, each factor by
// adaptive quadrature (the oscillatory one via per-half-period summation with
// series acceleration). Requires a ComplexGaussian source.
double stable_constant(double alpha0, const SubGaussianSource& source);
// Gamma-function closed forms for the same three factors.
double stable_constant_closed_form(double alpha0);

struct MomentCheck {
  double estimate = 0.0;       // MC estimate of E |V_1(x0)|^{2p}
  double batch_dispersion = 0.0;
  bool unstable = false;       // running max of batch means keeps growing
  std::vector<double> batch_means;
};

MomentCheck moment_check(const Kernel& kernel, const SpectralDensity& density,
                         double alpha, const Eigen::VectorXd& x0, double p,
                         std::size_t m_samples, std::uint64_t seed);

struct EnvelopeIntegral {
  std::vector<double> h;
  std::vector<double> value;     // I(h)
  double fitted_slope = 0.0;     // log-log least squares
  double predicted_slope = 0.0;  // 2 beta (= 2H for the OS kernel)
};

// I(h) = int g(h,xi)^2 m(xi)^{1-2/alpha0} dxi with
// g(h,xi) = min(c ||h^{E^t} xi||_{E^t}, 1) |psi_{alpha0}(xi)|.
// Deterministic quadrature for d <= 2, Monte-Carlo for d >= 3.
// c <= 0 means: estimate the contraction constant from probes.
EnvelopeIntegral envelope_integral(const Kernel& kernel,
                                   const SpectralDensity& density,
                                   double alpha0, std::span<const double> h_grid,
                                   double c_et = -1.0);

struct FddCell {
  std::size_t point = 0;
  std::complex<double> z{};
  std::complex<double> char_a{};
  std::complex<double> char_b{};
  double diff = 0.0;
  double pooled_se = 0.0;
  bool pass = true;
};

struct FddReport {
  std::vector<FddCell> cells;
  std::size_t n_pass = 0;
  bool all_pass = true;
  nlohmann::json to_json() const;
};

// Empirical finite-distribution invariance across two sampling densities:
// compares E exp(i Re(conj(z) S)) cell by cell at 3-sigma pooled tolerance.
FddReport fdd_invariance_test(const Kernel& kernel,
                              const SpectralDensity& density_a,
                              const SpectralDensity& density_b, double alpha0,
                              std::span<const Eigen::VectorXd> points,
                              std::size_t m_replications, std::size_t n_terms,
                              std::span<const std::complex<double>> char_args,
                              std::uint64_t seed,
                              const SubGaussianSource& source);

// Chunked deterministic parallel map over [0, n).
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace anisofield
