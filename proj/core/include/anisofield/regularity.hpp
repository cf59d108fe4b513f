#pragma once

#include <nlohmann/json_fwd.hpp>

#include "anisofield/lepage.hpp"
#include "anisofield/stats.hpp"

namespace anisofield {

// Dyadic net of a box at lattice level nu_k, chosen so that every point of
// the box is within rho <= 2^{-k} of the net whenever rho satisfies the
// Euclidean envelope rho <= c22 ||x-y||^{h_lower}:
//   nu_k = min{ n >= 1 : c22 d^{h_lower/2} 2^{-n h_lower} <= 2^{-k} }.
// Degenerate axes (hi == lo) are pinned and drop out of the effective
// dimension.
class DyadicNet {
 public:
  DyadicNet(Box box, int level);

  int level() const { return level_; }
  const Box& box() const { return box_; }
  std::size_t size() const;

  // Nearest lattice point inside the box (per-axis rounding + clamping).
  Eigen::VectorXd nearest(const Eigen::VectorXd& x) const;

  // Materializes the whole net; guarded against combinatorial blowup.
  std::vector<Eigen::VectorXd> points(std::size_t max_points = 2000000) const;

 private:
  Box box_;
  int level_;
  // Per axis: first and last lattice index j (point j / 2^level) inside the
  // box; first == last on degenerate axes.
  std::vector<std::pair<long long, long long>> range_;
};

int net_level(double h_lower, double c22, int k, int effective_dim);
DyadicNet build_net(const Box& box, double h_lower, double c22, int k);

struct ScaleBucket {
  int k = 0;              // scale 2^{-k}
  double scale = 0.0;
  std::size_t pairs = 0;
  double sup_increment = 0.0;
};

struct RegularityReport {
  std::vector<ScaleBucket> buckets;  // scales strictly decreasing
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;
  std::string to_csv() const;  // log scale, log sup
};

struct ModulusOptions {
  int k_min = 1;
  int k_max = 8;
  std::size_t pair_budget = 200000;  // per bucket
  std::uint64_t seed = 0;
};

// Empirical sup |S(x) - S(y)| over grid pairs bucketed by
// rho(x,y) in (2^{-k-1}, 2^{-k}]. Pairs are generated as (offset, position)
// samples: rho depends only on the offset for the supported quasi-metrics,
// so each sampled offset prices a whole family of pairs. Deterministic given
// options.seed; empty buckets are dropped with a warning.
RegularityReport modulus_profile(const FieldGrid& field,
                                 const QuasiMetricSpec& spec,
                                 const ModulusOptions& opt);

struct HolderFit {
  double beta_hat = 0.0;
  double eta = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  double ci_halfwidth = 0.0;  // 2 * slope se
};

// Fits  log sup = beta log scale + eta log |log scale| + const  with eta
// supplied. Needs >= 4 non-empty buckets with positive sups.
HolderFit fit_holder(std::span<const ScaleBucket> buckets, double eta);

struct AxisExponent {
  int axis = 0;
  double beta_hat = 0.0;  // NaN when the field has no increments on the axis
  bool zero_increments = false;
  RegularityReport profile;
};

// Per-axis Euclidean-scale exponents from dyadic lags along grid lines.
// Requires resolution >= 128 on each requested axis.
std::vector<AxisExponent> directional_exponents(const FieldGrid& field,
                                                std::span<const int> axes);

struct HolderMembership {
  double c_sup = 0.0;         // sup |dS| / (rho^beta [log(1+1/rho)]^eta)
  double c_sup_coarse = 0.0;  // same on the 2x-decimated grid
  bool stable = false;        // c_sup grows < 20% under refinement
};

HolderMembership holder_membership(const FieldGrid& field,
                                   const QuasiMetricSpec& spec, double beta,
                                   double eta);

struct RateReport {
  std::vector<double> scaled;  // |R_N| / ((N+1)^{-1/p'} sqrt(log(N+2)))
  double sup_scaled = 0.0;
};

// Scaled running max of truncation rests against the target rate shape
// b(N) = (N+1)^{-1/p'} sqrt(log(N+2)).
RateReport rate_report(std::span<const double> rests,
                       std::span<const std::size_t> n_values,
                       double inv_pprime);

}  // namespace anisofield
