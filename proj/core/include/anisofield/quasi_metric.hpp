#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "anisofield/scaling_matrix.hpp"

namespace anisofield {

// Axis-aligned box domain, one [lo, hi] per axis.
struct Box {
  std::vector<std::pair<double, double>> axes;

  int dim() const { return int(axes.size()); }
  bool degenerate() const {
    for (const auto& [lo, hi] : axes)
      if (!(hi > lo)) return true;
    return axes.empty();
  }
};

struct ENormResult {
  double value = 0.0;
  double tail_bound = 0.0;  // bound on the truncated remainder
};

// The E-norm  ||x||_E = \int_0^1 ||theta^E x|| dtheta/theta
//           = \int_0^infty ||e^{-tE} x|| dt   (theta = e^{-t}).
ENormResult e_norm_detail(const ScalingMatrix& M, const Vec& x);
double e_norm(const ScalingMatrix& M, const Vec& x);

// Radial part of polar coordinates with respect to E: the unique r > 0 with
// ||r^{-E} x||_E = 1 (tau(0) = 0). Homogeneous: tau(r^E x) = r tau(x).
double tau(const ScalingMatrix& M, const Vec& x);

// Concurrent memo for tau values on grid workloads, keyed by the (sign
// canonicalized) bit pattern of the input vector. Last write wins; values
// are deterministic so races are benign.
class TauCache {
 public:
  std::optional<double> lookup(const Vec& x) const;
  void store(const Vec& x, double value);

 private:
  static std::size_t key(const Vec& x);
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::size_t, double> map_;
};

// A computable quasi-metric rho together with its envelope exponents
// (H_lower, H_upper) when known.
class QuasiMetricSpec {
 public:
  enum class Kind { Euclidean, TauE, ProductAlphaTau };

  static QuasiMetricSpec euclidean();
  static QuasiMetricSpec tau_e(ScalingMatrix E, bool enable_cache = false);
  // rho((alpha,u),(alpha',v)) = |alpha - alpha'| + tau_E(u - v); points have
  // dimension d + 1 with the first coordinate playing the role of alpha.
  static QuasiMetricSpec product_alpha_tau(ScalingMatrix E);

  Kind kind() const { return kind_; }
  const std::optional<ScalingMatrix>& matrix() const { return E_; }
  int point_dim() const;

  double h_lower = 1.0;
  double h_upper = 1.0;

  double operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

 private:
  QuasiMetricSpec() = default;
  Kind kind_ = Kind::Euclidean;
  std::optional<ScalingMatrix> E_;
  std::shared_ptr<TauCache> cache_;
};

inline double rho(const QuasiMetricSpec& spec, const Eigen::VectorXd& x,
                  const Eigen::VectorXd& y) {
  return spec(x, y);
}

struct EnvelopeReport {
  double kappa_hat = 1.0;   // max rho(x,z) / (rho(x,y) + rho(y,z)) on probes
  double c_lower = 0.0;     // min rho / ||x-y||^{H_upper}  (empirical c_{2,1})
  double c_upper = 0.0;     // max rho / ||x-y||^{H_lower}  (empirical c_{2,2})
  std::size_t n_pairs = 0;
};

// Monte-Carlo diagnostic for the Euclidean envelope of rho over pairs with
// ||x-y|| <= 1 inside `box`. Uses spec.h_lower / spec.h_upper.
EnvelopeReport envelope_probe(const QuasiMetricSpec& spec, const Box& box,
                              std::size_t n_probes, std::uint64_t seed);

// E^t-homogeneous function psi: psi(c^{E^t} xi) = c psi(xi). The built-in
// form is psi(xi) = sum_i |<xi, w_i>|^{1/a_i} over a real eigenbasis of E.
class HomogeneousPsi {
 public:
  explicit HomogeneousPsi(ScalingMatrix E);
  HomogeneousPsi(ScalingMatrix E, std::function<double(const Vec&)> eval);

  double operator()(const Vec& xi) const { return eval_(xi); }
  const ScalingMatrix& scaling() const { return E_; }

 private:
  ScalingMatrix E_;
  std::function<double(const Vec&)> eval_;
};

}  // namespace anisofield
