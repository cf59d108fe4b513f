#pragma once

#include <functional>
#include <string>

#include "anisofield/quasi_metric.hpp"
#include "anisofield/shot_noise.hpp"

namespace anisofield {

// A strictly positive (a.e.) Lebesgue density m on R^d together with an
// exact sampler. The field law does not depend on the choice of m, so the
// built-ins are chosen for samplability.
class SpectralDensity {
 public:
  // m(xi) proportional to ||xi||^{alpha0} inside the ball of radius r0 and
  // ||xi||^{-d} (log ||xi||)^{-1-zeta} outside; r0 >= e so the log-radial
  // inverse CDF is well defined.
  static SpectralDensity isotropic_mixture(double alpha0, double r0,
                                           double zeta, int dim);

  // Product of symmetric Pareto-type marginals in a real eigenbasis of E^t;
  // tail_exponents gamma_i > 0 give per-axis tails (1+|y_i|)^{-1-gamma_i}.
  static SpectralDensity eigen_product(const ScalingMatrix& E,
                                       std::vector<double> tail_exponents);

  static SpectralDensity user_plugin(
      int dim, std::function<double(const Eigen::VectorXd&)> evaluator,
      XiSampler sampler, std::string description);

  int dim() const { return dim_; }
  double operator()(const Eigen::VectorXd& xi) const { return eval_(xi); }
  void sample(RngStream& rng, double* out) const { sampler_(rng, out); }
  XiSampler sampler() const { return sampler_; }
  const std::string& describe() const { return description_; }

  // Analytic radial CDF P(||xi|| <= r); available for the isotropic mixture
  // (used by goodness-of-fit tests).
  double radial_cdf(double r) const;
  bool has_radial_cdf() const { return bool(radial_cdf_); }

 private:
  SpectralDensity() = default;
  int dim_ = 0;
  std::function<double(const Eigen::VectorXd&)> eval_;
  XiSampler sampler_;
  std::function<double(double)> radial_cdf_;
  std::string description_;
};

}  // namespace anisofield
