#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace anisofield {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean
  std::size_t n = 0;
};

MeanSe mean_se(std::span<const double> x);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Two-sample Kolmogorov-Smirnov test (asymptotic p-value).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct Chi2Result {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

// Goodness-of-fit against expected bin probabilities (must sum to ~1).
Chi2Result chi2_gof(std::span<const std::size_t> observed,
                    std::span<const double> expected_prob,
                    std::size_t n_total);

// Regularized upper incomplete gamma Q(a,x); used for chi-square p-values.
double gamma_q(double a, double x);

// Empirical quantile (linear interpolation); q in [0,1].
double quantile(std::vector<double> x, double q);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  double slope_se = 0.0;
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace anisofield
