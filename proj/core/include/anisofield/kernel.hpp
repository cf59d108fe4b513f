#pragma once

#include <complex>

#include "anisofield/quasi_metric.hpp"

namespace anisofield {

// Harmonizable kernel f_alpha(u, xi) = (e^{i<u,xi>} - 1) psi_alpha(xi).
// Both built-in psi_alpha families factor as
//   psi_alpha(xi) = exp(s(xi) + t(xi)/alpha),
// which lets the series engine precompute one (s, t) pair per spectral point
// and evaluate any alpha with a single exp.
class Kernel {
 public:
  struct LogCoeffs {
    double s = 0.0;
    double t = 0.0;
  };

  // Operator-scaling: psi_alpha(xi) = psi(xi)^{-H - q(E)/alpha}; requires
  // H in (0, a1).
  static Kernel harmonizable_os(HomogeneousPsi psi, double hurst);

  // Anisotropic Riesz-Bessel:
  //   psi_alpha(xi) = tau_{E^t}(xi)^{-2 b1/alpha} (1 + tau_{E^t}(xi)^2)^{-b2/alpha}.
  // Well-posedness (checked with alpha_min, the smallest alpha in use):
  //   q(E)/2 < b1 + b2   and   b1 < q(E)/2 + alpha_min a1 / 2.
  static Kernel riesz_bessel(const ScalingMatrix& E, double beta1,
                             double beta2, double alpha_min);

  int dim() const { return E_.dim(); }
  const ScalingMatrix& scaling() const { return E_; }
  double hurst() const { return hurst_; }

  LogCoeffs log_coeffs(const Eigen::VectorXd& xi) const;

  double psi_alpha(double alpha, const Eigen::VectorXd& xi) const {
    const auto lc = log_coeffs(xi);
    return std::exp(lc.s + lc.t / alpha);
  }

  std::complex<double> f(double alpha, const Eigen::VectorXd& u,
                         const Eigen::VectorXd& xi) const {
    const double theta = u.dot(xi);
    const std::complex<double> osc{std::cos(theta) - 1.0, std::sin(theta)};
    return osc * psi_alpha(alpha, xi);
  }

  const std::string& describe() const { return description_; }

 private:
  explicit Kernel(ScalingMatrix E) : E_(std::move(E)) {}
  ScalingMatrix E_;
  double hurst_ = 0.0;  // OS only
  std::function<LogCoeffs(const Eigen::VectorXd&)> coeffs_;
  std::string description_;
};

}  // namespace anisofield
