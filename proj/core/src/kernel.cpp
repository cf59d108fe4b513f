#include "anisofield/kernel.hpp"

#include <cmath>
#include <sstream>

namespace anisofield {

Kernel Kernel::harmonizable_os(HomogeneousPsi psi, double hurst) {
  const ScalingMatrix& E = psi.scaling();
  if (!(hurst > 0.0 && hurst < E.a1()))
    throw DomainError("harmonizable_os: H in (0, a1) required");
  Kernel k(E);
  k.hurst_ = hurst;
  const double q = E.q();
  k.coeffs_ = [psi = std::move(psi), hurst, q](const Eigen::VectorXd& xi) {
    const double lp = std::log(psi(Vec(xi)));
    return LogCoeffs{-hurst * lp, -q * lp};
  };
  std::ostringstream os;
  os << "harmonizable_os(H=" << hurst << ",q=" << q << ",a1=" << E.a1() << ")";
  k.description_ = os.str();
  return k;
}

Kernel Kernel::riesz_bessel(const ScalingMatrix& E, double beta1, double beta2,
                            double alpha_min) {
  const double q = E.q();
  if (!(q / 2.0 < beta1 + beta2))
    throw DomainError("riesz_bessel: q(E)/2 < beta1 + beta2 required");
  if (!(alpha_min > 0.0 && alpha_min < 2.0))
    throw DomainError("riesz_bessel: alpha_min in (0,2)");
  if (!(beta1 < q / 2.0 + alpha_min * E.a1() / 2.0))
    throw DomainError("riesz_bessel: beta1 < q(E)/2 + alpha a1/2 required");

  Kernel k(E);
  const ScalingMatrix Et = E.transposed();
  k.coeffs_ = [Et, beta1, beta2](const Eigen::VectorXd& xi) {
    const double t = tau(Et, Vec(xi));
    const double lt = std::log(t);
    return LogCoeffs{0.0,
                     -2.0 * beta1 * lt - beta2 * std::log1p(t * t)};
  };
  std::ostringstream os;
  os << "riesz_bessel(beta1=" << beta1 << ",beta2=" << beta2 << ",q=" << q
     << ")";
  k.description_ = os.str();
  return k;
}

Kernel::LogCoeffs Kernel::log_coeffs(const Eigen::VectorXd& xi) const {
  return coeffs_(xi);
}

}  // namespace anisofield
