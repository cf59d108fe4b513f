#include "anisofield/spectral_density.hpp"

#include <cmath>
#include <sstream>

namespace anisofield {

namespace {

double unit_sphere_area(int d) {
  // S_{d-1} = 2 pi^{d/2} / Gamma(d/2)
  return 2.0 * std::pow(3.14159265358979323846, 0.5 * d) /
         std::tgamma(0.5 * d);
}

}  // namespace

SpectralDensity SpectralDensity::isotropic_mixture(double alpha0, double r0,
                                                   double zeta, int dim) {
  if (!(alpha0 > 0.0 && alpha0 < 2.0))
    throw DomainError("isotropic_mixture: alpha0 in (0,2)");
  if (!(r0 >= std::exp(1.0)))
    throw DomainError("isotropic_mixture: r0 >= e required");
  if (!(zeta > 0.0)) throw DomainError("isotropic_mixture: zeta > 0");
  if (dim < 1 || dim > 4) throw DomainError("isotropic_mixture: 1 <= d <= 4");

  const double area = unit_sphere_area(dim);
  const double c_in = area * std::pow(r0, alpha0 + dim) / (alpha0 + dim);
  const double c_tail = area * std::pow(std::log(r0), -zeta) / zeta;
  const double norm = c_in + c_tail;
  const double w_in = c_in / norm;
  const double log_r0 = std::log(r0);

  SpectralDensity s;
  s.dim_ = dim;
  s.eval_ = [alpha0, r0, zeta, dim, norm](const Eigen::VectorXd& xi) {
    const double r = xi.norm();
    if (r == 0.0) return 0.0;
    if (r <= r0) return std::pow(r, alpha0) / norm;
    return std::pow(r, -double(dim)) * std::pow(std::log(r), -1.0 - zeta) /
           norm;
  };
  s.sampler_ = [alpha0, r0, zeta, dim, w_in, log_r0](RngStream& rng,
                                                     double* out) {
    const bool inside = rng.uniform01() < w_in;
    const double u = rng.uniform01();
    const double r = inside ? r0 * std::pow(u, 1.0 / (alpha0 + dim))
                            : std::exp(log_r0 * std::pow(u, -1.0 / zeta));
    const auto dir = rng.unit_vector(dim);
    for (int j = 0; j < dim; ++j) out[j] = r * dir[std::size_t(j)];
  };
  s.radial_cdf_ = [alpha0, r0, zeta, dim, w_in, log_r0](double r) {
    if (r <= 0.0) return 0.0;
    if (r <= r0) return w_in * std::pow(r / r0, alpha0 + dim);
    return w_in +
           (1.0 - w_in) * (1.0 - std::pow(std::log(r) / log_r0, -zeta));
  };
  std::ostringstream os;
  os << "isotropic_mixture(alpha0=" << alpha0 << ",r0=" << r0
     << ",zeta=" << zeta << ",d=" << dim << ")";
  s.description_ = os.str();
  return s;
}

SpectralDensity SpectralDensity::eigen_product(
    const ScalingMatrix& E, std::vector<double> tail_exponents) {
  if (!E.real_diagonalizable())
    throw DomainError("eigen_product: E must have a real eigenbasis");
  const int d = E.dim();
  if (int(tail_exponents.size()) != d)
    throw DomainError("eigen_product: one tail exponent per axis");
  for (double g : tail_exponents)
    if (!(g > 0.0)) throw DomainError("eigen_product: exponents > 0");

  // Marginals live in the eigenbasis of E^t.
  const ScalingMatrix Et = E.transposed();
  Mat B = Et.eigenvectors();
  for (int i = 0; i < d; ++i) B.col(i).normalize();
  const Mat Binv = Mat(B.inverse());
  const double jac = std::abs(Binv.determinant());

  SpectralDensity s;
  s.dim_ = d;
  s.eval_ = [Binv, jac, tail_exponents, d](const Eigen::VectorXd& xi) {
    const Vec y = Binv * xi;
    double m = jac;
    for (int i = 0; i < d; ++i) {
      const double g = tail_exponents[std::size_t(i)];
      m *= 0.5 * g * std::pow(1.0 + std::abs(y(i)), -1.0 - g);
    }
    return m;
  };
  s.sampler_ = [B, tail_exponents, d](RngStream& rng, double* out) {
    Vec y(d);
    for (int i = 0; i < d; ++i) {
      const double g = tail_exponents[std::size_t(i)];
      const double sgn = double(rng.sign());
      const double u = rng.uniform01();
      y(i) = sgn * (std::pow(u, -1.0 / g) - 1.0);
    }
    const Vec xi = B * y;
    for (int j = 0; j < d; ++j) out[j] = xi(j);
  };
  std::ostringstream os;
  os << "eigen_product(d=" << d << ",gamma=[";
  for (int i = 0; i < d; ++i)
    os << tail_exponents[std::size_t(i)] << (i + 1 < d ? "," : "");
  os << "])";
  s.description_ = os.str();
  return s;
}

SpectralDensity SpectralDensity::user_plugin(
    int dim, std::function<double(const Eigen::VectorXd&)> evaluator,
    XiSampler sampler, std::string description) {
  SpectralDensity s;
  s.dim_ = dim;
  s.eval_ = std::move(evaluator);
  s.sampler_ = std::move(sampler);
  s.description_ = std::move(description);
  return s;
}

double SpectralDensity::radial_cdf(double r) const {
  if (!radial_cdf_)
    throw DomainError("radial_cdf: not available for this density");
  return radial_cdf_(r);
}

}  // namespace anisofield
