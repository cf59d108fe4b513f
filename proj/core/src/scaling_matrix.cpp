#include "anisofield/scaling_matrix.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace anisofield {

ScalingMatrix::ScalingMatrix(const Mat& E) : E_(E), d_(int(E.rows())) {
  if (E.rows() != E.cols() || E.rows() < 1 || E.rows() > 4)
    throw DomainError("ScalingMatrix: E must be square with 1 <= d <= 4");

  Eigen::EigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(E_)};
  const auto ev = es.eigenvalues();
  a1_ = ev(0).real();
  abar_ = ev(0).real();
  double trace_from_spectrum = 0.0;
  bool all_real = true;
  for (int i = 0; i < d_; ++i) {
    a1_ = std::min(a1_, ev(i).real());
    abar_ = std::max(abar_, ev(i).real());
    trace_from_spectrum += ev(i).real();
    if (std::abs(ev(i).imag()) > 1e-12 * (1.0 + std::abs(ev(i).real())))
      all_real = false;
  }
  if (a1_ <= 0.0)
    throw DomainError("ScalingMatrix: all eigenvalues must have positive real part");

  q_ = E_.trace();
  if (std::abs(q_ - trace_from_spectrum) > 1e-10 * std::max(1.0, std::abs(q_)))
    throw NumericError("ScalingMatrix: trace/spectrum mismatch");

  // Keep the eigendecomposition only when it is real and well-conditioned;
  // defective matrices fall back to the Pade path in apply_exp.
  if (all_real) {
    Eigen::MatrixXd V = es.eigenvectors().real();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(V);
    if (lu.isInvertible() && lu.rcond() > 1e-8) {
      RealEigen re;
      re.V = V;
      re.Vinv = lu.inverse();
      re.lambda = es.eigenvalues().real();
      // accept only if it actually reconstructs E
      const Eigen::MatrixXd R =
          re.V * re.lambda.asDiagonal() * re.Vinv - Eigen::MatrixXd(E_);
      if (R.cwiseAbs().maxCoeff() < 1e-9 * std::max(1.0, E_.cwiseAbs().maxCoeff()))
        diag_ = std::move(re);
    }
  }
}

Mat ScalingMatrix::power(double r) const {
  if (!(r > 0.0)) throw DomainError("mat_power: r must be positive");
  const double lr = std::log(r);
  if (diag_) {
    Vec rl(d_);
    for (int i = 0; i < d_; ++i) rl(i) = std::exp(lr * diag_->lambda(i));
    return diag_->V * rl.asDiagonal() * diag_->Vinv;
  }
  return matrix_exp(Mat(lr * E_));
}

Vec ScalingMatrix::apply_exp(double t, const Vec& x) const {
  if (diag_) {
    Vec y = diag_->Vinv * x;
    for (int i = 0; i < d_; ++i) y(i) *= std::exp(t * diag_->lambda(i));
    return diag_->V * y;
  }
  return matrix_exp(Mat(t * E_)) * x;
}

const Mat& ScalingMatrix::eigenvectors() const {
  if (!diag_) throw NumericError("ScalingMatrix: no real eigenbasis");
  return diag_->V;
}

const Vec& ScalingMatrix::eigenvalues() const {
  if (!diag_) throw NumericError("ScalingMatrix: no real eigenbasis");
  return diag_->lambda;
}

}  // namespace anisofield
