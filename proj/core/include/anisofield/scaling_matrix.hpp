#pragma once

#include <optional>
#include <stdexcept>

#include "anisofield/matexp.hpp"

namespace anisofield {

class DomainError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

class NumericError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A d x d real matrix E whose eigenvalues all have positive real part,
// together with its derived spectrum data: q = trace(E), a1 = min real part,
// abar = max real part. Construction fails when a1 <= 0.
class ScalingMatrix {
 public:
  explicit ScalingMatrix(const Mat& E);

  const Mat& matrix() const { return E_; }
  int dim() const { return d_; }
  double q() const { return q_; }
  double a1() const { return a1_; }
  double abar() const { return abar_; }

  // True when a1 >= 1; routines relying on the net-construction envelope
  // require it. Normalize with scaled(1/a1) otherwise.
  bool normalized() const { return a1_ >= 1.0; }

  ScalingMatrix transposed() const { return ScalingMatrix(E_.transpose()); }
  ScalingMatrix scaled(double c) const { return ScalingMatrix(c * E_); }

  // r^E = exp((ln r) E), r > 0.
  Mat power(double r) const;

  // e^{tE} x for arbitrary real t. Uses the cached real eigendecomposition
  // when E is cleanly diagonalizable, the Pade exponential otherwise.
  Vec apply_exp(double t, const Vec& x) const;

  bool real_diagonalizable() const { return diag_.has_value(); }

  // Real eigenbasis (columns) and eigenvalues; throws when E is defective
  // or has complex eigenvalues.
  const Mat& eigenvectors() const;
  const Vec& eigenvalues() const;

 private:
  struct RealEigen {
    Mat V;
    Mat Vinv;
    Vec lambda;
  };

  Mat E_;
  int d_;
  double q_;
  double a1_;
  double abar_;
  std::optional<RealEigen> diag_;
};

inline Mat mat_power(const ScalingMatrix& M, double r) { return M.power(r); }

}  // namespace anisofield
