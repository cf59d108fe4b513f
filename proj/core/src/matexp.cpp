#include "anisofield/matexp.hpp"

#include <cmath>

namespace anisofield {

namespace {

// Pade [m/m] numerator coefficients for exp (Higham 2005, Table 10.2-10.4).
Mat pade_uv(const Mat& A, const double* b, int m, Mat& U, Mat& V) {
  const auto n = A.rows();
  const Mat A2 = A * A;
  Mat even = Mat::Identity(n, n) * b[0];
  Mat odd = Mat::Identity(n, n) * b[1];
  Mat P = Mat::Identity(n, n);
  for (int k = 2; k <= m; k += 2) {
    P = P * A2;
    even += b[k] * P;
    if (k + 1 <= m) odd += b[k + 1] * P;
  }
  U = A * odd;
  V = even;
  return U + V;
}

Mat pade_exp(const Mat& A, const double* b, int m) {
  Mat U, V;
  pade_uv(A, b, m, U, V);
  // (V - U)^{-1} (V + U)
  return (V - U).partialPivLu().solve(V + U);
}

}  // namespace

Mat matrix_exp(const Mat& A) {
  static const double b3[] = {120, 60, 12, 1};
  static const double b5[] = {30240, 15120, 3360, 420, 30, 1};
  static const double b7[] = {17297280, 8648640, 1995840, 277200,
                              25200,    1512,    56,      1};
  static const double b9[] = {17643225600., 8821612800., 2075673600.,
                              302702400.,   30270240.,   2162160.,
                              110880.,      3960.,       90.,
                              1.};
  static const double b13[] = {
      64764752532480000., 32382376266240000., 7771770303897600.,
      1187353796428800.,  129060195264000.,   10559470521600.,
      670442572800.,      33522128640.,       1323241920.,
      40840800.,          960960.,            16380.,
      182.,               1.};

  const double nrm = A.cwiseAbs().rowwise().sum().maxCoeff();  // inf-norm
  if (nrm < 1.495585217958292e-2) return pade_exp(A, b3, 3);
  if (nrm < 2.539398330063230e-1) return pade_exp(A, b5, 5);
  if (nrm < 9.504178996162932e-1) return pade_exp(A, b7, 7);
  if (nrm < 2.097847961257068e0) return pade_exp(A, b9, 9);

  int s = 0;
  double scaled = nrm;
  const double theta13 = 5.371920351148152;
  while (scaled > theta13) {
    scaled *= 0.5;
    ++s;
  }
  Mat E = pade_exp(Mat(A * std::ldexp(1.0, -s)), b13, 13);
  for (int i = 0; i < s; ++i) E = E * E;
  return E;
}

}  // namespace anisofield
