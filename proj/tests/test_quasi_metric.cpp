#include <doctest.h>

#include <cmath>

#include "anisofield/quasi_metric.hpp"
#include "anisofield/rng.hpp"

using namespace anisofield;

namespace {

Mat mat2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("e_norm reduces to the Euclidean norm for E = I") {
  const ScalingMatrix I(Mat(Mat::Identity(2, 2)));
  CHECK(e_norm(I, vec2(0.3, -0.4)) == doctest::Approx(0.5).epsilon(1e-10));
  // E = 2I on a unit vector: int_0^inf e^{-2t} dt = 1/2.
  const ScalingMatrix twoI(Mat(2.0 * Mat::Identity(2, 2)));
  CHECK(e_norm(twoI, vec2(1.0, 0.0)) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(e_norm(I, vec2(0.0, 0.0)) == 0.0);
}

TEST_CASE("tau is the Euclidean norm for E = I and vanishes at 0") {
  const ScalingMatrix I(Mat(Mat::Identity(2, 2)));
  RngStream g(3);
  for (int i = 0; i < 50; ++i) {
    const Vec x = vec2(g.uniform(-5, 5), g.uniform(-5, 5));
    CHECK(tau(I, x) == doctest::Approx(x.norm()).epsilon(1e-10));
  }
  CHECK(tau(I, vec2(0, 0)) == 0.0);
}

TEST_CASE("tau homogeneity tau(r^E x) = r tau(x)") {
  const std::vector<ScalingMatrix> mats{
      ScalingMatrix(Mat(Mat::Identity(2, 2))),
      ScalingMatrix(mat2(1, 0, 0, 2)),
      ScalingMatrix(mat2(1.5, 1, 0, 1.5)),
  };
  RngStream g(17);
  for (const auto& E : mats) {
    for (int i = 0; i < 100; ++i) {
      const Vec x = vec2(g.uniform(-3, 3), g.uniform(-3, 3));
      if (x.norm() < 1e-3) continue;
      const double r = std::exp(g.uniform(-2, 2));
      const double t = tau(E, x);
      const double tr = tau(E, Vec(E.power(r) * x));
      CHECK(std::abs(tr - r * t) <= 1e-8 * std::max(1.0, r * t));
    }
  }
}

TEST_CASE("TauCache stores and recalls values") {
  TauCache cache;
  const Vec x = vec2(0.25, -0.75);
  CHECK_FALSE(cache.lookup(x).has_value());
  cache.store(x, 1.25);
  REQUIRE(cache.lookup(x).has_value());
  CHECK(*cache.lookup(x) == 1.25);
  // Sign-canonicalized key: -x maps to the same entry.
  CHECK(cache.lookup(Vec(-x)).has_value());
}

TEST_CASE("QuasiMetricSpec kinds and envelope probe") {
  const auto eu = QuasiMetricSpec::euclidean();
  Eigen::VectorXd a(2), b(2);
  a << 0, 0;
  b << 3, 4;
  CHECK(eu(a, b) == doctest::Approx(5.0));

  Box box;
  box.axes = {{0.0, 1.0}, {0.0, 1.0}};
  const auto rep = envelope_probe(eu, box, 2000, 42);
  CHECK(rep.kappa_hat <= 1.0 + 1e-12);
  CHECK(rep.kappa_hat > 0.5);
  CHECK(rep.c_lower == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.c_upper == doctest::Approx(1.0).epsilon(1e-12));

  const auto te = QuasiMetricSpec::tau_e(ScalingMatrix(mat2(1, 0, 0, 2)));
  CHECK(te(a, b) == doctest::Approx(tau(*te.matrix(), vec2(3, 4))));
  // tau_E is a quasi-metric: the empirical triangle constant stays bounded.
  const auto rep2 = envelope_probe(te, box, 2000, 43);
  CHECK(rep2.kappa_hat < 3.0);

  const auto pr = QuasiMetricSpec::product_alpha_tau(ScalingMatrix(mat2(1, 0, 0, 2)));
  CHECK(pr.point_dim() == 3);
  Eigen::VectorXd p(3), q(3);
  p << 1.2, 0, 0;
  q << 1.5, 3, 4;
  CHECK(pr(p, q) == doctest::Approx(0.3 + te(a, b)).epsilon(1e-12));
}

TEST_CASE("HomogeneousPsi built-in form for E = diag(1,2)") {
  const ScalingMatrix E(mat2(1, 0, 0, 2));
  const HomogeneousPsi psi(E);
  RngStream g(5);
  for (int i = 0; i < 50; ++i) {
    const Vec xi = vec2(g.uniform(-4, 4), g.uniform(-4, 4));
    CHECK(psi(xi) == doctest::Approx(std::abs(xi(0)) +
                                     std::sqrt(std::abs(xi(1)))).epsilon(1e-12));
    // psi(c^{E^t} xi) = c psi(xi)
    const double c = std::exp(g.uniform(-1.5, 1.5));
    const Vec sc = E.transposed().power(c) * xi;
    CHECK(psi(sc) == doctest::Approx(c * psi(xi)).epsilon(1e-8));
  }
}
