#include "anisofield/quadrature.hpp"

#include <cmath>
#include <vector>

namespace anisofield {

double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, int max_level) {
  const double c = 0.5 * (b - a);
  const double m = 0.5 * (b + a);
  const double pi_half = 1.5707963267948966;

  const double t_max = 6.0;
  // Nodes are placed via their exact distance to the endpoints,
  // 1 - tanh(s) = e^{-s}/cosh(s); forming m +- c tanh(s) directly would
  // round onto the endpoints and drop the mass of endpoint singularities.
  auto add_pair = [&](double t) {
    const double sh = pi_half * std::sinh(t);
    const double ch = std::cosh(sh);
    const double w = pi_half * std::cosh(t) / (ch * ch);
    if (w < 1e-300) return 0.0;
    const double om = std::exp(-sh) / ch;  // 1 - tanh(sh)
    const double xp = b - c * om;
    const double xm = a + c * om;
    double acc = 0.0;
    // An integrable endpoint singularity can still overflow f at the most
    // extreme nodes even though w * f is negligible there; drop those terms.
    if (xp < b && xp > a) {
      const double term = w * f(xp);
      if (std::isfinite(term)) acc += term;
    }
    if (xm > a && xm < b) {
      const double term = w * f(xm);
      if (std::isfinite(term)) acc += term;
    }
    return acc;
  };

  double h = 1.0;
  double sum = pi_half * f(m);
  for (double t = h; t <= t_max; t += h) sum += add_pair(t);
  double prev = sum * h * c;

  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    double add = 0.0;
    // Each refinement evaluates only the odd multiples of the new h.
    for (double t = h; t <= t_max; t += 2.0 * h) add += add_pair(t);
    sum = sum + add;
    const double value = sum * h * c;
    if (level >= 4 &&
        std::abs(value - prev) <= rel_tol * std::abs(value) + 1e-300)
      return value;
    prev = value;
  }
  return prev;
}

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b,
                   double fa, double fm, double fb, double whole, double tol,
                   int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

double alternating_sum(const std::function<double(int)>& terms, int n_terms) {
  std::vector<double> partial(static_cast<std::size_t>(n_terms));
  double s = 0.0;
  for (int k = 0; k < n_terms; ++k) {
    s += terms(k);
    partial[static_cast<std::size_t>(k)] = s;
  }
  // Repeated averaging of the partial-sum sequence.
  std::size_t n = partial.size();
  while (n > 1) {
    for (std::size_t i = 0; i + 1 < n; ++i)
      partial[i] = 0.5 * (partial[i] + partial[i + 1]);
    --n;
  }
  return partial[0];
}

}  // namespace anisofield
