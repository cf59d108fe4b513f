#include "anisofield/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace anisofield {

MeanSe mean_se(std::span<const double> x) {
  MeanSe r;
  r.n = x.size();
  if (r.n == 0) return r;
  double s = 0.0;
  for (double v : x) s += v;
  r.mean = s / double(r.n);
  if (r.n < 2) return r;
  double ss = 0.0;
  for (double v : x) {
    const double d = v - r.mean;
    ss += d * d;
  }
  r.se = std::sqrt(ss / (double(r.n) * double(r.n - 1)));
  return r;
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = double(a.size()), nb = double(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(double(i) / na - double(j) / nb));
  }
  KsResult r;
  r.statistic = d;
  const double ne = std::sqrt(na * nb / (na + nb));
  const double lambda = (ne + 0.12 + 0.11 / ne) * d;
  // Kolmogorov distribution tail series.
  double p = 0.0;
  double sign = 1.0;
  bool converged = false;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    p += 2.0 * sign * term;
    sign = -sign;
    if (term < 1e-12) {
      converged = true;
      break;
    }
  }
  // The series only converges for lambda away from 0; small lambda means the
  // samples are indistinguishable at this size.
  r.p_value = converged ? std::clamp(p, 0.0, 1.0) : 1.0;
  return r;
}

namespace {

double gamma_p_series(double a, double x) {
  double sum = 1.0 / a;
  double term = sum;
  for (int n = 1; n < 500; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
  // Lentz continued fraction for Q(a,x).
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -double(i) * (double(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q: bad args");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

Chi2Result chi2_gof(std::span<const std::size_t> observed,
                    std::span<const double> expected_prob,
                    std::size_t n_total) {
  if (observed.size() != expected_prob.size() || observed.size() < 2)
    throw std::invalid_argument("chi2_gof: bin mismatch");
  Chi2Result r;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    const double e = expected_prob[k] * double(n_total);
    if (e <= 0.0) throw std::invalid_argument("chi2_gof: zero expected bin");
    const double d = double(observed[k]) - e;
    r.statistic += d * d / e;
  }
  r.dof = int(observed.size()) - 1;
  r.p_value = gamma_q(0.5 * r.dof, 0.5 * r.statistic);
  return r;
}

double quantile(std::vector<double> x, double q) {
  if (x.empty()) throw std::invalid_argument("quantile: empty");
  std::sort(x.begin(), x.end());
  const double pos = q * double(x.size() - 1);
  const std::size_t lo = std::size_t(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, x.size() - 1);
  const double frac = pos - double(lo);
  return x[lo] * (1.0 - frac) + x[hi] * frac;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2)
    throw std::invalid_argument("linear_fit: need >= 2 points");
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / double(n), my = sy / double(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::runtime_error("linear_fit: rank-deficient");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss += r * r;
  }
  f.residual_rms = std::sqrt(ss / double(n));
  if (n > 2) f.slope_se = std::sqrt(ss / double(n - 2) / sxx);
  return f;
}

}  // namespace anisofield
