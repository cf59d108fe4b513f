#include "anisofield/lepage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include <nlohmann/json.hpp>

#include "anisofield/quadrature.hpp"
#include "anisofield/stats.hpp"

namespace anisofield {

namespace {

constexpr double kPi = std::numbers::pi;

// Per-term log-amplitude split: the n-th series term is
//   exp(s_n + c_n / alpha) * (e^{i<u,xi_n>} - 1) * g_n,
// with c_n = t_n - log m(xi_n) - log T_n absorbing everything that depends on
// alpha through a 1/alpha power. Terms where m(xi_n) is zero or non-finite
// (a null set under the density itself) are dropped by sending c_n to -inf.
struct TermTable {
  std::vector<double> s;
  std::vector<double> c;
};

TermTable build_terms(const Kernel& kernel, const SpectralDensity& density,
                      const SeriesRealization& real) {
  TermTable t;
  t.s.resize(real.n_max);
  t.c.resize(real.n_max);
  for (std::size_t n = 0; n < real.n_max; ++n) {
    const Eigen::VectorXd xi = real.xi(n);
    const auto lc = kernel.log_coeffs(xi);
    const double m = density(xi);
    if (!(m > 0.0) || !std::isfinite(m)) {
      t.s[n] = 0.0;
      t.c[n] = -std::numeric_limits<double>::infinity();
      continue;
    }
    t.s[n] = lc.s;
    t.c[n] = lc.t - std::log(m) - std::log(real.arrivals[n]);
  }
  return t;
}

std::complex<double> eval_point(const SeriesRealization& real,
                                const TermTable& terms, double alpha,
                                const Eigen::VectorXd& u,
                                const double* amp_cache) {
  CompensatedSum acc;
  const double inv_alpha = 1.0 / alpha;
  for (std::size_t n = 0; n < real.n_max; ++n) {
    const double amp = amp_cache ? amp_cache[n]
                                 : std::exp(terms.s[n] + terms.c[n] * inv_alpha);
    if (amp == 0.0) continue;
    const double theta = u.dot(real.xi(n));
    const std::complex<double> osc{std::cos(theta) - 1.0, std::sin(theta)};
    acc.add(amp * osc * real.g[n]);
  }
  return acc.value();
}

}  // namespace

void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  std::size_t nt = threads > 0 ? std::size_t(threads)
                               : std::max(1u, std::thread::hardware_concurrency());
  nt = std::min(nt, n);
  if (nt == 1) {
    body(0, n);
    return;
  }
  const std::size_t chunk = (n + nt - 1) / nt;
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (std::size_t i = 0; i < nt; ++i) {
    const std::size_t lo = i * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

AlphaField AlphaField::constant(double alpha0) {
  if (!(alpha0 > 0.0 && alpha0 < 2.0))
    throw DomainError("AlphaField: alpha0 in (0,2) required");
  AlphaField a;
  a.constant_ = true;
  a.c0_ = alpha0;
  a.lo_ = a.hi_ = alpha0;
  return a;
}

AlphaField AlphaField::affine(double c0, Eigen::VectorXd c, double clamp_lo,
                              double clamp_hi) {
  if (!(clamp_lo > 0.0 && clamp_hi < 2.0 && clamp_lo <= clamp_hi))
    throw DomainError("AlphaField: clamp range must satisfy (0,2) and lo<=hi");
  AlphaField a;
  a.constant_ = false;
  a.c0_ = c0;
  a.c_ = std::move(c);
  a.lo_ = clamp_lo;
  a.hi_ = clamp_hi;
  return a;
}

double AlphaField::operator()(const Eigen::VectorXd& u) const {
  if (constant_) return c0_;
  if (u.size() != c_.size())
    throw DomainError("AlphaField: point dimension mismatch");
  return std::clamp(c0_ + c_.dot(u), lo_, hi_);
}

nlohmann::json AlphaField::to_json() const {
  nlohmann::json j;
  if (constant_) {
    j["kind"] = "constant";
    j["alpha0"] = c0_;
  } else {
    j["kind"] = "affine";
    j["c0"] = c0_;
    j["c"] = std::vector<double>(c_.data(), c_.data() + c_.size());
    j["clamp"] = {lo_, hi_};
  }
  return j;
}

std::size_t GridSpec::size() const {
  std::size_t n = 1;
  for (int r : resolution) n *= std::size_t(r);
  return resolution.empty() ? 0 : n;
}

double GridSpec::axis_coord(int axis, int i) const {
  const auto& [lo, hi] = box.axes[std::size_t(axis)];
  const int n = resolution[std::size_t(axis)];
  if (n <= 1) return lo;
  return lo + (hi - lo) * double(i) / double(n - 1);
}

Eigen::VectorXd GridSpec::point(std::size_t flat) const {
  const int d = dim();
  Eigen::VectorXd u(d);
  for (int axis = d - 1; axis >= 0; --axis) {
    const std::size_t r = std::size_t(resolution[std::size_t(axis)]);
    u(axis) = axis_coord(axis, int(flat % r));
    flat /= r;
  }
  return u;
}

FieldGrid simulate_field(const Kernel& kernel, const SpectralDensity& density,
                         const AlphaField& alpha, const GridSpec& grid,
                         const SimulateOptions& opt) {
  if (kernel.dim() != density.dim())
    throw DomainError("simulate_field: kernel/density dimension mismatch");
  if (grid.dim() != kernel.dim() || grid.box.dim() != grid.dim())
    throw DomainError("simulate_field: grid dimension mismatch");
  for (int r : grid.resolution)
    if (r < 1) throw DomainError("simulate_field: resolution >= 1 per axis");
  if (opt.n_terms == 0) throw DomainError("simulate_field: N >= 1 required");

  const SeriesRealization real = make_realization(
      opt.n_terms, opt.seed, opt.source, kernel.dim(), density.sampler());
  const TermTable terms = build_terms(kernel, density, real);

  std::vector<double> amp;
  if (alpha.is_constant()) {
    amp.resize(real.n_max);
    const double inv_a = 1.0 / alpha.min_alpha();
    for (std::size_t n = 0; n < real.n_max; ++n)
      amp[n] = std::exp(terms.s[n] + terms.c[n] * inv_a);
  }

  FieldGrid out;
  out.spec = grid;
  out.values.resize(grid.size());
  parallel_for(out.values.size(), opt.threads,
               [&](std::size_t lo, std::size_t hi) {
                 for (std::size_t i = lo; i < hi; ++i) {
                   const Eigen::VectorXd u = grid.point(i);
                   const double a = alpha(u);
                   std::complex<double> v = eval_point(
                       real, terms, a, u, amp.empty() ? nullptr : amp.data());
                   if (opt.apply_d_alpha) v *= stable_constant_closed_form(a);
                   out.values[i] = v;
                 }
               });

  nlohmann::json box = nlohmann::json::array();
  for (const auto& [lo, hi] : grid.box.axes) box.push_back({lo, hi});
  out.metadata = {{"kernel", kernel.describe()},
                  {"density", density.describe()},
                  {"alpha", alpha.to_json()},
                  {"n_terms", opt.n_terms},
                  {"seed", opt.seed},
                  {"source", int(opt.source.kind)},
                  {"apply_d_alpha", opt.apply_d_alpha},
                  {"lln_warning", real.lln_warning},
                  {"box", box},
                  {"resolution", grid.resolution}};
  return out;
}

std::vector<std::complex<double>> evaluate_series(
    const Kernel& kernel, const SpectralDensity& density,
    const AlphaField& alpha, std::span<const Eigen::VectorXd> points,
    std::size_t n_terms, std::uint64_t seed, const SubGaussianSource& source) {
  if (kernel.dim() != density.dim())
    throw DomainError("evaluate_series: kernel/density dimension mismatch");
  const SeriesRealization real =
      make_realization(n_terms, seed, source, kernel.dim(), density.sampler());
  const TermTable terms = build_terms(kernel, density, real);
  std::vector<double> amp;
  if (alpha.is_constant()) {
    amp.resize(real.n_max);
    const double inv_a = 1.0 / alpha.min_alpha();
    for (std::size_t n = 0; n < real.n_max; ++n)
      amp[n] = std::exp(terms.s[n] + terms.c[n] * inv_a);
  }
  std::vector<std::complex<double>> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    out[i] = eval_point(real, terms, alpha(points[i]), points[i],
                        amp.empty() ? nullptr : amp.data());
  return out;
}

MomentCheck moment_check(const Kernel& kernel, const SpectralDensity& density,
                         double alpha, const Eigen::VectorXd& x0, double p,
                         std::size_t m_samples, std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw DomainError("moment_check: alpha in (0,2)");
  if (!(p > 0.0)) throw DomainError("moment_check: p > 0 required");
  if (m_samples < 10000) throw DomainError("moment_check: M >= 1e4 required");
  if (x0.size() != kernel.dim())
    throw DomainError("moment_check: point dimension mismatch");

  // E |V_1(x0)|^{2p} = int |f_alpha(x0, xi)|^{2p} m(xi)^{1 - 2p/alpha} dxi,
  // sampled as E_m [ (|f| m^{-1/alpha})^{2p} ].
  const std::size_t n_batches = 20;
  const std::size_t per_batch = m_samples / n_batches;
  RngStream rng(seed, "spectral");
  std::vector<double> xi_buf(static_cast<std::size_t>(kernel.dim()));

  MomentCheck mc;
  mc.batch_means.reserve(n_batches);
  double grand = 0.0;
  for (std::size_t b = 0; b < n_batches; ++b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < per_batch; ++i) {
      density.sample(rng, xi_buf.data());
      const Eigen::Map<const Eigen::VectorXd> xi(xi_buf.data(), kernel.dim());
      const double m = density(xi);
      if (!(m > 0.0)) continue;
      const double v = std::abs(kernel.f(alpha, x0, xi)) *
                       std::pow(m, -1.0 / alpha);
      sum += std::pow(v, 2.0 * p);
    }
    mc.batch_means.push_back(sum / double(per_batch));
    grand += sum;
  }
  mc.estimate = grand / double(per_batch * n_batches);

  const MeanSe ms = mean_se(mc.batch_means);
  mc.batch_dispersion = ms.se * std::sqrt(double(n_batches));

  // Heavy-tail symptom: one batch mean dominating the batch median by orders
  // of magnitude, which a finite-variance integrand cannot produce at this
  // batch size. Skewed-but-integrable cases stay within a small factor.
  std::vector<double> sorted = mc.batch_means;
  std::sort(sorted.begin(), sorted.end());
  const double med = sorted[n_batches / 2];
  mc.unstable = sorted.back() > 100.0 * med && sorted.back() > 0.0;
  return mc;
}

namespace {

// Largest direction-wise ratio of the Euclidean norm to the E^t-norm; by
// 1-homogeneity of both, this bounds ||x|| <= c ||x||_{E^t} everywhere.
double estimate_contraction(const ScalingMatrix& Et) {
  const int d = Et.dim();
  double c = 0.0;
  if (d == 1) {
    Vec x(1);
    x << 1.0;
    return 1.0 / e_norm(Et, x);
  }
  RngStream rng(0x9e3779b97f4a7c15ull, "subsample");
  for (int i = 0; i < 256; ++i) {
    const auto dir = rng.unit_vector(d);
    Vec x(d);
    for (int j = 0; j < d; ++j) x(j) = dir[std::size_t(j)];
    c = std::max(c, 1.0 / e_norm(Et, x));
  }
  return c;
}

}  // namespace

EnvelopeIntegral envelope_integral(const Kernel& kernel,
                                   const SpectralDensity& density,
                                   double alpha0, std::span<const double> h_grid,
                                   double c_et) {
  if (!(kernel.hurst() > 0.0))
    throw DomainError("envelope_integral: requires a harmonizable OS kernel");
  if (!(alpha0 > 0.0 && alpha0 < 2.0))
    throw DomainError("envelope_integral: alpha0 in (0,2)");
  for (double h : h_grid)
    if (!(h > 0.0 && h <= std::exp(-1.0)))
      throw DomainError("envelope_integral: h in (0, 1/e]");
  if (kernel.dim() != density.dim())
    throw DomainError("envelope_integral: kernel/density dimension mismatch");

  const int d = kernel.dim();
  const ScalingMatrix Et = kernel.scaling().transposed();
  const double c = c_et > 0.0 ? c_et : estimate_contraction(Et);

  // Integrand along a fixed direction: g(h, r dir)^2 m(r dir)^{1-2/alpha0}
  // with g = min(c r w(dir,h), 1) psi_{alpha0}; w is the E^t-norm of the
  // unit direction pushed through h^{E^t}, so the cap saturates exactly at
  // r_sat = 1 / (c w).
  const auto radial = [&](const Vec& dir, double w, double r) {
    const Eigen::VectorXd xi = r * dir;
    const double m = density(xi);
    if (!(m > 0.0) || !std::isfinite(m)) return 0.0;
    const double g =
        std::min(c * r * w, 1.0) * kernel.psi_alpha(alpha0, xi);
    const double v = g * g * std::pow(m, 1.0 - 2.0 / alpha0);
    return std::isfinite(v) ? v : 0.0;
  };

  // int_0^inf F(r) jac(r) dr, split at the saturation radius; the far tail is
  // folded onto (0,1] by r = r_sat / v.
  const auto radial_integral = [&](const Vec& dir, double w, int jac_power) {
    const double r_sat = 1.0 / (c * w);
    const auto inner = [&](double r) {
      return radial(dir, w, r) * std::pow(r, jac_power);
    };
    const double near = tanh_sinh(inner, 0.0, r_sat, 1e-10);
    const double far = tanh_sinh(
        [&](double v) {
          const double r = r_sat / v;
          return inner(r) * r_sat / (v * v);
        },
        0.0, 1.0, 1e-10);
    return near + far;
  };

  EnvelopeIntegral out;
  out.predicted_slope = 2.0 * kernel.hurst();
  out.h.assign(h_grid.begin(), h_grid.end());
  out.value.resize(h_grid.size());

  for (std::size_t ih = 0; ih < h_grid.size(); ++ih) {
    const double h = h_grid[ih];
    const double log_h = std::log(h);
    double total = 0.0;
    if (d == 1) {
      for (double sgn : {1.0, -1.0}) {
        Vec dir(1);
        dir << sgn;
        const double w = e_norm(Et, Et.apply_exp(log_h, dir));
        total += radial_integral(dir, w, 0);
      }
    } else if (d == 2) {
      const int n_angles = 64;
      for (int k = 0; k < n_angles; ++k) {
        const double phi = 2.0 * kPi * double(k) / double(n_angles);
        Vec dir(2);
        dir << std::cos(phi), std::sin(phi);
        const double w = e_norm(Et, Et.apply_exp(log_h, dir));
        total += radial_integral(dir, w, 1) * (2.0 * kPi / double(n_angles));
      }
    } else {
      // Importance-sampled Monte Carlo from the density itself:
      // I(h) = E_m [ g^2 m^{-2/alpha0} ].
      RngStream rng(0x5151f00du, "spectral", ih);
      std::vector<double> buf(static_cast<std::size_t>(d));
      const std::size_t n_mc = 200000;
      double sum = 0.0;
      for (std::size_t i = 0; i < n_mc; ++i) {
        density.sample(rng, buf.data());
        const Eigen::Map<const Eigen::VectorXd> xi(buf.data(), d);
        const double m = density(xi);
        if (!(m > 0.0)) continue;
        const double g =
            std::min(c * e_norm(Et, Et.apply_exp(log_h, Vec(xi))), 1.0) *
            kernel.psi_alpha(alpha0, xi);
        const double v = g * g * std::pow(m, -2.0 / alpha0);
        if (std::isfinite(v)) sum += v;
      }
      total = sum / double(n_mc);
    }
    if (!std::isfinite(total) || total <= 0.0)
      throw NumericError("envelope_integral: quadrature failed");
    out.value[ih] = total;
  }

  std::vector<double> lx(out.h.size()), ly(out.h.size());
  for (std::size_t i = 0; i < out.h.size(); ++i) {
    lx[i] = std::log(out.h[i]);
    ly[i] = std::log(out.value[i]);
  }
  out.fitted_slope = linear_fit(lx, ly).slope;
  return out;
}

nlohmann::json FddReport::to_json() const {
  nlohmann::json cells_j = nlohmann::json::array();
  for (const auto& cell : cells) {
    cells_j.push_back({{"point", cell.point},
                       {"z", {cell.z.real(), cell.z.imag()}},
                       {"char_a", {cell.char_a.real(), cell.char_a.imag()}},
                       {"char_b", {cell.char_b.real(), cell.char_b.imag()}},
                       {"diff", cell.diff},
                       {"pooled_se", cell.pooled_se},
                       {"pass", cell.pass}});
  }
  return {{"cells", cells_j},
          {"n_pass", n_pass},
          {"n_cells", cells.size()},
          {"all_pass", all_pass}};
}

FddReport fdd_invariance_test(const Kernel& kernel,
                              const SpectralDensity& density_a,
                              const SpectralDensity& density_b, double alpha0,
                              std::span<const Eigen::VectorXd> points,
                              std::size_t m_replications, std::size_t n_terms,
                              std::span<const std::complex<double>> char_args,
                              std::uint64_t seed,
                              const SubGaussianSource& source) {
  if (m_replications < 1000)
    throw DomainError("fdd_invariance_test: M >= 1e3 required");
  const AlphaField alpha = AlphaField::constant(alpha0);

  // S-samples per (replication, point) under each density, from independent
  // replication seeds.
  const std::size_t np = points.size();
  std::vector<std::complex<double>> sa(m_replications * np);
  std::vector<std::complex<double>> sb(m_replications * np);
  for (std::size_t r = 0; r < m_replications; ++r) {
    const auto va = evaluate_series(kernel, density_a, alpha, points, n_terms,
                                    derive_seed(seed, "arrivals", 2 * r), source);
    const auto vb =
        evaluate_series(kernel, density_b, alpha, points, n_terms,
                        derive_seed(seed, "arrivals", 2 * r + 1), source);
    for (std::size_t i = 0; i < np; ++i) {
      sa[r * np + i] = va[i];
      sb[r * np + i] = vb[i];
    }
  }

  const auto char_mean = [m_replications, np](
                             const std::vector<std::complex<double>>& s,
                             std::size_t i, std::complex<double> z,
                             double& se_out) {
    CompensatedSum acc;
    std::vector<std::complex<double>> vals(m_replications);
    for (std::size_t r = 0; r < m_replications; ++r) {
      const std::complex<double> x = s[r * np + i];
      const double phase = z.real() * x.real() + z.imag() * x.imag();
      vals[r] = {std::cos(phase), std::sin(phase)};
      acc.add(vals[r]);
    }
    const std::complex<double> mean =
        acc.value() / double(m_replications);
    double var = 0.0;
    for (const auto& v : vals) var += std::norm(v - mean);
    var /= double(m_replications - 1);
    se_out = std::sqrt(var / double(m_replications));
    return mean;
  };

  FddReport rep;
  for (std::size_t i = 0; i < np; ++i) {
    for (const auto& z : char_args) {
      FddCell cell;
      cell.point = i;
      cell.z = z;
      double se_a = 0.0, se_b = 0.0;
      cell.char_a = char_mean(sa, i, z, se_a);
      cell.char_b = char_mean(sb, i, z, se_b);
      cell.diff = std::abs(cell.char_a - cell.char_b);
      cell.pooled_se = std::sqrt(se_a * se_a + se_b * se_b);
      cell.pass = cell.diff <= 3.0 * cell.pooled_se;
      rep.all_pass = rep.all_pass && cell.pass;
      rep.n_pass += cell.pass ? 1 : 0;
      rep.cells.push_back(cell);
    }
  }
  return rep;
}

}  // namespace anisofield
