#include "anisofield/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

namespace anisofield {

namespace {

bool axis_degenerate(const Box& box, std::size_t axis) {
  const auto& [lo, hi] = box.axes[axis];
  return !(hi > lo);
}

}  // namespace

int net_level(double h_lower, double c22, int k, int effective_dim) {
  if (!(h_lower > 0.0 && h_lower <= 1.0))
    throw DomainError("net_level: h_lower in (0,1]");
  if (!(c22 > 0.0)) throw DomainError("net_level: c22 > 0");
  if (k < 1) throw DomainError("net_level: k >= 1");
  const double d = std::max(effective_dim, 1);
  // Smallest n >= 1 with c22 d^{h/2} 2^{-n h} <= 2^{-k}; solve in closed form
  // and walk off any floating-point boundary effect.
  const double lead = std::log2(c22) + 0.5 * h_lower * std::log2(d);
  int n = std::max(1, int(std::ceil((double(k) + lead) / h_lower)) - 2);
  while (c22 * std::pow(d, 0.5 * h_lower) * std::pow(2.0, -n * h_lower) >
         std::pow(2.0, -k))
    ++n;
  return n;
}

DyadicNet::DyadicNet(Box box, int level) : box_(std::move(box)), level_(level) {
  if (box_.axes.empty()) throw DomainError("DyadicNet: empty box");
  if (level_ < 0 || level_ > 48) throw DomainError("DyadicNet: bad level");
  const double step = std::pow(2.0, double(level_));
  range_.reserve(box_.axes.size());
  for (std::size_t i = 0; i < box_.axes.size(); ++i) {
    const auto& [lo, hi] = box_.axes[i];
    if (axis_degenerate(box_, i)) {
      range_.emplace_back(0, 0);
      continue;
    }
    long long first = (long long)std::ceil(lo * step - 1e-12);
    long long last = (long long)std::floor(hi * step + 1e-12);
    if (first > last) {
      // Box thinner than the lattice pitch: fall back to the rounded center.
      first = last = llround(0.5 * (lo + hi) * step);
    }
    range_.emplace_back(first, last);
  }
}

std::size_t DyadicNet::size() const {
  std::size_t n = 1;
  for (const auto& [first, last] : range_)
    n *= std::size_t(last - first + 1);
  return n;
}

Eigen::VectorXd DyadicNet::nearest(const Eigen::VectorXd& x) const {
  if (x.size() != box_.dim()) throw DomainError("DyadicNet: dim mismatch");
  const double step = std::pow(2.0, double(level_));
  Eigen::VectorXd p(x.size());
  for (std::size_t i = 0; i < range_.size(); ++i) {
    if (axis_degenerate(box_, i)) {
      p(Eigen::Index(i)) = box_.axes[i].first;
      continue;
    }
    long long j = llround(x(Eigen::Index(i)) * step);
    j = std::clamp(j, range_[i].first, range_[i].second);
    p(Eigen::Index(i)) = double(j) / step;
  }
  return p;
}

std::vector<Eigen::VectorXd> DyadicNet::points(std::size_t max_points) const {
  if (size() > max_points)
    throw NumericError("DyadicNet: net too large to materialize; use nearest");
  const int d = box_.dim();
  const double step = std::pow(2.0, double(level_));
  std::vector<long long> idx(range_.size());
  for (std::size_t i = 0; i < range_.size(); ++i) idx[i] = range_[i].first;
  std::vector<Eigen::VectorXd> out;
  out.reserve(size());
  while (true) {
    Eigen::VectorXd p(d);
    for (std::size_t i = 0; i < range_.size(); ++i)
      p(Eigen::Index(i)) = axis_degenerate(box_, i) ? box_.axes[i].first
                                                    : double(idx[i]) / step;
    out.push_back(std::move(p));
    // Mixed-radix increment, last axis fastest.
    bool carried = true;
    std::size_t i = range_.size();
    while (carried && i > 0) {
      --i;
      if (idx[i] < range_[i].second) {
        ++idx[i];
        carried = false;
      } else {
        idx[i] = range_[i].first;
      }
    }
    if (carried) return out;
  }
}

DyadicNet build_net(const Box& box, double h_lower, double c22, int k) {
  int eff = 0;
  for (std::size_t i = 0; i < box.axes.size(); ++i)
    if (!axis_degenerate(box, i)) ++eff;
  if (eff == 0) return DyadicNet(box, 1);
  return DyadicNet(box, net_level(h_lower, c22, k, eff));
}

nlohmann::json RegularityReport::to_json() const {
  nlohmann::json b = nlohmann::json::array();
  for (const auto& bucket : buckets) {
    b.push_back({{"k", bucket.k},
                 {"scale", bucket.scale},
                 {"pairs", bucket.pairs},
                 {"sup_increment", bucket.sup_increment}});
  }
  return {{"buckets", b}, {"warnings", warnings}};
}

std::string RegularityReport::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "log_scale,log_sup\n";
  for (const auto& bucket : buckets) {
    if (bucket.sup_increment <= 0.0) continue;
    os << std::log(bucket.scale) << "," << std::log(bucket.sup_increment)
       << "\n";
  }
  return os.str();
}

namespace {

// Offset in index space plus its physical displacement and rho value.
struct Offset {
  std::vector<long long> delta;
  double rho = 0.0;
};

double physical_rho(const GridSpec& grid, const QuasiMetricSpec& spec,
                    const std::vector<long long>& delta) {
  const int d = grid.dim();
  Eigen::VectorXd u(d), zero = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < d; ++i) {
    const auto& [lo, hi] = grid.box.axes[std::size_t(i)];
    const int n = grid.resolution[std::size_t(i)];
    u(i) = n <= 1 ? 0.0
                  : (hi - lo) * double(delta[std::size_t(i)]) / double(n - 1);
  }
  return spec(u, zero);
}

std::size_t flat_index(const GridSpec& grid, const std::vector<long long>& mi) {
  std::size_t f = 0;
  for (int i = 0; i < grid.dim(); ++i)
    f = f * std::size_t(grid.resolution[std::size_t(i)]) +
        std::size_t(mi[std::size_t(i)]);
  return f;
}

}  // namespace

RegularityReport modulus_profile(const FieldGrid& field,
                                 const QuasiMetricSpec& spec,
                                 const ModulusOptions& opt) {
  const GridSpec& grid = field.spec;
  const int d = grid.dim();
  if (grid.size() < 2) throw DomainError("modulus_profile: >= 2 grid points");
  if (opt.k_min < 0 || opt.k_max < opt.k_min)
    throw DomainError("modulus_profile: bad k range");

  const int nk = opt.k_max - opt.k_min + 1;
  std::vector<ScaleBucket> buckets(static_cast<std::size_t>(nk));
  for (int k = opt.k_min; k <= opt.k_max; ++k) {
    buckets[std::size_t(k - opt.k_min)].k = k;
    buckets[std::size_t(k - opt.k_min)].scale = std::pow(2.0, -k);
  }

  RngStream rng(opt.seed, "subsample");

  // Deterministic seed offsets: single-axis lags at all dyadic sizes, so the
  // finest populated scales never depend on the random draws.
  std::vector<std::vector<long long>> candidates;
  for (int axis = 0; axis < d; ++axis) {
    const int res = grid.resolution[std::size_t(axis)];
    for (long long lag = 1; lag < res; lag *= 2) {
      std::vector<long long> delta(std::size_t(d), 0);
      delta[std::size_t(axis)] = lag;
      candidates.push_back(std::move(delta));
    }
  }

  const std::size_t max_draws = 20000;
  const std::size_t pos_per_offset = 512;
  std::size_t draws = 0;
  auto need_more = [&]() {
    for (const auto& b : buckets)
      if (b.pairs < opt.pair_budget) return true;
    return false;
  };

  std::size_t candidate_i = 0;
  while ((candidate_i < candidates.size() || draws < max_draws) &&
         need_more()) {
    std::vector<long long> delta;
    if (candidate_i < candidates.size()) {
      delta = candidates[candidate_i++];
    } else {
      ++draws;
      delta.assign(std::size_t(d), 0);
      bool nonzero = false;
      for (int i = 0; i < d; ++i) {
        const int res = grid.resolution[std::size_t(i)];
        if (res <= 1) continue;
        // Log-uniform magnitude covers every scale bucket roughly evenly.
        const double mag = std::exp(rng.uniform(0.0, std::log(double(res))));
        long long v = (long long)mag;
        if (v >= res) v = res - 1;
        if (rng.sign() < 0) v = -v;
        delta[std::size_t(i)] = v;
        nonzero = nonzero || v != 0;
      }
      if (!nonzero) continue;
    }

    const double rho = physical_rho(grid, spec, delta);
    if (!(rho > 0.0) || !std::isfinite(rho)) continue;
    const int k = int(std::floor(-std::log2(rho)));
    if (k < opt.k_min || k > opt.k_max) continue;
    ScaleBucket& bucket = buckets[std::size_t(k - opt.k_min)];
    if (bucket.pairs >= opt.pair_budget) continue;

    // Valid base ranges so that base + delta stays on the grid.
    std::vector<long long> base_lo(static_cast<std::size_t>(d)), base_n(static_cast<std::size_t>(d));
    bool ok = true;
    for (int i = 0; i < d; ++i) {
      const long long res = grid.resolution[std::size_t(i)];
      const long long dv = delta[std::size_t(i)];
      const long long lo = dv >= 0 ? 0 : -dv;
      const long long hi = dv >= 0 ? res - 1 - dv : res - 1;
      if (hi < lo) {
        ok = false;
        break;
      }
      base_lo[std::size_t(i)] = lo;
      base_n[std::size_t(i)] = hi - lo + 1;
    }
    if (!ok) continue;

    std::vector<long long> base(static_cast<std::size_t>(d)), other(static_cast<std::size_t>(d));
    for (std::size_t s = 0; s < pos_per_offset; ++s) {
      for (int i = 0; i < d; ++i) {
        base[std::size_t(i)] =
            base_lo[std::size_t(i)] +
            (long long)rng.below(std::uint64_t(base_n[std::size_t(i)]));
        other[std::size_t(i)] = base[std::size_t(i)] + delta[std::size_t(i)];
      }
      const double inc = std::abs(field.values[flat_index(grid, other)] -
                                  field.values[flat_index(grid, base)]);
      bucket.sup_increment = std::max(bucket.sup_increment, inc);
      ++bucket.pairs;
    }
  }

  RegularityReport rep;
  for (const auto& b : buckets) {
    if (b.pairs == 0) {
      std::ostringstream os;
      os << "bucket 2^-" << b.k << " empty, dropped";
      rep.warnings.push_back(os.str());
      continue;
    }
    rep.buckets.push_back(b);
  }
  // Scales strictly decreasing (k ascending).
  std::sort(rep.buckets.begin(), rep.buckets.end(),
            [](const ScaleBucket& a, const ScaleBucket& b) { return a.k < b.k; });
  return rep;
}

HolderFit fit_holder(std::span<const ScaleBucket> buckets, double eta) {
  std::vector<double> x, y;
  for (const auto& b : buckets) {
    if (b.pairs == 0 || !(b.sup_increment > 0.0)) continue;
    const double ls = std::log(b.scale);
    double corr = 0.0;
    if (eta != 0.0) {
      const double al = std::abs(ls);
      if (al < 1e-12)
        throw NumericError("fit_holder: scale too close to 1 for eta term");
      corr = eta * std::log(al);
    }
    x.push_back(ls);
    y.push_back(std::log(b.sup_increment) - corr);
  }
  if (x.size() < 4)
    throw DomainError("fit_holder: >= 4 non-empty buckets required");
  const double x_min = *std::min_element(x.begin(), x.end());
  const double x_max = *std::max_element(x.begin(), x.end());
  if (!(x_max - x_min > 1e-12))
    throw NumericError("fit_holder: rank-deficient regression");
  const LinearFit lf = linear_fit(x, y);
  HolderFit hf;
  hf.beta_hat = lf.slope;
  hf.eta = eta;
  hf.intercept = lf.intercept;
  hf.residual_rms = lf.residual_rms;
  hf.ci_halfwidth = 2.0 * lf.slope_se;
  return hf;
}

std::vector<AxisExponent> directional_exponents(const FieldGrid& field,
                                                std::span<const int> axes) {
  const GridSpec& grid = field.spec;
  const int d = grid.dim();
  std::vector<AxisExponent> out;
  for (int axis : axes) {
    if (axis < 0 || axis >= d)
      throw DomainError("directional_exponents: bad axis");
    const int res = grid.resolution[std::size_t(axis)];
    if (res < 128)
      throw DomainError("directional_exponents: axis resolution >= 128");
    const auto& [lo, hi] = grid.box.axes[std::size_t(axis)];

    // Line selection: subsample the transverse index space to <= 64 lines.
    std::size_t n_lines = 1;
    for (int i = 0; i < d; ++i)
      if (i != axis) n_lines *= std::size_t(grid.resolution[std::size_t(i)]);
    const std::size_t line_stride = std::max<std::size_t>(1, n_lines / 64);

    AxisExponent ax;
    ax.axis = axis;
    std::vector<long long> mi(std::size_t(d), 0);
    for (long long lag = 1; 2 * lag <= res - 1; lag *= 2) {
      ScaleBucket bucket;
      bucket.scale = (hi - lo) * double(lag) / double(res - 1);
      bucket.k = int(std::lround(-std::log2(bucket.scale)));
      for (std::size_t line = 0; line < n_lines; line += line_stride) {
        // Decode the transverse indices of this line.
        std::size_t rem = line;
        for (int i = d - 1; i >= 0; --i) {
          if (i == axis) continue;
          const std::size_t r = std::size_t(grid.resolution[std::size_t(i)]);
          mi[std::size_t(i)] = (long long)(rem % r);
          rem /= r;
        }
        for (long long p = 0; p + lag < res; ++p) {
          mi[std::size_t(axis)] = p;
          const std::size_t f0 = flat_index(grid, mi);
          mi[std::size_t(axis)] = p + lag;
          const std::size_t f1 = flat_index(grid, mi);
          const double inc = std::abs(field.values[f1] - field.values[f0]);
          bucket.sup_increment = std::max(bucket.sup_increment, inc);
          ++bucket.pairs;
        }
      }
      ax.profile.buckets.push_back(bucket);
    }
    std::sort(ax.profile.buckets.begin(), ax.profile.buckets.end(),
              [](const ScaleBucket& a, const ScaleBucket& b) {
                return a.scale > b.scale;
              });

    bool any = false;
    for (const auto& b : ax.profile.buckets)
      if (b.sup_increment > 0.0) any = true;
    if (!any) {
      ax.zero_increments = true;
      ax.beta_hat = std::numeric_limits<double>::quiet_NaN();
      ax.profile.warnings.push_back("no increments along axis");
    } else {
      ax.beta_hat = fit_holder(ax.profile.buckets, 0.0).beta_hat;
    }
    out.push_back(std::move(ax));
  }
  return out;
}

namespace {

// Sup of |dS| / (rho^beta [log(1+1/rho)]^eta) over pairs drawn from the
// given flat indices: exhaustive when affordable, deterministic subsample
// otherwise.
double membership_sup(const FieldGrid& field, const QuasiMetricSpec& spec,
                      double beta, double eta,
                      const std::vector<std::size_t>& idx) {
  const GridSpec& grid = field.spec;
  const std::size_t n = idx.size();
  const auto ratio = [&](std::size_t a, std::size_t b) {
    const double inc = std::abs(field.values[idx[a]] - field.values[idx[b]]);
    if (inc == 0.0) return 0.0;
    const double r = spec(grid.point(idx[a]), grid.point(idx[b]));
    if (!(r > 0.0)) return 0.0;
    const double w =
        std::pow(r, beta) * std::pow(std::log1p(1.0 / r), eta);
    return inc / w;
  };
  double c = 0.0;
  if (n * (n - 1) / 2 <= 3000000) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) c = std::max(c, ratio(a, b));
  } else {
    RngStream rng(0x686d656dull, "subsample");
    for (std::size_t s = 0; s < 3000000; ++s) {
      const std::size_t a = rng.below(n);
      const std::size_t b = rng.below(n);
      if (a == b) continue;
      c = std::max(c, ratio(a, b));
    }
  }
  return c;
}

}  // namespace

HolderMembership holder_membership(const FieldGrid& field,
                                   const QuasiMetricSpec& spec, double beta,
                                   double eta) {
  if (!(beta > 0.0 && beta <= 1.0))
    throw DomainError("holder_membership: beta in (0,1]");
  const GridSpec& grid = field.spec;
  const int d = grid.dim();

  std::vector<std::size_t> all(grid.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;

  // Even-index sub-grid = the same field sampled at half resolution.
  std::vector<std::size_t> coarse;
  std::vector<long long> mi(std::size_t(d), 0);
  for (std::size_t f = 0; f < grid.size(); ++f) {
    std::size_t rem = f;
    bool even = true;
    for (int i = d - 1; i >= 0; --i) {
      const std::size_t r = std::size_t(grid.resolution[std::size_t(i)]);
      if ((rem % r) % 2 != 0) even = false;
      rem /= r;
    }
    if (even) coarse.push_back(f);
  }

  HolderMembership hm;
  hm.c_sup = membership_sup(field, spec, beta, eta, all);
  hm.c_sup_coarse = membership_sup(field, spec, beta, eta, coarse);
  hm.stable = hm.c_sup_coarse > 0.0
                  ? hm.c_sup < 1.2 * hm.c_sup_coarse
                  : hm.c_sup == 0.0;
  return hm;
}

RateReport rate_report(std::span<const double> rests,
                       std::span<const std::size_t> n_values,
                       double inv_pprime) {
  if (rests.size() != n_values.size())
    throw DomainError("rate_report: size mismatch");
  if (!(inv_pprime > 0.0)) throw DomainError("rate_report: 1/p' > 0");
  RateReport rr;
  rr.scaled.resize(rests.size());
  for (std::size_t i = 0; i < rests.size(); ++i) {
    const double n = double(n_values[i]);
    const double b = std::pow(n + 1.0, -inv_pprime) * std::sqrt(std::log(n + 2.0));
    rr.scaled[i] = std::abs(rests[i]) / b;
    rr.sup_scaled = std::max(rr.sup_scaled, rr.scaled[i]);
  }
  return rr;
}

}  // namespace anisofield
