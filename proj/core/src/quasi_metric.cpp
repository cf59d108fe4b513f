#include "anisofield/quasi_metric.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <mutex>

#include "anisofield/rng.hpp"

namespace anisofield {

namespace {

// 16-point Gauss-Legendre nodes/weights on [0,1].
constexpr int kGl = 16;
constexpr double kGlX[kGl] = {
    0.0052995325041750, 0.0277124884633837, 0.0671843988060841,
    0.1222977958224985, 0.1910618777986781, 0.2709916111713863,
    0.3591982246103705, 0.4524937450811813, 0.5475062549188187,
    0.6408017753896295, 0.7290083888286137, 0.8089381222013219,
    0.8777022041775015, 0.9328156011939159, 0.9722875115366163,
    0.9947004674958250};
constexpr double kGlW[kGl] = {
    0.0135762297058770, 0.0311267619693239, 0.0475792558412464,
    0.0623144856277669, 0.0747979944082884, 0.0845782596975013,
    0.0913017075224618, 0.0947253052275342, 0.0947253052275342,
    0.0913017075224618, 0.0845782596975013, 0.0747979944082884,
    0.0623144856277669, 0.0475792558412464, 0.0311267619693239,
    0.0135762297058770};

// Integrates ||e^{-sE}x|| over [a, b] with one GL16 panel.
double panel(const ScalingMatrix& M, const Vec& x, double a, double b) {
  const double len = b - a;
  double acc = 0.0;
  for (int i = 0; i < kGl; ++i)
    acc += kGlW[i] * M.apply_exp(-(a + len * kGlX[i]), x).norm();
  return acc * len;
}

constexpr double kLogRBound = 30.0 * 2.302585092994046;  // |log r| <= 30 dec

// Shifted E-norm integral F(y) = \int_y^infty ||e^{-sE}x|| ds with a lattice
// memo over panels of fixed length, shared across a tau root-find.
class ShiftedENorm {
 public:
  ShiftedENorm(const ScalingMatrix& M, const Vec& x)
      : M_(M), x_(x), len_(1.0 / M.a1()) {}

  double tail_bound() const { return tail_bound_; }

  double operator()(double y) {
    const double m0 = std::floor(y / len_);
    double acc = panel(M_, x_, y, (m0 + 1.0) * len_);
    long m = long(m0) + 1;
    double prev = std::abs(acc) + 1e-300;
    int rising = 0;
    for (int it = 0; it < 4000; ++it, ++m) {
      const double c = panel_at(m);
      acc += c;
      if (c < 1e-16 * acc && c <= prev) {
        tail_bound_ = (c < prev) ? c * (c / prev) / (1.0 - c / prev) : c;
        return acc;
      }
      rising = (c > prev) ? rising + 1 : 0;
      if (rising > 64)
        throw NumericError("e_norm: integrand not decaying (residual ~ " +
                           std::to_string(c) + ")");
      prev = std::max(c, 1e-300);
    }
    throw NumericError("e_norm: quadrature budget exceeded");
  }

 private:
  double panel_at(long m) {
    auto it = memo_.find(m);
    if (it != memo_.end()) return it->second;
    const double v = panel(M_, x_, double(m) * len_, double(m + 1) * len_);
    memo_.emplace(m, v);
    return v;
  }

  const ScalingMatrix& M_;
  const Vec& x_;
  double len_;
  double tail_bound_ = 0.0;
  std::unordered_map<long, double> memo_;
};

}  // namespace

ENormResult e_norm_detail(const ScalingMatrix& M, const Vec& x) {
  if (x.rows() != M.dim()) throw DomainError("e_norm: dimension mismatch");
  ENormResult r;
  if (x.norm() == 0.0) return r;
  ShiftedENorm F(M, x);
  r.value = F(0.0);
  r.tail_bound = F.tail_bound();
  return r;
}

double e_norm(const ScalingMatrix& M, const Vec& x) {
  return e_norm_detail(M, x).value;
}

double tau(const ScalingMatrix& M, const Vec& x) {
  if (x.rows() != M.dim()) throw DomainError("tau: dimension mismatch");
  if (x.norm() == 0.0) return 0.0;

  ShiftedENorm F(M, x);
  // F is continuous and strictly decreasing; solve F(y) = 1, tau = e^y.
  const double n0 = F(0.0);
  double y_lo, y_hi;
  if (n0 >= 1.0) {
    // Root is >= 0; first guesses from ||x||_E^{1/abar}, ||x||_E^{1/a1}.
    y_lo = 0.0;
    y_hi = std::log(n0) / M.a1();
  } else {
    y_lo = std::log(n0) / M.a1();
    y_hi = 0.0;
  }
  double step = std::max(1.0, y_hi - y_lo);
  while (F(y_hi) > 1.0) {
    y_lo = y_hi;
    y_hi += step;
    step *= 2.0;
    if (y_hi > kLogRBound) throw NumericError("tau: bracket overflow");
  }
  while (F(y_lo) < 1.0) {
    y_hi = y_lo;
    y_lo -= step;
    step *= 2.0;
    if (y_lo < -kLogRBound) throw NumericError("tau: bracket underflow");
  }
  for (int it = 0; it < 200; ++it) {
    const double y = 0.5 * (y_lo + y_hi);
    if (F(y) > 1.0)
      y_lo = y;
    else
      y_hi = y;
    if (y_hi - y_lo < 1e-10) break;
  }
  return std::exp(0.5 * (y_lo + y_hi));
}

std::size_t TauCache::key(const Vec& x) {
  // Sign-canonicalize (tau is even), then hash the bit patterns.
  double sign = 1.0;
  for (int i = 0; i < x.rows(); ++i) {
    if (x(i) != 0.0) {
      sign = x(i) > 0.0 ? 1.0 : -1.0;
      break;
    }
  }
  std::size_t h = 0xcbf29ce484222325ULL;
  for (int i = 0; i < x.rows(); ++i) {
    const double v = sign * x(i);
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

std::optional<double> TauCache::lookup(const Vec& x) const {
  std::shared_lock lock(mutex_);
  auto it = map_.find(key(x));
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

void TauCache::store(const Vec& x, double value) {
  std::unique_lock lock(mutex_);
  map_[key(x)] = value;
}

QuasiMetricSpec QuasiMetricSpec::euclidean() {
  QuasiMetricSpec s;
  s.kind_ = Kind::Euclidean;
  return s;
}

QuasiMetricSpec QuasiMetricSpec::tau_e(ScalingMatrix E, bool enable_cache) {
  QuasiMetricSpec s;
  s.kind_ = Kind::TauE;
  s.E_ = std::move(E);
  if (enable_cache) s.cache_ = std::make_shared<TauCache>();
  return s;
}

QuasiMetricSpec QuasiMetricSpec::product_alpha_tau(ScalingMatrix E) {
  QuasiMetricSpec s;
  s.kind_ = Kind::ProductAlphaTau;
  s.E_ = std::move(E);
  return s;
}

int QuasiMetricSpec::point_dim() const {
  switch (kind_) {
    case Kind::Euclidean:
      return -1;  // any
    case Kind::TauE:
      return E_->dim();
    case Kind::ProductAlphaTau:
      return E_->dim() + 1;
  }
  return -1;
}

double QuasiMetricSpec::operator()(const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& y) const {
  if (x.rows() != y.rows()) throw DomainError("rho: dimension mismatch");
  const int want = point_dim();
  if (want > 0 && x.rows() != want) throw DomainError("rho: dimension mismatch");
  switch (kind_) {
    case Kind::Euclidean:
      return (x - y).norm();
    case Kind::TauE: {
      const Vec h = x - y;
      if (cache_) {
        if (auto v = cache_->lookup(h)) return *v;
        const double v = tau(*E_, h);
        cache_->store(h, v);
        return v;
      }
      return tau(*E_, h);
    }
    case Kind::ProductAlphaTau: {
      const Vec h = x.tail(x.rows() - 1) - y.tail(y.rows() - 1);
      return std::abs(x(0) - y(0)) + tau(*E_, h);
    }
  }
  return 0.0;
}

EnvelopeReport envelope_probe(const QuasiMetricSpec& spec, const Box& box,
                              std::size_t n_probes, std::uint64_t seed) {
  if (box.degenerate()) throw DomainError("envelope_probe: degenerate box");
  const int d = box.dim();
  RngStream rng(seed, "envelope_probe");
  EnvelopeReport rep;
  rep.c_lower = std::numeric_limits<double>::infinity();
  rep.c_upper = 0.0;

  auto sample_point = [&]() {
    Eigen::VectorXd x(d);
    for (int j = 0; j < d; ++j)
      x(j) = rng.uniform(box.axes[j].first, box.axes[j].second);
    return x;
  };

  std::vector<Eigen::VectorXd> probes;
  for (std::size_t k = 0; k < n_probes; ++k) {
    Eigen::VectorXd x = sample_point();
    // log-uniform offset magnitude so all scales below 1 are exercised
    const double mag = std::exp(rng.uniform(std::log(1e-4), 0.0));
    Eigen::VectorXd y;
    for (int tries = 0; tries < 64; ++tries) {
      const auto dir = rng.unit_vector(d);
      y = x;
      for (int j = 0; j < d; ++j) y(j) += mag * dir[size_t(j)];
      bool inside = true;
      for (int j = 0; j < d; ++j)
        inside = inside && y(j) >= box.axes[j].first &&
                 y(j) <= box.axes[j].second;
      if (inside) break;
      y = x;
    }
    const double en = (x - y).norm();
    if (en == 0.0 || en > 1.0) continue;
    const double r = spec(x, y);
    rep.c_lower = std::min(rep.c_lower, r / std::pow(en, spec.h_upper));
    rep.c_upper = std::max(rep.c_upper, r / std::pow(en, spec.h_lower));
    ++rep.n_pairs;
    if (probes.size() < 64) probes.push_back(x);
  }

  for (std::size_t i = 0; i + 2 < probes.size(); i += 3) {
    const auto& a = probes[i];
    const auto& b = probes[i + 1];
    const auto& c = probes[i + 2];
    const double denom = spec(a, b) + spec(b, c);
    if (denom > 0.0)
      rep.kappa_hat = std::max(rep.kappa_hat, spec(a, c) / denom);
  }
  return rep;
}

HomogeneousPsi::HomogeneousPsi(ScalingMatrix E) : E_(std::move(E)) {
  if (!E_.real_diagonalizable())
    throw DomainError("HomogeneousPsi: built-in form needs a real eigenbasis");
  // Unit eigenvectors of E with their eigenvalues a_i; then
  // <c^{E^t} xi, w_i> = <xi, c^E w_i> = c^{a_i} <xi, w_i>.
  Mat W = E_.eigenvectors();
  Vec a = E_.eigenvalues();
  for (int i = 0; i < E_.dim(); ++i) W.col(i).normalize();
  eval_ = [W, a](const Vec& xi) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
      s += std::pow(std::abs(W.col(i).dot(xi)), 1.0 / a(i));
    return s;
  };
}

HomogeneousPsi::HomogeneousPsi(ScalingMatrix E,
                               std::function<double(const Vec&)> eval)
    : E_(std::move(E)), eval_(std::move(eval)) {}

}  // namespace anisofield
