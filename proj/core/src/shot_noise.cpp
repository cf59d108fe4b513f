#include "anisofield/shot_noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "anisofield/scaling_matrix.hpp"
#include "anisofield/stats.hpp"

namespace anisofield {

std::vector<double> draw_arrivals(std::size_t n, RngStream& rng) {
  if (n < 1) throw DomainError("draw_arrivals: n >= 1 required");
  std::vector<double> t(n);
  double acc = 0.0;
  for (auto& v : t) {
    acc += rng.exponential();
    v = acc;
  }
  return t;
}

SeriesRealization make_realization(std::size_t n_max, std::uint64_t seed,
                                   const SubGaussianSource& source, int dim,
                                   const XiSampler& xi_sampler) {
  if (n_max < 1) throw DomainError("make_realization: n_max >= 1");
  SeriesRealization r;
  r.seed = seed;
  r.n_max = n_max;
  r.dim = dim;

  RngStream arrivals_rng(seed, "arrivals");
  r.arrivals = draw_arrivals(n_max, arrivals_rng);

  if (dim > 0 && xi_sampler) {
    RngStream spectral_rng(seed, "spectral");
    r.xi_flat.resize(n_max * std::size_t(dim));
    for (std::size_t n = 0; n < n_max; ++n)
      xi_sampler(spectral_rng, r.xi_flat.data() + n * std::size_t(dim));
  }

  RngStream mult_rng(seed, "multipliers");
  r.g = draw(source, n_max, mult_rng);

  const double dev = std::abs(r.arrivals.back() / double(n_max) - 1.0);
  r.lln_warning = dev > 5.0 / std::sqrt(double(n_max));
  return r;
}

std::vector<std::complex<double>> partial_sums(
    const SeriesRealization& real, const WEvaluator& w, const AlphaPoint& x,
    std::span<const std::size_t> checkpoints) {
  for (std::size_t c : checkpoints)
    if (c > real.n_max)
      throw DomainError("partial_sums: checkpoint exceeds n_max");
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end()))
    throw DomainError("partial_sums: checkpoints must be sorted");

  static const Eigen::VectorXd empty_xi;
  std::vector<std::complex<double>> out;
  out.reserve(checkpoints.size());
  CompensatedSum sum;
  std::size_t n = 0;
  for (std::size_t c : checkpoints) {
    for (; n < c; ++n) {
      const Eigen::VectorXd xi_n =
          real.dim > 0 ? Eigen::VectorXd(real.xi(n)) : empty_xi;
      sum.add(w(x.alpha, x.u, xi_n, real.arrivals[n]) * real.g[n]);
    }
    out.push_back(sum.value());
  }
  return out;
}

ConditionalParameter conditional_parameter(const SeriesRealization& real,
                                           const WEvaluator& w,
                                           const AlphaPoint& x,
                                           const AlphaPoint& y) {
  static const Eigen::VectorXd empty_xi;
  ConditionalParameter out;
  std::vector<double> increments(real.n_max);
  double acc = 0.0, comp = 0.0;
  for (std::size_t n = 0; n < real.n_max; ++n) {
    const Eigen::VectorXd xi_n =
        real.dim > 0 ? Eigen::VectorXd(real.xi(n)) : empty_xi;
    const auto dw = w(x.alpha, x.u, xi_n, real.arrivals[n]) -
                    w(y.alpha, y.u, xi_n, real.arrivals[n]);
    const double v = std::norm(dw);
    increments[n] = v;
    const double t = v - comp;
    const double s = acc + t;
    comp = (s - acc) - t;
    acc = s;
  }
  out.value = std::sqrt(std::max(acc, 0.0));
  if (out.value == 0.0) return out;

  // Heuristic tail: fit |dW_n|^2 ~ C n^{-gamma} over the last decade and
  // extrapolate the remainder when gamma > 1.
  const std::size_t lo = std::max<std::size_t>(real.n_max / 10, 1);
  std::vector<double> lx, ly;
  for (std::size_t n = lo; n < real.n_max; ++n) {
    if (increments[n] > 0.0) {
      lx.push_back(std::log(double(n + 1)));
      ly.push_back(std::log(increments[n]));
    }
  }
  if (lx.size() >= 8) {
    const auto fit = linear_fit(lx, ly);
    out.tail_exponent = -fit.slope;
    if (out.tail_exponent > 1.0) {
      const double c = std::exp(fit.intercept);
      const double tail2 = c * std::pow(double(real.n_max), 1.0 - out.tail_exponent) /
                           (out.tail_exponent - 1.0);
      out.tail_estimate =
          std::sqrt(out.value * out.value + tail2) - out.value;
    } else {
      out.tail_estimate = std::numeric_limits<double>::infinity();
    }
  }
  return out;
}

Interval admissible_pprime(double b, double p) {
  if (!(p > 0.0)) throw DomainError("admissible_pprime: p must be > 0");
  const double cap = std::min(2.0, 2.0 * p);
  if (!(b > 0.0 && b < cap))
    throw DomainError("admissible_pprime: require b in (0, min(2,2p)) = (0, " +
                      std::to_string(cap) + "), got b = " + std::to_string(b));
  return {0.0, 1.0 / b - 1.0 / cap};
}

std::vector<RateCheckpoint> rate_profile(
    const SeriesRealization& real, const WEvaluator& w,
    std::span<const AlphaPoint> x_grid,
    std::span<const std::size_t> checkpoints, std::size_t n_ref,
    double inv_pprime) {
  if (checkpoints.empty() || x_grid.empty())
    throw DomainError("rate_profile: empty input");
  const std::size_t max_cp =
      *std::max_element(checkpoints.begin(), checkpoints.end());
  if (n_ref < 10 * max_cp)
    throw DomainError("rate_profile: n_ref >= 10 * max checkpoint required");
  if (n_ref > real.n_max) throw DomainError("rate_profile: n_ref > n_max");
  if (!(inv_pprime > 0.0))
    throw DomainError("rate_profile: 1/p' must be positive");

  std::vector<std::size_t> cps(checkpoints.begin(), checkpoints.end());
  std::sort(cps.begin(), cps.end());
  cps.push_back(n_ref);

  std::vector<RateCheckpoint> out(cps.size() - 1);
  for (std::size_t k = 0; k + 1 < cps.size(); ++k) out[k].n = cps[k];

  for (const auto& x : x_grid) {
    const auto sums = partial_sums(real, w, x, cps);
    const auto ref = sums.back();
    for (std::size_t k = 0; k + 1 < cps.size(); ++k)
      out[k].sup_rest = std::max(out[k].sup_rest, std::abs(ref - sums[k]));
  }

  double running = 0.0;
  for (auto& cp : out) {
    cp.scaled = std::pow(double(cp.n), inv_pprime) * cp.sup_rest;
    running = std::max(running, cp.scaled);
    cp.running_max = running;
  }
  return out;
}

std::string rate_profile_csv(std::span<const RateCheckpoint> profile) {
  std::ostringstream os;
  os.precision(17);
  os << "N,sup_rest,scaled_value\n";
  for (const auto& cp : profile)
    os << cp.n << "," << cp.sup_rest << "," << cp.scaled << "\n";
  return os.str();
}

}  // namespace anisofield
