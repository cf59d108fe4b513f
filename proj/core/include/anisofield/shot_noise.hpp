#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>

#include "anisofield/subgaussian.hpp"

#include <Eigen/Dense>

namespace anisofield {

// Kahan-compensated complex accumulator; series terms span many orders of
// magnitude for small alpha.
class CompensatedSum {
 public:
  void add(std::complex<double> v) {
    add_part(re_, cre_, v.real());
    add_part(im_, cim_, v.imag());
  }
  std::complex<double> value() const { return {re_, im_}; }

 private:
  static void add_part(double& s, double& c, double v) {
    const double y = v - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  double re_ = 0.0, im_ = 0.0, cre_ = 0.0, cim_ = 0.0;
};

// One frozen draw of (T_n, xi_n, g_n), n <= n_max, shared across all
// evaluation points. The three arrays come from independent substreams
// ("arrivals", "spectral", "multipliers") of one master seed.
struct SeriesRealization {
  std::vector<double> arrivals;        // strictly increasing, T_1 > 0
  std::vector<double> xi_flat;         // n_max * dim spectral points
  int dim = 0;
  std::vector<std::complex<double>> g;
  std::uint64_t seed = 0;
  std::size_t n_max = 0;
  bool lln_warning = false;  // |T_N/N - 1| > 5/sqrt(N)

  Eigen::Map<const Eigen::VectorXd> xi(std::size_t n) const {
    return {xi_flat.data() + n * std::size_t(dim), dim};
  }
};

// Arrival times of a unit-rate Poisson process: cumulative sums of i.i.d.
// unit exponentials.
std::vector<double> draw_arrivals(std::size_t n, RngStream& rng);

using XiSampler = std::function<void(RngStream&, double* out)>;

SeriesRealization make_realization(std::size_t n_max, std::uint64_t seed,
                                   const SubGaussianSource& source, int dim,
                                   const XiSampler& xi_sampler);

// Evaluation point of the extended domain K_{d+1} = [a,b] x K_d.
struct AlphaPoint {
  double alpha = 1.0;
  Eigen::VectorXd u;
};

// Deterministic weight rule (alpha, u, xi, T) -> W_n; the canonical form is
// W_n(alpha, u) = T_n^{-1/alpha} V_n(alpha, u).
using WEvaluator = std::function<std::complex<double>(
    double alpha, const Eigen::VectorXd& u, const Eigen::VectorXd& xi,
    double arrival)>;

// S_N(x) = sum_{n<=N} W_n(x) g_n at each checkpoint (sorted, <= n_max),
// computed in one pass. S_0 = 0.
std::vector<std::complex<double>> partial_sums(
    const SeriesRealization& real, const WEvaluator& w, const AlphaPoint& x,
    std::span<const std::size_t> checkpoints);

struct ConditionalParameter {
  double value = 0.0;           // truncated s(x,y)
  double tail_estimate = 0.0;   // crude power-law extrapolation, heuristic
  double tail_exponent = 0.0;   // fitted decay exponent of |dW_n|^2
};

// s(x,y) = (sum_n |W_n(x) - W_n(y)|^2)^{1/2}, truncated at n_max.
ConditionalParameter conditional_parameter(const SeriesRealization& real,
                                           const WEvaluator& w,
                                           const AlphaPoint& x,
                                           const AlphaPoint& y);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Admissible range for 1/p': the open interval (0, 1/b - 1/min(2p,2)).
// Requires b in (0, min(2, 2p)).
Interval admissible_pprime(double b, double p);

struct RateCheckpoint {
  std::size_t n = 0;
  double sup_rest = 0.0;     // sup_x |S_{N_ref}(x) - S_N(x)|
  double scaled = 0.0;       // N^{1/p'} * sup_rest
  double running_max = 0.0;  // running max of the scaled sequence
};

// Truncation-rate diagnostic. Requires n_ref >= 10 * max checkpoint and
// inv_pprime inside the admissible interval for the caller's (b, p).
std::vector<RateCheckpoint> rate_profile(
    const SeriesRealization& real, const WEvaluator& w,
    std::span<const AlphaPoint> x_grid,
    std::span<const std::size_t> checkpoints, std::size_t n_ref,
    double inv_pprime);

std::string rate_profile_csv(std::span<const RateCheckpoint> profile);

}  // namespace anisofield
