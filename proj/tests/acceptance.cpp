// Acceptance gate: one statistical/numerical criterion per invocation,
// selected by argv[1] in 1..11. Prints a single "criterion N: PASS/FAIL"
// line and exits 0/1. All tolerances are pinned here.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "anisofield/cli.hpp"
#include "anisofield/quadrature.hpp"
#include "anisofield/shot_noise.hpp"
#include "anisofield/subgaussian.hpp"

using namespace anisofield;

namespace {

struct Result {
  bool pass = false;
  std::string detail;
};

Mat mat2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

Mat ident(int d) { return Mat(Mat::Identity(d, d)); }

Kernel os_kernel_1d(double hurst) {
  Mat e(1, 1);
  e << 1.0;
  return Kernel::harmonizable_os(HomogeneousPsi(ScalingMatrix(e)), hurst);
}

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

// ---------------------------------------------------------------- 1
Result tail_bound() {
  const std::vector<double> t_grid{1, 2, 3, 4};
  const std::size_t m = 1000000;
  double worst = 0.0;
  bool ok = true;
  for (const auto kind :
       {SourceKind::ComplexGaussian, SourceKind::RademacherReal}) {
    const auto cells = tail_check(SubGaussianSource{kind}, t_grid, m, 1001);
    for (const auto& c : cells) {
      ok = ok && !c.violated;
      worst = std::max(worst, c.empirical - c.bound);
    }
  }
  std::ostringstream os;
  os << "max(empirical - bound) = " << worst << " over 8 cells, M = 1e6";
  return {ok, os.str()};
}

// ---------------------------------------------------------------- 2
Result supsum_bound() {
  std::vector<double> w(50);
  for (int n = 0; n < 50; ++n) w[std::size_t(n)] = std::pow(2.0, -(n + 1));
  const auto cell = sup_partial_sum_tail(
      w, SubGaussianSource{SourceKind::ComplexGaussian}, 6.0, 1000000, 1002);
  std::ostringstream os;
  os << "empirical = " << cell.empirical << ", bound 8e^{-4.5} = " << cell.bound
     << " + 3se = " << cell.bound + 3.0 * cell.se;
  return {!cell.violated, os.str()};
}

// ---------------------------------------------------------------- 3
Result quasi_metric_suite() {
  const std::vector<ScalingMatrix> mats{ScalingMatrix(ident(2)),
                                        ScalingMatrix(mat2(1, 0, 0, 2)),
                                        ScalingMatrix(mat2(1.5, 1, 0, 1.5))};
  RngStream g(1003, "subsample");
  double worst_hom = 0.0, worst_euc = 0.0, worst_grp = 0.0;
  for (const auto& E : mats) {
    for (int i = 0; i < 1000; ++i) {
      Vec x(2);
      x << g.uniform(-3, 3), g.uniform(-3, 3);
      if (x.norm() < 1e-6) continue;
      const double r = std::exp(g.uniform(-2, 2));
      const double want = r * tau(E, x);
      worst_hom = std::max(
          worst_hom, std::abs(tau(E, Vec(E.power(r) * x)) - want) / want);
    }
    for (int i = 0; i < 200; ++i) {
      const double r = std::exp(g.uniform(-1.5, 1.5));
      const double s = std::exp(g.uniform(-1.5, 1.5));
      const Mat prod = E.power(r) * E.power(s);
      const Mat direct = E.power(r * s);
      worst_grp = std::max(worst_grp,
                           (prod - direct).cwiseAbs().maxCoeff() /
                               std::max(1.0, direct.cwiseAbs().maxCoeff()));
    }
  }
  const ScalingMatrix I(ident(2));
  for (int i = 0; i < 1000; ++i) {
    Vec x(2);
    x << g.uniform(-3, 3), g.uniform(-3, 3);
    worst_euc = std::max(worst_euc,
                         std::abs(tau(I, x) - x.norm()) / std::max(1.0, x.norm()));
  }
  std::ostringstream os;
  os << "homogeneity " << worst_hom << " (tol 1e-8), Euclidean reduction "
     << worst_euc << " (tol 1e-10), group law " << worst_grp << " (tol 1e-10)";
  return {worst_hom <= 1e-8 && worst_euc <= 1e-10 && worst_grp <= 1e-10,
          os.str()};
}

// ---------------------------------------------------------------- 4
Result stable_constant_crosscheck() {
  const SubGaussianSource src{SourceKind::ComplexGaussian};
  double worst = 0.0;
  for (double a : {0.25, 0.5, 1.0, 1.5, 1.9}) {
    const double quad = stable_constant(a, src);
    const double closed = stable_constant_closed_form(a);
    worst = std::max(worst, std::abs(quad - closed) / closed);
  }
  const double pi = 3.14159265358979323846;
  const double d1_ref = (pi / 2.0) * (pi / 2.0) * std::sqrt(2.0 / pi);
  const double d1_err = std::abs(stable_constant_closed_form(1.0) - d1_ref);
  std::ostringstream os;
  os << "max relative error " << worst << " (tol 1e-6), d_1 = "
     << stable_constant_closed_form(1.0) << " vs " << d1_ref;
  return {worst <= 1e-6 && d1_err <= 1e-9, os.str()};
}

// ---------------------------------------------------------------- 5
Result shot_noise_rate() {
  const double inv_pprime = 1.0 / 8.0;  // inside (0, 1/6) for b = 1.5, p = 1
  const std::size_t n_ref = 100000, reps = 100;
  std::vector<std::size_t> cps;
  for (int e = 4; e <= 13; ++e) cps.push_back(std::size_t(1) << e);

  std::vector<AlphaPoint> grid;
  for (int i = 0; i < 64; ++i) {
    AlphaPoint x;
    x.alpha = 0.5 + 1.0 * double(i) / 63.0;
    x.u = Eigen::VectorXd::Zero(1);
    grid.push_back(std::move(x));
  }
  const WEvaluator w = [](double alpha, const Eigen::VectorXd&,
                          const Eigen::VectorXd&, double arrival) {
    return std::complex<double>(std::pow(arrival, -1.0 / alpha), 0.0);
  };
  const SubGaussianSource src{SourceKind::ComplexGaussian};

  // "first vs last checkpoint decade" = first five vs last five of the ten
  // dyadic checkpoints.
  std::vector<double> early(reps), late(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    const auto real =
        make_realization(n_ref, derive_seed(1005, "arrivals", r), src, 0, {});
    const auto prof = rate_profile(real, w, grid, cps, n_ref, inv_pprime);
    double e = 0.0, l = 0.0;
    for (std::size_t i = 0; i < cps.size(); ++i)
      (i < 5 ? e : l) = std::max(i < 5 ? e : l, prof[i].scaled);
    early[r] = e;
    late[r] = l;
  }
  const double q_early = quantile(early, 0.95);
  const double q_late = quantile(late, 0.95);
  const double change = q_late / q_early - 1.0;
  std::ostringstream os;
  os << "q95 scaled sup: first decade " << q_early << ", last decade " << q_late
     << ", relative change " << change << " (tol < 0.25)";
  return {change < 0.25, os.str()};
}

// ---------------------------------------------------------------- 6
Result density_invariance() {
  const Kernel kernel = os_kernel_1d(0.5);
  const double e1 = std::exp(1.0);
  const auto da = SpectralDensity::isotropic_mixture(1.5, e1, 0.1, 1);
  const auto db = SpectralDensity::isotropic_mixture(1.5, e1 * e1, 0.5, 1);
  std::vector<Eigen::VectorXd> pts;
  for (double u : {0.3, 0.5, 0.7}) {
    Eigen::VectorXd p(1);
    p << u;
    pts.push_back(std::move(p));
  }
  const std::vector<std::complex<double>> zs{
      {0.25, 0.0}, {0.5, 0.0}, {1.0, 0.0}, {2.0, 0.0}, {0.0, 1.0}};
  const auto rep =
      fdd_invariance_test(kernel, da, db, 1.5, pts, 5000, 10000, zs, 1006,
                          SubGaussianSource{SourceKind::ComplexGaussian});
  std::ostringstream os;
  os << rep.n_pass << "/" << rep.cells.size()
     << " characteristic-function cells within 3 pooled se (need >= 14/15)";
  return {rep.n_pass >= 14, os.str()};
}

// ---------------------------------------------------------------- 7
Result directional_anisotropy() {
  // Estimator input: the axis estimator reads <= 64 grid lines per axis, so
  // each replication simulates two thin grids (1024 x 4 and 4 x 1024) that
  // carry exactly those lines; a full 2^10 x 2^10 grid is line-for-line
  // identical input at ~256x the cost.
  const ScalingMatrix E(mat2(1, 0, 0, 2));
  const Kernel kernel = Kernel::harmonizable_os(HomogeneousPsi(E), 0.6);
  const auto density = SpectralDensity::isotropic_mixture(1.5, std::exp(1.0), 0.1, 2);
  const AlphaField alpha = AlphaField::constant(1.5);

  std::vector<double> b1(10), b2(10), ratio(10);
  for (std::size_t r = 0; r < 10; ++r) {
    SimulateOptions opt;
    opt.n_terms = 100000;
    opt.seed = derive_seed(1007, "arrivals", r);
    opt.threads = 1;

    GridSpec ga;
    ga.box.axes = {{0.0, 1.0}, {0.0, 1.0}};
    ga.resolution = {1024, 4};
    const auto fa = simulate_field(kernel, density, alpha, ga, opt);
    const std::vector<int> ax0{0};
    b1[r] = directional_exponents(fa, ax0)[0].beta_hat;

    GridSpec gb = ga;
    gb.resolution = {4, 1024};
    const auto fb = simulate_field(kernel, density, alpha, gb, opt);
    const std::vector<int> ax1{1};
    b2[r] = directional_exponents(fb, ax1)[0].beta_hat;
    ratio[r] = b1[r] / b2[r];
  }
  const double m1 = median(b1), m2 = median(b2), mr = median(ratio);
  std::ostringstream os;
  os << "median exponents: axis 1 = " << m1 << " (0.6 +- 0.15), axis 2 = " << m2
     << " (0.3 +- 0.1), ratio = " << mr << " (2 +- 0.5)";
  return {std::abs(m1 - 0.6) <= 0.15 && std::abs(m2 - 0.3) <= 0.1 &&
              std::abs(mr - 2.0) <= 0.5,
          os.str()};
}

// ---------------------------------------------------------------- 8
Result envelope_slope() {
  const double H = 0.5, alpha0 = 1.5, zeta = 0.1;
  const Kernel kernel = os_kernel_1d(H);
  const auto density =
      SpectralDensity::isotropic_mixture(alpha0, std::exp(1.0), zeta, 1);
  std::vector<double> h;
  for (int j = 4; j <= 10; ++j) h.push_back(std::pow(2.0, -j));
  const auto ei = envelope_integral(kernel, density, alpha0, h);

  const double log_exp = 2.0 * (1.0 + zeta) * (1.0 / alpha0 - 0.5);
  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double shape =
        std::pow(h[i], 2.0 * H) * std::pow(std::abs(std::log(h[i])), log_exp);
    rmin = std::min(rmin, ei.value[i] / shape);
    rmax = std::max(rmax, ei.value[i] / shape);
  }
  std::ostringstream os;
  os << "fitted slope " << ei.fitted_slope << " (target 1.0 +- 0.1), shape "
     << "ratio max/min = " << rmax / rmin << " (tol <= 3)";
  return {std::abs(ei.fitted_slope - 2.0 * H) <= 0.1 && rmax / rmin <= 3.0,
          os.str()};
}

// ---------------------------------------------------------------- 9
Result net_covering() {
  Box box;
  box.axes = {{0.0, 1.0}, {0.0, 1.0}};

  auto eu = QuasiMetricSpec::euclidean();
  auto te = QuasiMetricSpec::tau_e(ScalingMatrix(mat2(1, 0, 0, 2)));
  te.h_lower = 0.5;  // 1 / abar
  te.h_upper = 1.0;  // 1 / a1
  // Empirical Euclidean envelope constant with a 1.5x safety margin.
  const double c22_te = 1.5 * envelope_probe(te, box, 4000, 1009).c_upper;

  std::ostringstream os;
  bool ok = true;
  const struct {
    const QuasiMetricSpec* spec;
    double c22;
    const char* name;
  } cases[] = {{&eu, 1.0, "euclidean"}, {&te, c22_te, "tau_E"}};
  for (const auto& cs : cases) {
    double worst = 0.0;
    for (int k = 2; k <= 6; ++k) {
      // Fine levels are queried through nearest(); the enumerated net
      // contains exactly the points nearest() can return.
      const DyadicNet net = build_net(box, cs.spec->h_lower, cs.c22, k);
      RngStream g(1009, "subsample", std::uint64_t(k));
      for (int i = 0; i < 1000; ++i) {
        Eigen::VectorXd x(2);
        x << g.uniform01(), g.uniform01();
        const double rho = (*cs.spec)(x, net.nearest(x));
        worst = std::max(worst, rho * std::pow(2.0, k));
        ok = ok && rho <= std::pow(2.0, -k);
      }
    }
    os << cs.name << " worst rho/2^-k = " << worst << "; ";
  }
  os << "k in {2..6}, 1000 probes each";
  return {ok, os.str()};
}

// ---------------------------------------------------------------- 10
namespace {

// Exponent fit over one window of a 1-d grid: median absolute increment per
// dyadic lag, eta = 0 log-log fit. The median tracks the conditional scale,
// whose |log h|^{(1+zeta)(1/alpha-1/2)} factor carries the alpha ordering
// with much less noise than window sups.
double window_exponent(const FieldGrid& f, int lo, int len) {
  const double dx = 1.0 / double(f.spec.resolution[0] - 1);
  std::vector<double> xs, ys;
  for (int lag = 1; 2 * lag <= len - 1; lag *= 2) {
    std::vector<double> inc;
    inc.reserve(std::size_t(len - lag));
    for (int p = lo; p + lag < lo + len; ++p)
      inc.push_back(std::abs(f.values[std::size_t(p + lag)] -
                             f.values[std::size_t(p)]));
    const double med = quantile(std::move(inc), 0.5);
    if (!(med > 0.0)) continue;
    xs.push_back(std::log(lag * dx));
    ys.push_back(std::log(med));
  }
  return linear_fit(xs, ys).slope;
}

}  // namespace

Result multistable_consistency() {
  const Kernel kernel = os_kernel_1d(0.5);
  const auto density =
      SpectralDensity::isotropic_mixture(1.2, std::exp(1.0), 0.1, 1);
  const SubGaussianSource src{SourceKind::ComplexGaussian};

  // Part 1: constant alpha vs zero-slope affine alpha, same seed -> bits.
  GridSpec grid;
  grid.box.axes = {{0.0, 1.0}};
  grid.resolution = {256};
  SimulateOptions opt;
  opt.n_terms = 5000;
  opt.seed = 1010;
  opt.threads = 1;
  const auto fc = simulate_field(kernel, density, AlphaField::constant(1.4),
                                 grid, opt);
  const auto fa = simulate_field(
      kernel, density,
      AlphaField::affine(1.4, Eigen::VectorXd::Zero(1), 1.2, 1.6), grid, opt);
  bool bit_identical = true;
  for (std::size_t i = 0; i < fc.values.size(); ++i)
    bit_identical = bit_identical &&
                    fc.values[i].real() == fa.values[i].real() &&
                    fc.values[i].imag() == fa.values[i].imag();

  // Part 2: alpha(u) = 1.2 + 0.4 u on [0,1]; larger alpha gives the smaller
  // log-correction exponent, hence the higher windowed exponent. Rank
  // agreement of window means over 400 replications (adjacent-window signal
  // ~ +0.01 with per-replication sd ~ 0.07, so resolved at ~3 se).
  Eigen::VectorXd slope(1);
  slope << 0.4;
  const AlphaField af = AlphaField::affine(1.2, slope, 1.2, 1.6);
  GridSpec fine;
  fine.box.axes = {{0.0, 1.0}};
  fine.resolution = {1536};
  const std::size_t reps = 400;
  double mean[3] = {0.0, 0.0, 0.0};
  for (std::size_t r = 0; r < reps; ++r) {
    SimulateOptions o;
    o.n_terms = 10000;
    o.seed = derive_seed(1010, "arrivals", r);
    o.threads = 1;
    const auto f = simulate_field(kernel, density, af, fine, o);
    for (int wnd = 0; wnd < 3; ++wnd)
      mean[wnd] += window_exponent(f, wnd * 512, 512) / double(reps);
  }
  const bool rank_ok = mean[0] < mean[1] && mean[1] < mean[2];

  std::ostringstream os;
  os << "bit-identity " << (bit_identical ? "ok" : "BROKEN")
     << "; mean window exponents (alpha 1.2->1.6) = " << mean[0] << ", "
     << mean[1] << ", " << mean[2]
     << (rank_ok ? " (rank agrees)" : " (rank DISAGREES)");
  return {bit_identical && rank_ok, os.str()};
}

// ---------------------------------------------------------------- 11
Result reproducibility() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "anisofield_acceptance_11";
  fs::remove_all(dir);
  fs::create_directories(dir);

  const nlohmann::json cfg{
      {"schema_version", 1},
      {"kernel", {{"type", "harmonizable_os"},
                  {"E", {{1.0, 0.0}, {0.0, 2.0}}}, {"H", 0.6}}},
      {"density", {{"type", "isotropic_mixture"}, {"alpha0", 1.5},
                   {"r0", 3.0}, {"zeta", 0.5}}},
      {"alpha", {{"kind", "constant"}, {"alpha0", 1.5}}},
      {"grid", {{"box", {{0.0, 1.0}, {0.0, 1.0}}}, {"resolution", {48, 48}}}},
      {"n_terms", 3000},
      {"seed", 2718}};
  const std::string cfg_path = (dir / "cfg.json").string();
  std::ofstream(cfg_path) << cfg.dump();

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };

  const char* runs[][2] = {{"a", "1"}, {"b", "1"}, {"c", "8"}};
  for (const auto& r : runs) {
    const int rc = run_cli({"simulate", "--config", cfg_path, "--out",
                            (dir / r[0]).string(), "--threads", r[1]});
    if (rc != 0) return {false, "simulate failed with exit code " + std::to_string(rc)};
  }
  const bool csv_ok = slurp(dir / "a" / "field.csv") == slurp(dir / "b" / "field.csv") &&
                      slurp(dir / "a" / "field.csv") == slurp(dir / "c" / "field.csv");
  const bool pgm_ok = slurp(dir / "a" / "field.pgm") == slurp(dir / "b" / "field.pgm") &&
                      slurp(dir / "a" / "field.pgm") == slurp(dir / "c" / "field.pgm");
  std::ostringstream os;
  os << "CSV " << (csv_ok ? "byte-identical" : "DIFFERS") << ", PGM "
     << (pgm_ok ? "byte-identical" : "DIFFERS")
     << " across two runs and threads {1,8}";
  return {csv_ok && pgm_ok, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: acceptance <criterion 1..11>\n";
    return 2;
  }
  const int n = std::atoi(argv[1]);
  Result r;
  switch (n) {
    case 1: r = tail_bound(); break;
    case 2: r = supsum_bound(); break;
    case 3: r = quasi_metric_suite(); break;
    case 4: r = stable_constant_crosscheck(); break;
    case 5: r = shot_noise_rate(); break;
    case 6: r = density_invariance(); break;
    case 7: r = directional_anisotropy(); break;
    case 8: r = envelope_slope(); break;
    case 9: r = net_covering(); break;
    case 10: r = multistable_consistency(); break;
    case 11: r = reproducibility(); break;
    default:
      std::cerr << "usage: acceptance <criterion 1..11>\n";
      return 2;
  }
  std::cout << "criterion " << n << ": " << (r.pass ? "PASS" : "FAIL") << " - "
            << r.detail << std::endl;
  return r.pass ? 0 : 1;
}
