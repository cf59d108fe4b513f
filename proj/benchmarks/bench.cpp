#include <benchmark/benchmark.h>

#include "anisofield/lepage.hpp"
#include "anisofield/quadrature.hpp"

using namespace anisofield;

namespace {

Mat diag12() {
  Mat m(2, 2);
  m << 1, 0, 0, 2;
  return m;
}

void BM_MatPower(benchmark::State& state) {
  const ScalingMatrix E(diag12());
  double r = 1.0;
  for (auto _ : state) {
    r = r < 8.0 ? r * 1.001 : 0.125;
    benchmark::DoNotOptimize(E.power(r));
  }
}
BENCHMARK(BM_MatPower);

void BM_Tau(benchmark::State& state) {
  const ScalingMatrix E(diag12());
  RngStream g(1);
  Vec x(2);
  for (auto _ : state) {
    x << g.uniform(-3, 3), g.uniform(-3, 3);
    benchmark::DoNotOptimize(tau(E, x));
  }
}
BENCHMARK(BM_Tau);

// Throughput of the inner series loop: terms per second for one grid point.
void BM_SeriesTerms(benchmark::State& state) {
  const auto n = std::size_t(state.range(0));
  const Kernel k =
      Kernel::harmonizable_os(HomogeneousPsi(ScalingMatrix(diag12())), 0.6);
  const auto m = SpectralDensity::isotropic_mixture(1.5, 3.0, 0.5, 2);
  Eigen::VectorXd u(2);
  u << 0.4, 0.7;
  const std::vector<Eigen::VectorXd> pts{u};
  std::size_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_series(
        k, m, AlphaField::constant(1.5), pts, n, ++seed,
        SubGaussianSource{SourceKind::ComplexGaussian}));
  }
  state.SetItemsProcessed(std::int64_t(state.iterations()) * std::int64_t(n));
}
BENCHMARK(BM_SeriesTerms)->Arg(1 << 12)->Arg(1 << 15);

void BM_SimulateGrid(benchmark::State& state) {
  const Kernel k =
      Kernel::harmonizable_os(HomogeneousPsi(ScalingMatrix(diag12())), 0.6);
  const auto m = SpectralDensity::isotropic_mixture(1.5, 3.0, 0.5, 2);
  GridSpec grid;
  grid.box.axes = {{0.0, 1.0}, {0.0, 1.0}};
  grid.resolution = {32, 32};
  SimulateOptions opt;
  opt.n_terms = 2000;
  opt.threads = 1;
  for (auto _ : state) {
    ++opt.seed;
    benchmark::DoNotOptimize(
        simulate_field(k, m, AlphaField::constant(1.5), grid, opt));
  }
  state.SetItemsProcessed(std::int64_t(state.iterations()) *
                          std::int64_t(grid.size()) *
                          std::int64_t(opt.n_terms));
}
BENCHMARK(BM_SimulateGrid);

void BM_TanhSinh(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(tanh_sinh(
        [](double x) { return std::pow(x, -0.5) * std::cos(x); }, 0.0, 1.0));
  }
}
BENCHMARK(BM_TanhSinh);

}  // namespace

BENCHMARK_MAIN();
