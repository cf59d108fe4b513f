#include "anisofield/subgaussian.hpp"

#include <cmath>
#include <stdexcept>

#include "anisofield/stats.hpp"

namespace anisofield {

std::complex<double> SubGaussianSource::draw_one(RngStream& rng) const {
  switch (kind) {
    case SourceKind::ComplexGaussian:
      return rng.complex_normal();
    case SourceKind::RademacherReal:
      return {double(rng.sign()), 0.0};
    case SourceKind::RademacherComplex: {
      const double r = double(rng.sign());
      static const std::complex<double> phases[4] = {
          {1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      return r * phases[rng.below(4)];
    }
  }
  return {};
}

std::vector<std::complex<double>> draw(const SubGaussianSource& source,
                                       std::size_t n, RngStream& rng) {
  std::vector<std::complex<double>> out(n);
  for (auto& g : out) g = source.draw_one(rng);
  return out;
}

std::vector<VerifierCell> tail_check(const SubGaussianSource& source,
                                     std::span<const double> t_grid,
                                     std::size_t m_samples,
                                     std::uint64_t seed) {
  for (double t : t_grid)
    if (!(t > 0.0)) throw std::invalid_argument("tail_check: t must be > 0");
  if (m_samples < 10000)
    throw std::invalid_argument("tail_check: need M >= 1e4");

  RngStream rng(seed, "multipliers");
  std::vector<std::size_t> exceed(t_grid.size(), 0);
  for (std::size_t i = 0; i < m_samples; ++i) {
    const double a = std::abs(source.draw_one(rng));
    for (std::size_t k = 0; k < t_grid.size(); ++k)
      if (a > t_grid[k]) ++exceed[k];
  }

  std::vector<VerifierCell> cells(t_grid.size());
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    auto& c = cells[k];
    c.t_or_abs_z = t_grid[k];
    c.empirical = double(exceed[k]) / double(m_samples);
    c.bound = 4.0 * std::exp(-t_grid[k] * t_grid[k] / 8.0);
    const double p = std::min(c.bound, 1.0);
    c.se = std::sqrt(p * (1.0 - p) / double(m_samples));
    c.violated = c.empirical > c.bound + 3.0 * c.se;
  }
  return cells;
}

std::vector<VerifierCell> mgf_check(const SubGaussianSource& source,
                                    std::span<const std::complex<double>> z_grid,
                                    std::size_t m_samples,
                                    std::uint64_t seed) {
  for (auto z : z_grid)
    if (std::abs(z) > 3.0)
      throw std::invalid_argument("mgf_check: |z| <= 3 required");

  RngStream rng(seed, "multipliers");
  std::vector<double> sum(z_grid.size(), 0.0);
  std::vector<double> sumsq(z_grid.size(), 0.0);
  for (std::size_t i = 0; i < m_samples; ++i) {
    const auto g = source.draw_one(rng);
    for (std::size_t k = 0; k < z_grid.size(); ++k) {
      const double e = std::exp(std::real(std::conj(z_grid[k]) * g));
      sum[k] += e;
      sumsq[k] += e * e;
    }
  }

  std::vector<VerifierCell> cells(z_grid.size());
  for (std::size_t k = 0; k < z_grid.size(); ++k) {
    auto& c = cells[k];
    c.z = z_grid[k];
    c.t_or_abs_z = std::abs(z_grid[k]);
    const double m = sum[k] / double(m_samples);
    const double var =
        std::max(0.0, sumsq[k] / double(m_samples) - m * m);
    const double norm = std::exp(0.5 * std::norm(z_grid[k]));
    c.empirical = m / norm;
    c.bound = 1.0;
    c.se = std::sqrt(var / double(m_samples)) / norm;
    c.violated = c.empirical > c.bound + 3.0 * c.se;
  }
  return cells;
}

VerifierCell sup_partial_sum_tail(std::span<const double> weights,
                                  const SubGaussianSource& source, double t,
                                  std::size_t m_samples, std::uint64_t seed) {
  if (!(t > 0.0)) throw std::invalid_argument("sup_partial_sum_tail: t > 0");
  double norm2 = 0.0;
  for (double a : weights) norm2 += a * a;
  if (norm2 == 0.0)
    throw std::invalid_argument("sup_partial_sum_tail: all-zero weights");
  const double threshold = t * std::sqrt(norm2);

  RngStream rng(seed, "multipliers");
  std::size_t exceed = 0;
  for (std::size_t i = 0; i < m_samples; ++i) {
    std::complex<double> s{};
    double sup = 0.0;
    for (double a : weights) {
      s += a * source.draw_one(rng);
      sup = std::max(sup, std::abs(s));
    }
    if (sup > threshold) ++exceed;
  }

  VerifierCell c;
  c.t_or_abs_z = t;
  c.empirical = double(exceed) / double(m_samples);
  c.bound = 8.0 * std::exp(-t * t / 8.0);
  const double p = std::min(c.bound, 1.0);
  c.se = std::sqrt(p * (1.0 - p) / double(m_samples));
  c.violated = c.empirical > c.bound + 3.0 * c.se;
  return c;
}

double symmetry_pvalue(const SubGaussianSource& source, std::size_t n,
                       std::uint64_t seed) {
  RngStream rng_a(seed, "symmetry", 0);
  RngStream rng_b(seed, "symmetry", 1);
  std::vector<double> re_a, re_b, im_a, im_b;
  re_a.reserve(n);
  re_b.reserve(n);
  im_a.reserve(n);
  im_b.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = source.draw_one(rng_a);
    const auto b = -source.draw_one(rng_b);  // law must match a
    re_a.push_back(a.real());
    im_a.push_back(a.imag());
    re_b.push_back(b.real());
    im_b.push_back(b.imag());
  }
  const double p_re = ks_two_sample(re_a, re_b).p_value;
  const double p_im = ks_two_sample(im_a, im_b).p_value;
  return std::min(p_re, p_im);
}

}  // namespace anisofield
