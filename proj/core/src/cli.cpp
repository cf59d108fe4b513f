#include "anisofield/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "anisofield/stats.hpp"
#include "anisofield/subgaussian.hpp"

namespace anisofield {

namespace {

void check_keys(const nlohmann::json& j,
                std::initializer_list<const char*> allowed,
                const char* context) {
  if (!j.is_object())
    throw DomainError(std::string(context) + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok)
      throw DomainError(std::string(context) + ": unknown key '" + key + "'");
  }
}

double get_num(const nlohmann::json& j, const char* key, const char* ctx) {
  if (!j.contains(key) || !j[key].is_number())
    throw DomainError(std::string(ctx) + ": missing numeric '" + key + "'");
  return j[key].get<double>();
}

Mat parse_matrix(const nlohmann::json& j, const char* ctx) {
  if (!j.is_array() || j.empty())
    throw DomainError(std::string(ctx) + ": E must be an array of rows");
  const int d = int(j.size());
  Mat E(d, d);
  for (int r = 0; r < d; ++r) {
    if (!j[std::size_t(r)].is_array() || int(j[std::size_t(r)].size()) != d)
      throw DomainError(std::string(ctx) + ": E must be square");
    for (int c = 0; c < d; ++c)
      E(r, c) = j[std::size_t(r)][std::size_t(c)].get<double>();
  }
  return E;
}

std::string out_directory(const CommandOverrides& ov) {
  if (ov.out_dir) return *ov.out_dir;
  if (const char* env = std::getenv("ANISOFIELD_OUT"); env && *env)
    return env;
  return ".";
}

void write_report(const nlohmann::json& report, const CommandOverrides& ov,
                  const std::string& name) {
  std::error_code ec;
  const std::string dir = out_directory(ov);
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory: " + dir);
  const std::string path =
      (std::filesystem::path(dir) / (name + ".json")).string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << report.dump(2) << "\n";
  std::cout << report.dump(2) << std::endl;
}

}  // namespace

RunConfig RunConfig::parse(const nlohmann::json& j) {
  check_keys(j,
             {"schema_version", "kernel", "density", "density_b", "alpha",
              "grid", "n_terms", "seed", "source", "apply_d_alpha", "out_stem",
              "verify", "estimate"},
             "config");
  if (!j.contains("schema_version") || j["schema_version"] != 1)
    throw DomainError("config: schema_version must be 1");
  if (j.contains("kernel"))
    check_keys(j["kernel"], {"type", "E", "H", "beta1", "beta2", "alpha_min"},
               "config.kernel");
  for (const char* dk : {"density", "density_b"})
    if (j.contains(dk))
      check_keys(j[dk], {"type", "alpha0", "r0", "zeta", "gamma"},
                 std::string("config.").append(dk).c_str());
  if (j.contains("alpha"))
    check_keys(j["alpha"], {"kind", "alpha0", "c0", "c", "clamp"},
               "config.alpha");
  if (j.contains("grid"))
    check_keys(j["grid"], {"box", "resolution"}, "config.grid");
  if (j.contains("verify"))
    check_keys(j["verify"],
               {"m", "t_grid", "z_grid", "n_max", "t", "points", "char_args",
                "min_pass_fraction", "b", "p", "pprime", "checkpoints",
                "n_ref", "alpha_grid_size", "replications", "h_grid",
                "slope_tol", "ratio_bound", "trend_tol"},
               "config.verify");
  if (j.contains("estimate"))
    check_keys(j["estimate"], {"input_csv", "axes", "eta", "beta", "metric"},
               "config.estimate");
  RunConfig c;
  c.raw = j;

  // Force full construction of every present section so that physical
  // constraints fail here, before any computation.
  if (j.contains("alpha")) (void)c.alpha();
  if (j.contains("kernel")) (void)c.kernel();
  if (j.contains("density")) (void)c.density();
  if (j.contains("density_b")) (void)c.density("density_b");
  if (j.contains("grid")) (void)c.grid();
  (void)c.source();
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config: " + path);
  const auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded())
    throw DomainError("config: malformed JSON in " + path);
  return parse(j);
}

bool RunConfig::has(const char* key) const { return raw.contains(key); }

const nlohmann::json& RunConfig::section(const char* key) const {
  if (!raw.contains(key))
    throw DomainError(std::string("config: missing section '") + key + "'");
  return raw[key];
}

AlphaField RunConfig::alpha() const {
  const auto& j = section("alpha");
  const std::string kind = j.value("kind", "constant");
  if (kind == "constant")
    return AlphaField::constant(get_num(j, "alpha0", "config.alpha"));
  if (kind == "affine") {
    if (!j.contains("c") || !j.contains("clamp"))
      throw DomainError("config.alpha: affine needs c and clamp");
    Eigen::VectorXd c(j["c"].size());
    for (std::size_t i = 0; i < j["c"].size(); ++i)
      c(Eigen::Index(i)) = j["c"][i].get<double>();
    return AlphaField::affine(get_num(j, "c0", "config.alpha"), c,
                              j["clamp"][0].get<double>(),
                              j["clamp"][1].get<double>());
  }
  throw DomainError("config.alpha: unknown kind '" + kind + "'");
}

Kernel RunConfig::kernel() const {
  const auto& j = section("kernel");
  const std::string type = j.value("type", "");
  if (!j.contains("E")) throw DomainError("config.kernel: missing E");
  ScalingMatrix E(parse_matrix(j["E"], "config.kernel"));
  if (type == "harmonizable_os") {
    const double H = get_num(j, "H", "config.kernel");
    if (!(H > 0.0 && H < E.a1()))
      throw DomainError("config.kernel: H in (0, a1) required");
    return Kernel::harmonizable_os(HomogeneousPsi(std::move(E)), H);
  }
  if (type == "riesz_bessel") {
    double alpha_min;
    if (j.contains("alpha_min")) {
      alpha_min = j["alpha_min"].get<double>();
    } else {
      alpha_min = alpha().min_alpha();
    }
    return Kernel::riesz_bessel(E, get_num(j, "beta1", "config.kernel"),
                                get_num(j, "beta2", "config.kernel"),
                                alpha_min);
  }
  throw DomainError("config.kernel: unknown type '" + type + "'");
}

SpectralDensity RunConfig::density(const char* key) const {
  const auto& j = section(key);
  const std::string type = j.value("type", "isotropic_mixture");
  if (type == "isotropic_mixture") {
    const int d = kernel().dim();
    const double a0 = j.value("alpha0", alpha().min_alpha());
    return SpectralDensity::isotropic_mixture(
        a0, j.value("r0", std::exp(1.0)), j.value("zeta", 0.1), d);
  }
  if (type == "eigen_product") {
    if (!j.contains("gamma"))
      throw DomainError("config.density: eigen_product needs gamma");
    return SpectralDensity::eigen_product(
        kernel().scaling(), j["gamma"].get<std::vector<double>>());
  }
  throw DomainError("config.density: unknown type '" + type + "'");
}

GridSpec RunConfig::grid() const {
  const auto& j = section("grid");
  if (!j.contains("box") || !j.contains("resolution"))
    throw DomainError("config.grid: needs box and resolution");
  GridSpec g;
  for (const auto& ax : j["box"]) {
    if (!ax.is_array() || ax.size() != 2)
      throw DomainError("config.grid: box axes are [lo, hi] pairs");
    g.box.axes.emplace_back(ax[0].get<double>(), ax[1].get<double>());
  }
  g.resolution = j["resolution"].get<std::vector<int>>();
  if (g.box.dim() != g.dim())
    throw DomainError("config.grid: box/resolution dimension mismatch");
  for (int r : g.resolution)
    if (r < 1) throw DomainError("config.grid: resolution >= 1");
  return g;
}

SubGaussianSource RunConfig::source() const {
  const std::string s = raw.value("source", "complex_gaussian");
  if (s == "complex_gaussian") return {SourceKind::ComplexGaussian};
  if (s == "rademacher_real") return {SourceKind::RademacherReal};
  if (s == "rademacher_complex") return {SourceKind::RademacherComplex};
  throw DomainError("config: unknown source '" + s + "'");
}

std::size_t RunConfig::n_terms() const {
  return raw.value("n_terms", std::size_t(10000));
}

std::uint64_t RunConfig::seed() const {
  return raw.value("seed", std::uint64_t(0));
}

bool RunConfig::apply_d_alpha() const {
  return raw.value("apply_d_alpha", false);
}

std::string RunConfig::out_stem() const {
  return raw.value("out_stem", std::string("field"));
}

int cmd_simulate(const RunConfig& config, const CommandOverrides& ov) {
  SimulateOptions opt;
  opt.n_terms = config.n_terms();
  opt.seed = ov.seed.value_or(config.seed());
  opt.source = config.source();
  opt.apply_d_alpha = config.apply_d_alpha();
  opt.threads = ov.threads;

  FieldGrid grid = simulate_field(config.kernel(), config.density(),
                                  config.alpha(), config.grid(), opt);
  grid.metadata["seed"] = opt.seed;
  grid.metadata["config_hash"] = config_hash_hex(config.raw);

  const auto paths =
      write_field(grid, out_directory(ov), config.out_stem());
  nlohmann::json report{{"csv", paths.csv},
                        {"pgm", paths.pgm},
                        {"sidecar", paths.sidecar},
                        {"config_hash", config_hash_hex(config.raw)}};
  std::cout << report.dump(2) << std::endl;
  return kExitPass;
}

namespace {

nlohmann::json cells_to_json(std::span<const VerifierCell> cells) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : cells) {
    arr.push_back({{"t_or_abs_z", c.t_or_abs_z},
                   {"empirical", c.empirical},
                   {"bound", c.bound},
                   {"se", c.se},
                   {"violated", c.violated}});
  }
  return arr;
}

bool any_violated(std::span<const VerifierCell> cells) {
  for (const auto& c : cells)
    if (c.violated) return true;
  return false;
}

int verify_tails(const RunConfig& config, const nlohmann::json& v,
                 const CommandOverrides& ov) {
  std::vector<double> t_grid = v.contains("t_grid")
                                   ? v["t_grid"].get<std::vector<double>>()
                                   : std::vector<double>{1, 2, 3, 4};
  const std::size_t m = v.value("m", std::size_t(1000000));
  const auto cells = tail_check(config.source(), t_grid, m,
                                ov.seed.value_or(config.seed()));
  const bool fail = any_violated(cells);
  write_report({{"suite", "tails"},
                {"cells", cells_to_json(cells)},
                {"pass", !fail}},
               ov, "verify_tails");
  return fail ? kExitStatViolation : kExitPass;
}

int verify_mgf(const RunConfig& config, const nlohmann::json& v,
               const CommandOverrides& ov) {
  std::vector<std::complex<double>> z_grid;
  if (v.contains("z_grid")) {
    for (const auto& z : v["z_grid"])
      z_grid.emplace_back(z[0].get<double>(), z[1].get<double>());
  } else {
    z_grid = {{0.5, 0.0}, {1.0, 0.0}, {0.0, 1.5}, {1.5, 1.5}, {3.0, 0.0}};
  }
  const std::size_t m = v.value("m", std::size_t(1000000));
  const auto cells = mgf_check(config.source(), z_grid, m,
                               ov.seed.value_or(config.seed()));
  const bool fail = any_violated(cells);
  write_report({{"suite", "mgf"},
                {"cells", cells_to_json(cells)},
                {"pass", !fail}},
               ov, "verify_mgf");
  return fail ? kExitStatViolation : kExitPass;
}

int verify_supsum(const RunConfig& config, const nlohmann::json& v,
                  const CommandOverrides& ov) {
  const int n_max = v.value("n_max", 50);
  const double t = v.value("t", 6.0);
  const std::size_t m = v.value("m", std::size_t(1000000));
  std::vector<double> weights(static_cast<std::size_t>(n_max));
  for (int n = 0; n < n_max; ++n)
    weights[std::size_t(n)] = std::pow(2.0, -(n + 1));
  const VerifierCell cell = sup_partial_sum_tail(
      weights, config.source(), t, m, ov.seed.value_or(config.seed()));
  write_report({{"suite", "supsum"},
                {"cells", cells_to_json({&cell, 1})},
                {"pass", !cell.violated}},
               ov, "verify_supsum");
  return cell.violated ? kExitStatViolation : kExitPass;
}

int verify_fdd(const RunConfig& config, const nlohmann::json& v,
               const CommandOverrides& ov) {
  const Kernel kernel = config.kernel();
  const SpectralDensity da = config.density();
  const SpectralDensity db =
      config.has("density_b") ? config.density("density_b") : config.density();
  const AlphaField af = config.alpha();
  if (!af.is_constant())
    throw DomainError("verify fdd: constant alpha required");

  std::vector<Eigen::VectorXd> points;
  if (v.contains("points")) {
    for (const auto& p : v["points"]) {
      Eigen::VectorXd u(p.size());
      for (std::size_t i = 0; i < p.size(); ++i)
        u(Eigen::Index(i)) = p[i].get<double>();
      points.push_back(std::move(u));
    }
  } else {
    const GridSpec g = config.grid();
    for (double frac : {0.3, 0.5, 0.7}) {
      Eigen::VectorXd u(g.dim());
      for (int i = 0; i < g.dim(); ++i) {
        const auto& [lo, hi] = g.box.axes[std::size_t(i)];
        u(i) = lo + frac * (hi - lo);
      }
      points.push_back(std::move(u));
    }
  }
  std::vector<std::complex<double>> char_args;
  if (v.contains("char_args")) {
    for (const auto& z : v["char_args"])
      char_args.emplace_back(z[0].get<double>(), z[1].get<double>());
  } else {
    char_args = {{0.25, 0.0}, {0.5, 0.0}, {1.0, 0.0}, {2.0, 0.0}, {0.0, 1.0}};
  }
  const std::size_t m = v.value("m", std::size_t(1000));
  const double min_fraction = v.value("min_pass_fraction", 0.93);

  const FddReport rep = fdd_invariance_test(
      kernel, da, db, af.min_alpha(), points, m, config.n_terms(), char_args,
      ov.seed.value_or(config.seed()), config.source());
  const bool pass =
      double(rep.n_pass) >= min_fraction * double(rep.cells.size());
  nlohmann::json out = rep.to_json();
  out["suite"] = "fdd";
  out["pass"] = pass;
  write_report(out, ov, "verify_fdd");
  return pass ? kExitPass : kExitStatViolation;
}

int verify_rate(const RunConfig& config, const nlohmann::json& v,
                const CommandOverrides& ov) {
  const double b = v.value("b", 1.5);
  const double p = v.value("p", 1.0);
  const double pprime = v.value("pprime", 8.0);
  const Interval adm = admissible_pprime(b, p);
  const double inv_pprime = 1.0 / pprime;
  if (!(inv_pprime > adm.lo && inv_pprime < adm.hi)) {
    std::ostringstream os;
    os << "verify rate: 1/p' = " << inv_pprime
       << " outside the admissible interval (" << adm.lo << ", " << adm.hi
       << ") for b = " << b << ", p = " << p;
    throw DomainError(os.str());
  }

  std::vector<std::size_t> checkpoints =
      v.contains("checkpoints")
          ? v["checkpoints"].get<std::vector<std::size_t>>()
          : std::vector<std::size_t>{16,  32,   64,   128,  256,
                                     512, 1024, 2048, 4096, 8192};
  const std::size_t n_ref = v.value("n_ref", std::size_t(100000));
  const int grid_size = v.value("alpha_grid_size", 64);
  const std::size_t reps = v.value("replications", std::size_t(20));
  const double trend_tol = v.value("trend_tol", 0.25);

  // Pure shot-noise weights W_n(alpha) = T_n^{-1/alpha} over an alpha grid
  // in [0.5, b]; the alpha range tops out at b.
  std::vector<AlphaPoint> x_grid;
  for (int i = 0; i < grid_size; ++i) {
    AlphaPoint x;
    x.alpha = 0.5 + (b - 0.5) * double(i) / double(grid_size - 1);
    x.u = Eigen::VectorXd::Zero(1);
    x_grid.push_back(std::move(x));
  }
  const WEvaluator w = [](double alpha, const Eigen::VectorXd&,
                          const Eigen::VectorXd&, double arrival) {
    return std::complex<double>(std::pow(arrival, -1.0 / alpha), 0.0);
  };
  const XiSampler dummy = [](RngStream& rng, double* out) {
    out[0] = rng.uniform01();
  };

  // Per replication, the max of the scaled sup over the first and the last
  // halves of the checkpoint range; pass when the 95th percentile shows no
  // growth trend between halves.
  std::vector<double> early(reps), late(reps);
  const std::size_t half = checkpoints.size() / 2;
  const std::uint64_t seed0 = ov.seed.value_or(config.seed());
  for (std::size_t r = 0; r < reps; ++r) {
    const SeriesRealization real =
        make_realization(n_ref, derive_seed(seed0, "arrivals", r),
                         config.source(), 1, dummy);
    const auto profile =
        rate_profile(real, w, x_grid, checkpoints, n_ref, inv_pprime);
    double e = 0.0, l = 0.0;
    for (std::size_t i = 0; i < profile.size() - 1; ++i) {
      // rate_profile appends n_ref as a reference row; skip it.
      if (i < half)
        e = std::max(e, profile[i].scaled);
      else
        l = std::max(l, profile[i].scaled);
    }
    early[r] = e;
    late[r] = l;
  }
  const double q_early = quantile(early, 0.95);
  const double q_late = quantile(late, 0.95);
  const double change = q_early > 0.0 ? q_late / q_early - 1.0 : 0.0;
  const bool pass = change < trend_tol;
  write_report({{"suite", "rate"},
                {"inv_pprime", inv_pprime},
                {"admissible", {adm.lo, adm.hi}},
                {"q95_early", q_early},
                {"q95_late", q_late},
                {"relative_change", change},
                {"trend_tol", trend_tol},
                {"pass", pass}},
               ov, "verify_rate");
  return pass ? kExitPass : kExitStatViolation;
}

int verify_envelope(const RunConfig& config, const nlohmann::json& v,
                    const CommandOverrides& ov) {
  const Kernel kernel = config.kernel();
  const AlphaField af = config.alpha();
  if (!af.is_constant())
    throw DomainError("verify envelope: constant alpha required");
  const double alpha0 = af.min_alpha();
  std::vector<double> h_grid;
  if (v.contains("h_grid")) {
    h_grid = v["h_grid"].get<std::vector<double>>();
  } else {
    for (int k = 4; k <= 10; ++k) h_grid.push_back(std::pow(2.0, -k));
  }
  const double slope_tol = v.value("slope_tol", 0.1);
  const double ratio_bound = v.value("ratio_bound", 3.0);
  const double zeta = config.section("density").value("zeta", 0.1);

  const EnvelopeIntegral ei =
      envelope_integral(kernel, config.density(), alpha0, h_grid);

  // Ratio against the full predicted shape h^{2H} |log h|^{2(1+zeta)(1/a-1/2)}.
  const double log_exp = 2.0 * (1.0 + zeta) * (1.0 / alpha0 - 0.5);
  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
  for (std::size_t i = 0; i < ei.h.size(); ++i) {
    const double shape = std::pow(ei.h[i], ei.predicted_slope) *
                         std::pow(std::abs(std::log(ei.h[i])), log_exp);
    const double r = ei.value[i] / shape;
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  const bool slope_ok =
      std::abs(ei.fitted_slope - ei.predicted_slope) <= slope_tol;
  const bool ratio_ok = rmax / rmin <= ratio_bound;
  write_report({{"suite", "envelope"},
                {"h", ei.h},
                {"value", ei.value},
                {"fitted_slope", ei.fitted_slope},
                {"predicted_slope", ei.predicted_slope},
                {"ratio_max_over_min", rmax / rmin},
                {"pass", slope_ok && ratio_ok}},
               ov, "verify_envelope");
  return slope_ok && ratio_ok ? kExitPass : kExitStatViolation;
}

}  // namespace

int cmd_verify(const RunConfig& config, const std::string& suite,
               const CommandOverrides& ov) {
  const nlohmann::json v =
      config.has("verify") ? config.section("verify") : nlohmann::json::object();
  if (suite == "tails") return verify_tails(config, v, ov);
  if (suite == "mgf") return verify_mgf(config, v, ov);
  if (suite == "supsum") return verify_supsum(config, v, ov);
  if (suite == "fdd") return verify_fdd(config, v, ov);
  if (suite == "rate") return verify_rate(config, v, ov);
  if (suite == "envelope") return verify_envelope(config, v, ov);
  throw DomainError("verify: unknown suite '" + suite + "'");
}

int cmd_estimate(const RunConfig& config, const CommandOverrides& ov) {
  const nlohmann::json e = config.has("estimate") ? config.section("estimate")
                                                  : nlohmann::json::object();
  FieldGrid grid;
  if (e.contains("input_csv")) {
    grid = read_field_csv(e["input_csv"].get<std::string>());
  } else {
    SimulateOptions opt;
    opt.n_terms = config.n_terms();
    opt.seed = ov.seed.value_or(config.seed());
    opt.source = config.source();
    opt.apply_d_alpha = config.apply_d_alpha();
    opt.threads = ov.threads;
    grid = simulate_field(config.kernel(), config.density(), config.alpha(),
                          config.grid(), opt);
    grid.metadata["config_hash"] = config_hash_hex(config.raw);
  }

  nlohmann::json report{{"config_hash", config_hash_hex(config.raw)}};

  bool all_equal = true;
  for (const auto& val : grid.values)
    if (val != grid.values.front()) all_equal = false;
  if (all_equal) {
    report["zero_increments"] = true;
  } else {
    report["zero_increments"] = false;
    std::vector<int> axes;
    if (e.contains("axes")) {
      axes = e["axes"].get<std::vector<int>>();
    } else {
      for (int i = 0; i < grid.spec.dim(); ++i)
        if (grid.spec.resolution[std::size_t(i)] >= 128) axes.push_back(i);
    }
    if (!axes.empty()) {
      const auto dirs = directional_exponents(grid, axes);
      nlohmann::json dj = nlohmann::json::array();
      for (const auto& dir : dirs) {
        nlohmann::json one{{"axis", dir.axis},
                           {"zero_increments", dir.zero_increments},
                           {"profile", dir.profile.to_json()}};
        if (!dir.zero_increments) one["beta_hat"] = dir.beta_hat;
        dj.push_back(std::move(one));
      }
      report["directional"] = dj;
    }

    QuasiMetricSpec spec = QuasiMetricSpec::euclidean();
    if (e.value("metric", "euclidean") == "tau_e")
      spec = QuasiMetricSpec::tau_e(config.kernel().scaling(), true);
    ModulusOptions mo;
    mo.seed = ov.seed.value_or(config.seed());
    const RegularityReport prof = modulus_profile(grid, spec, mo);
    report["profile"] = prof.to_json();
    const double eta = e.value("eta", 0.0);
    try {
      const HolderFit fit = fit_holder(prof.buckets, eta);
      report["fit"] = {{"beta_hat", fit.beta_hat},
                       {"eta", fit.eta},
                       {"residual_rms", fit.residual_rms},
                       {"ci_halfwidth", fit.ci_halfwidth}};
    } catch (const DomainError& err) {
      report["fit"] = {{"error", err.what()}};
    }
    if (e.contains("beta")) {
      const HolderMembership hm =
          holder_membership(grid, spec, e["beta"].get<double>(),
                            e.value("eta", 0.0));
      report["membership"] = {{"c_sup", hm.c_sup},
                              {"c_sup_coarse", hm.c_sup_coarse},
                              {"stable", hm.stable}};
    }

    const std::string dir = out_directory(ov);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory: " + dir);
    const std::string csv_path =
        (std::filesystem::path(dir) / "estimate.csv").string();
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw IoError("cannot open for writing: " + csv_path);
    csv << prof.to_csv();
  }

  write_report(report, ov, "estimate");
  return kExitPass;
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"stable / multistable random field simulator"};
  app.require_subcommand(1);

  std::string config_path, suite = "tails", out_dir;
  std::uint64_t seed = 0;
  int threads = 0;
  bool seed_set = false, out_set = false;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")
        ->required();
    sub->add_option("--seed", seed, "override the master seed")
        ->each([&](const std::string&) { seed_set = true; });
    sub->add_option("--out", out_dir, "output directory")
        ->each([&](const std::string&) { out_set = true; });
    sub->add_option("--threads", threads, "parallelism degree (0 = auto)");
  };
  CLI::App* sim = app.add_subcommand("simulate", "simulate a field grid");
  add_common(sim);
  CLI::App* ver = app.add_subcommand("verify", "run a statistical suite");
  add_common(ver);
  ver->add_option("--suite", suite,
                  "tails | mgf | supsum | fdd | rate | envelope");
  CLI::App* est = app.add_subcommand("estimate", "regularity estimation");
  add_common(est);

  try {
    // CLI11 wants mutable argc/argv-style input.
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& err) {
    std::cerr << err.what() << std::endl;
    return kExitBadConfig;
  }

  try {
    const RunConfig config = RunConfig::load(config_path);
    CommandOverrides ov;
    if (seed_set) ov.seed = seed;
    if (out_set) ov.out_dir = out_dir;
    ov.threads = threads;
    if (sim->parsed()) return cmd_simulate(config, ov);
    if (ver->parsed()) return cmd_verify(config, suite, ov);
    return cmd_estimate(config, ov);
  } catch (const DomainError& err) {
    std::cerr << "invalid config: " << err.what() << std::endl;
    return kExitBadConfig;
  } catch (const IoError& err) {
    std::cerr << "i/o error: " << err.what() << std::endl;
    return kExitIo;
  } catch (const NumericError& err) {
    std::cerr << "numeric failure: " << err.what() << std::endl;
    return kExitStatViolation;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << std::endl;
    return kExitIo;
  }
}

}  // namespace anisofield
