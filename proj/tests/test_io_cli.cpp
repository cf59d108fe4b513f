#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "anisofield/cli.hpp"

using namespace anisofield;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const char* tag) {
  const fs::path p = fs::temp_directory_path() / (std::string("anisofield_test_") + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const fs::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary);
  out << body;
}

FieldGrid tiny_grid() {
  FieldGrid g;
  g.spec.box.axes = {{0.0, 1.0}};
  g.spec.resolution = {5};
  g.values = {{0, 0}, {0.1, -0.2}, {1e-17, 3.0}, {-4.5, 0}, {2, 2}};
  g.metadata = {{"box", {{0.0, 1.0}}}, {"resolution", {5}}, {"n_terms", 10}};
  return g;
}

nlohmann::json base_config() {
  return {
      {"schema_version", 1},
      {"kernel", {{"type", "harmonizable_os"}, {"E", {{1.0}}}, {"H", 0.5}}},
      {"density", {{"type", "isotropic_mixture"}, {"alpha0", 1.5},
                   {"r0", 3.0}, {"zeta", 0.5}}},
      {"alpha", {{"kind", "constant"}, {"alpha0", 1.5}}},
      {"grid", {{"box", {{0.0, 1.0}}}, {"resolution", {17}}}},
      {"n_terms", 500},
      {"seed", 12},
  };
}

int cli(std::initializer_list<std::string> args) {
  return run_cli(std::vector<std::string>(args));
}

}  // namespace

TEST_CASE("config_hash is canonical and key-order independent") {
  nlohmann::json a{{"x", 1}, {"y", {1, 2, 3}}};
  nlohmann::json b;
  b["y"] = {1, 2, 3};
  b["x"] = 1;
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash_hex(a).size() == 16);
  b["x"] = 2;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("field CSV roundtrip is exact") {
  const auto dir = temp_dir("csv");
  const auto g = tiny_grid();
  const auto path = (dir / "g.csv").string();
  write_field_csv(g, path);
  const auto r = read_field_csv(path);
  CHECK(r.values == g.values);
  CHECK(r.spec.resolution == g.spec.resolution);
  CHECK(r.spec.box.axes == g.spec.box.axes);

  // Byte-identical on rewrite.
  write_field_csv(r, (dir / "g2.csv").string());
  CHECK(slurp(dir / "g.csv") == slurp(dir / "g2.csv"));
}

TEST_CASE("read_field_csv rejects corrupted inputs") {
  const auto dir = temp_dir("corrupt");
  const auto g = tiny_grid();
  const auto path = (dir / "g.csv").string();
  write_field_csv(g, path);
  const std::string good = slurp(path);

  spit(dir / "a.csv", "not a csv\n" + good);
  CHECK_THROWS_AS(read_field_csv((dir / "a.csv").string()), IoError);

  // Drop the last row: row count mismatch.
  spit(dir / "b.csv", good.substr(0, good.rfind("4,")));
  CHECK_THROWS_AS(read_field_csv((dir / "b.csv").string()), IoError);

  // Garble a numeric cell.
  std::string bad = good;
  bad.replace(bad.find("-4.5"), 4, "zzzz");
  spit(dir / "c.csv", bad);
  CHECK_THROWS_AS(read_field_csv((dir / "c.csv").string()), IoError);

  CHECK_THROWS_AS(read_field_csv((dir / "missing.csv").string()), IoError);
}

TEST_CASE("PGM output is deterministic with a valid header") {
  const auto dir = temp_dir("pgm");
  const auto g = tiny_grid();
  write_field_pgm(g, (dir / "a.pgm").string());
  write_field_pgm(g, (dir / "b.pgm").string());
  const std::string a = slurp(dir / "a.pgm");
  CHECK(a == slurp(dir / "b.pgm"));
  CHECK(a.rfind("P5\n", 0) == 0);
  CHECK(a.find("5 1\n255\n") != std::string::npos);
  // 5 payload bytes after the header.
  CHECK(a.size() == a.find("255\n") + 4 + 5);
}

TEST_CASE("write_field emits csv, pgm and sidecar") {
  const auto dir = temp_dir("triple");
  const auto paths = write_field(tiny_grid(), dir.string(), "field");
  CHECK(fs::exists(paths.csv));
  CHECK(fs::exists(paths.pgm));
  CHECK(fs::exists(paths.sidecar));
  const auto sidecar = nlohmann::json::parse(slurp(paths.sidecar));
  CHECK(sidecar.contains("written_at_unix_ms"));
  CHECK(sidecar["n_values"] == 5);
  CHECK(sidecar.contains("config_hash"));
}

TEST_CASE("cli simulate succeeds and is byte-reproducible") {
  const auto dir = temp_dir("sim");
  spit(dir / "cfg.json", base_config().dump());
  const std::string cfg = (dir / "cfg.json").string();

  CHECK(cli({"simulate", "--config", cfg, "--out", (dir / "a").string()}) ==
        kExitPass);
  CHECK(cli({"simulate", "--config", cfg, "--out", (dir / "b").string(),
             "--threads", "8"}) == kExitPass);
  CHECK(slurp(dir / "a" / "field.csv") == slurp(dir / "b" / "field.csv"));
  CHECK(slurp(dir / "a" / "field.pgm") == slurp(dir / "b" / "field.pgm"));

  // A different seed changes the field.
  CHECK(cli({"simulate", "--config", cfg, "--out", (dir / "c").string(),
             "--seed", "99"}) == kExitPass);
  CHECK(slurp(dir / "a" / "field.csv") != slurp(dir / "c" / "field.csv"));
}

TEST_CASE("cli rejects invalid configurations with exit code 2") {
  const auto dir = temp_dir("badcfg");
  const auto out = (dir / "out").string();

  auto write_cfg = [&](const nlohmann::json& j, const char* name) {
    spit(dir / name, j.dump());
    return (dir / name).string();
  };

  auto j = base_config();
  j["kernel"]["H"] = 1.5;  // H >= a1
  CHECK(cli({"simulate", "--config", write_cfg(j, "h.json"), "--out", out}) ==
        kExitBadConfig);

  j = base_config();
  j["kernel"] = {{"type", "riesz_bessel"}, {"E", {{1.0}}},
                 {"beta1", 0.1}, {"beta2", 0.1}, {"alpha_min", 1.5}};
  CHECK(cli({"simulate", "--config", write_cfg(j, "rb.json"), "--out", out}) ==
        kExitBadConfig);  // beta1 + beta2 <= q/2

  j = base_config();
  j["typo_key"] = 1;
  CHECK(cli({"simulate", "--config", write_cfg(j, "k.json"), "--out", out}) ==
        kExitBadConfig);

  j = base_config();
  j["schema_version"] = 2;
  CHECK(cli({"simulate", "--config", write_cfg(j, "v.json"), "--out", out}) ==
        kExitBadConfig);

  j = base_config();
  j["verify"] = {{"pprime", 4.0}};  // 1/4 outside (0, 1/6) for b = 1.5, p = 1
  CHECK(cli({"verify", "--config", write_cfg(j, "r.json"), "--suite", "rate",
             "--out", out}) == kExitBadConfig);

  CHECK(cli({"verify", "--config", write_cfg(base_config(), "s.json"),
             "--suite", "nope", "--out", out}) == kExitBadConfig);

  CHECK(cli({"simulate"}) == kExitBadConfig);  // --config required
}

TEST_CASE("cli i/o failures exit with code 3") {
  const auto dir = temp_dir("io");
  CHECK(cli({"simulate", "--config", (dir / "missing.json").string()}) ==
        kExitIo);

  auto j = base_config();
  spit(dir / "bad.csv", "garbage");
  j["estimate"] = {{"input_csv", (dir / "bad.csv").string()}};
  spit(dir / "cfg.json", j.dump());
  CHECK(cli({"estimate", "--config", (dir / "cfg.json").string(), "--out",
             (dir / "out").string()}) == kExitIo);
}

TEST_CASE("cli fdd suite passes for identical densities") {
  const auto dir = temp_dir("fdd");
  auto j = base_config();
  j["n_terms"] = 200;
  j["density_b"] = j["density"];
  j["verify"] = {{"m", 1000},
                 {"points", {{0.4}, {0.8}}},
                 {"char_args", {{1.0, 0.0}, {0.0, 1.0}}}};
  spit(dir / "cfg.json", j.dump());
  CHECK(cli({"verify", "--config", (dir / "cfg.json").string(), "--suite",
             "fdd", "--out", (dir / "out").string()}) == kExitPass);
  const auto rep = nlohmann::json::parse(slurp(dir / "out" / "verify_fdd.json"));
  CHECK(rep["pass"] == true);
  CHECK(rep["n_cells"] == 4);
}

TEST_CASE("cli estimate reports zero increments on a constant field") {
  const auto dir = temp_dir("est");
  FieldGrid flat = tiny_grid();
  flat.values.assign(flat.values.size(), {1.0, 0.0});
  write_field_csv(flat, (dir / "flat.csv").string());

  auto j = base_config();
  j["estimate"] = {{"input_csv", (dir / "flat.csv").string()}};
  spit(dir / "cfg.json", j.dump());
  CHECK(cli({"estimate", "--config", (dir / "cfg.json").string(), "--out",
             (dir / "out").string()}) == kExitPass);
  const auto rep = nlohmann::json::parse(slurp(dir / "out" / "estimate.json"));
  CHECK(rep["zero_increments"] == true);
}

TEST_CASE("cli estimate recovers the exponent of a planted field") {
  const auto dir = temp_dir("est2");
  // 4096 points: fine modulus buckets hold many lags, so the nominal
  // bucket scale is attainable and the log-log fit is unbiased.
  FieldGrid lin;
  lin.spec.box.axes = {{0.0, 1.0}};
  lin.spec.resolution = {4096};
  lin.values.resize(4096);
  for (int i = 0; i < 4096; ++i)
    lin.values[std::size_t(i)] = {lin.spec.axis_coord(0, i), 0.0};
  lin.metadata = {{"box", {{0.0, 1.0}}}, {"resolution", {4096}}};
  write_field_csv(lin, (dir / "lin.csv").string());

  auto j = base_config();
  j["estimate"] = {{"input_csv", (dir / "lin.csv").string()},
                   {"beta", 1.0}};
  spit(dir / "cfg.json", j.dump());
  CHECK(cli({"estimate", "--config", (dir / "cfg.json").string(), "--out",
             (dir / "out").string()}) == kExitPass);
  const auto rep = nlohmann::json::parse(slurp(dir / "out" / "estimate.json"));
  CHECK(rep["zero_increments"] == false);
  CHECK(std::abs(rep["fit"]["beta_hat"].get<double>() - 1.0) < 0.05);
  CHECK(rep["membership"]["stable"] == true);
  CHECK(std::abs(rep["membership"]["c_sup"].get<double>() - 1.0) < 1e-9);
  CHECK(rep["directional"][0]["beta_hat"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK(fs::exists(dir / "out" / "estimate.csv"));
}

TEST_CASE("ANISOFIELD_OUT provides the default output directory") {
  const auto dir = temp_dir("env");
  spit(dir / "cfg.json", base_config().dump());
  setenv("ANISOFIELD_OUT", (dir / "envout").string().c_str(), 1);
  CHECK(cli({"simulate", "--config", (dir / "cfg.json").string()}) ==
        kExitPass);
  unsetenv("ANISOFIELD_OUT");
  CHECK(fs::exists(dir / "envout" / "field.csv"));
}
