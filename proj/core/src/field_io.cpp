#include "anisofield/field_io.hpp"

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace anisofield {

namespace {

constexpr const char* kCsvMagic = "# anisofield field grid v1";

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hash_of(const FieldGrid& grid) {
  if (grid.metadata.contains("config_hash"))
    return grid.metadata["config_hash"].get<std::string>();
  return config_hash_hex(grid.metadata);
}

}  // namespace

std::uint64_t config_hash(const nlohmann::json& config) {
  const std::string dump = config.dump();  // object keys already sorted
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string config_hash_hex(const nlohmann::json& config) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, config_hash(config));
  return buf;
}

void write_field_csv(const FieldGrid& grid, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  const int d = grid.spec.dim();

  out << kCsvMagic << "\n";
  out << "# config_hash: " << hash_of(grid) << "\n";
  out << "# metadata: " << grid.metadata.dump() << "\n";
  for (int i = 0; i < d; ++i) out << "i" << i << ",";
  out << "re,im\n";

  std::vector<long long> mi(std::size_t(d), 0);
  for (std::size_t f = 0; f < grid.values.size(); ++f) {
    std::size_t rem = f;
    for (int i = d - 1; i >= 0; --i) {
      const std::size_t r = std::size_t(grid.spec.resolution[std::size_t(i)]);
      mi[std::size_t(i)] = (long long)(rem % r);
      rem /= r;
    }
    for (int i = 0; i < d; ++i) out << mi[std::size_t(i)] << ",";
    out << fmt_double(grid.values[f].real()) << ","
        << fmt_double(grid.values[f].imag()) << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

FieldGrid read_field_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line) || line != kCsvMagic)
    throw IoError("not a field grid CSV: " + path);

  FieldGrid grid;
  bool have_meta = false;
  while (std::getline(in, line)) {
    if (line.rfind("# metadata: ", 0) == 0) {
      const auto parsed =
          nlohmann::json::parse(line.substr(12), nullptr, false);
      if (parsed.is_discarded())
        throw IoError("corrupt metadata in: " + path);
      grid.metadata = parsed;
      have_meta = true;
      continue;
    }
    if (!line.empty() && line[0] == '#') continue;
    break;  // column header line
  }
  if (!have_meta || !grid.metadata.contains("resolution") ||
      !grid.metadata.contains("box"))
    throw IoError("missing grid metadata in: " + path);

  try {
    grid.spec.resolution = grid.metadata["resolution"].get<std::vector<int>>();
    for (const auto& ax : grid.metadata["box"])
      grid.spec.box.axes.emplace_back(ax[0].get<double>(),
                                      ax[1].get<double>());
  } catch (const nlohmann::json::exception&) {
    throw IoError("malformed grid metadata in: " + path);
  }
  const int d = grid.spec.dim();
  if (grid.spec.box.dim() != d || d < 1)
    throw IoError("inconsistent grid metadata in: " + path);

  const std::size_t expected = grid.spec.size();
  grid.values.reserve(expected);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    double re = 0.0, im = 0.0;
    for (int i = 0; i < d + 2; ++i) {
      if (!std::getline(row, cell, ','))
        throw IoError("short row in: " + path);
      if (i >= d) {
        std::size_t pos = 0;
        double v;
        try {
          v = std::stod(cell, &pos);
        } catch (const std::exception&) {
          throw IoError("bad numeric cell in: " + path);
        }
        if (pos != cell.size()) throw IoError("bad numeric cell in: " + path);
        (i == d ? re : im) = v;
      }
    }
    grid.values.emplace_back(re, im);
  }
  if (grid.values.size() != expected)
    throw IoError("row count mismatch in: " + path);
  return grid;
}

void write_field_pgm(const FieldGrid& grid, const std::string& path) {
  const int d = grid.spec.dim();
  const int width = grid.spec.resolution[std::size_t(d - 1)];
  const std::size_t height = grid.values.size() / std::size_t(width);

  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& v : grid.values) {
    const double a = std::abs(v);
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  const double span = hi - lo;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "P5\n"
      << "# config_hash: " << hash_of(grid) << "\n"
      << "# linear |S| scaling: min=" << fmt_double(lo)
      << " max=" << fmt_double(hi) << "\n"
      << width << " " << height << "\n255\n";
  for (const auto& v : grid.values) {
    const double a = std::abs(v);
    const int g = span > 0.0 ? int(std::lround(255.0 * (a - lo) / span)) : 0;
    out.put(char(std::clamp(g, 0, 255)));
  }
  if (!out) throw IoError("write failed: " + path);
}

void write_field_sidecar(const FieldGrid& grid, const std::string& path) {
  nlohmann::json j = grid.metadata;
  j["config_hash"] = hash_of(grid);
  j["n_values"] = grid.values.size();
  // The sole timestamp in the output set; checksum comparisons exclude the
  // sidecar for this reason.
  j["written_at_unix_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::system_clock::now().time_since_epoch())
          .count();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

FieldOutputs write_field(const FieldGrid& grid, const std::string& dir,
                         const std::string& stem) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory: " + dir);
  FieldOutputs paths;
  paths.csv = (std::filesystem::path(dir) / (stem + ".csv")).string();
  paths.pgm = (std::filesystem::path(dir) / (stem + ".pgm")).string();
  paths.sidecar = (std::filesystem::path(dir) / (stem + ".json")).string();
  write_field_csv(grid, paths.csv);
  write_field_pgm(grid, paths.pgm);
  write_field_sidecar(grid, paths.sidecar);
  return paths;
}

}  // namespace anisofield
