#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "anisofield/field_io.hpp"
#include "anisofield/regularity.hpp"

namespace anisofield {

// Exit codes of the anisofield tool.
inline constexpr int kExitPass = 0;
inline constexpr int kExitStatViolation = 1;
inline constexpr int kExitBadConfig = 2;
inline constexpr int kExitIo = 3;

// Validated run configuration. Construction rejects unknown keys and any
// physically inconsistent parameter combination (alpha range, H < a1,
// Riesz-Bessel conditions) before computation starts.
struct RunConfig {
  nlohmann::json raw;

  Kernel kernel() const;
  SpectralDensity density(const char* key = "density") const;
  AlphaField alpha() const;
  GridSpec grid() const;
  SubGaussianSource source() const;
  std::size_t n_terms() const;
  std::uint64_t seed() const;
  bool apply_d_alpha() const;
  std::string out_stem() const;
  const nlohmann::json& section(const char* key) const;
  bool has(const char* key) const;

  static RunConfig parse(const nlohmann::json& j);
  static RunConfig load(const std::string& path);
};

struct CommandOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;  // default: $ANISOFIELD_OUT or "."
  int threads = 0;
};

int cmd_simulate(const RunConfig& config, const CommandOverrides& ov);
int cmd_verify(const RunConfig& config, const std::string& suite,
               const CommandOverrides& ov);
int cmd_estimate(const RunConfig& config, const CommandOverrides& ov);

// Full CLI: anisofield simulate|verify|estimate --config <path>
//           [--seed S] [--out DIR] [--threads T] [--suite NAME].
// Returns the process exit code.
int run_cli(const std::vector<std::string>& args);

}  // namespace anisofield
