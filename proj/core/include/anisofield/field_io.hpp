#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "anisofield/lepage.hpp"

namespace anisofield {

class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// FNV-1a over the canonical (sorted-key, compact) dump; stable across runs.
std::uint64_t config_hash(const nlohmann::json& config);
std::string config_hash_hex(const nlohmann::json& config);

// CSV: `#`-prefixed metadata header (one line holds the full metadata JSON),
// then one row per grid point: index coordinates, Re, Im. Byte-identical for
// identical grids.
void write_field_csv(const FieldGrid& grid, const std::string& path);
FieldGrid read_field_csv(const std::string& path);

// 8-bit binary PGM of |S|, linear min-max scaling recorded in the header
// comment along with the config hash.
void write_field_pgm(const FieldGrid& grid, const std::string& path);

// Full-metadata JSON sidecar; carries the only timestamp in the output set.
void write_field_sidecar(const FieldGrid& grid, const std::string& path);

struct FieldOutputs {
  std::string csv;
  std::string pgm;
  std::string sidecar;
};

// Writes <stem>.csv/.pgm/.json under dir (created if missing).
FieldOutputs write_field(const FieldGrid& grid, const std::string& dir,
                         const std::string& stem);

}  // namespace anisofield
