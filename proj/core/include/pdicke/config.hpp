// config.hpp - run configuration: a flat "key = value [unit]" text format.
//
// Grammar (one entry per line):
//   # comment                 blank lines and '#' comments are ignored
//   [section]                 prefixes following keys with "section."
//   key = value [unit]        value: number, product such as 2*pi*1e8,
//                             bare word, or comma-separated list
// Keys are case-sensitive. Unknown keys, malformed values and unit suffixes
// that do not match the key's unit are errors naming the key and line.
// See docs/config.md for the key table.

#pragma once

#include "pdicke/dicke_ladder.hpp"
#include "pdicke/dynamics.hpp"
#include "pdicke/fidelity.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pdicke {

enum class Experiment { kEmission, kPotential, kFidelityMap, kScaling };

const char* to_string(Experiment e);
std::optional<Experiment> parse_experiment(std::string_view name);

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, int line, const std::string& message);

  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }  // 0 when not tied to a line
  const std::string& message() const noexcept { return message_; }

 private:
  std::string key_;
  int line_;
  std::string message_;
};

struct ScalingOptions {
  std::vector<int> atom_counts{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  int min_fit_atoms = 10;
};

struct MapOptions {
  GridSpec grid;
  double corridor_lo = 0.95;
  double corridor_hi = 1.05;
};

struct RunConfig {
  Experiment experiment = Experiment::kEmission;
  int n_atoms = 50;
  double omega_a = 2.37e15;           // rad/s
  double dipole_magnitude = 2.53e-29;  // C m
  Eigen::Vector3d polarization{0.0, 0.0, 1.0};
  Position3 position{0.0, 0.0, 1e-7};
  Environment environment = Environment::kPerfectMirror;
  std::optional<DriveConfig> drive;
  SolverOptions solver;
  std::optional<double> t_max;  // s; defaults to 10 / (N F_P Gamma0)
  ScalingOptions scaling;
  MapOptions map;
  std::string output_directory = "out";

  EnsembleConfig ensemble() const;
  EnsembleConfig ensemble(int n_atoms_override) const;
};

/// Raw `key -> (value, line)` entries of a document in the config grammar.
struct KeyValueEntry {
  std::string value;
  int line = 0;
};
std::map<std::string, KeyValueEntry> parse_key_values(std::string_view text);

/// Parse and validate. `fallback` supplies the experiment when the document
/// has no `experiment` key (the CLI subcommand); a document that names a
/// different experiment than the fallback is rejected.
RunConfig parse_config(std::string_view text,
                       std::optional<Experiment> fallback = std::nullopt);

/// Canonical text form; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const RunConfig& cfg);

/// Shortest decimal string that reads back to the same double.
std::string format_roundtrip(double value);

}  // namespace pdicke
