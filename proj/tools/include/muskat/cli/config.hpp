#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "muskat/dtn_oracle.hpp"
#include "muskat/params.hpp"
#include "muskat/spectral_field.hpp"
#include "muskat/time_integration.hpp"

namespace muskat::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConfigValue {
  std::string text;
  int line = 0;  ///< 0 for values set on the command line
};

/// Flat key = value text. `[section]` prefixes following keys with
/// `section.`; `#` starts a comment; later keys override earlier ones.
using KeyValues = std::map<std::string, ConfigValue>;
KeyValues parse_key_values(std::istream& in, const std::string& source = "config");
KeyValues parse_key_values_file(const std::filesystem::path& path);

enum class InitialKind { SingleMode, RandomDecay, FromFile };

struct InitialCondition {
  InitialKind kind = InitialKind::SingleMode;
  int k = 1;
  double amplitude = 1e-3;
  double p = 3.0;                     ///< random_decay spectral decay
  std::optional<std::uint64_t> seed;  ///< random_decay seed, defaults to rng_seed
  std::filesystem::path path;         ///< from_file spectrum, relative to the config
};

struct SolverConfig {
  ModelParams params;
  int n_modes = 64;
  IntegratorSettings integrator;
  bool auto_dt = false;  ///< dt = suggest_dt(n_modes, params, scheme)
  std::uint64_t rng_seed = 12345;
  std::filesystem::path output_dir = "run";
  InitialCondition initial;

  /// n_modes a power of two >= 32, dt > 0, t_end >= 0, cadences >= 1 (0
  /// allowed for snapshots), max_iter >= 1, and params.validate().
  void validate() const;
};

/// Sum of a_k cos(k x) written as `k:a, k:a`; empty means zero.
struct ModeList {
  std::vector<std::pair<int, double>> terms;
  SpectralField field(int n_modes) const;
};

struct VerifyConfig {
  StripGrid strip{512, 256};
  ModeList dtn_h{{{1, 1.0}}};
  ModeList dtn_psi{{{2, 1.0}}};
  std::vector<double> sigmas{0.2, 0.1, 0.05};
  int dtn_modes = 16;
  ModeList flux_f{{{1, 1.0}}};
  ModeList flux_h;
  std::vector<double> deltas{0.04, 0.02, 0.01};
  double flux_epsilon = 0.1;
  StripGrid flux_strip{256, 65};
  int bounds_samples = 500;
  int bounds_n_modes = 64;
};

struct Config {
  SolverConfig solver;
  VerifyConfig verify;
  std::filesystem::path base_dir = ".";  ///< directory of the config file
};

/// Throws ConfigError (with line numbers) on unknown keys or bad values.
Config config_from_key_values(const KeyValues& kv);
Config load_config(const std::filesystem::path& path);

SpectralField build_initial_condition(const Config& cfg);

nlohmann::json to_json(const Config& cfg);

/// Every recognised key with a one-line description, for --help and the README.
const std::vector<std::pair<std::string, std::string>>& config_schema();

}  // namespace muskat::cli
