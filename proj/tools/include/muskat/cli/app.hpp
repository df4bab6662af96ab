#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "muskat/diagnostics.hpp"
#include "muskat/energy.hpp"
#include "muskat/params.hpp"

namespace muskat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

struct SimulateOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> out;
  std::vector<std::string> sweeps;  ///< KEY=V1,V2,... (at most two)
  std::optional<std::uint64_t> seed;
};

/// Runs one trajectory, or the cross product of the sweep values with one
/// directory per cell. 0 on completion, 1 on usage/config errors, 2 when any
/// run hit a numerical failure (partial output is kept).
int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err);

struct VerifyOptions {
  std::string kind;  ///< dtn | flux | bounds | decay
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> trajectory;  ///< decay: re-check an existing run
};

/// Writes verify_<kind>.json; 0 iff every asserted check passes, 2 on a
/// failed check, a numerical failure or a grid-limited DtN study.
int cmd_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err);

struct PlotOptions {
  std::filesystem::path dir;
  bool log_scale = false;
};

/// Writes plots/{norms,energy,a0_log,profiles}.svg into the trajectory.
int cmd_plot(const PlotOptions& options, std::ostream& out, std::ostream& err);

/// Verdicts stored under `checks` in meta.json. Decay assertions require
/// chi = +1 and a certified small initial profile; `all_pass` covers only
/// asserted checks.
nlohmann::json trajectory_checks(const std::vector<EnergyRecord>& records, const ModelParams& p,
                                 bool small_data, bool& all_pass);

/// Worker count for sweeps: MUSKAT_THREADS if set and positive, else the
/// hardware concurrency.
int worker_count();

}  // namespace muskat::cli
