#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "muskat/energy.hpp"
#include "muskat/params.hpp"
#include "muskat/time_integration.hpp"

namespace muskat {

std::string_view library_version();

void to_json(nlohmann::json& j, const ModelParams& p);
/// Missing keys keep their defaults; lubrication sigma is derived when absent.
void from_json(const nlohmann::json& j, ModelParams& p);

// energy.csv: header t,a0,a1,a2,a3,a4,a5,energy,dth_a0,dth_high,iters and one
// row per record, 17 significant digits.
void write_energy_header(std::ostream& out);
void write_energy_row(std::ostream& out, const EnergyRecord& r);
/// Throws std::runtime_error naming row and column on malformed input.
std::vector<EnergyRecord> read_energy_csv(std::istream& in);
std::vector<EnergyRecord> read_energy_csv(const std::filesystem::path& path);

struct SnapshotEntry {
  int index = 0;
  double t = 0.0;
  std::string file;  ///< relative to the trajectory directory
};

/// Streams a run into a trajectory directory:
///   meta.json, energy.csv, snapshots/t_<index>.csv.
/// Rows are flushed as they arrive and meta.json is rewritten at every
/// snapshot, so a failed run leaves readable partial output.
class TrajectoryWriter : public RunSink {
 public:
  TrajectoryWriter(std::filesystem::path dir, nlohmann::json meta);

  void on_record(const EnergyRecord& record) override;
  void on_snapshot(int index, double t, const SpectralField& h) override;

  /// Merges fields into meta.json (e.g. status, checks) and rewrites it.
  void update_meta(const nlohmann::json& patch);

  const std::filesystem::path& dir() const { return dir_; }
  const nlohmann::json& meta() const { return meta_; }

 private:
  void write_meta() const;

  std::filesystem::path dir_;
  nlohmann::json meta_;
  std::ofstream energy_;
};

struct TrajectoryData {
  nlohmann::json meta;
  ModelParams params;
  std::vector<EnergyRecord> records;
  std::vector<SnapshotEntry> snapshots;
};

/// Reads meta.json and energy.csv; snapshot spectra are loaded on demand.
TrajectoryData load_trajectory(const std::filesystem::path& dir);
SpectralField load_snapshot(const std::filesystem::path& dir, const SnapshotEntry& entry);

}  // namespace muskat
