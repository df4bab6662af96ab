#include "muskat/trajectory_io.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "csv_util.hpp"
#include "muskat/spectrum_io.hpp"

namespace muskat {
namespace {

constexpr std::string_view kEnergyHeader = "t,a0,a1,a2,a3,a4,a5,energy,dth_a0,dth_high,iters";
constexpr int kEnergyColumns = 11;

std::string snapshot_name(int index) { return "snapshots/t_" + std::to_string(index) + ".csv"; }

}  // namespace

std::string_view library_version() { return MUSKAT_VERSION; }

void to_json(nlohmann::json& j, const ModelParams& p) {
  j = {{"model", std::string(to_string(p.model))},
       {"depth", std::string(to_string(p.depth))},
       {"chi", p.chi},
       {"lambda", p.lambda},
       {"theta", p.theta},
       {"sigma", p.sigma},
       {"delta", p.delta},
       {"epsilon", p.epsilon}};
}

void from_json(const nlohmann::json& j, ModelParams& p) {
  if (j.contains("model")) p.model = parse_model(j.at("model").get<std::string>());
  if (j.contains("depth")) p.depth = parse_depth(j.at("depth").get<std::string>());
  p.chi = j.value("chi", p.chi);
  p.lambda = j.value("lambda", p.lambda);
  p.theta = j.value("theta", p.theta);
  p.delta = j.value("delta", p.delta);
  p.epsilon = j.value("epsilon", p.epsilon);
  if (j.contains("sigma")) {
    p.sigma = j.at("sigma").get<double>();
  } else if (p.model == ModelKind::Lubrication) {
    p.sigma = p.epsilon * std::sqrt(p.delta);
  }
}

void write_energy_header(std::ostream& out) { out << kEnergyHeader << '\n'; }

void write_energy_row(std::ostream& out, const EnergyRecord& r) {
  out << detail::format_double(r.t);
  for (double n : r.norms) out << ',' << detail::format_double(n);
  out << ',' << detail::format_double(r.energy) << ',' << detail::format_double(r.dth_a0) << ','
      << detail::format_double(r.dth_high) << ',' << r.iters << '\n';
}

std::vector<EnergyRecord> read_energy_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != kEnergyHeader) {
    throw std::runtime_error("energy.csv: row 1: expected header '" + std::string(kEnergyHeader) + "'");
  }
  std::vector<EnergyRecord> out;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_csv_row(line);
    if (static_cast<int>(cells.size()) != kEnergyColumns) {
      throw std::runtime_error("energy.csv: row " + std::to_string(row) + ": expected 11 columns, got " +
                               std::to_string(cells.size()));
    }
    EnergyRecord r;
    r.t = detail::parse_double(cells[0], row, 1);
    for (int s = 0; s < 6; ++s) r.norms[s] = detail::parse_double(cells[1 + s], row, 2 + s);
    r.energy = detail::parse_double(cells[7], row, 8);
    r.dth_a0 = detail::parse_double(cells[8], row, 9);
    r.dth_high = detail::parse_double(cells[9], row, 10);
    const double iters = detail::parse_double(cells[10], row, 11);
    if (iters != std::floor(iters) || iters < 0) {
      throw std::runtime_error("energy.csv: row " + std::to_string(row) + ", column 11: iters must be a "
                               "nonnegative integer");
    }
    r.iters = static_cast<int>(iters);
    for (int c = 0; c < 10; ++c) {
      const double v = c == 0 ? r.t : c < 7 ? r.norms[c - 1] : c == 7 ? r.energy : c == 8 ? r.dth_a0 : r.dth_high;
      if (!std::isfinite(v)) {
        throw std::runtime_error("energy.csv: row " + std::to_string(row) + ", column " + std::to_string(c + 1) +
                                 ": non-finite value");
      }
    }
    out.push_back(r);
  }
  return out;
}

std::vector<EnergyRecord> read_energy_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_energy_csv(in);
}

TrajectoryWriter::TrajectoryWriter(std::filesystem::path dir, nlohmann::json meta)
    : dir_(std::move(dir)), meta_(std::move(meta)) {
  std::filesystem::create_directories(dir_ / "snapshots");
  meta_["code_version"] = std::string(library_version());
  meta_["snapshots"] = nlohmann::json::array();
  if (!meta_.contains("status")) meta_["status"] = "running";
  energy_.open(dir_ / "energy.csv", std::ios::binary | std::ios::trunc);
  if (!energy_) throw std::runtime_error("cannot open " + (dir_ / "energy.csv").string() + " for writing");
  write_energy_header(energy_);
  write_meta();
}

void TrajectoryWriter::on_record(const EnergyRecord& record) {
  write_energy_row(energy_, record);
  energy_.flush();
}

void TrajectoryWriter::on_snapshot(int index, double t, const SpectralField& h) {
  const auto name = snapshot_name(index);
  write_spectrum(dir_ / name, h);
  meta_["snapshots"].push_back({{"index", index}, {"t", t}, {"file", name}});
  write_meta();
}

void TrajectoryWriter::update_meta(const nlohmann::json& patch) {
  meta_.merge_patch(patch);
  write_meta();
}

void TrajectoryWriter::write_meta() const {
  std::ofstream out(dir_ / "meta.json", std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + (dir_ / "meta.json").string());
  out << meta_.dump(2) << '\n';
}

TrajectoryData load_trajectory(const std::filesystem::path& dir) {
  TrajectoryData data;
  std::ifstream in(dir / "meta.json", std::ios::binary);
  if (!in) throw std::runtime_error("missing " + (dir / "meta.json").string());
  try {
    data.meta = nlohmann::json::parse(in);
    data.params = data.meta.at("params").get<ModelParams>();
    for (const auto& s : data.meta.value("snapshots", nlohmann::json::array())) {
      data.snapshots.push_back({s.at("index").get<int>(), s.at("t").get<double>(), s.at("file").get<std::string>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("meta.json: " + std::string(e.what()));
  }
  data.records = read_energy_csv(dir / "energy.csv");
  return data;
}

SpectralField load_snapshot(const std::filesystem::path& dir, const SnapshotEntry& entry) {
  return read_spectrum(dir / entry.file);
}

}  // namespace muskat
