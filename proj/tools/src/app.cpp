#include "muskat/cli/app.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "muskat/cli/config.hpp"
#include "muskat/cli/svg_plot.hpp"
#include "muskat/dtn_oracle.hpp"
#include "muskat/elliptic_solve.hpp"
#include "muskat/errors.hpp"
#include "muskat/time_integration.hpp"
#include "muskat/trajectory_io.hpp"

namespace muskat::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kOrderLo = 1.8, kOrderHi = 2.2;
constexpr double kConsistencyTol = 1e-12;

bool in_order_window(double slope) { return slope >= kOrderLo && slope <= kOrderHi; }

void write_json(const fs::path& path, const json& j) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

KeyValues load_key_values(const std::optional<fs::path>& path) {
  return path ? parse_key_values_file(*path) : KeyValues{};
}

Config finish_config(const KeyValues& kv, const std::optional<fs::path>& path, std::optional<std::uint64_t> seed) {
  Config cfg = config_from_key_values(kv);
  if (path) cfg.base_dir = path->parent_path().empty() ? fs::path(".") : path->parent_path();
  if (seed) cfg.solver.rng_seed = *seed;
  cfg.solver.validate();
  return cfg;
}

// Runs one trajectory into dir. Returns an exit code.
int run_single(const Config& cfg, const fs::path& dir, std::ostream& out, std::ostream& err) {
  const auto& s = cfg.solver;
  const SpectralField h0 = project_mean_zero(build_initial_condition(cfg));
  const SmallnessReport small = certify_smallness(h0, s.params, s.rng_seed);
  json meta = {{"command", "simulate"},
               {"config", to_json(cfg)},
               {"params", s.params},
               {"smallness",
                {{"h_a1", small.h_a1}, {"contraction_factor", small.contraction_factor}, {"pass", small.pass}}}};
  TrajectoryWriter writer(dir, std::move(meta));
  Trajectory traj;
  try {
    traj = run(h0, s.params, s.integrator, &writer);
  } catch (const NumericalError& e) {
    writer.update_meta({{"status", "failed"}, {"error", e.what()}});
    err << dir.string() << ": numerical failure: " << e.what() << " (partial output kept)\n";
    return kExitNumerical;
  }
  bool all_pass = true;
  const json checks = trajectory_checks(traj.records, s.params, small.pass, all_pass);
  writer.update_meta({{"status", "completed"},
                      {"steps", traj.final_state.step_count},
                      {"rejected_steps", traj.final_state.rejected_steps},
                      {"final_t", traj.final_state.t},
                      {"final_dt", traj.final_state.dt},
                      {"checks", checks}});
  out << dir.string() << ": " << traj.records.size() << " records, " << traj.final_state.step_count << " steps ("
      << traj.final_state.rejected_steps << " rejected), E " << traj.records.front().energy << " -> "
      << traj.records.back().energy << ", checks " << (all_pass ? "pass" : "FAIL") << '\n';
  return kExitOk;
}

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

SweepAxis parse_sweep(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
    throw ConfigError("--sweep expects KEY=V1,V2,..., got '" + spec + "'");
  }
  SweepAxis axis{spec.substr(0, eq), {}};
  const auto& schema = config_schema();
  if (std::none_of(schema.begin(), schema.end(), [&](const auto& k) { return k.first == axis.key; })) {
    throw ConfigError("--sweep: unknown key '" + axis.key + "'");
  }
  std::stringstream ss(spec.substr(eq + 1));
  std::string v;
  while (std::getline(ss, v, ',')) {
    if (!v.empty()) axis.values.push_back(v);
  }
  if (axis.values.empty()) throw ConfigError("--sweep: no values for '" + axis.key + "'");
  return axis;
}

std::string cell_name(const std::vector<std::pair<std::string, std::string>>& cell) {
  std::string name;
  for (const auto& [k, v] : cell) {
    if (!name.empty()) name += "__";
    name += k + "=" + v;
  }
  std::replace(name.begin(), name.end(), '/', '_');
  return name;
}

int run_sweep(const SimulateOptions& options, const KeyValues& base, const fs::path& root, std::ostream& out,
              std::ostream& err) {
  if (options.sweeps.size() > 2) throw ConfigError("at most two --sweep keys are supported");
  std::vector<SweepAxis> axes;
  for (const auto& s : options.sweeps) axes.push_back(parse_sweep(s));
  if (axes.size() == 2 && axes[0].key == axes[1].key) throw ConfigError("--sweep keys must differ");

  std::vector<std::vector<std::pair<std::string, std::string>>> cells{{}};
  for (const auto& axis : axes) {
    std::vector<std::vector<std::pair<std::string, std::string>>> next;
    for (const auto& cell : cells) {
      for (const auto& v : axis.values) {
        auto c = cell;
        c.emplace_back(axis.key, v);
        next.push_back(std::move(c));
      }
    }
    cells = std::move(next);
  }

  // Every cell is validated before any run starts.
  std::vector<Config> configs;
  for (const auto& cell : cells) {
    KeyValues kv = base;
    for (const auto& [k, v] : cell) kv[k] = {v, 0};
    configs.push_back(finish_config(kv, options.config, options.seed));
  }

  const size_t n = cells.size();
  std::vector<int> codes(n, kExitOk);
  std::vector<std::string> logs(n);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < n; i = next++) {
      std::ostringstream log;
      try {
        codes[i] = run_single(configs[i], root / cell_name(cells[i]), log, log);
      } catch (const std::exception& e) {
        log << cell_name(cells[i]) << ": error: " << e.what() << '\n';
        codes[i] = kExitNumerical;
      }
      logs[i] = log.str();
    }
  };
  const int threads = std::min<int>(worker_count(), static_cast<int>(n));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  json summary = json::array();
  int code = kExitOk;
  for (size_t i = 0; i < n; ++i) {
    (codes[i] == kExitOk ? out : err) << logs[i];
    summary.push_back({{"dir", cell_name(cells[i])}, {"exit_code", codes[i]}});
    code = std::max(code, codes[i]);
  }
  write_json(root / "sweep.json", {{"cells", summary}});
  return code;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

fs::path output_root(const std::optional<fs::path>& out, const Config& cfg) {
  return out ? *out : cfg.solver.output_dir;
}

int verify_bounds(const Config& cfg, const fs::path& dir, std::ostream& out) {
  const auto r = check_operator_bounds(cfg.verify.bounds_samples, cfg.solver.params, cfg.solver.rng_seed,
                                       cfg.verify.bounds_n_modes);
  write_json(dir / "verify_bounds.json", {{"kind", "bounds"}, {"report", r}, {"pass", r.pass}});
  out << "bounds: 1/l0 max " << r.ell0_a0_max << ", w|k|^3/l0 max " << r.ell0_high_max << ", combined "
      << r.ell0_combined_max << ", I_A ratio max " << r.ia_ratio_max << " (<= 2), I ratio sup "
      << r.i_ratio_first_half << " / " << r.i_ratio_second_half << " -> " << (r.pass ? "PASS" : "FAIL") << '\n';
  return r.pass ? kExitOk : kExitNumerical;
}

int verify_dtn(const Config& cfg, const fs::path& dir, std::ostream& out, std::ostream& err) {
  const auto& v = cfg.verify;
  v.strip.validate(v.dtn_modes);
  const auto r = verify_dtn_expansion(v.dtn_h.field(v.dtn_modes), v.dtn_psi.field(v.dtn_modes), v.sigmas, v.strip);
  const bool pass = !r.grid_limited && in_order_window(r.remainder.slope);
  write_json(dir / "verify_dtn.json", {{"kind", "dtn"},
                                       {"strip", {{"n_x", v.strip.n_x}, {"n_z", v.strip.n_z}}},
                                       {"report", r},
                                       {"slope_window", {kOrderLo, kOrderHi}},
                                       {"pass", pass}});
  if (r.grid_limited) {
    const double rmin = r.remainder.points.empty() ? 0.0 : r.remainder.points.back().remainder;
    err << "dtn: grid-limited: discretization error " << r.baseline_error << " is at least 10% of the smallest "
        << "remainder " << rmin << "; refine strip.n_x and strip.n_z\n";
    return kExitNumerical;
  }
  out << "dtn: remainder slope " << r.remainder.slope << " (window [" << kOrderLo << ", " << kOrderHi
      << "]), first-order term error " << r.first_order_error << " -> " << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kExitOk : kExitNumerical;
}

int verify_flux(const Config& cfg, const fs::path& dir, std::ostream& out) {
  const auto& v = cfg.verify;
  int n = 16;
  for (const auto* list : {&v.flux_f, &v.flux_h}) {
    for (auto [k, a] : list->terms) n = std::max(n, k);
  }
  v.flux_strip.validate(n);
  const auto r = verify_lub_flux(v.flux_h.field(n), v.flux_f.field(n), v.deltas, v.flux_strip, v.flux_epsilon);
  const bool pass = in_order_window(r.flux.slope) && in_order_window(r.phi.slope);
  write_json(dir / "verify_flux.json", {{"kind", "flux"},
                                        {"strip", {{"n_x", v.flux_strip.n_x}, {"n_z", v.flux_strip.n_z}}},
                                        {"report", r},
                                        {"slope_window", {kOrderLo, kOrderHi}},
                                        {"pass", pass}});
  out << "flux: remainder slope " << r.flux.slope << ", phi slope " << r.phi.slope << " -> "
      << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kExitOk : kExitNumerical;
}

int verify_decay_files(const fs::path& traj, const fs::path& dir, std::ostream& out) {
  const auto data = load_trajectory(traj);
  const bool small = data.meta.value("smallness", json::object()).value("pass", false);
  bool all_pass = true;
  const json checks = trajectory_checks(data.records, data.params, small, all_pass);
  write_json(dir / "verify_decay.json",
             {{"kind", "decay"}, {"trajectory", traj.string()}, {"checks", checks}, {"pass", all_pass}});
  out << "decay: " << data.records.size() << " records, monotone "
      << (checks["energy_monotone"]["pass"].get<bool>() ? "yes" : "no") << ", exponential fit "
      << checks["exponential_decay"]["status"].get<std::string>() << " -> " << (all_pass ? "PASS" : "FAIL") << '\n';
  return all_pass ? kExitOk : kExitNumerical;
}

ChartOptions chart(std::string title, std::string y_label, bool log_y, std::string x_label = "t",
                   std::string annotation = {}) {
  return {std::move(title), std::move(x_label), std::move(y_label), log_y, std::move(annotation)};
}

std::vector<double> column(const std::vector<EnergyRecord>& recs, auto get) {
  std::vector<double> out;
  for (const auto& r : recs) out.push_back(get(r));
  return out;
}

}  // namespace

int worker_count() {
  if (const char* env = std::getenv("MUSKAT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

json trajectory_checks(const std::vector<EnergyRecord>& records, const ModelParams& p, bool small_data,
                       bool& all_pass) {
  all_pass = true;
  const bool asserted = p.chi == 1.0 && small_data;
  const std::string why_not = p.chi != 1.0 ? "chi = -1: no decay is claimed"
                                           : "initial profile not certified small";
  json checks;

  json mono = check_monotone_decay(records);
  mono["asserted"] = asserted;
  if (!asserted) mono["reason"] = why_not;
  if (asserted && !mono["pass"].get<bool>()) all_pass = false;
  checks["energy_monotone"] = mono;

  const double consistency = energy_consistency(records, p);
  const bool consistent = consistency <= kConsistencyTol;
  checks["energy_consistency"] = {{"max_error", consistency}, {"tolerance", kConsistencyTol}, {"pass", consistent}};
  if (!consistent) all_pass = false;

  if (records.size() >= 20) {
    const auto fit = check_exponential_decay(records, p);
    json j = fit;
    const bool fit_asserted = small_data && (fit.status == DecayStatus::Pass || fit.status == DecayStatus::Fail);
    j["asserted"] = fit_asserted;
    if (fit_asserted && fit.status == DecayStatus::Fail) all_pass = false;
    checks["exponential_decay"] = j;
  } else {
    checks["exponential_decay"] = {{"status", "insufficient records"}, {"records", records.size()}, {"asserted", false}};
  }

  if (p.model != ModelKind::Lubrication && p.lambda == 0.0) {
    json d = check_dyadic_trend(records);
    d["asserted"] = asserted;
    if (asserted && !d["pass"].get<bool>()) all_pass = false;
    checks["dyadic_trend"] = d;
  }
  return checks;
}

int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const KeyValues kv = load_key_values(options.config);
    const Config cfg = finish_config(kv, options.config, options.seed);
    const fs::path root = output_root(options.out, cfg);
    if (!options.sweeps.empty()) return run_sweep(options, kv, root, out, err);
    return run_single(cfg, root, out, err);
  });
}

int cmd_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (options.kind == "decay" && options.trajectory) {
      return verify_decay_files(*options.trajectory, options.out.value_or(*options.trajectory), out);
    }
    const Config cfg = finish_config(load_key_values(options.config), options.config, options.seed);
    const fs::path dir = output_root(options.out, cfg);
    if (options.kind == "bounds") return verify_bounds(cfg, dir, out);
    if (options.kind == "dtn") return verify_dtn(cfg, dir, out, err);
    if (options.kind == "flux") return verify_flux(cfg, dir, out);
    if (options.kind == "decay") {
      const int code = run_single(cfg, dir, out, err);
      return code != kExitOk ? code : verify_decay_files(dir, dir, out);
    }
    err << "unknown verification '" << options.kind << "' (expected dtn|flux|bounds|decay)\n";
    return kExitUsage;
  });
}

int cmd_plot(const PlotOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto data = load_trajectory(options.dir);
    const auto& recs = data.records;
    if (recs.empty()) throw std::runtime_error("energy.csv holds no records");
    const fs::path plots = options.dir / "plots";
    fs::create_directories(plots);
    const auto t = column(recs, [](const EnergyRecord& r) { return r.t; });

    std::vector<Series> norms;
    for (int s = 0; s < 6; ++s) {
      norms.push_back({"A" + std::to_string(s), t, column(recs, [s](const EnergyRecord& r) { return r.norms[s]; })});
    }
    write_text(plots / "norms.svg",
               render_line_chart(norms, chart("Wiener norms of h", "norm", options.log_scale)));
    write_text(plots / "energy.svg",
               render_line_chart({{"E", t, column(recs, [](const EnergyRecord& r) { return r.energy; })}},
                                 chart("Energy", "E", options.log_scale)));

    std::string note = "fewer than 20 records: no decay fit";
    if (recs.size() >= 20) {
      const auto fit = check_exponential_decay(recs, data.params);
      std::ostringstream ss;
      ss << "fitted decay rate " << fit.rate << ", bound " << fit.threshold << " (" << to_string(fit.status) << ")";
      note = ss.str();
    }
    write_text(plots / "a0_log.svg",
               render_line_chart({{"A0", t, column(recs, [](const EnergyRecord& r) { return r.norms[0]; })}},
                                 chart("A0 norm of h", "A0", true, "t", note)));

    // At most eight evenly spaced profiles, always including the last.
    std::vector<Series> profiles;
    const size_t ns = data.snapshots.size();
    const size_t stride = std::max<size_t>(1, (ns + 7) / 8);
    for (size_t i = 0; i < ns; ++i) {
      if (i % stride != 0 && i + 1 != ns) continue;
      const auto h = load_snapshot(options.dir, data.snapshots[i]);
      const int m = std::max(256, 4 * h.n_modes());
      Series s{"t = " + std::to_string(data.snapshots[i].t), {}, h.to_grid(m)};
      for (int j = 0; j < m; ++j) s.x.push_back(2.0 * std::numbers::pi * j / m);
      profiles.push_back(std::move(s));
    }
    write_text(plots / "profiles.svg",
               render_line_chart(profiles, chart("Interface profiles", "h", false, "x")));
    out << "wrote " << plots.string() << "/{norms,energy,a0_log,profiles}.svg\n";
    return kExitOk;
  });
}

}  // namespace muskat::cli
