#include "muskat/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "muskat/spectrum_io.hpp"
#include "muskat/trajectory_io.hpp"

namespace muskat::cli {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string where(const std::string& key, const ConfigValue& v) {
  return v.line > 0 ? "line " + std::to_string(v.line) + ": " + key : key;
}

[[noreturn]] void fail(const std::string& key, const ConfigValue& v, const std::string& why) {
  throw ConfigError(where(key, v) + ": " + why);
}

double to_double(const std::string& key, const ConfigValue& v) {
  const char* b = v.text.c_str();
  char* e = nullptr;
  const double x = std::strtod(b, &e);
  if (v.text.empty() || e != b + v.text.size() || !std::isfinite(x)) fail(key, v, "expected a number, got '" + v.text + "'");
  return x;
}

long long to_integer(const std::string& key, const ConfigValue& v) {
  const char* b = v.text.c_str();
  char* e = nullptr;
  const long long x = std::strtoll(b, &e, 10);
  if (v.text.empty() || e != b + v.text.size()) fail(key, v, "expected an integer, got '" + v.text + "'");
  return x;
}

int to_int(const std::string& key, const ConfigValue& v) {
  const long long x = to_integer(key, v);
  if (x < -2147483647LL || x > 2147483647LL) fail(key, v, "integer out of range");
  return static_cast<int>(x);
}

std::uint64_t to_seed(const std::string& key, const ConfigValue& v) {
  const long long x = to_integer(key, v);
  if (x < 0) fail(key, v, "seed must be nonnegative");
  return static_cast<std::uint64_t>(x);
}

std::vector<double> to_list(const std::string& key, const ConfigValue& v) {
  std::vector<double> out;
  std::stringstream ss(v.text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, {trim(item), v.line}));
  if (out.empty()) fail(key, v, "expected a comma-separated list of numbers");
  return out;
}

ModeList to_modes(const std::string& key, const ConfigValue& v) {
  ModeList m;
  std::stringstream ss(v.text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) fail(key, v, "expected k:amplitude pairs, got '" + item + "'");
    const int k = to_int(key, {trim(item.substr(0, colon)), v.line});
    if (k < 1) fail(key, v, "mode numbers must be >= 1");
    m.terms.emplace_back(k, to_double(key, {trim(item.substr(colon + 1)), v.line}));
  }
  return m;
}

using Setter = std::function<void(Config&, const std::string&, const ConfigValue&)>;

struct Key {
  std::string name;
  std::string help;
  Setter set;
};

template <class Get>
Setter real(Get get) {
  return [get](Config& c, const std::string& k, const ConfigValue& v) { get(c) = to_double(k, v); };
}

template <class Get>
Setter integer(Get get) {
  return [get](Config& c, const std::string& k, const ConfigValue& v) { get(c) = to_int(k, v); };
}

template <class Get>
Setter modes(Get get) {
  return [get](Config& c, const std::string& k, const ConfigValue& v) { get(c) = to_modes(k, v); };
}

template <class Get>
Setter list(Get get) {
  return [get](Config& c, const std::string& k, const ConfigValue& v) { get(c) = to_list(k, v); };
}

template <class F>
Setter parsed(F parse) {
  return [parse](Config& c, const std::string& k, const ConfigValue& v) {
    try {
      parse(c, v.text);
    } catch (const std::invalid_argument& e) {
      fail(k, v, e.what());
    }
  };
}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      {"model", "wnl1 | wnl2 | lubrication",
       parsed([](Config& c, const std::string& s) { c.solver.params.model = parse_model(s); })},
      {"depth", "finite | infinite (WNL models)",
       parsed([](Config& c, const std::string& s) { c.solver.params.depth = parse_depth(s); })},
      {"params.chi", "+1 stable, -1 unstable", real([](Config& c) -> double& { return c.solver.params.chi; })},
      {"params.lambda", "bending coefficient >= 0", real([](Config& c) -> double& { return c.solver.params.lambda; })},
      {"params.theta", "dissipation coefficient > 0", real([](Config& c) -> double& { return c.solver.params.theta; })},
      {"params.sigma", "steepness; derived as epsilon*sqrt(delta) for lubrication when omitted",
       real([](Config& c) -> double& { return c.solver.params.sigma; })},
      {"params.delta", "aspect ratio > 0", real([](Config& c) -> double& { return c.solver.params.delta; })},
      {"params.epsilon", "amplitude ratio >= 0", real([](Config& c) -> double& { return c.solver.params.epsilon; })},
      {"grid.n_modes", "Fourier modes N, a power of two >= 32",
       integer([](Config& c) -> int& { return c.solver.n_modes; })},
      {"time.dt", "maximal step > 0, or auto for 0.8 of the linear stability limit",
       [](Config& c, const std::string& k, const ConfigValue& v) {
         c.solver.auto_dt = v.text == "auto";
         if (!c.solver.auto_dt) c.solver.integrator.dt = to_double(k, v);
       }},
      {"time.t_end", "final time >= 0", real([](Config& c) -> double& { return c.solver.integrator.t_end; })},
      {"time.scheme", "rk4 | euler",
       parsed([](Config& c, const std::string& s) { c.solver.integrator.scheme = parse_scheme(s); })},
      {"time.output_cadence", "energy record every this many accepted steps",
       integer([](Config& c) -> int& { return c.solver.integrator.output_cadence; })},
      {"time.snapshot_cadence", "spectrum snapshot every this many records, 0 = first and last",
       integer([](Config& c) -> int& { return c.solver.integrator.snapshot_cadence; })},
      {"solver.tol", "fixed-point tolerance, <= 0 for 1e-11 max(1, |F|_A0)",
       real([](Config& c) -> double& { return c.solver.integrator.tol; })},
      {"solver.max_iter", "fixed-point iteration cap", integer([](Config& c) -> int& { return c.solver.integrator.max_iter; })},
      {"rng_seed", "seed for random initial data and bound checks",
       [](Config& c, const std::string& k, const ConfigValue& v) { c.solver.rng_seed = to_seed(k, v); }},
      {"output_dir", "trajectory directory (relative to the working directory)",
       [](Config& c, const std::string&, const ConfigValue& v) { c.solver.output_dir = v.text; }},
      {"initial.type", "single_mode | random_decay | from_file",
       [](Config& c, const std::string& k, const ConfigValue& v) {
         if (v.text == "single_mode") {
           c.solver.initial.kind = InitialKind::SingleMode;
         } else if (v.text == "random_decay") {
           c.solver.initial.kind = InitialKind::RandomDecay;
         } else if (v.text == "from_file") {
           c.solver.initial.kind = InitialKind::FromFile;
         } else {
           fail(k, v, "expected single_mode | random_decay | from_file");
         }
       }},
      {"initial.k", "single_mode wavenumber >= 1", integer([](Config& c) -> int& { return c.solver.initial.k; })},
      {"initial.amplitude", "single_mode amplitude of cos(kx); random_decay A1 norm",
       real([](Config& c) -> double& { return c.solver.initial.amplitude; })},
      {"initial.p", "random_decay spectral decay exponent", real([](Config& c) -> double& { return c.solver.initial.p; })},
      {"initial.seed", "random_decay seed (defaults to rng_seed)",
       [](Config& c, const std::string& k, const ConfigValue& v) { c.solver.initial.seed = to_seed(k, v); }},
      {"initial.path", "from_file spectrum CSV (k,re,im), relative to the config file",
       [](Config& c, const std::string&, const ConfigValue& v) { c.solver.initial.path = v.text; }},
      {"strip.n_x", "DtN strip points in x", integer([](Config& c) -> int& { return c.verify.strip.n_x; })},
      {"strip.n_z", "DtN strip points in z", integer([](Config& c) -> int& { return c.verify.strip.n_z; })},
      {"dtn.h", "interface profile as k:a pairs (sum a cos kx)", modes([](Config& c) -> ModeList& { return c.verify.dtn_h; })},
      {"dtn.psi", "Dirichlet datum as k:a pairs", modes([](Config& c) -> ModeList& { return c.verify.dtn_psi; })},
      {"dtn.sigmas", "decreasing sigma values", list([](Config& c) -> std::vector<double>& { return c.verify.sigmas; })},
      {"dtn.n_modes", "spectral modes of h and psi", integer([](Config& c) -> int& { return c.verify.dtn_modes; })},
      {"flux.f", "boundary datum as k:a pairs", modes([](Config& c) -> ModeList& { return c.verify.flux_f; })},
      {"flux.h", "interface profile as k:a pairs, empty for flat", modes([](Config& c) -> ModeList& { return c.verify.flux_h; })},
      {"flux.deltas", "decreasing delta values", list([](Config& c) -> std::vector<double>& { return c.verify.deltas; })},
      {"flux.epsilon", "amplitude ratio of the flux check", real([](Config& c) -> double& { return c.verify.flux_epsilon; })},
      {"flux.n_x", "flux strip points in x", integer([](Config& c) -> int& { return c.verify.flux_strip.n_x; })},
      {"flux.n_z", "flux strip points in z", integer([](Config& c) -> int& { return c.verify.flux_strip.n_z; })},
      {"bounds.samples", "random pairs for the operator bounds", integer([](Config& c) -> int& { return c.verify.bounds_samples; })},
      {"bounds.n_modes", "modes of the random fields", integer([](Config& c) -> int& { return c.verify.bounds_n_modes; })},
  };
  return table;
}

// `initial = single_mode{k=1, amplitude=1e-3}` expands to initial.* keys.
void expand_preset(KeyValues& kv, const std::string& text, int line) {
  const auto brace = text.find('{');
  const std::string name = trim(text.substr(0, brace));
  kv["initial.type"] = {name, line};
  if (brace == std::string::npos) return;
  if (text.back() != '}') throw ConfigError("line " + std::to_string(line) + ": initial: missing '}'");
  std::stringstream ss(text.substr(brace + 1, text.size() - brace - 2));
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      if (trim(item).empty()) continue;
      throw ConfigError("line " + std::to_string(line) + ": initial: expected name=value, got '" + trim(item) + "'");
    }
    kv["initial." + trim(item.substr(0, eq))] = {trim(item.substr(eq + 1)), line};
  }
}

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

KeyValues parse_key_values(std::istream& in, const std::string& source) {
  KeyValues kv;
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError(source + ": line " + std::to_string(line) + ": unterminated section");
      section = trim(text.substr(1, text.size() - 2));
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ": line " + std::to_string(line) + ": expected key = value");
    }
    std::string key = trim(text.substr(0, eq));
    if (key.empty()) throw ConfigError(source + ": line " + std::to_string(line) + ": empty key");
    if (!section.empty()) key = section + "." + key;
    const std::string value = trim(text.substr(eq + 1));
    if (key == "initial") {
      expand_preset(kv, value, line);
    } else {
      kv[key] = {value, line};
    }
  }
  return kv;
}

KeyValues parse_key_values_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  return parse_key_values(in, path.string());
}

void SolverConfig::validate() const {
  if (n_modes < 32 || !power_of_two(n_modes)) {
    throw ConfigError("grid.n_modes must be a power of two >= 32, got " + std::to_string(n_modes));
  }
  if (!auto_dt && !(integrator.dt > 0.0)) throw ConfigError("time.dt must be > 0");
  if (!(integrator.t_end >= 0.0)) throw ConfigError("time.t_end must be >= 0");
  if (integrator.output_cadence < 1) throw ConfigError("time.output_cadence must be >= 1");
  if (integrator.snapshot_cadence < 0) throw ConfigError("time.snapshot_cadence must be >= 0");
  if (integrator.max_iter < 1) throw ConfigError("solver.max_iter must be >= 1");
  if (initial.kind == InitialKind::SingleMode && (initial.k < 1 || initial.k > n_modes)) {
    throw ConfigError("initial.k must lie in [1, grid.n_modes]");
  }
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("params: ") + e.what());
  }
}

SpectralField ModeList::field(int n_modes) const {
  SpectralField f(n_modes);
  for (auto [k, a] : terms) {
    if (k > n_modes) throw ConfigError("mode " + std::to_string(k) + " exceeds n_modes " + std::to_string(n_modes));
    f += cosine_mode(n_modes, k, a);
  }
  return f;
}

Config config_from_key_values(const KeyValues& kv) {
  Config cfg;
  for (const auto& [key, value] : kv) {
    const auto& table = keys();
    const auto it = std::find_if(table.begin(), table.end(), [&](const Key& k) { return k.name == key; });
    if (it == table.end()) fail(key, value, "unknown key");
    it->set(cfg, key, value);
  }
  auto& p = cfg.solver.params;
  if (p.model == ModelKind::Lubrication && !kv.contains("params.sigma")) p.sigma = p.epsilon * std::sqrt(p.delta);
  if (cfg.solver.auto_dt) {
    cfg.solver.integrator.dt = suggest_dt(cfg.solver.n_modes, p, cfg.solver.integrator.scheme);
  }
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  Config cfg = config_from_key_values(parse_key_values_file(path));
  cfg.base_dir = path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path();
  return cfg;
}

SpectralField build_initial_condition(const Config& cfg) {
  const auto& s = cfg.solver;
  switch (s.initial.kind) {
    case InitialKind::SingleMode:
      return cosine_mode(s.n_modes, s.initial.k, s.initial.amplitude);
    case InitialKind::RandomDecay: {
      std::mt19937_64 rng(s.initial.seed.value_or(s.rng_seed));
      auto h = random_decay_field(s.n_modes, s.initial.p, rng);
      const double a1 = wiener_norm(h, 1);
      return a1 > 0.0 ? (s.initial.amplitude / a1) * h : h;
    }
    case InitialKind::FromFile: {
      const auto path = s.initial.path.is_absolute() ? s.initial.path : cfg.base_dir / s.initial.path;
      SpectralField in;
      try {
        in = read_spectrum(path);
      } catch (const std::runtime_error& e) {
        throw ConfigError(std::string("initial.path: ") + e.what());
      }
      SpectralField h(s.n_modes);
      for (int k = 1; k <= std::min(s.n_modes, in.n_modes()); ++k) h.set(k, in[k]);
      return h;
    }
  }
  return SpectralField(s.n_modes);
}

nlohmann::json to_json(const Config& cfg) {
  const auto& s = cfg.solver;
  nlohmann::json initial;
  switch (s.initial.kind) {
    case InitialKind::SingleMode:
      initial = {{"type", "single_mode"}, {"k", s.initial.k}, {"amplitude", s.initial.amplitude}};
      break;
    case InitialKind::RandomDecay:
      initial = {{"type", "random_decay"},
                 {"p", s.initial.p},
                 {"amplitude", s.initial.amplitude},
                 {"seed", s.initial.seed.value_or(s.rng_seed)}};
      break;
    case InitialKind::FromFile:
      initial = {{"type", "from_file"}, {"path", s.initial.path.string()}};
      break;
  }
  return {{"params", s.params},
          {"grid", {{"n_modes", s.n_modes}}},
          {"time",
           {{"dt", s.integrator.dt},
            {"auto_dt", s.auto_dt},
            {"t_end", s.integrator.t_end},
            {"scheme", std::string(to_string(s.integrator.scheme))},
            {"output_cadence", s.integrator.output_cadence},
            {"snapshot_cadence", s.integrator.snapshot_cadence}}},
          {"solver", {{"tol", s.integrator.tol}, {"max_iter", s.integrator.max_iter}}},
          {"rng_seed", s.rng_seed},
          {"output_dir", s.output_dir.string()},
          {"initial", initial}};
}

const std::vector<std::pair<std::string, std::string>>& config_schema() {
  static const auto schema = [] {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& k : keys()) out.emplace_back(k.name, k.help);
    return out;
  }();
  return schema;
}

}  // namespace muskat::cli
