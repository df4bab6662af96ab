#include "muskat/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "muskat/models.hpp"

namespace muskat {
namespace {

constexpr double kExactSlack = 1e-12;
constexpr int kMinRecords = 20;

// Slope of y against x by least squares; 0 for fewer than two points.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  if (n < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

double decay_rate(const std::vector<EnergyRecord>& records, double t_lo, double t_hi) {
  std::vector<double> t, y;
  for (const auto& r : records) {
    if (r.t < t_lo || r.t > t_hi || !(r.norms[0] > 0.0)) continue;
    t.push_back(r.t);
    y.push_back(std::log(r.norms[0]));
  }
  return -ls_slope(t, y);
}

ModelParams wnl_view(const ModelParams& p) {
  ModelParams q = p;
  q.model = ModelKind::WNL1;
  return q;
}

}  // namespace

MonotoneVerdict check_monotone_decay(const std::vector<EnergyRecord>& records, double slack) {
  MonotoneVerdict v;
  v.records = static_cast<int>(records.size());
  for (size_t i = 1; i < records.size(); ++i) {
    const double prev = records[i - 1].energy, cur = records[i].energy;
    if (!(cur < prev)) v.strictly_decreasing = false;
    if (prev > 0.0) v.max_relative_increase = std::max(v.max_relative_increase, (cur - prev) / prev);
    if (!(cur <= prev * (1.0 + slack)) && v.first_violation < 0) {
      v.first_violation = static_cast<int>(i);
      v.pass = false;
    }
  }
  if (records.size() < 2) v.strictly_decreasing = false;
  return v;
}

std::string_view to_string(DecayStatus s) {
  switch (s) {
    case DecayStatus::Pass: return "pass";
    case DecayStatus::Fail: return "fail";
    case DecayStatus::IdenticallyZero: return "identically zero";
    case DecayStatus::NotApplicable: return "not applicable";
  }
  return "unknown";
}

DecayFit check_exponential_decay(const std::vector<EnergyRecord>& records, const ModelParams& p) {
  DecayFit fit;
  fit.records = static_cast<int>(records.size());
  fit.threshold = std::tanh(1.0) / 2.0 - 0.05;
  if (fit.records < kMinRecords) {
    throw InsufficientRecords("exponential decay fit needs at least 20 records, got " +
                              std::to_string(fit.records));
  }
  if (std::all_of(records.begin(), records.end(), [](const EnergyRecord& r) { return r.norms[0] == 0.0; })) {
    fit.status = DecayStatus::IdenticallyZero;
    fit.reason = "h is identically zero";
    return fit;
  }
  const double t0 = records.front().t, t1 = records.back().t, mid = 0.5 * (t0 + t1);
  fit.rate = decay_rate(records, t0, t1);
  fit.rate_first_half = decay_rate(records, t0, mid);
  fit.rate_second_half = decay_rate(records, mid, t1);
  const double scale = std::max(std::abs(fit.rate_first_half), std::abs(fit.rate_second_half));
  fit.halves_relative_gap = scale > 0.0 ? std::abs(fit.rate_first_half - fit.rate_second_half) / scale : 0.0;
  fit.halves_agree = fit.halves_relative_gap <= 0.1;

  if (p.model == ModelKind::Lubrication) {
    fit.reason = "no exponential rate is claimed for the lubrication model";
  } else if (p.chi != 1.0) {
    fit.reason = "chi = -1 is the unstable configuration; no decay is claimed";
  } else if (p.depth != Depth::Finite) {
    fit.reason = "the rate bound is stated for finite depth";
  } else if (!(p.lambda > 0.0)) {
    fit.reason = "lambda = 0 decays without a rate; use the dyadic trend check";
  } else {
    fit.status = fit.rate >= fit.threshold ? DecayStatus::Pass : DecayStatus::Fail;
    return fit;
  }
  fit.status = DecayStatus::NotApplicable;
  return fit;
}

DyadicTrend check_dyadic_trend(const std::vector<EnergyRecord>& records, int windows) {
  if (windows < 1) throw std::invalid_argument("dyadic trend: windows must be >= 1");
  DyadicTrend d;
  if (records.empty()) return d;
  const double t0 = records.front().t, T = records.back().t - t0;
  std::vector<double> edges{t0};
  for (int j = windows; j >= 0; --j) edges.push_back(t0 + T * std::ldexp(1.0, -j));
  for (size_t w = 0; w + 1 < edges.size(); ++w) {
    double mx = -1.0;
    for (const auto& r : records) {
      const bool inside = w == 0 ? r.t <= edges[1] : (r.t > edges[w] && r.t <= edges[w + 1]);
      if (inside) mx = std::max(mx, r.norms[0]);
    }
    if (mx < 0.0) continue;
    if (!d.window_max.empty() && !(mx <= d.window_max.back() * (1.0 + 1e-9)) && d.first_violation < 0) {
      d.first_violation = static_cast<int>(d.window_max.size());
      d.pass = false;
    }
    d.window_start.push_back(edges[w]);
    d.window_max.push_back(mx);
  }
  return d;
}

double energy_consistency(const std::vector<EnergyRecord>& records, const ModelParams& p) {
  const double w = energy_weight(p);
  const int hi = energy_high_index(p);
  double worst = 0.0;
  for (const auto& r : records) {
    worst = std::max(worst, std::abs(r.energy - (r.norms[0] + w * r.norms[hi])) / std::max(1.0, r.energy));
  }
  return worst;
}

BoundReport check_operator_bounds(int sample_count, const ModelParams& params, std::uint64_t seed, int n_modes) {
  if (sample_count < 2) throw std::invalid_argument("operator bounds: sample_count must be >= 2");
  if (n_modes < 4) throw std::invalid_argument("operator bounds: n_modes must be >= 4");
  const ModelParams p = wnl_view(params);
  p.validate();
  BoundReport r;
  r.samples = sample_count;
  r.seed = seed;
  r.n_modes = n_modes;
  const double w = energy_weight(p);
  const auto ell0 = ell0_symbol(p);

  for (int k = 1; k <= n_modes; ++k) {
    const double l = ell0(k).real();
    r.ell0_a0_max = std::max(r.ell0_a0_max, 1.0 / l);
    r.ell0_high_max = std::max(r.ell0_high_max, w * k * k * k / l);
  }

  const double norm_factor = std::sqrt(2.0 * std::numbers::pi);
  std::mt19937_64 rng(seed);
  const int half = sample_count / 2;
  for (int i = 0; i < sample_count; ++i) {
    const double decay = 2.0 + i % 3;
    const auto h = random_decay_field(n_modes, decay, rng);
    const auto V = random_decay_field(n_modes, decay, rng);

    const auto U = apply_L0_inverse(V, p);
    const double fa0 = wiener_norm(V, 0);
    r.ell0_a0_max = std::max(r.ell0_a0_max, wiener_norm(U, 0) / fa0);
    r.ell0_combined_max = std::max(r.ell0_combined_max, (wiener_norm(U, 0) + w * wiener_norm(U, 3)) / fa0);

    const double denom = wiener_norm(h, 1) * wiener_norm(V, 3);
    const auto split = commutator_split(h, V, p);
    r.ia_ratio_max = std::max(r.ia_ratio_max, norm_factor * wiener_norm(split.sign_part, 0) / denom);
    const double ir = norm_factor * wiener_norm(commutator_I(h, V, p), 0) / denom;
    auto& half_sup = i < half ? r.i_ratio_first_half : r.i_ratio_second_half;
    half_sup = std::max(half_sup, ir);
  }
  r.i_ratio_sup = std::max(r.i_ratio_first_half, r.i_ratio_second_half);
  r.i_ratio_stable = std::isfinite(r.i_ratio_sup) &&
                     std::abs(r.i_ratio_first_half - r.i_ratio_second_half) <= 0.1 * r.i_ratio_sup;
  const double one = 1.0 + kExactSlack;
  r.pass = r.ell0_a0_max <= one && r.ell0_high_max <= one && r.ell0_combined_max <= one &&
           r.ia_ratio_max <= 2.0 * one && r.i_ratio_stable;
  return r;
}

void to_json(nlohmann::json& j, const MonotoneVerdict& v) {
  j = {{"pass", v.pass},
       {"first_violation", v.first_violation},
       {"max_relative_increase", v.max_relative_increase},
       {"strictly_decreasing", v.strictly_decreasing},
       {"records", v.records}};
}

void to_json(nlohmann::json& j, const DecayFit& f) {
  j = {{"status", std::string(to_string(f.status))},
       {"rate", f.rate},
       {"rate_first_half", f.rate_first_half},
       {"rate_second_half", f.rate_second_half},
       {"halves_relative_gap", f.halves_relative_gap},
       {"halves_agree", f.halves_agree},
       {"threshold", f.threshold},
       {"records", f.records},
       {"reason", f.reason}};
}

void to_json(nlohmann::json& j, const DyadicTrend& d) {
  j = {{"pass", d.pass},
       {"window_start", d.window_start},
       {"window_max", d.window_max},
       {"first_violation", d.first_violation}};
}

void to_json(nlohmann::json& j, const BoundReport& r) {
  j = {{"samples", r.samples},
       {"seed", r.seed},
       {"n_modes", r.n_modes},
       {"ell0_a0_max", r.ell0_a0_max},
       {"ell0_high_max", r.ell0_high_max},
       {"ell0_combined_max", r.ell0_combined_max},
       {"ia_ratio_max", r.ia_ratio_max},
       {"i_ratio_sup", r.i_ratio_sup},
       {"i_ratio_first_half", r.i_ratio_first_half},
       {"i_ratio_second_half", r.i_ratio_second_half},
       {"i_ratio_stable", r.i_ratio_stable},
       {"pass", r.pass}};
}

}  // namespace muskat
