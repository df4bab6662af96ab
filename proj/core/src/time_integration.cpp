#include "muskat/time_integration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "muskat/elliptic_solve.hpp"
#include "muskat/models.hpp"

namespace muskat {
namespace {

constexpr double kMinStep = 1e-14;
constexpr int kRestoreEvery = 10;
constexpr double kRestoreFactor = 1.2;

class NonFiniteStage : public std::exception {};

const SpectralField& checked(const SpectralField& f) {
  if (!f.is_finite()) throw NonFiniteStage{};
  return f;
}

SpectralField advance(const SpectralField& h, const SpectralField& k1, double dt, Scheme scheme,
                      const ModelParams& p, double tol, int max_iter) {
  if (scheme == Scheme::Euler) return h + dt * k1;
  const auto k2 = time_derivative(checked(h + (0.5 * dt) * k1), p, tol, max_iter).dhdt;
  const auto k3 = time_derivative(checked(h + (0.5 * dt) * checked(k2)), p, tol, max_iter).dhdt;
  const auto k4 = time_derivative(checked(h + dt * checked(k3)), p, tol, max_iter).dhdt;
  checked(k4);
  SpectralField sum = k1 + 2.0 * k2;
  sum += 2.0 * k3;
  sum += k4;
  return h + (dt / 6.0) * sum;
}

}  // namespace

std::string_view to_string(Scheme s) { return s == Scheme::RK4 ? "rk4" : "euler"; }

Scheme parse_scheme(std::string_view s) {
  if (s == "rk4" || s == "RK4") return Scheme::RK4;
  if (s == "euler" || s == "Euler") return Scheme::Euler;
  throw std::invalid_argument("unknown scheme '" + std::string(s) + "' (expected rk4|euler)");
}

Derivative time_derivative(const SpectralField& h, const ModelParams& p, double tol, int max_iter) {
  if (p.model == ModelKind::WNL2) return {rhs_wnl2(h, p), 0};
  auto solved = solve_quasilinear(h, model_forcing(h, p), p, tol, max_iter);
  return {std::move(solved.U), solved.report.iterations};
}

StepResult step(const IntegratorState& state, const ModelParams& p, double dt_max, double t_limit,
                double tol, int max_iter) {
  if (!(t_limit > state.t)) throw std::invalid_argument("step: t_limit must exceed t");
  StepResult out{state, time_derivative(state.h, p, tol, max_iter)};
  checked(out.start.dhdt);
  IntegratorState& s = out.state;
  while (true) {
    if (s.dt < kMinStep) {
      throw StepSizeUnderflow("step size fell below 1e-14 at t = " + std::to_string(s.t));
    }
    // Land exactly on t_limit instead of leaving a sliver.
    const double remaining = t_limit - s.t;
    const bool last = remaining <= s.dt * (1.0 + 1e-10);
    const double dt = last ? remaining : s.dt;
    try {
      SpectralField next = advance(s.h, out.start.dhdt, dt, s.scheme, p, tol, max_iter);
      checked(next);
      s.h = project_mean_zero(std::move(next));
      if (last) {
        s.t = t_limit;
        s.t_anchor = t_limit;
        s.steps_since_anchor = 0;
      } else {
        s.t = s.t_anchor + static_cast<double>(++s.steps_since_anchor) * s.dt;
      }
      ++s.step_count;
      if (++s.accepted_since_change >= kRestoreEvery && s.dt < dt_max) {
        s.dt = std::min(s.dt * kRestoreFactor, dt_max);
        s.accepted_since_change = 0;
        s.t_anchor = s.t;
        s.steps_since_anchor = 0;
      }
      return out;
    } catch (const NotContracting&) {
    } catch (const NonFiniteStage&) {
    }
    s.dt *= 0.5;
    ++s.rejected_steps;
    s.accepted_since_change = 0;
    s.t_anchor = s.t;
    s.steps_since_anchor = 0;
  }
}

Trajectory run(const SpectralField& h0, const ModelParams& p, const IntegratorSettings& settings,
               RunSink* sink) {
  if (!(settings.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(settings.t_end >= 0.0)) throw std::invalid_argument("t_end must be nonnegative");
  if (settings.output_cadence < 1) throw std::invalid_argument("output_cadence must be >= 1");
  p.validate();

  Trajectory traj;
  IntegratorState& state = traj.final_state;
  state.h = project_mean_zero(h0);
  state.dt = settings.dt;
  state.scheme = settings.scheme;

  int record_count = 0;
  auto emit = [&](const IntegratorState& at, const Derivative& d, bool final) {
    traj.records.push_back(make_record(at.t, at.h, d.dhdt, d.iterations, p));
    if (sink) sink->on_record(traj.records.back());
    const bool snap = record_count == 0 || final ||
                      (settings.snapshot_cadence > 0 && record_count % settings.snapshot_cadence == 0);
    if (snap) {
      if (sink) sink->on_snapshot(traj.snapshot_count, at.t, at.h);
      ++traj.snapshot_count;
    }
    ++record_count;
  };

  while (state.t < settings.t_end) {
    const bool due = state.step_count % settings.output_cadence == 0;
    const IntegratorState before = state;
    StepResult r = step(state, p, settings.dt, settings.t_end, settings.tol, settings.max_iter);
    if (due) emit(before, r.start, false);
    state = std::move(r.state);
  }
  emit(state, time_derivative(state.h, p, settings.tol, settings.max_iter), true);
  return traj;
}

double max_linear_rate(int n_modes, const ModelParams& p) {
  double m = 0.0;
  for (int k = 1; k <= n_modes; ++k) m = std::max(m, std::abs(linear_rate(k, p)));
  return m;
}

double suggest_dt(int n_modes, const ModelParams& p, Scheme scheme, double margin) {
  // Real-axis stability limits: 2 (Euler), about 2.785 (classical RK4).
  const double limit = scheme == Scheme::RK4 ? 2.785 : 2.0;
  const double rate = max_linear_rate(n_modes, p);
  return rate > 0.0 ? margin * limit / rate : 1.0;
}

}  // namespace muskat
