#pragma once

#include <string_view>
#include <vector>

#include "muskat/energy.hpp"
#include "muskat/errors.hpp"
#include "muskat/params.hpp"
#include "muskat/spectral_field.hpp"

namespace muskat {

enum class Scheme { Euler, RK4 };

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view s);

struct IntegratorSettings {
  double dt = 1e-3;           ///< configured (maximal) step
  double t_end = 1.0;
  Scheme scheme = Scheme::RK4;
  double tol = 0.0;           ///< fixed-point tolerance, <= 0 for the default
  int max_iter = 200;
  int output_cadence = 1;     ///< record every this many accepted steps
  int snapshot_cadence = 0;   ///< snapshot every this many records, 0 = first and last only
};

struct IntegratorState {
  double t = 0.0;
  SpectralField h;
  double dt = 0.0;
  Scheme scheme = Scheme::RK4;
  long step_count = 0;
  long rejected_steps = 0;
  int accepted_since_change = 0;
  /// t = t_anchor + steps_since_anchor * dt while dt is unchanged, so equal
  /// steps land on their nominal times without accumulated rounding.
  double t_anchor = 0.0;
  long steps_since_anchor = 0;
};

struct Derivative {
  SpectralField dhdt;
  int iterations = 0;
};

/// dh/dt at h: solve_quasilinear(h, forcing) for WNL1 and lubrication,
/// rhs_wnl2 for WNL2.
Derivative time_derivative(const SpectralField& h, const ModelParams& p, double tol = 0.0,
                           int max_iter = 200);

struct StepResult {
  IntegratorState state;
  /// Derivative at the starting state (first stage of the accepted step).
  Derivative start;
};

/// One accepted explicit step of size min(state.dt, t_limit - state.t). A
/// stage raising NotContracting or producing non-finite values rejects the
/// step and halves dt. After 10 accepted steps dt grows by 1.2, capped at
/// dt_max. Throws StepSizeUnderflow once dt < 1e-14.
StepResult step(const IntegratorState& state, const ModelParams& p, double dt_max, double t_limit,
                double tol = 0.0, int max_iter = 200);

/// Receives output while a run progresses, so partial output survives a
/// failure.
class RunSink {
 public:
  virtual ~RunSink() = default;
  virtual void on_record(const EnergyRecord& record) = 0;
  virtual void on_snapshot(int index, double t, const SpectralField& h) = 0;
};

struct Trajectory {
  std::vector<EnergyRecord> records;
  IntegratorState final_state;
  int snapshot_count = 0;
};

/// Integrates from t = 0 to settings.t_end. Records are emitted at step 0,
/// every output_cadence accepted steps and at t_end; each record's dh/dt is
/// the first stage of the following step, so recording costs one extra
/// evaluation only at t_end.
Trajectory run(const SpectralField& h0, const ModelParams& p, const IntegratorSettings& settings,
               RunSink* sink = nullptr);

/// max over 1 <= k <= N of the linear rate m(k).
double max_linear_rate(int n_modes, const ModelParams& p);

/// margin times the real-axis stability limit of the scheme over max rate.
double suggest_dt(int n_modes, const ModelParams& p, Scheme scheme, double margin = 0.8);

}  // namespace muskat
