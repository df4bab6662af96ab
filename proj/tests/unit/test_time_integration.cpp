#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "muskat/elliptic_solve.hpp"
#include "muskat/models.hpp"
#include "muskat/time_integration.hpp"
#include "oracles.hpp"

using namespace muskat;
using oracle::trig;

namespace {

ModelParams wnl(ModelKind kind, double sigma, double lambda, double chi = 1.0) {
  ModelParams p;
  p.model = kind;
  p.sigma = sigma;
  p.lambda = lambda;
  p.chi = chi;
  p.theta = 1.0;
  return p;
}

IntegratorSettings settings(double dt, double t_end, int cadence = 1) {
  IntegratorSettings s;
  s.dt = dt;
  s.t_end = t_end;
  s.output_cadence = cadence;
  return s;
}

double rel_err(Complex got, Complex want) { return std::abs(got - want) / std::abs(want); }

class Collector : public RunSink {
 public:
  void on_record(const EnergyRecord& r) override { records.push_back(r); }
  void on_snapshot(int index, double t, const SpectralField& h) override {
    indices.push_back(index);
    times.push_back(t);
    snaps.push_back(h);
  }
  std::vector<EnergyRecord> records;
  std::vector<int> indices;
  std::vector<double> times;
  std::vector<SpectralField> snaps;
};

}  // namespace

TEST(Step, LinearWnlMatchesExponential) {
  const auto p = wnl(ModelKind::WNL1, 0, 0);
  const auto h0 = trig(32, {{1, 1, 0}});
  const auto traj = run(h0, p, settings(0.01, 1.0));
  const double t1 = std::tanh(1.0);
  EXPECT_EQ(traj.final_state.t, 1.0);
  EXPECT_LT(rel_err(traj.final_state.h[1], std::exp(-t1 / (1 + t1)) * h0[1]), 1e-9);
}

TEST(Step, ZeroDataStaysZero) {
  for (ModelKind kind : {ModelKind::WNL1, ModelKind::WNL2}) {
    const auto traj = run(SpectralField(32), wnl(kind, 1, 1), settings(0.01, 0.5));
    EXPECT_TRUE(traj.final_state.h.is_zero());
  }
}

TEST(Step, LinearLubricationMode2) {
  const auto p = ModelParams::lubrication(1, 1, 1, 1, 0);
  const auto h0 = trig(32, {{2, 1, 0}});
  const auto traj = run(h0, p, settings(0.01, 1.0));
  EXPECT_NEAR(linear_rate(2, p), 20.0 / 17.0, 1e-15);
  EXPECT_LT(rel_err(traj.final_state.h[2], std::exp(-20.0 / 17.0) * h0[2]), 1e-9);
}

TEST(Step, RK4GlobalErrorIsFourthOrder) {
  const auto p = ModelParams::lubrication(1, 1, 1, 1, 0);
  const auto h0 = trig(16, {{3, 1, 0}});
  const Complex exact = std::exp(-linear_rate(3, p)) * h0[3];
  std::vector<double> err;
  for (double dt : {0.04, 0.02, 0.01}) err.push_back(std::abs(run(h0, p, settings(dt, 1.0)).final_state.h[3] - exact));
  const double slope = std::log2(err[0] / err[2]) / 2.0;
  EXPECT_NEAR(slope, 4.0, 0.3);
}

TEST(Step, EulerIsFirstOrder) {
  const auto p = wnl(ModelKind::WNL1, 0, 0);
  const auto h0 = trig(16, {{2, 1, 0}});
  const Complex exact = std::exp(-linear_rate(2, p)) * h0[2];
  auto s = settings(0.02, 1.0);
  s.scheme = Scheme::Euler;
  const double e1 = std::abs(run(h0, p, s).final_state.h[2] - exact);
  s.dt = 0.01;
  const double e2 = std::abs(run(h0, p, s).final_state.h[2] - exact);
  EXPECT_NEAR(std::log2(e1 / e2), 1.0, 0.1);
}

TEST(Step, RejectsAndHalvesOnNotContracting) {
  // With the unstable sign the stage profiles grow; a large step pushes them
  // past the smallness threshold, smaller steps stay inside it.
  const auto p = wnl(ModelKind::WNL1, 1, 0, -1);
  double lo = 1e-4, hi = 10.0;
  for (int i = 0; i < 40; ++i) {
    const double mid = std::sqrt(lo * hi);
    (certify_smallness(trig(32, {{1, mid, 0}}), p).pass ? lo : hi) = mid;
  }
  IntegratorState s;
  s.h = trig(32, {{1, 0.5 * lo, 0}});
  s.dt = 40.0;
  const auto r = step(s, p, 40.0, 100.0);
  EXPECT_GT(r.state.rejected_steps, 0);
  EXPECT_LT(r.state.dt, 40.0);
  EXPECT_EQ(r.state.t, r.state.dt);
}

TEST(Step, RestoresStepSizeGradually) {
  const auto p = wnl(ModelKind::WNL1, 0, 0);
  IntegratorState s;
  s.h = trig(16, {{1, 1, 0}});
  s.dt = 0.01;
  for (int i = 0; i < 10; ++i) s = step(s, p, 0.1, 100.0).state;
  EXPECT_DOUBLE_EQ(s.dt, 0.012);
  for (int i = 0; i < 200; ++i) s = step(s, p, 0.1, 100.0).state;
  EXPECT_EQ(s.dt, 0.1);
}

TEST(Step, UnderflowThrows) {
  IntegratorState s;
  s.h = trig(16, {{1, 1, 0}});
  s.dt = 1e-15;
  EXPECT_THROW(step(s, wnl(ModelKind::WNL1, 0, 0), 1e-15, 1.0), StepSizeUnderflow);
}

TEST(Step, ClipsToLimit) {
  IntegratorState s;
  s.h = trig(16, {{1, 1, 0}});
  s.dt = 0.3;
  const auto r = step(s, wnl(ModelKind::WNL1, 0, 0), 0.3, 0.1);
  EXPECT_EQ(r.state.t, 0.1);
  EXPECT_EQ(r.state.dt, 0.3);
}

TEST(Run, ZeroEndTimeGivesInitialRecordOnly) {
  Collector c;
  const auto traj = run(trig(32, {{1, 1e-3, 0}}), wnl(ModelKind::WNL1, 1, 1), settings(0.01, 0.0), &c);
  ASSERT_EQ(traj.records.size(), 1u);
  EXPECT_EQ(traj.records[0].t, 0.0);
  EXPECT_EQ(c.records.size(), 1u);
  EXPECT_EQ(c.snaps.size(), 1u);
}

TEST(Run, CadenceAndSnapshots) {
  Collector c;
  auto s = settings(0.01, 1.0, 10);
  s.snapshot_cadence = 3;
  const auto traj = run(trig(32, {{1, 1e-3, 0}}), wnl(ModelKind::WNL1, 1, 1), s, &c);
  ASSERT_EQ(traj.records.size(), 11u);
  for (size_t i = 0; i < traj.records.size(); ++i) EXPECT_NEAR(traj.records[i].t, 0.1 * i, 1e-12);
  EXPECT_EQ(c.indices, (std::vector<int>{0, 1, 2, 3, 4}));
  EXPECT_EQ(c.times.back(), 1.0);
  EXPECT_EQ(c.snaps.back(), traj.final_state.h);
}

TEST(Run, DeterministicAndMeanFree) {
  const auto h0 = trig(32, {{1, 1e-2, 0}, {3, 0, 2e-3}});
  for (ModelKind kind : {ModelKind::WNL1, ModelKind::WNL2}) {
    const auto p = wnl(kind, 1, 1);
    Collector a, b;
    run(h0, p, settings(0.002, 0.2), &a);
    run(h0, p, settings(0.002, 0.2), &b);
    ASSERT_EQ(a.snaps.size(), b.snaps.size());
    for (size_t i = 0; i < a.snaps.size(); ++i) {
      EXPECT_EQ(a.snaps[i], b.snaps[i]);
      EXPECT_EQ(a.snaps[i][0], Complex{});
    }
    for (size_t i = 0; i < a.records.size(); ++i) EXPECT_EQ(a.records[i].energy, b.records[i].energy);
  }
}

TEST(Run, StableOverTenThousandStepsAtSuggestedDt) {
  const auto p = wnl(ModelKind::WNL1, 1, 1);
  const int n = 32;
  const double dt = suggest_dt(n, p, Scheme::RK4);
  EXPECT_NEAR(max_linear_rate(n, p), linear_rate(n, p), 1e-12);
  auto s = settings(dt, dt * 10000, 1000);
  const auto h0 = trig(n, {{1, 1e-3, 0}, {n, 1e-8, 0}});
  const auto traj = run(h0, p, s);
  EXPECT_EQ(traj.final_state.step_count, 10000);
  EXPECT_TRUE(traj.final_state.h.is_finite());
  EXPECT_LT(wiener_norm(traj.final_state.h, 0), wiener_norm(h0, 0));
}

TEST(Run, TailMassStaysNegligible) {
  const int n = 64;
  const auto p = wnl(ModelKind::WNL1, 1, 1);
  Collector c;
  auto s = settings(suggest_dt(n, p, Scheme::RK4), 1.0, 50);
  s.snapshot_cadence = 1;
  run(trig(n, {{1, 1e-3, 0}, {2, 5e-4, 0}}), p, s, &c);
  for (const auto& h : c.snaps) {
    double tail = 0.0;
    for (int k = 2 * n / 3 + 1; k <= n; ++k) tail += 2 * std::abs(h[k]);
    EXPECT_LT(tail, 1e-10);
  }
}

TEST(Run, RecordsCarryDerivativeAndEnergy) {
  const auto p = wnl(ModelKind::WNL1, 1, 1);
  const auto h0 = trig(32, {{1, 1e-3, 0}});
  const auto traj = run(h0, p, settings(0.01, 0.05));
  const auto& r0 = traj.records.front();
  const auto d = time_derivative(h0, p);
  EXPECT_EQ(r0.dth_a0, wiener_norm(d.dhdt, 0));
  EXPECT_EQ(r0.dth_high, wiener_norm(d.dhdt, 3));
  EXPECT_EQ(r0.iters, d.iterations);
  EXPECT_NEAR(r0.energy, r0.norms[0] + std::tanh(1.0) * r0.norms[3], 1e-12 * r0.energy);
}

TEST(Run, RejectsInvalidSettings) {
  const auto h0 = trig(32, {{1, 1e-3, 0}});
  EXPECT_THROW(run(h0, wnl(ModelKind::WNL1, 1, 1), settings(0.0, 1.0)), std::invalid_argument);
  EXPECT_THROW(run(h0, wnl(ModelKind::WNL1, 1, 1), settings(0.1, -1.0)), std::invalid_argument);
  auto bad = wnl(ModelKind::WNL1, 1, 1);
  bad.theta = 0.0;
  EXPECT_THROW(run(h0, bad, settings(0.1, 1.0)), std::invalid_argument);
}
