#include "muskat/elliptic_solve.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "muskat/models.hpp"

namespace muskat {

double default_tolerance(const SpectralField& F) {
  return 1e-11 * std::max(1.0, wiener_norm(F, 0.0));
}

SolveResult solve_quasilinear(const SpectralField& h, const SpectralField& F, const ModelParams& p,
                              double tol, int max_iter) {
  require_same_grid(h, F);
  if (max_iter < 1) throw std::invalid_argument("solve_quasilinear: max_iter must be positive");
  const FrozenOperator op(h, p);
  const int s = op.scheme_norm();
  FixedPointReport rep;
  rep.tolerance = tol > 0.0 ? tol : default_tolerance(F);

  SpectralField V = op.base_inverse(F);
  rep.iterations = 1;
  if (op.trivial()) {
    rep.converged = true;
    return {std::move(V), std::move(rep)};
  }

  SpectralField P = op.perturbation(V);
  int expanding = 0;
  while (true) {
    if (rep.iterations >= max_iter) {
      throw MaxIterExceeded("fixed point: no convergence after " + std::to_string(max_iter) +
                                " iterations",
                            std::move(rep));
    }
    SpectralField next = op.base_inverse(F - P);
    SpectralField P_next = op.perturbation(next);
    ++rep.iterations;
    const double inc = wiener_norm(next - V, s);
    // L_h V_{n+1} - F = P(V_{n+1}) - P(V_n) exactly.
    rep.final_residual = wiener_norm(P_next - P, 0.0);
    if (!std::isfinite(inc) || !std::isfinite(rep.final_residual)) {
      throw NotContracting("fixed point: non-finite iterate", std::move(rep));
    }
    if (!rep.increments.empty() && rep.increments.back() > 0.0) {
      const double ratio = inc / rep.increments.back();
      // Ratios at the rounding floor are noise, not contraction data.
      const bool noise = inc <= 1e-13 * wiener_norm(next, s);
      if (!noise) rep.contraction_estimate = std::max(rep.contraction_estimate, ratio);
      expanding = ratio >= 1.0 && !noise ? expanding + 1 : 0;
    }
    rep.increments.push_back(inc);
    V = std::move(next);
    P = std::move(P_next);
    if (inc <= rep.tolerance && rep.final_residual <= rep.tolerance) {
      rep.converged = true;
      return {std::move(V), std::move(rep)};
    }
    if (expanding >= 3) {
      throw NotContracting("fixed point: increments grew for 3 consecutive iterations "
                           "(profile outside the smallness regime)",
                           std::move(rep));
    }
  }
}

SmallnessReport certify_smallness(const SpectralField& h, const ModelParams& p, std::uint64_t seed) {
  SmallnessReport out;
  out.h_a1 = wiener_norm(h, 1.0);
  const FrozenOperator op(h, p);
  if (op.trivial()) return out;
  const int s = op.scheme_norm();
  std::mt19937_64 rng(seed);
  constexpr int kProbes = 5;
  constexpr int kPowerSteps = 12;
  for (int probe = 0; probe < kProbes; ++probe) {
    // Decay p = s + 2 keeps the probe inside the scheme space.
    SpectralField V = random_decay_field(h.n_modes(), s + 2.0, rng);
    double gain = 0.0;
    for (int it = 0; it < kPowerSteps; ++it) {
      const double nv = wiener_norm(V, s);
      if (nv == 0.0 || !std::isfinite(nv)) break;
      V *= 1.0 / nv;
      V = -op.base_inverse(op.perturbation(V));
      gain = wiener_norm(V, s);
    }
    out.contraction_factor = std::max(out.contraction_factor, gain);
  }
  out.pass = out.contraction_factor < 1.0;
  return out;
}

}  // namespace muskat
