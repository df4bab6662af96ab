#pragma once

#include <cstdint>
#include <vector>

#include "muskat/errors.hpp"
#include "muskat/params.hpp"
#include "muskat/spectral_field.hpp"

namespace muskat {

struct FixedPointReport {
  int iterations = 0;
  /// A0 norm of L_h U - F for the returned U.
  double final_residual = 0.0;
  /// Largest ratio of successive increments in the scheme norm.
  double contraction_estimate = 0.0;
  bool converged = false;
  double tolerance = 0.0;
  /// Scheme-norm increments |V_{n+1} - V_n|, one per iteration after the first.
  std::vector<double> increments;
};

class NotContracting : public NumericalError {
 public:
  NotContracting(const std::string& what, FixedPointReport report)
      : NumericalError(what), report(std::move(report)) {}
  FixedPointReport report;
};

class MaxIterExceeded : public NumericalError {
 public:
  MaxIterExceeded(const std::string& what, FixedPointReport report)
      : NumericalError(what), report(std::move(report)) {}
  FixedPointReport report;
};

struct SolveResult {
  SpectralField U;
  FixedPointReport report;
};

/// 1e-11 max(1, |F|_A0).
double default_tolerance(const SpectralField& F);

/// Solves L_h U = F by V_{n+1} = B^{-1}(F - P(h, V_n)), V_0 = B^{-1} F, where B
/// and P are the base and perturbation of FrozenOperator. Stops when both the
/// scheme-norm increment and the A0 residual are <= tol. A tol <= 0 selects
/// default_tolerance(F).
SolveResult solve_quasilinear(const SpectralField& h, const SpectralField& F, const ModelParams& p,
                              double tol = 0.0, int max_iter = 200);

struct SmallnessReport {
  double h_a1 = 0.0;
  double contraction_factor = 0.0;
  bool pass = true;
};

/// Estimates the scheme-norm gain of V -> -B^{-1} P(h, V) by power iteration
/// from five seeded random starts; pass iff the estimate is < 1.
SmallnessReport certify_smallness(const SpectralField& h, const ModelParams& p,
                                  std::uint64_t seed = 12345);

}  // namespace muskat
