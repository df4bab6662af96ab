#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "muskat/errors.hpp"
#include "muskat/params.hpp"
#include "muskat/spectral_field.hpp"

namespace muskat {

/// Uniform grid on the flattened strip T x (-1, 0): x_i = 2 pi i / n_x,
/// z_j = -1 + j / (n_z - 1). Row j = n_z - 1 is the interface.
struct StripGrid {
  int n_x = 256;
  int n_z = 65;

  /// Throws std::invalid_argument unless n_z >= 16 and n_x > 2 n_modes.
  void validate(int n_modes) const;
  double dx() const;
  double dz() const;
  double z(int j) const { return -1.0 + j * dz(); }
};

/// Entries of the symmetric 2x2 matrix P at every node, row-major with
/// index j * n_x + i:
///   [[delta (1 + eps h),     -delta eps (1+z) h_x],
///    [-delta eps (1+z) h_x,  (1 + delta eps^2 (1+z)^2 h_x^2) / (1 + eps h)]]
struct CoefficientField {
  StripGrid grid;
  std::vector<double> a, b, c;

  double at_a(int i, int j) const { return a[static_cast<size_t>(j) * grid.n_x + i]; }
  double at_b(int i, int j) const { return b[static_cast<size_t>(j) * grid.n_x + i]; }
  double at_c(int i, int j) const { return c[static_cast<size_t>(j) * grid.n_x + i]; }
};

/// Throws DegenerateLift when min(1 + eps h) <= 0.05.
CoefficientField assemble_P_delta(const SpectralField& h, const StripGrid& grid, const ModelParams& p);

struct StripSolution {
  StripGrid grid;
  std::vector<double> phi;  ///< index j * n_x + i, top row equal to the datum
  /// max |(K phi)_node| over unknown nodes, K the assembled SPD operator.
  double residual_norm = 0.0;
  /// Discrete conormal flux out of each top node (row n_z - 1 of K phi).
  std::vector<double> top_reactions;

  double at(int i, int j) const { return phi[static_cast<size_t>(j) * grid.n_x + i]; }
};

/// Second-order conservative finite differences for div(P grad phi) = 0 with
/// phi = psi at z = 0 and zero conormal flux at z = -1, periodic in x.
/// Throws DegenerateLift or LinearSolveFailure.
StripSolution solve_strip(const SpectralField& h, const SpectralField& psi, const StripGrid& grid,
                          const ModelParams& p);

/// (1/sqrt(delta)) dZ Phi - sigma h_x dX Phi at the interface, sigma = eps sqrt(delta),
/// from a solved strip; mean-projected, n_modes of h.
SpectralField dtn_from_solution(const StripSolution& sol, const SpectralField& h, const SpectralField& psi,
                                const ModelParams& p);

SpectralField dtn_apply(const SpectralField& h, const SpectralField& psi, const StripGrid& grid,
                        const ModelParams& p);

/// Structural checks of the assembled operator (test support).
struct StripOperatorCheck {
  double symmetry_defect = 0.0;  ///< max |K_ij - K_ji|
  double row_sum_defect = 0.0;   ///< max |sum_j K_ij| over all nodes
  double min_diagonal = 0.0;
};
StripOperatorCheck inspect_strip_operator(const SpectralField& h, const StripGrid& grid, const ModelParams& p);

struct OrderPoint {
  double parameter = 0.0;
  double remainder = 0.0;
};

struct OrderReport {
  std::vector<OrderPoint> points;
  double slope = 0.0;
  double correlation = 0.0;
};

/// Least-squares slope of log remainder against log parameter.
OrderReport fit_order(std::vector<OrderPoint> points);

struct DtnExpansionReport {
  OrderReport remainder;         ///< against the continuum expansion
  OrderReport remainder_discrete;  ///< same, with the discrete G(0) psi as baseline
  double baseline_error = 0.0;   ///< |G_disc(0) psi - G0 psi|_A0
  bool grid_limited = false;     ///< baseline_error >= 10% of the smallest remainder
  /// Relative A0 error of the Richardson-extrapolated first-order term.
  double first_order_error = 0.0;
};

/// Remainder R(sigma) = |G(sigma h) psi - [G0 psi - sigma (G0(h G0 psi) + (h psi_x)_x)]|_A0
/// for decreasing sigmas at delta = 1, eps = sigma.
DtnExpansionReport verify_dtn_expansion(const SpectralField& h, const SpectralField& psi,
                                        const std::vector<double>& sigmas, const StripGrid& grid);

/// Depth-integrated flux of the strip solution:
/// Q = int (1 + eps h) phi_x - eps (1 + z) h_x phi_z dz.
SpectralField strip_flux(const StripSolution& sol, const SpectralField& h, const ModelParams& p);

/// Q0 + delta Q1 with phi^1 = -z(z+2)/2 (1+eps h)^2 f_xx:
/// (1+eps h) f_x + delta/3 [(1+eps h)((1+eps h)^2 f_xx)_x + eps h_x (1+eps h)^2 f_xx].
/// Reduces to f_x + delta/3 f_xxx at h = 0.
SpectralField asymptotic_flux(const SpectralField& h, const SpectralField& f, double delta, double eps);

struct LubFluxReport {
  OrderReport flux;  ///< |Q - Q_asym|_A0 against delta
  OrderReport phi;   ///< max-norm |phi - (f + delta phi^1)| against delta
};

LubFluxReport verify_lub_flux(const SpectralField& h, const SpectralField& f, const std::vector<double>& deltas,
                              const StripGrid& grid, double epsilon);

void to_json(nlohmann::json& j, const OrderPoint& p);
void to_json(nlohmann::json& j, const OrderReport& r);
void to_json(nlohmann::json& j, const DtnExpansionReport& r);
void to_json(nlohmann::json& j, const LubFluxReport& r);

}  // namespace muskat
