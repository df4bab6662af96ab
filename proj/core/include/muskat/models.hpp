#pragma once

#include <vector>

#include "muskat/params.hpp"
#include "muskat/spectral_field.hpp"

namespace muskat {

/// T(|k|): tanh|k| for finite depth, 1 for infinite depth.
double depth_factor(int k, Depth depth);

/// G = |k| T(|k|), the flat Dirichlet-to-Neumann symbol of the depth regime.
MultiplierSymbol depth_symbol(Depth depth);

/// l0(k) = 1 + theta |k|^3 T(|k|).
MultiplierSymbol ell0_symbol(const ModelParams& p);

/// Linear decay rate m(k) of the model selected by p.model, valid when the
/// nonlinearity is switched off (sigma = 0 or epsilon = 0).
double linear_rate(int k, const ModelParams& p);

SpectralField apply_L0(const SpectralField& U, const ModelParams& p);
SpectralField apply_L0_inverse(const SpectralField& F, const ModelParams& p);

/// I(h, V) = G(h G V_xx) + (h V_xxx)_x, dealiased and mean-projected.
SpectralField commutator_I(const SpectralField& h, const SpectralField& V, const ModelParams& p);

/// Sign and tanh parts of I by direct convolution over mode pairs:
/// I_A carries sgn(k)sgn(k-m) - 1, I_B carries 1 - T(k)T(k-m), and
/// I_A + I_B = I. Quadratic cost; meant for verification.
struct CommutatorSplit {
  SpectralField sign_part;
  SpectralField tanh_part;
};
CommutatorSplit commutator_split(const SpectralField& h, const SpectralField& V, const ModelParams& p);

/// L_h U = L0 U + sigma theta I(h, U).
SpectralField apply_Lh_wnl(const SpectralField& h, const SpectralField& U, const ModelParams& p);

/// -G w + sigma [G(h G w) + (h w_x)_x] with w = chi h + (lambda/4) h_xxxx.
SpectralField nonlinearity_wnl(const SpectralField& h, const ModelParams& p);

/// mu = L0^{-1}(-G w).
SpectralField compute_mu_wnl2(const SpectralField& h, const ModelParams& p);

/// Time derivative of the second weakly nonlinear model:
/// L0^{-1}[N(h) - sigma theta I(h, mu)].
SpectralField rhs_wnl2(const SpectralField& h, const ModelParams& p);

/// sqrt(delta) ((1 + epsilon h) v_x)_x with v = chi h + (lambda/4) h_xxxx.
SpectralField lub_nonlinearity(const SpectralField& h, const ModelParams& p);

/// U + sqrt(delta) theta ((1 + epsilon h) U_xxx)_x.
SpectralField apply_Lh_lub(const SpectralField& h, const SpectralField& U, const ModelParams& p);

/// Inverse of L* = 1 + sqrt(delta) theta d^4/dx^4.
SpectralField apply_Lstar_inverse(const SpectralField& F, const ModelParams& p);

/// Full operator of the quasilinear models (WNL1 and lubrication).
SpectralField apply_Lh(const SpectralField& h, const SpectralField& U, const ModelParams& p);

/// Right-hand side F of L_h(dh/dt) = F for the quasilinear models, or the
/// nonlinearity feeding rhs_wnl2 for WNL2.
SpectralField model_forcing(const SpectralField& h, const ModelParams& p);

/// L_h for a frozen profile h, split as base + perturbation:
///   WNL:         base = L0, perturbation(V) = sigma theta I(h, V)
///   lubrication: base = L*, perturbation(V) = sqrt(delta) theta epsilon (h V_xxx)_x
/// The grid values of h are computed once and reused by every perturbation
/// call.
class FrozenOperator {
 public:
  FrozenOperator(const SpectralField& h, const ModelParams& p);

  SpectralField base(const SpectralField& U) const;
  SpectralField base_inverse(const SpectralField& F) const;
  SpectralField perturbation(const SpectralField& V) const;
  SpectralField apply(const SpectralField& U) const { return base(U) + perturbation(U); }

  /// True when the perturbation vanishes identically (h = 0 or zero coupling).
  bool trivial() const { return trivial_; }
  /// Wiener index of the norm the contraction is measured in: 3 or 4.
  int scheme_norm() const { return lubrication_ ? 4 : 3; }
  int n_modes() const { return n_modes_; }

 private:
  SpectralField multiply(const SpectralField& f) const;

  ModelParams params_;
  int n_modes_;
  bool lubrication_;
  bool trivial_;
  double coupling_;
  std::vector<double> h_grid_;
};

}  // namespace muskat
