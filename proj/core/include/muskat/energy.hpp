#pragma once

#include <array>

#include "muskat/params.hpp"
#include "muskat/spectral_field.hpp"

namespace muskat {

struct EnergyRecord {
  double t = 0.0;
  std::array<double, 6> norms{};  ///< A^0 .. A^5 of h
  double energy = 0.0;
  double dth_a0 = 0.0;    ///< A^0 of dh/dt
  double dth_high = 0.0;  ///< A^3 (WNL) or A^4 (lubrication) of dh/dt
  int iters = 0;          ///< fixed-point iterations of the dh/dt solve
};

/// Coefficient of the high norm in the energy: theta tanh(1) for finite-depth
/// WNL, theta for infinite-depth WNL, sqrt(delta) theta for lubrication.
double energy_weight(const ModelParams& p);
/// 3 for WNL, 4 for lubrication.
int energy_high_index(const ModelParams& p);

/// |h|_A0 + energy_weight(p) |h|_A^{energy_high_index(p)}
double energy(const SpectralField& h, const ModelParams& p);

EnergyRecord make_record(double t, const SpectralField& h, const SpectralField& dhdt, int iters,
                         const ModelParams& p);

}  // namespace muskat
