#include "muskat/energy.hpp"

#include <cmath>

namespace muskat {

double energy_weight(const ModelParams& p) {
  if (p.model == ModelKind::Lubrication) return std::sqrt(p.delta) * p.theta;
  return p.depth == Depth::Finite ? p.theta * std::tanh(1.0) : p.theta;
}

int energy_high_index(const ModelParams& p) { return p.model == ModelKind::Lubrication ? 4 : 3; }

double energy(const SpectralField& h, const ModelParams& p) {
  return wiener_norm(h, 0.0) + energy_weight(p) * wiener_norm(h, energy_high_index(p));
}

EnergyRecord make_record(double t, const SpectralField& h, const SpectralField& dhdt, int iters,
                         const ModelParams& p) {
  EnergyRecord r;
  r.t = t;
  for (int s = 0; s < 6; ++s) r.norms[s] = wiener_norm(h, s);
  const int hi = energy_high_index(p);
  r.energy = r.norms[0] + energy_weight(p) * r.norms[hi];
  r.dth_a0 = wiener_norm(dhdt, 0.0);
  r.dth_high = wiener_norm(dhdt, hi);
  r.iters = iters;
  return r;
}

}  // namespace muskat
