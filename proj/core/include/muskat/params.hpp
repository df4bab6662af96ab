#pragma once

#include <string>
#include <string_view>

namespace muskat {

enum class Depth { Finite, Infinite };
enum class ModelKind { WNL1, WNL2, Lubrication };

std::string_view to_string(Depth d);
std::string_view to_string(ModelKind m);
/// Accepts "finite"/"infinite"; throws std::invalid_argument otherwise.
Depth parse_depth(std::string_view s);
/// Accepts "wnl1", "wnl2", "lubrication" (case-insensitive).
ModelKind parse_model(std::string_view s);

/// Dimensionless constants of the elastic Muskat hierarchy.
struct ModelParams {
  double chi = 1.0;      ///< Rayleigh-Taylor sign, +1 stable, -1 unstable
  double lambda = 0.0;   ///< elastic (bending) coefficient
  double theta = 1.0;    ///< tangential dissipation, must be > 0
  double sigma = 0.0;    ///< steepness H/L
  double delta = 1.0;    ///< aspect ratio d^2/L^2
  double epsilon = 0.0;  ///< amplitude ratio H/d
  Depth depth = Depth::Finite;
  ModelKind model = ModelKind::WNL1;

  /// Throws std::invalid_argument describing the first violated constraint:
  /// chi in {-1, +1}, lambda >= 0, theta > 0, sigma >= 0, delta > 0,
  /// epsilon >= 0, and for the lubrication model sigma = epsilon sqrt(delta)
  /// to within 1e-12.
  void validate() const;

  /// Lubrication parameters with sigma derived from epsilon and delta.
  static ModelParams lubrication(double chi, double lambda, double theta, double delta,
                                 double epsilon);
};

/// Dimensional inputs. Everything strictly positive except gamma and tau.
struct PhysicalParams {
  double mu = 1.0;     ///< viscosity
  double kappa = 1.0;  ///< permeability
  double rho = 1.0;    ///< density
  double G = 1.0;      ///< gravitational acceleration
  double gamma = 0.0;  ///< bending rigidity
  double tau = 0.0;    ///< dissipation coefficient
  double d = 1.0;      ///< depth
  double L = 1.0;      ///< horizontal length scale
  double H = 1.0;      ///< amplitude scale
};

struct Nondimensionalized {
  ModelParams params;
  double time_scale = 1.0;  ///< mu L / (rho kappa G)
};

/// delta = d^2/L^2, epsilon = H/d, sigma = H/L, lambda = gamma/(2 rho G L^4),
/// theta = tau kappa/(mu L^3). chi, depth and model are left at defaults.
/// Throws std::invalid_argument on a nonpositive required input.
Nondimensionalized nondimensionalize(const PhysicalParams& p);

}  // namespace muskat
