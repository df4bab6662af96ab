#include "muskat/params.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

namespace muskat {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

std::string_view to_string(Depth d) { return d == Depth::Finite ? "finite" : "infinite"; }

std::string_view to_string(ModelKind m) {
  switch (m) {
    case ModelKind::WNL1: return "wnl1";
    case ModelKind::WNL2: return "wnl2";
    case ModelKind::Lubrication: return "lubrication";
  }
  return "unknown";
}

Depth parse_depth(std::string_view s) {
  const auto v = lower(s);
  if (v == "finite") return Depth::Finite;
  if (v == "infinite") return Depth::Infinite;
  throw std::invalid_argument("unknown depth '" + std::string(s) + "' (expected finite|infinite)");
}

ModelKind parse_model(std::string_view s) {
  const auto v = lower(s);
  if (v == "wnl1") return ModelKind::WNL1;
  if (v == "wnl2") return ModelKind::WNL2;
  if (v == "lubrication" || v == "lub") return ModelKind::Lubrication;
  throw std::invalid_argument("unknown model '" + std::string(s) + "' (expected wnl1|wnl2|lubrication)");
}

void ModelParams::validate() const {
  require(chi == 1.0 || chi == -1.0, "chi must be +1 or -1");
  require(std::isfinite(lambda) && lambda >= 0.0, "lambda must be nonnegative");
  require(std::isfinite(theta) && theta > 0.0, "theta must be strictly positive (Theta > 0 is required)");
  require(std::isfinite(sigma) && sigma >= 0.0, "sigma must be nonnegative");
  require(std::isfinite(delta) && delta > 0.0, "delta must be strictly positive");
  require(std::isfinite(epsilon) && epsilon >= 0.0, "epsilon must be nonnegative");
  if (model == ModelKind::Lubrication) {
    require(std::abs(sigma - epsilon * std::sqrt(delta)) <= 1e-12,
            "lubrication requires sigma = epsilon * sqrt(delta)");
  }
}

ModelParams ModelParams::lubrication(double chi, double lambda, double theta, double delta,
                                     double epsilon) {
  ModelParams p;
  p.chi = chi;
  p.lambda = lambda;
  p.theta = theta;
  p.delta = delta;
  p.epsilon = epsilon;
  p.sigma = epsilon * std::sqrt(delta);
  p.model = ModelKind::Lubrication;
  return p;
}

Nondimensionalized nondimensionalize(const PhysicalParams& p) {
  require(p.mu > 0 && p.kappa > 0 && p.rho > 0 && p.G > 0 && p.d > 0 && p.L > 0 && p.H > 0,
          "mu, kappa, rho, G, d, L and H must be strictly positive");
  require(p.gamma >= 0 && p.tau >= 0, "gamma and tau must be nonnegative");
  Nondimensionalized out;
  out.params.delta = (p.d * p.d) / (p.L * p.L);
  out.params.epsilon = p.H / p.d;
  out.params.sigma = p.H / p.L;
  const double L2 = p.L * p.L;
  out.params.lambda = p.gamma / (2.0 * p.rho * p.G * L2 * L2);
  out.params.theta = p.tau * p.kappa / (p.mu * L2 * p.L);
  out.time_scale = p.mu * p.L / (p.rho * p.kappa * p.G);
  return out;
}

}  // namespace muskat
