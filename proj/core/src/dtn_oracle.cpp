#include "muskat/dtn_oracle.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fft.hpp"

namespace muskat {
namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

constexpr double kMinLift = 0.05;

// Periodic spectral derivative of grid samples (Nyquist mode dropped).
std::vector<double> spectral_dx(const std::vector<double>& v) {
  const int n = static_cast<int>(v.size());
  std::vector<std::complex<double>> s(static_cast<size_t>(n / 2 + 1));
  detail::forward_real(v, s);
  for (int k = 0; k < static_cast<int>(s.size()); ++k) {
    s[k] *= std::complex<double>(0.0, k) / static_cast<double>(n);
  }
  if (n % 2 == 0) s[n / 2] = 0.0;
  std::vector<double> out(static_cast<size_t>(n));
  detail::inverse_real_inplace(s, out);
  return out;
}

SpectralField derivative(const SpectralField& f, int order) {
  return apply_multiplier(f, symbols::derivative(order));
}

// Full operator K = -dx dz div(P grad .) over every node, assembled from
// symmetric edge couplings; the diagonal is minus the off-diagonal row sum so
// constants lie in the kernel. Row n_z - 1 holds the half cells at the
// interface, row 0 the half cells at the impermeable bottom (ghost reflection).
SpMat assemble_full(const CoefficientField& cf) {
  const int nx = cf.grid.n_x, nz = cf.grid.n_z, top = nz - 1;
  const double dx = cf.grid.dx(), dz = cf.grid.dz();
  auto id = [nx](int i, int j) { return j * nx + i; };
  std::vector<Triplet> t;
  t.reserve(static_cast<size_t>(nx) * nz * 9);
  std::vector<double> diag(static_cast<size_t>(nx) * nz, 0.0);
  auto couple = [&](int p, int q, double v) {
    t.emplace_back(p, q, v);
    t.emplace_back(q, p, v);
    diag[p] -= v;
    diag[q] -= v;
  };
  for (int j = 0; j < nz; ++j) {
    const double w = (j == 0 || j == top) ? 0.5 : 1.0;
    for (int i = 0; i < nx; ++i) {
      const int ip = (i + 1) % nx;
      const double a_half = 0.5 * (cf.at_a(i, j) + cf.at_a(ip, j));
      couple(id(i, j), id(ip, j), -w * a_half * dz / dx);
      if (j < top) {
        const double c0 = cf.at_c(i, j), c1 = cf.at_c(i, j + 1);
        couple(id(i, j), id(i, j + 1), -2.0 * c0 * c1 / (c0 + c1) * dx / dz);
        // Mixed derivative couplings, centred: (b phi_z)_x + (b phi_x)_z.
        couple(id(i, j), id(ip, j + 1), -0.25 * (cf.at_b(ip, j) + cf.at_b(i, j + 1)));
        couple(id(ip, j), id(i, j + 1), 0.25 * (cf.at_b(i, j) + cf.at_b(ip, j + 1)));
      }
    }
  }
  for (int p = 0; p < nx * nz; ++p) t.emplace_back(p, p, diag[p]);
  SpMat K(nx * nz, nx * nz);
  K.setFromTriplets(t.begin(), t.end());
  return K;
}

}  // namespace

void StripGrid::validate(int n_modes) const {
  if (n_z < 16) throw std::invalid_argument("strip grid: n_z must be >= 16");
  if (n_x <= 2 * n_modes) {
    throw std::invalid_argument("strip grid: n_x = " + std::to_string(n_x) + " must exceed 2N = " +
                                std::to_string(2 * n_modes));
  }
}

double StripGrid::dx() const { return 2.0 * std::numbers::pi / n_x; }
double StripGrid::dz() const { return 1.0 / (n_z - 1); }

CoefficientField assemble_P_delta(const SpectralField& h, const StripGrid& grid, const ModelParams& p) {
  grid.validate(h.n_modes());
  const auto hg = h.to_grid(grid.n_x);
  const auto hx = derivative(h, 1).to_grid(grid.n_x);
  double min_lift = 1.0;
  for (double v : hg) min_lift = std::min(min_lift, 1.0 + p.epsilon * v);
  if (min_lift <= kMinLift) {
    throw DegenerateLift("lift degenerate: min(1 + eps h) = " + std::to_string(min_lift) + " <= 0.05");
  }
  CoefficientField cf;
  cf.grid = grid;
  const size_t n = static_cast<size_t>(grid.n_x) * grid.n_z;
  cf.a.resize(n);
  cf.b.resize(n);
  cf.c.resize(n);
  const double d = p.delta, e = p.epsilon;
  for (int j = 0; j < grid.n_z; ++j) {
    const double s = 1.0 + grid.z(j);
    for (int i = 0; i < grid.n_x; ++i) {
      const double lift = 1.0 + e * hg[i];
      const size_t q = static_cast<size_t>(j) * grid.n_x + i;
      cf.a[q] = d * lift;
      cf.b[q] = -d * e * s * hx[i];
      cf.c[q] = (1.0 + d * e * e * s * s * hx[i] * hx[i]) / lift;
    }
  }
  return cf;
}

StripSolution solve_strip(const SpectralField& h, const SpectralField& psi, const StripGrid& grid,
                          const ModelParams& p) {
  require_same_grid(h, psi);
  const CoefficientField cf = assemble_P_delta(h, grid, p);
  const SpMat K = assemble_full(cf);
  const int nx = grid.n_x, nz = grid.n_z;
  const int n_unknown = nx * (nz - 1);
  const int n_all = nx * nz;

  const auto datum = psi.to_grid(nx);
  Eigen::VectorXd top(nx);
  for (int i = 0; i < nx; ++i) top(i) = datum[i];

  const SpMat A = K.topLeftCorner(n_unknown, n_unknown);
  const SpMat B = K.block(0, n_unknown, n_unknown, nx);
  const Eigen::VectorXd rhs = -(B * top);

  Eigen::VectorXd x;
  Eigen::SimplicialLDLT<SpMat> ldlt(A);
  bool ok = ldlt.info() == Eigen::Success;
  if (ok) {
    x = ldlt.solve(rhs);
    ok = ldlt.info() == Eigen::Success && x.allFinite();
  }
  if (!ok) {
    Eigen::SparseLU<SpMat> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw LinearSolveFailure("strip solve: factorization failed");
    x = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !x.allFinite()) throw LinearSolveFailure("strip solve: solve failed");
  }

  StripSolution sol;
  sol.grid = grid;
  sol.phi.resize(static_cast<size_t>(n_all));
  Eigen::VectorXd full(n_all);
  full << x, top;
  for (int q = 0; q < n_all; ++q) sol.phi[q] = full(q);
  const Eigen::VectorXd r = K * full;
  sol.residual_norm = r.head(n_unknown).lpNorm<Eigen::Infinity>();
  sol.top_reactions.assign(r.data() + n_unknown, r.data() + n_all);
  return sol;
}

SpectralField dtn_from_solution(const StripSolution& sol, const SpectralField& h, const SpectralField& psi,
                                const ModelParams& p) {
  const StripGrid& g = sol.grid;
  const int nx = g.n_x, top = g.n_z - 1;
  const double dz = g.dz();
  const double sd = std::sqrt(p.delta);
  const double sigma = p.epsilon * sd;
  const auto hg = h.to_grid(nx);
  const auto hx = derivative(h, 1).to_grid(nx);
  const auto psix = derivative(psi, 1).to_grid(nx);
  std::vector<double> out(static_cast<size_t>(nx));
  for (int i = 0; i < nx; ++i) {
    const double phiz = (3.0 * sol.at(i, top) - 4.0 * sol.at(i, top - 1) + sol.at(i, top - 2)) / (2.0 * dz);
    const double lift = 1.0 + p.epsilon * hg[i];
    const double dZ = phiz / lift;
    const double dX = psix[i] - p.epsilon * hx[i] / lift * phiz;
    out[i] = dZ / sd - sigma * hx[i] * dX;
  }
  return project_mean_zero(SpectralField::from_grid(out, h.n_modes()));
}

SpectralField dtn_apply(const SpectralField& h, const SpectralField& psi, const StripGrid& grid,
                        const ModelParams& p) {
  return dtn_from_solution(solve_strip(h, psi, grid, p), h, psi, p);
}

StripOperatorCheck inspect_strip_operator(const SpectralField& h, const StripGrid& grid, const ModelParams& p) {
  const SpMat K = assemble_full(assemble_P_delta(h, grid, p));
  StripOperatorCheck out;
  const SpMat Kt = K.transpose();
  const SpMat diff = K - Kt;
  for (int k = 0; k < diff.outerSize(); ++k) {
    for (SpMat::InnerIterator it(diff, k); it; ++it) {
      out.symmetry_defect = std::max(out.symmetry_defect, std::abs(it.value()));
    }
  }
  const Eigen::VectorXd rs = K * Eigen::VectorXd::Ones(K.cols());
  out.row_sum_defect = rs.lpNorm<Eigen::Infinity>();
  out.min_diagonal = K.diagonal().minCoeff();
  return out;
}

OrderReport fit_order(std::vector<OrderPoint> points) {
  OrderReport r;
  r.points = std::move(points);
  const size_t n = r.points.size();
  if (n < 2) return r;
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (const auto& pt : r.points) {
    const double x = std::log(pt.parameter), y = std::log(pt.remainder);
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
  }
  const double cxx = sxx - sx * sx / n, cyy = syy - sy * sy / n, cxy = sxy - sx * sy / n;
  r.slope = cxy / cxx;
  r.correlation = cyy > 0 ? cxy / std::sqrt(cxx * cyy) : 1.0;
  return r;
}

DtnExpansionReport verify_dtn_expansion(const SpectralField& h, const SpectralField& psi,
                                        const std::vector<double>& sigmas, const StripGrid& grid) {
  require_same_grid(h, psi);
  if (sigmas.size() < 2) throw std::invalid_argument("verify_dtn_expansion: need at least two sigmas");
  for (size_t i = 1; i < sigmas.size(); ++i) {
    if (!(sigmas[i] < sigmas[i - 1]) || !(sigmas[i] > 0)) {
      throw std::invalid_argument("verify_dtn_expansion: sigmas must be positive and decreasing");
    }
  }
  const auto g0 = symbols::g0();
  const SpectralField g0psi = project_mean_zero(apply_multiplier(psi, g0));
  // First-order coefficient: -(G0(h G0 psi) + (h psi_x)_x)
  const SpectralField first =
      -1.0 * project_mean_zero(apply_multiplier(pointwise_product(h, g0psi), g0) +
                               derivative(pointwise_product(h, derivative(psi, 1)), 1));

  ModelParams p;
  p.delta = 1.0;
  p.epsilon = 0.0;
  const SpectralField base = dtn_apply(h, psi, grid, p);

  DtnExpansionReport rep;
  rep.baseline_error = wiener_norm(base - g0psi, 0.0);
  std::vector<OrderPoint> cont, disc;
  std::vector<SpectralField> quotients;
  for (double s : sigmas) {
    p.epsilon = s;
    p.sigma = s;
    const SpectralField G = dtn_apply(h, psi, grid, p);
    cont.push_back({s, wiener_norm(G - (g0psi + s * first), 0.0)});
    disc.push_back({s, wiener_norm(G - (base + s * first), 0.0)});
    quotients.push_back((1.0 / s) * (G - base));
  }
  rep.remainder = fit_order(cont);
  rep.remainder_discrete = fit_order(disc);
  rep.grid_limited = rep.baseline_error >= 0.1 * cont.back().remainder;
  // D(s) = D0 + s D1 + O(s^2); eliminate D1 with the two smallest sigmas.
  const size_t m = sigmas.size();
  const double q = sigmas[m - 2] / sigmas[m - 1];
  const SpectralField extrap = (1.0 / (q - 1.0)) * (q * quotients[m - 1] - quotients[m - 2]);
  rep.first_order_error = wiener_norm(extrap - first, 0.0) / wiener_norm(first, 0.0);
  return rep;
}

SpectralField strip_flux(const StripSolution& sol, const SpectralField& h, const ModelParams& p) {
  const StripGrid& g = sol.grid;
  const int nx = g.n_x, nz = g.n_z;
  const double dz = g.dz();
  const auto hg = h.to_grid(nx);
  const auto hx = derivative(h, 1).to_grid(nx);
  std::vector<double> q(static_cast<size_t>(nx), 0.0);
  std::vector<double> row(static_cast<size_t>(nx));
  for (int j = 0; j < nz; ++j) {
    for (int i = 0; i < nx; ++i) row[i] = sol.at(i, j);
    const auto phix = spectral_dx(row);
    const double wt = (j == 0 || j == nz - 1) ? 0.5 * dz : dz;
    const double s = 1.0 + g.z(j);
    for (int i = 0; i < nx; ++i) {
      double phiz;
      if (j == 0) {
        phiz = (-3.0 * sol.at(i, 0) + 4.0 * sol.at(i, 1) - sol.at(i, 2)) / (2.0 * dz);
      } else if (j == nz - 1) {
        phiz = (3.0 * sol.at(i, j) - 4.0 * sol.at(i, j - 1) + sol.at(i, j - 2)) / (2.0 * dz);
      } else {
        phiz = (sol.at(i, j + 1) - sol.at(i, j - 1)) / (2.0 * dz);
      }
      q[i] += wt * ((1.0 + p.epsilon * hg[i]) * phix[i] - p.epsilon * s * hx[i] * phiz);
    }
  }
  return SpectralField::from_grid(q, h.n_modes());
}

SpectralField asymptotic_flux(const SpectralField& h, const SpectralField& f, double delta, double eps) {
  require_same_grid(h, f);
  SpectralField lift = eps * h;
  lift.set(0, lift[0] + Complex(std::sqrt(2.0 * std::numbers::pi), 0.0));  // 1 + eps h
  const SpectralField fx = derivative(f, 1);
  const SpectralField fxx = derivative(f, 2);
  const SpectralField lift2fxx = pointwise_product(pointwise_product(lift, lift), fxx);
  SpectralField q = pointwise_product(lift, fx);
  q += (delta / 3.0) * (pointwise_product(lift, derivative(lift2fxx, 1)) +
                        pointwise_product(eps * derivative(h, 1), lift2fxx));
  return q;
}

LubFluxReport verify_lub_flux(const SpectralField& h, const SpectralField& f, const std::vector<double>& deltas,
                              const StripGrid& grid, double epsilon) {
  require_same_grid(h, f);
  if (deltas.size() < 2) throw std::invalid_argument("verify_lub_flux: need at least two deltas");
  const int nx = grid.n_x;
  const auto fg = f.to_grid(nx);
  const auto hg = h.to_grid(nx);
  const auto fxx = derivative(f, 2).to_grid(nx);
  std::vector<OrderPoint> flux, phi;
  for (double d : deltas) {
    if (!(d > 0)) throw std::invalid_argument("verify_lub_flux: deltas must be positive");
    const ModelParams p = ModelParams::lubrication(1.0, 0.0, 1.0, d, epsilon);
    const StripSolution sol = solve_strip(h, f, grid, p);
    flux.push_back({d, wiener_norm(strip_flux(sol, h, p) - asymptotic_flux(h, f, d, epsilon), 0.0)});
    double err = 0.0;
    for (int j = 0; j < grid.n_z; ++j) {
      const double z = grid.z(j);
      for (int i = 0; i < nx; ++i) {
        const double lift = 1.0 + epsilon * hg[i];
        const double phi1 = -0.5 * z * (z + 2.0) * lift * lift * fxx[i];
        err = std::max(err, std::abs(sol.at(i, j) - (fg[i] + d * phi1)));
      }
    }
    phi.push_back({d, err});
  }
  return {fit_order(flux), fit_order(phi)};
}

void to_json(nlohmann::json& j, const OrderPoint& p) {
  j = nlohmann::json{{"parameter", p.parameter}, {"remainder", p.remainder}};
}

void to_json(nlohmann::json& j, const OrderReport& r) {
  j = nlohmann::json{{"points", r.points}, {"slope", r.slope}, {"correlation", r.correlation}};
}

void to_json(nlohmann::json& j, const DtnExpansionReport& r) {
  j = nlohmann::json{{"remainder", r.remainder},
                     {"remainder_discrete_baseline", r.remainder_discrete},
                     {"baseline_error", r.baseline_error},
                     {"grid_limited", r.grid_limited},
                     {"first_order_relative_error", r.first_order_error}};
}

void to_json(nlohmann::json& j, const LubFluxReport& r) {
  j = nlohmann::json{{"flux", r.flux}, {"phi", r.phi}};
}

}  // namespace muskat
