#include "muskat/models.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace muskat {
namespace {

const double kInvSqrtTwoPi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

double g_of(int k, Depth depth) { return std::abs(k) * depth_factor(k, depth); }

template <class Fn>
SpectralField map_modes(const SpectralField& f, Fn&& fn) {
  SpectralField out = f;
  auto c = out.nonnegative_mut();
  for (int k = 0; k < static_cast<int>(c.size()); ++k) c[k] = fn(k, c[k]);
  return out;
}

// h * a_i for several a_i, reusing the grid values of h.
std::vector<SpectralField> multiply_all(const SpectralField& h, std::initializer_list<const SpectralField*> fs) {
  const int n = h.n_modes();
  const int m = dealiased_grid_size(n);
  const auto hg = h.to_grid(m);
  std::vector<SpectralField> out;
  out.reserve(fs.size());
  for (const SpectralField* f : fs) {
    require_same_grid(h, *f);
    auto g = f->to_grid(m);
    for (int j = 0; j < m; ++j) g[j] *= hg[j];
    out.push_back(SpectralField::from_grid(g, n));
  }
  return out;
}

// J(h, w) = G(h G w) + (h w_x)_x
SpectralField bracket_J(const SpectralField& h, const SpectralField& w, Depth depth) {
  const auto gw = map_modes(w, [&](int k, Complex c) { return g_of(k, depth) * c; });
  const auto wx = map_modes(w, [](int k, Complex c) { return Complex(0.0, k) * c; });
  auto prods = multiply_all(h, {&gw, &wx});
  const auto& a = prods[0].nonnegative();
  const auto& b = prods[1].nonnegative();
  SpectralField out(h.n_modes());
  auto o = out.nonnegative_mut();
  for (int k = 1; k < static_cast<int>(o.size()); ++k) {
    o[k] = g_of(k, depth) * a[k] + Complex(0.0, k) * b[k];
  }
  return out;
}

// w = chi h + (lambda/4) h_xxxx
SpectralField elastic_potential(const SpectralField& h, const ModelParams& p) {
  return map_modes(h, [&](int k, Complex c) {
    const double k2 = static_cast<double>(k) * k;
    return (p.chi + 0.25 * p.lambda * k2 * k2) * c;
  });
}

}  // namespace

double depth_factor(int k, Depth depth) { return depth == Depth::Finite ? tanh_abs(k) : 1.0; }

MultiplierSymbol depth_symbol(Depth depth) {
  return depth == Depth::Finite ? symbols::g0() : symbols::g_infinity();
}

MultiplierSymbol ell0_symbol(const ModelParams& p) {
  const double theta = p.theta;
  const Depth depth = p.depth;
  return {[theta, depth](int k) {
            const double a = std::abs(k);
            return Complex(1.0 + theta * a * a * a * depth_factor(k, depth), 0.0);
          },
          "1 + theta |k|^3 T(|k|)"};
}

double linear_rate(int k, const ModelParams& p) {
  const double a = std::abs(k);
  const double a2 = a * a;
  if (p.model == ModelKind::Lubrication) {
    const double sd = std::sqrt(p.delta);
    return sd * (p.chi * a2 + 0.25 * p.lambda * a2 * a2 * a2) / (1.0 + sd * p.theta * a2 * a2);
  }
  const double t = depth_factor(k, p.depth);
  return (p.chi + 0.25 * p.lambda * a2 * a2) * a * t / (1.0 + p.theta * a2 * a * t);
}

SpectralField apply_L0(const SpectralField& U, const ModelParams& p) {
  const auto l0 = ell0_symbol(p);
  return project_mean_zero(map_modes(U, [&](int k, Complex c) { return l0(k).real() * c; }));
}

SpectralField apply_L0_inverse(const SpectralField& F, const ModelParams& p) {
  const auto l0 = ell0_symbol(p);
  return project_mean_zero(map_modes(F, [&](int k, Complex c) { return c / l0(k).real(); }));
}

SpectralField commutator_I(const SpectralField& h, const SpectralField& V, const ModelParams& p) {
  require_same_grid(h, V);
  const auto vxx = map_modes(V, [](int k, Complex c) { return -static_cast<double>(k) * k * c; });
  return bracket_J(h, vxx, p.depth);
}

CommutatorSplit commutator_split(const SpectralField& h, const SpectralField& V, const ModelParams& p) {
  require_same_grid(h, V);
  const int n = h.n_modes();
  CommutatorSplit out{SpectralField(n), SpectralField(n)};
  auto a = out.sign_part.nonnegative_mut();
  auto b = out.tanh_part.nonnegative_mut();
  for (int k = 1; k <= n; ++k) {
    const double tk = depth_factor(k, p.depth);
    Complex sa{}, sb{};
    for (int m = k - n; m <= n; ++m) {
      const int r = k - m;
      if (r == 0 || m == 0) continue;
      const double ar = std::abs(r);
      const Complex prod = h[m] * V[r];
      const double weight = k * ar * ar * ar;
      const double sign = r > 0 ? 1.0 : -1.0;
      sa += (sign - 1.0) * weight * prod;
      sb += (1.0 - tk * depth_factor(r, p.depth)) * weight * prod;
    }
    a[k] = kInvSqrtTwoPi * sa;
    b[k] = kInvSqrtTwoPi * sb;
  }
  return out;
}

SpectralField apply_Lh_wnl(const SpectralField& h, const SpectralField& U, const ModelParams& p) {
  require_same_grid(h, U);
  auto out = apply_L0(U, p);
  if (p.sigma != 0.0) out += (p.sigma * p.theta) * commutator_I(h, U, p);
  return out;
}

SpectralField nonlinearity_wnl(const SpectralField& h, const ModelParams& p) {
  const auto w = elastic_potential(h, p);
  auto out = map_modes(w, [&](int k, Complex c) { return -g_of(k, p.depth) * c; });
  if (p.sigma != 0.0) out += p.sigma * bracket_J(h, w, p.depth);
  return project_mean_zero(out);
}

SpectralField compute_mu_wnl2(const SpectralField& h, const ModelParams& p) {
  const auto w = elastic_potential(h, p);
  return apply_L0_inverse(map_modes(w, [&](int k, Complex c) { return -g_of(k, p.depth) * c; }), p);
}

SpectralField rhs_wnl2(const SpectralField& h, const ModelParams& p) {
  auto f = nonlinearity_wnl(h, p);
  if (p.sigma != 0.0) f -= (p.sigma * p.theta) * commutator_I(h, compute_mu_wnl2(h, p), p);
  return apply_L0_inverse(f, p);
}

SpectralField lub_nonlinearity(const SpectralField& h, const ModelParams& p) {
  const double sd = std::sqrt(p.delta);
  const auto v = elastic_potential(h, p);
  auto out = map_modes(v, [&](int k, Complex c) { return -sd * k * k * c; });
  if (p.epsilon != 0.0) {
    const auto vx = map_modes(v, [](int k, Complex c) { return Complex(0.0, k) * c; });
    const auto hv = multiply_all(h, {&vx})[0];
    out += map_modes(hv, [&](int k, Complex c) { return sd * p.epsilon * Complex(0.0, k) * c; });
  }
  return project_mean_zero(out);
}

SpectralField apply_Lh_lub(const SpectralField& h, const SpectralField& U, const ModelParams& p) {
  require_same_grid(h, U);
  const double c0 = std::sqrt(p.delta) * p.theta;
  auto out = map_modes(U, [&](int k, Complex c) {
    const double k2 = static_cast<double>(k) * k;
    return (1.0 + c0 * k2 * k2) * c;
  });
  if (p.epsilon != 0.0) {
    // U_xxx has symbol (ik)^3 = -i k^3
    const auto u3 = map_modes(U, [](int k, Complex c) {
      const double k3 = static_cast<double>(k) * k * k;
      return Complex(0.0, -k3) * c;
    });
    const auto hu = multiply_all(h, {&u3})[0];
    out += map_modes(hu, [&](int k, Complex c) { return c0 * p.epsilon * Complex(0.0, k) * c; });
  }
  return project_mean_zero(out);
}

SpectralField apply_Lstar_inverse(const SpectralField& F, const ModelParams& p) {
  const double c0 = std::sqrt(p.delta) * p.theta;
  return project_mean_zero(map_modes(F, [&](int k, Complex c) {
    const double k2 = static_cast<double>(k) * k;
    return c / (1.0 + c0 * k2 * k2);
  }));
}

SpectralField apply_Lh(const SpectralField& h, const SpectralField& U, const ModelParams& p) {
  if (p.model == ModelKind::Lubrication) return apply_Lh_lub(h, U, p);
  return apply_Lh_wnl(h, U, p);
}

SpectralField model_forcing(const SpectralField& h, const ModelParams& p) {
  if (p.model == ModelKind::Lubrication) return lub_nonlinearity(h, p);
  return nonlinearity_wnl(h, p);
}

FrozenOperator::FrozenOperator(const SpectralField& h, const ModelParams& p)
    : params_(p),
      n_modes_(h.n_modes()),
      lubrication_(p.model == ModelKind::Lubrication) {
  coupling_ = lubrication_ ? std::sqrt(p.delta) * p.theta * p.epsilon : p.sigma * p.theta;
  trivial_ = coupling_ == 0.0 || h.is_zero();
  if (!trivial_) h_grid_ = h.to_grid(dealiased_grid_size(n_modes_));
}

SpectralField FrozenOperator::base(const SpectralField& U) const {
  if (lubrication_) {
    const double c0 = std::sqrt(params_.delta) * params_.theta;
    return project_mean_zero(map_modes(U, [&](int k, Complex c) {
      const double k2 = static_cast<double>(k) * k;
      return (1.0 + c0 * k2 * k2) * c;
    }));
  }
  return apply_L0(U, params_);
}

SpectralField FrozenOperator::base_inverse(const SpectralField& F) const {
  return lubrication_ ? apply_Lstar_inverse(F, params_) : apply_L0_inverse(F, params_);
}

SpectralField FrozenOperator::multiply(const SpectralField& f) const {
  auto g = f.to_grid(static_cast<int>(h_grid_.size()));
  for (size_t j = 0; j < g.size(); ++j) g[j] *= h_grid_[j];
  return SpectralField::from_grid(g, n_modes_);
}

SpectralField FrozenOperator::perturbation(const SpectralField& V) const {
  if (V.n_modes() != n_modes_) throw std::invalid_argument("grid mismatch");
  SpectralField out(n_modes_);
  if (trivial_) return out;
  auto o = out.nonnegative_mut();
  if (lubrication_) {
    const auto v3 = map_modes(V, [](int k, Complex c) {
      const double k3 = static_cast<double>(k) * k * k;
      return Complex(0.0, -k3) * c;
    });
    const auto hv = multiply(v3);
    const auto b = hv.nonnegative();
    for (int k = 1; k <= n_modes_; ++k) o[k] = coupling_ * Complex(0.0, k) * b[k];
    return out;
  }
  const Depth depth = params_.depth;
  // G V_xx and V_xxx
  const auto gvxx = map_modes(V, [&](int k, Complex c) { return -g_of(k, depth) * k * k * c; });
  const auto vxxx = map_modes(V, [](int k, Complex c) {
    const double k3 = static_cast<double>(k) * k * k;
    return Complex(0.0, -k3) * c;
  });
  const auto a = multiply(gvxx);
  const auto b = multiply(vxxx);
  const auto ac = a.nonnegative();
  const auto bc = b.nonnegative();
  for (int k = 1; k <= n_modes_; ++k) {
    o[k] = coupling_ * (g_of(k, depth) * ac[k] + Complex(0.0, k) * bc[k]);
  }
  return out;
}

}  // namespace muskat
