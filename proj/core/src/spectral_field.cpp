#include "muskat/spectral_field.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fft.hpp"

namespace muskat {
namespace {

constexpr double kSqrtTwoPi = 2.5066282746310002;  // sqrt(2 pi)

bool is_smooth_size(int n) {
  for (int p : {2, 3, 5}) {
    while (n % p == 0) n /= p;
  }
  return n == 1;
}

}  // namespace

SpectralField::SpectralField(int n_modes) {
  if (n_modes < 1) throw std::invalid_argument("SpectralField: n_modes must be positive");
  coeffs_.assign(static_cast<size_t>(n_modes) + 1, Complex{});
}

SpectralField SpectralField::from_coefficients(std::vector<Complex> nonnegative) {
  if (nonnegative.size() < 2) throw std::invalid_argument("SpectralField: need at least modes 0 and 1");
  SpectralField f;
  f.coeffs_ = std::move(nonnegative);
  f.coeffs_[0] = Complex(f.coeffs_[0].real(), 0.0);
  return f;
}

SpectralField SpectralField::from_grid(std::span<const double> values, int n_modes) {
  const int m = static_cast<int>(values.size());
  if (m <= 2 * n_modes) throw std::invalid_argument("from_grid: need more than 2N samples");
  std::vector<Complex> spectrum(static_cast<size_t>(m / 2 + 1));
  detail::forward_real(values, spectrum);
  SpectralField f(n_modes);
  const double scale = kSqrtTwoPi / m;
  for (int k = 0; k <= n_modes; ++k) f.coeffs_[k] = spectrum[k] * scale;
  f.coeffs_[0] = Complex(f.coeffs_[0].real(), 0.0);
  return f;
}

std::vector<double> SpectralField::to_grid(int n_points) const {
  const int n = n_modes();
  if (n_points <= 2 * n) throw std::invalid_argument("to_grid: need more than 2N samples");
  std::vector<Complex> spectrum(static_cast<size_t>(n_points / 2 + 1), Complex{});
  const double scale = 1.0 / kSqrtTwoPi;
  for (int k = 0; k <= n; ++k) spectrum[k] = coeffs_[k] * scale;
  std::vector<double> values(static_cast<size_t>(n_points));
  detail::inverse_real_inplace(spectrum, values);
  return values;
}

Complex SpectralField::operator[](int k) const {
  const int a = std::abs(k);
  if (a > n_modes()) return {};
  return k >= 0 ? coeffs_[a] : std::conj(coeffs_[a]);
}

void SpectralField::set(int k, Complex value) {
  const int a = std::abs(k);
  if (a > n_modes()) throw std::out_of_range("SpectralField::set: mode outside grid");
  if (a == 0) {
    coeffs_[0] = Complex(value.real(), 0.0);
  } else {
    coeffs_[a] = k > 0 ? value : std::conj(value);
  }
}

bool SpectralField::is_finite() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](Complex c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

bool SpectralField::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](Complex c) { return c == Complex{}; });
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(*this, other);
  for (size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_grid(*this, other);
  for (size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= other.coeffs_[k];
  return *this;
}

SpectralField& SpectralField::operator*=(double scale) {
  for (auto& c : coeffs_) c *= scale;
  return *this;
}

double tanh_abs(int k) {
  static const auto table = [] {
    std::array<double, 21> t{};
    for (int j = 0; j <= 20; ++j) t[j] = std::tanh(static_cast<double>(j));
    return t;
  }();
  const int a = std::abs(k);
  return a > 20 ? 1.0 : table[a];
}

namespace symbols {

MultiplierSymbol identity() {
  return {[](int) { return Complex(1.0, 0.0); }, "1"};
}

MultiplierSymbol derivative(int order) {
  if (order < 0) throw std::invalid_argument("derivative: negative order");
  return {[order](int k) {
            Complex r(1.0, 0.0);
            const Complex ik(0.0, static_cast<double>(k));
            for (int j = 0; j < order; ++j) r *= ik;
            return r;
          },
          "d^" + std::to_string(order) + "/dx^" + std::to_string(order)};
}

MultiplierSymbol lambda() {
  return {[](int k) { return Complex(std::abs(k), 0.0); }, "|k|"};
}

MultiplierSymbol g0() {
  return {[](int k) { return Complex(std::abs(k) * tanh_abs(k), 0.0); }, "|k| tanh|k|"};
}

MultiplierSymbol g_infinity() {
  return {[](int k) { return Complex(std::abs(k), 0.0); }, "|k|"};
}

}  // namespace symbols

SpectralField apply_multiplier(const SpectralField& f, const MultiplierSymbol& m) {
  SpectralField out = f;
  auto c = out.nonnegative_mut();
  for (int k = 0; k < static_cast<int>(c.size()); ++k) c[k] *= m(k);
  // The symbol need not be real at k = 0; a real field must stay real.
  c[0] = Complex(c[0].real(), 0.0);
  return out;
}

double wiener_norm(const SpectralField& f, double s) {
  if (s < 0.0) throw std::invalid_argument("wiener_norm: s must be nonnegative");
  const auto c = f.nonnegative();
  const int n = static_cast<int>(c.size());
  double sum = 0.0;
  const int whole = static_cast<int>(s);
  if (whole == s && whole <= 8) {
    for (int k = 1; k < n; ++k) {
      double w = 1.0;
      for (int j = 0; j < whole; ++j) w *= k;
      sum += w * std::sqrt(std::norm(c[k]));
    }
  } else {
    for (int k = 1; k < n; ++k) sum += std::pow(static_cast<double>(k), s) * std::sqrt(std::norm(c[k]));
  }
  return 2.0 * sum;
}

SpectralField project_mean_zero(SpectralField f) {
  f.set(0, Complex{});
  return f;
}

SpectralField galerkin_project(SpectralField f, int max_mode) {
  if (max_mode <= 0) throw std::invalid_argument("galerkin_project: max_mode must be positive");
  auto c = f.nonnegative_mut();
  for (int k = max_mode + 1; k < static_cast<int>(c.size()); ++k) c[k] = Complex{};
  return f;
}

int dealiased_grid_size(int n_modes) {
  int m = 3 * n_modes + 1;
  while (!is_smooth_size(m)) ++m;
  return m;
}

SpectralField pointwise_product(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f, g);
  const int m = dealiased_grid_size(f.n_modes());
  std::vector<double> a = f.to_grid(m);
  const std::vector<double> b = g.to_grid(m);
  for (int j = 0; j < m; ++j) a[j] *= b[j];
  return SpectralField::from_grid(a, f.n_modes());
}

SpectralField cosine_mode(int n_modes, int k, double amplitude) {
  SpectralField f(n_modes);
  if (k == 0) {
    f.set(0, Complex(amplitude * kSqrtTwoPi, 0.0));
  } else {
    // cos(kx) = (e^{ikx} + e^{-ikx}) / 2 -> fhat(+-k) = sqrt(2 pi) / 2
    f.set(k, Complex(amplitude * kSqrtTwoPi / 2.0, 0.0));
  }
  return f;
}

SpectralField sine_mode(int n_modes, int k, double amplitude) {
  SpectralField f(n_modes);
  if (k != 0) {
    // sin(kx) = (e^{ikx} - e^{-ikx}) / 2i -> fhat(k) = -i sqrt(2 pi) / 2
    f.set(k, Complex(0.0, -amplitude * kSqrtTwoPi / 2.0));
  }
  return f;
}

SpectralField random_decay_field(int n_modes, double p, std::mt19937_64& rng, int max_mode) {
  SpectralField f(n_modes);
  const int top = max_mode > 0 ? std::min(max_mode, n_modes) : n_modes;
  std::uniform_real_distribution<double> mag(0.5, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  for (int k = 1; k <= top; ++k) {
    const double r = std::pow(static_cast<double>(k), -p) * mag(rng);
    f.set(k, std::polar(r, phase(rng)));
  }
  return f;
}

void require_same_grid(const SpectralField& a, const SpectralField& b) {
  if (a.n_modes() != b.n_modes()) throw std::invalid_argument("grid mismatch");
}

}  // namespace muskat
