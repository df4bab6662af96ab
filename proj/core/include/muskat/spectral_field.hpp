#pragma once

#include <complex>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace muskat {

using Complex = std::complex<double>;

/// Real periodic function on the torus (-pi, pi), stored as its Fourier
/// coefficients for wavenumbers 0..N.
///
/// Coefficients follow the symmetric convention
///   f(x) = sum_k fhat(k) e^{ikx} / sqrt(2 pi),
///   fhat(k) = int f(x) e^{-ikx} / sqrt(2 pi) dx,
/// so Wiener norms computed here carry no hidden factors of 2 pi.
/// Only k >= 0 is stored; fhat(-k) = conj(fhat(k)) holds by construction and
/// the k = 0 entry is kept real.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(int n_modes);

  /// Takes coefficients for k = 0..N (size N + 1). The imaginary part of the
  /// k = 0 entry is discarded.
  static SpectralField from_coefficients(std::vector<Complex> nonnegative);

  /// Samples on x_j = 2 pi j / M, M = values.size() > 2 N. Modes above N are
  /// dropped.
  static SpectralField from_grid(std::span<const double> values, int n_modes);

  /// Samples the field on x_j = 2 pi j / n_points; requires n_points > 2 N.
  std::vector<double> to_grid(int n_points) const;

  int n_modes() const { return static_cast<int>(coeffs_.size()) - 1; }

  /// Coefficient at any k in [-N, N]; zero outside that range.
  Complex operator[](int k) const;
  /// Sets the coefficient at k (and, implicitly, at -k).
  void set(int k, Complex value);

  std::span<const Complex> nonnegative() const { return coeffs_; }
  std::span<Complex> nonnegative_mut() { return coeffs_; }

  bool is_finite() const;
  bool is_zero() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double scale);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }
  friend SpectralField operator*(SpectralField a, double s) { return a *= s; }
  friend SpectralField operator-(SpectralField a) { return a *= -1.0; }

  friend bool operator==(const SpectralField&, const SpectralField&) = default;

 private:
  std::vector<Complex> coeffs_;
};

/// Fourier multiplier k -> m(k). Only symbols with m(-k) = conj(m(k)) are
/// meaningful here (even real symbols and odd imaginary ones such as d/dx);
/// those map real fields to real fields.
struct MultiplierSymbol {
  std::function<Complex(int)> eval;
  std::string label;

  Complex operator()(int k) const { return eval(k); }
};

/// tanh(|k|), clamped to exactly 1 for |k| > 20.
double tanh_abs(int k);

namespace symbols {
MultiplierSymbol identity();
/// (ik)^order
MultiplierSymbol derivative(int order);
/// |k|
MultiplierSymbol lambda();
/// |k| tanh(|k|), the flat finite-depth Dirichlet-to-Neumann symbol.
MultiplierSymbol g0();
/// |k|, the infinite-depth Dirichlet-to-Neumann symbol.
MultiplierSymbol g_infinity();
}  // namespace symbols

SpectralField apply_multiplier(const SpectralField& f, const MultiplierSymbol& m);

/// sum_{k != 0} |k|^s |fhat(k)|
double wiener_norm(const SpectralField& f, double s);

SpectralField project_mean_zero(SpectralField f);

/// Zeroes every |k| > max_mode. Throws std::invalid_argument if max_mode <= 0.
SpectralField galerkin_project(SpectralField f, int max_mode);

/// Dealiased product f * g on the same grid. Products are formed on a padded
/// grid of more than 3N points so that every retained mode |k| <= N is exact.
/// The mean is kept. Throws std::invalid_argument on grid mismatch.
SpectralField pointwise_product(const SpectralField& f, const SpectralField& g);

/// Smallest FFT-friendly size M >= 3N + 1 used for dealiased products.
int dealiased_grid_size(int n_modes);

/// Field with the single cosine mode amplitude * cos(k x).
SpectralField cosine_mode(int n_modes, int k, double amplitude = 1.0);
/// Field with the single sine mode amplitude * sin(k x).
SpectralField sine_mode(int n_modes, int k, double amplitude = 1.0);

/// Mean-zero field with |fhat(k)| = k^{-p} U(1/2, 1) and uniform random phase
/// for 1 <= k <= max_mode (all modes when max_mode <= 0).
SpectralField random_decay_field(int n_modes, double p, std::mt19937_64& rng, int max_mode = 0);

/// Throws std::invalid_argument unless both fields share n_modes.
void require_same_grid(const SpectralField& a, const SpectralField& b);

}  // namespace muskat
