#pragma once

#include <complex>
#include <span>

namespace muskat::detail {

// Unnormalized real-to-complex DFT of length n: out has n / 2 + 1 entries.
// Plans are cached per length and shared between threads; execution uses the
// new-array interface so concurrent calls are safe.
void forward_real(std::span<const double> in, std::span<std::complex<double>> out);

// Unnormalized complex-to-real inverse of forward_real. `in` is copied before
// execution, so the caller's buffer is left untouched.
void inverse_real(std::span<const std::complex<double>> in, std::span<double> out);

// As inverse_real, but `in` is used as scratch and left unspecified.
void inverse_real_inplace(std::span<std::complex<double>> in, std::span<double> out);

}  // namespace muskat::detail
