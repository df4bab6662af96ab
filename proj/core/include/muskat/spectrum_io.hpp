#pragma once

#include <filesystem>
#include <iosfwd>

#include "muskat/spectral_field.hpp"

namespace muskat {

// Spectrum snapshot format: header `k,re,im`, then one row per stored mode
// k = 0..N, decimal with 17 significant digits (exact double round trip).
void write_spectrum(std::ostream& out, const SpectralField& f);
void write_spectrum(const std::filesystem::path& path, const SpectralField& f);

/// Throws std::runtime_error naming the offending row on malformed input.
SpectralField read_spectrum(std::istream& in);
SpectralField read_spectrum(const std::filesystem::path& path);

}  // namespace muskat
