#include "muskat/spectrum_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "csv_util.hpp"

namespace muskat {

void write_spectrum(std::ostream& out, const SpectralField& f) {
  out << "k,re,im\n";
  const auto c = f.nonnegative();
  for (int k = 0; k < static_cast<int>(c.size()); ++k) {
    out << k << ',' << detail::format_double(c[k].real()) << ','
        << detail::format_double(c[k].imag()) << '\n';
  }
}

void write_spectrum(const std::filesystem::path& path, const SpectralField& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_spectrum(out, f);
}

SpectralField read_spectrum(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != "k,re,im") {
    throw std::runtime_error("spectrum: row 1: expected header 'k,re,im'");
  }
  std::vector<Complex> coeffs;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_csv_row(line);
    if (cells.size() != 3) {
      throw std::runtime_error("spectrum: row " + std::to_string(row) + ": expected 3 columns, got " +
                               std::to_string(cells.size()));
    }
    const double k = detail::parse_double(cells[0], row, 1);
    if (k != static_cast<double>(coeffs.size())) {
      throw std::runtime_error("spectrum: row " + std::to_string(row) + ", column 1: expected k = " +
                               std::to_string(coeffs.size()));
    }
    coeffs.emplace_back(detail::parse_double(cells[1], row, 2), detail::parse_double(cells[2], row, 3));
  }
  if (coeffs.size() < 2) throw std::runtime_error("spectrum: need at least modes 0 and 1");
  return SpectralField::from_coefficients(std::move(coeffs));
}

SpectralField read_spectrum(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_spectrum(in);
}

}  // namespace muskat
