#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace muskat::detail {
namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  ~PlanPair() {
    if (forward) fftw_destroy_plan(forward);
    if (inverse) fftw_destroy_plan(inverse);
  }
};

// FFTW_ESTIMATE keeps plan selection deterministic from run to run, which the
// byte-identical output contract depends on.
const PlanPair& plans_for(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<PlanPair>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;

  auto pair = std::make_unique<PlanPair>();
  double* real = fftw_alloc_real(static_cast<size_t>(n));
  fftw_complex* spec = fftw_alloc_complex(static_cast<size_t>(n / 2 + 1));
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  pair->forward = fftw_plan_dft_r2c_1d(n, real, spec, flags);
  pair->inverse = fftw_plan_dft_c2r_1d(n, spec, real, flags | FFTW_DESTROY_INPUT);
  fftw_free(real);
  fftw_free(spec);
  if (!pair->forward || !pair->inverse) throw std::runtime_error("fftw planning failed");
  return *cache.emplace(n, std::move(pair)).first->second;
}

}  // namespace

void forward_real(std::span<const double> in, std::span<std::complex<double>> out) {
  const int n = static_cast<int>(in.size());
  if (static_cast<int>(out.size()) != n / 2 + 1) throw std::invalid_argument("forward_real: size");
  const PlanPair& plans = plans_for(n);
  // r2c does not modify its input, the cast only satisfies the C signature.
  fftw_execute_dft_r2c(plans.forward, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void inverse_real(std::span<const std::complex<double>> in, std::span<double> out) {
  const int n = static_cast<int>(out.size());
  if (static_cast<int>(in.size()) != n / 2 + 1) throw std::invalid_argument("inverse_real: size");
  const PlanPair& plans = plans_for(n);
  std::vector<std::complex<double>> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(plans.inverse, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
}

void inverse_real_inplace(std::span<std::complex<double>> in, std::span<double> out) {
  const int n = static_cast<int>(out.size());
  if (static_cast<int>(in.size()) != n / 2 + 1) throw std::invalid_argument("inverse_real: size");
  fftw_execute_dft_c2r(plans_for(n).inverse, reinterpret_cast<fftw_complex*>(in.data()), out.data());
}

}  // namespace muskat::detail
