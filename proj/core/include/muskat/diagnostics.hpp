#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "muskat/energy.hpp"
#include "muskat/params.hpp"

namespace muskat {

class InsufficientRecords : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct MonotoneVerdict {
  bool pass = true;
  int first_violation = -1;  ///< index i with E(t_i) > E(t_{i-1}) (1 + slack)
  double max_relative_increase = 0.0;
  bool strictly_decreasing = true;
  int records = 0;
};

/// E(t_{i+1}) <= E(t_i) (1 + slack) for all consecutive records.
MonotoneVerdict check_monotone_decay(const std::vector<EnergyRecord>& records, double slack = 1e-9);

enum class DecayStatus { Pass, Fail, IdenticallyZero, NotApplicable };
std::string_view to_string(DecayStatus s);

struct DecayFit {
  DecayStatus status = DecayStatus::NotApplicable;
  double rate = 0.0;  ///< least-squares slope of -log |h|_A0 against t
  double rate_first_half = 0.0;
  double rate_second_half = 0.0;
  double halves_relative_gap = 0.0;
  bool halves_agree = false;  ///< gap <= 10%, reported only
  double threshold = 0.0;     ///< tanh(1)/2 - 0.05
  int records = 0;
  std::string reason;
};

/// Fits |h(t)|_A0 ~ exp(-rate t). Asserted only for finite-depth WNL with
/// chi = 1 and lambda > 0; other parameter sets return NotApplicable.
/// Throws InsufficientRecords for fewer than 20 records.
DecayFit check_exponential_decay(const std::vector<EnergyRecord>& records, const ModelParams& p);

struct DyadicTrend {
  bool pass = true;
  std::vector<double> window_start;
  std::vector<double> window_max;  ///< max |h|_A0 over each nonempty window
  int first_violation = -1;
};

/// Windows [0, T/2^w], (T/2^w, T/2^{w-1}], ..., (T/2, T] with T the last
/// record time; the windowed maxima of |h|_A0 must not increase (1e-9 slack).
DyadicTrend check_dyadic_trend(const std::vector<EnergyRecord>& records, int windows = 5);

/// max |E - (a0 + w a_high)| / max(1, E) over records.
double energy_consistency(const std::vector<EnergyRecord>& records, const ModelParams& p);

struct BoundReport {
  int samples = 0;
  std::uint64_t seed = 0;
  int n_modes = 0;
  double ell0_a0_max = 0.0;        ///< max_k 1 / l0(k) and ensemble |L0^{-1}F|_A0 / |F|_A0
  double ell0_high_max = 0.0;      ///< max_k w |k|^3 / l0(k)
  double ell0_combined_max = 0.0;  ///< ensemble (|L0^{-1}F|_A0 + w |L0^{-1}F|_A3) / |F|_A0
  /// sqrt(2 pi) |I_A|_A0 / (|h|_A1 |V|_A3); the factor makes the ratio
  /// independent of the Fourier normalization.
  double ia_ratio_max = 0.0;
  double i_ratio_sup = 0.0;  ///< same normalization for the full I
  double i_ratio_first_half = 0.0;
  double i_ratio_second_half = 0.0;
  bool i_ratio_stable = false;  ///< halves agree within 10%
  bool pass = false;
};

/// Random pairs (h, V) with spectral decay p in {2, 3, 4}; asserts the
/// exact inequalities 1/l0 <= 1, w |k|^3/l0 <= 1, combined ratio <= 1 and the
/// I_A ratio <= 2, each with 1e-12 relative slack. The sup of the I ratio is
/// reported and its two-halves stability asserted.
BoundReport check_operator_bounds(int sample_count, const ModelParams& p, std::uint64_t seed,
                                  int n_modes = 64);

void to_json(nlohmann::json& j, const MonotoneVerdict& v);
void to_json(nlohmann::json& j, const DecayFit& f);
void to_json(nlohmann::json& j, const DyadicTrend& d);
void to_json(nlohmann::json& j, const BoundReport& r);

}  // namespace muskat
