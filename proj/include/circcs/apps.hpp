#ifndef CIRCCS_APPS_HPP
#define CIRCCS_APPS_HPP

// Compressed-domain applications built on shift_combine: second difference,
// x2 interpolation, integer shift retrieval, registration and the lifting
// wavelet transform.

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "circcs/circulant.hpp"
#include "circcs/core.hpp"
#include "circcs/diagnostics/oracle.hpp"
#include "circcs/filtering.hpp"

namespace circcs {

// ---------------------------------------------------------------------------
// Finite differences and interpolation

/// Measurements of x_{->1} - 2x + x_{<-1}. Entries 1 and m are corrupted.
inline MaskedMeasurements second_difference(const MaskedMeasurements& y) {
  if (y.size() < 3) throw DimensionError("second_difference: need at least 3 measurements");
  return shift_combine(y, {{+1, 1.0}, {0, -2.0}, {-1, 1.0}});
}

/// Piecewise-linear x2 interpolation. `y` must come from acquire_decimated,
/// so it already equals Phi x_up for the zero-stuffed x_up; the result holds
/// Phi x_int with x_int = x_up + (x_up,->1 + x_up,<-1) / 2 on entries 2..m-1.
inline MaskedMeasurements interpolate2(const MaskedMeasurements& y) {
  if (y.size() < 3) throw DimensionError("interpolate2: need at least 3 measurements");
  return shift_combine(y, {{+1, 0.5}, {0, 1.0}, {-1, 0.5}});
}

// ---------------------------------------------------------------------------
// Shift retrieval

enum class ResidualNorm {
  Raw,               ///< ||z~ - v~||_2 as is
  OverlapNormalized, ///< divided by sqrt(overlap length); for noisy data
};

struct ShiftEstimate {
  std::ptrdiff_t s_hat = 0;
  double residual = 0.0;
  std::map<std::ptrdiff_t, double> residuals_by_s;
};

/// Residual between the overlapping parts of z and v for a candidate shift s
/// (v assumed to measure x shifted right by s).
inline double shift_residual(std::span<const double> z, std::span<const double> v,
                             std::ptrdiff_t s, ResidualNorm norm = ResidualNorm::Raw) {
  const auto m = static_cast<std::ptrdiff_t>(z.size());
  const std::ptrdiff_t a = std::abs(s);
  const std::ptrdiff_t len = m - a;
  const std::ptrdiff_t z0 = s >= 0 ? 0 : a;
  const std::ptrdiff_t v0 = s >= 0 ? a : 0;
  double acc = 0.0;
  for (std::ptrdiff_t k = 0; k < len; ++k) {
    const double diff = z[static_cast<std::size_t>(z0 + k)] - v[static_cast<std::size_t>(v0 + k)];
    acc += diff * diff;
  }
  double r = std::sqrt(acc);
  if (norm == ResidualNorm::OverlapNormalized) r /= std::sqrt(static_cast<double>(len));
  return r;
}

/// Integer shift between the signals measured by z and v, by exhaustive
/// residual minimization over [-s_max, s_max].
///
/// Ties go to the smallest |s|, then to the positive candidate.
inline ShiftEstimate shift_retrieve(const MaskedMeasurements& z, const MaskedMeasurements& v,
                                    std::ptrdiff_t s_max, ResidualNorm norm = ResidualNorm::Raw) {
  const auto m = static_cast<std::ptrdiff_t>(z.size());
  if (z.size() != v.size()) throw DimensionError("shift_retrieve: z and v lengths differ");
  if (s_max < 0 || s_max >= m) throw RangeError("shift_retrieve: s_max must lie in [0, m)");
  if (!z.mask().all_valid() || !v.mask().all_valid()) {
    throw ValidationError("shift_retrieve: inputs must be uncorrupted acquisitions");
  }
  ShiftEstimate est;
  bool first = true;
  // visiting order 0, +1, -1, +2, -2, ... with a strict comparison gives the tie-break
  for (std::ptrdiff_t a = 0; a <= s_max; ++a) {
    for (std::ptrdiff_t s : {a, -a}) {
      if (a == 0 && s < 0) continue;
      const double r = shift_residual(z.data(), v.data(), s, norm);
      est.residuals_by_s[s] = r;
      if (first || r < est.residual) {
        est.s_hat = s;
        est.residual = r;
        first = false;
      }
    }
  }
  return est;
}

// ---------------------------------------------------------------------------
// Registration

enum class RegistrationMode {
  SameMatrix,     ///< shift the measurements back; |s| entries corrupted
  ReseededMatrix, ///< keep v, reinterpret it under a reseeded circulant
};

struct Registration {
  MaskedMeasurements measurements;
  std::optional<Seed> reseeded;  ///< ReseededMatrix only
  std::optional<diagnostics::ReseedCalibration> calibration;
};

/// Given v = Phi x_{->s}, recover measurements of x.
///
/// SameMatrix returns v shifted left by s: valid entries equal Phi x, and the
/// last s entries (first |s| for s < 0) are corrupted. ReseededMatrix returns
/// v untouched together with the seed of Phi' such that v = Phi' x; the row
/// of the full circulant that seeds Phi' is calibrated against a dense probe
/// (see diagnostics::calibrate_reseed) and needs the original seed.
inline Registration register_shift(const MaskedMeasurements& v, std::ptrdiff_t s,
                                   RegistrationMode mode,
                                   const std::optional<Seed>& seed = std::nullopt) {
  const auto m = static_cast<std::ptrdiff_t>(v.size());
  if (s >= m || -s >= m) throw RangeError("register_shift: |s| must be smaller than m");
  if (mode == RegistrationMode::SameMatrix) {
    return {shift_combine(v, {{-s, 1.0}}), std::nullopt, std::nullopt};
  }
  if (!seed) throw ValidationError("register_shift: reseeded mode needs the sensing seed");
  auto cal = diagnostics::calibrate_reseed(seed->data(), v.size(), s);
  const std::size_t row = cal.verified_row();
  if (row == 0) throw ValidationError("register_shift: no reseed candidate verified");
  std::string label = seed->label().empty() ? "seed" : seed->label();
  label += "-row" + std::to_string(row);
  Seed reseeded(diagnostics::circulant_row(seed->data(), row), label);
  MaskedMeasurements out(v.values(), v.mask(), label);
  return {std::move(out), std::move(reseeded), cal};
}

// ---------------------------------------------------------------------------
// Lifting wavelet transform

enum class LiftingKind { Predict, Update };

/// One lifting filter lambda(z) = taps[0] + taps[1] z^{+-1} followed by a
/// one-sample shift of its output. z is a one-sample delay of the subsampled
/// stream (two samples of the full-length signal). Predict steps use z^{+1}
/// and post_shift -1; update steps use z^{-1} and post_shift +1.
struct LiftingStep {
  LiftingKind kind = LiftingKind::Predict;
  std::array<double, 2> taps{};
  std::ptrdiff_t post_shift = -1;
};

struct LiftingScheme {
  std::vector<LiftingStep> steps;
  double gain_low = 1.0;
  double gain_high = 1.0;

  void validate() const {
    if (steps.empty()) throw ValidationError("LiftingScheme: at least one step required");
    if (gain_low == 0.0 || gain_high == 0.0) throw ValidationError("LiftingScheme: gains must be nonzero");
    for (const auto& st : steps) {
      if (!std::isfinite(st.taps[0]) || !std::isfinite(st.taps[1])) {
        throw ValidationError("LiftingScheme: non-finite tap");
      }
    }
  }

  /// Spline 5/3: predict -(1 + z)/2, update (1 + z^-1)/4, K0 = 1, K1 = 1/2.
  static LiftingScheme spline_53() {
    return {{{LiftingKind::Predict, {-0.5, -0.5}, -1}, {LiftingKind::Update, {0.25, 0.25}, +1}},
            1.0,
            0.5};
  }
};

/// Net measurement-domain shift terms of one lifting step.
inline std::vector<ShiftTerm> lifting_terms(const LiftingStep& step) {
  const std::ptrdiff_t lag = step.kind == LiftingKind::Predict ? 2 : -2;
  return {{step.post_shift, step.taps[0]}, {step.post_shift + lag, step.taps[1]}};
}

/// Measurements Phi theta of the interleaved single-level wavelet
/// coefficients, computed from the even/odd split measurements of
/// acquire_even_odd. For the 5/3 scheme the first two and last two entries
/// are corrupted.
inline MaskedMeasurements compressive_wavelet(const MaskedMeasurements& y_even,
                                              const MaskedMeasurements& y_odd,
                                              const LiftingScheme& scheme) {
  scheme.validate();
  if (y_even.size() != y_odd.size()) throw DimensionError("compressive_wavelet: stream lengths differ");
  MaskedMeasurements low = y_even;
  MaskedMeasurements high = y_odd;
  for (const auto& step : scheme.steps) {
    const auto terms = lifting_terms(step);
    if (step.kind == LiftingKind::Predict) {
      high = add_scaled(high, shift_combine(low, terms));
    } else {
      low = add_scaled(low, shift_combine(high, terms));
    }
  }
  return add_scaled(scaled(low, scheme.gain_low), high, scheme.gain_high);
}

inline MaskedMeasurements compressive_wavelet_53(const MaskedMeasurements& y_even,
                                                 const MaskedMeasurements& y_odd) {
  return compressive_wavelet(y_even, y_odd, LiftingScheme::spline_53());
}

}  // namespace circcs

#endif  // CIRCCS_APPS_HPP
