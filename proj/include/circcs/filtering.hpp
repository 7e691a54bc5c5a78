#ifndef CIRCCS_FILTERING_HPP
#define CIRCCS_FILTERING_HPP

// Measurement-to-measurement filtering.
//
// Everything here reduces to one primitive: if y = Phi x for a partial
// circulant Phi, then sum_t c_t * (y circularly shifted by d_t) equals
// Phi (sum_t c_t x_{->d_t}) on every entry that survives mask_shift for all
// d_t. Filters, finite differences, interpolation and lifting steps are all
// lists of (offset, coefficient) terms.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "circcs/circulant.hpp"
#include "circcs/core.hpp"

namespace circcs {

/// One shifted, scaled copy. offset > 0 shifts right, offset < 0 left.
struct ShiftTerm {
  std::ptrdiff_t offset = 0;
  double coeff = 0.0;
};

inline MaskedMeasurements shift_combine(const MaskedMeasurements& y,
                                        std::span<const ShiftTerm> terms) {
  const std::size_t m = y.size();
  if (terms.empty()) throw DimensionError("shift_combine: no terms");
  std::vector<double> out(m, 0.0);
  ValidityMask mask = ValidityMask::all(m);
  for (const auto& t : terms) {
    // mask_shift range-checks the offset
    mask = mask_and(mask, mask_shift(y.mask(), t.offset));
    const auto shifted = circular_shift(y.data(), t.offset);
    for (std::size_t i = 0; i < m; ++i) out[i] += t.coeff * shifted[i];
  }
  return MaskedMeasurements(std::move(out), std::move(mask), y.seed_ref());
}

inline MaskedMeasurements shift_combine(const MaskedMeasurements& y,
                                        std::initializer_list<ShiftTerm> terms) {
  return shift_combine(y, std::span<const ShiftTerm>(terms.begin(), terms.size()));
}

/// a + scale * b on the intersection of both masks.
inline MaskedMeasurements add_scaled(const MaskedMeasurements& a, const MaskedMeasurements& b,
                                     double scale = 1.0) {
  if (a.size() != b.size()) throw DimensionError("add_scaled: lengths differ");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + scale * b[i];
  return MaskedMeasurements(std::move(out), mask_and(a.mask(), b.mask()), a.seed_ref());
}

inline MaskedMeasurements scaled(const MaskedMeasurements& a, double scale) {
  std::vector<double> out(a.values());
  for (auto& v : out) v *= scale;
  return MaskedMeasurements(std::move(out), a.mask(), a.seed_ref());
}

/// Shift terms of the filtered signal H x for either convention.
inline std::vector<ShiftTerm> filter_terms(const FilterSpec& h) {
  std::vector<ShiftTerm> terms;
  const auto taps = h.taps();
  const std::ptrdiff_t sign = h.convention() == Convention::FirstRow ? -1 : 1;
  for (std::size_t j = 0; j < taps.size(); ++j) {
    if (taps[j] == 0.0) continue;
    terms.push_back({sign * static_cast<std::ptrdiff_t>(j), taps[j]});
  }
  return terms;
}

/// Number of entries that survive filtering a fully valid vector of length m
/// with an N_f-tap filter.
constexpr std::size_t valid_count_after_filter(std::size_t m, std::size_t nf) {
  return m + 1 > nf ? m + 1 - nf : 0;
}

/// Measurements of the filtered signal Phi H x from y = Phi x.
///
/// FirstRow filters corrupt the last N_f - 1 entries, FirstColumn filters the
/// first N_f - 1. A filter with N_f > m leaves nothing valid; the result is
/// then fully invalid and carries a warning instead of throwing.
inline MaskedMeasurements filter_measurements(const MaskedMeasurements& y, const FilterSpec& h) {
  const std::size_t m = y.size();
  const std::size_t nf = h.length();
  if (nf > m) {
    std::vector<double> out(m, 0.0);
    const auto taps = h.taps();
    const std::ptrdiff_t sign = h.convention() == Convention::FirstRow ? -1 : 1;
    for (std::size_t j = 0; j < nf; ++j) {
      const auto shifted = circular_shift(y.data(), sign * static_cast<std::ptrdiff_t>(j));
      for (std::size_t i = 0; i < m; ++i) out[i] += taps[j] * shifted[i];
    }
    return MaskedMeasurements(std::move(out), ValidityMask::all(m, false), y.seed_ref())
        .with_warning("filter length " + std::to_string(nf) + " exceeds " + std::to_string(m) +
                      " measurements; acquire at least N_f - 1 extra measurements");
  }
  return shift_combine(y, filter_terms(h));
}

}  // namespace circcs

#endif  // CIRCCS_FILTERING_HPP
