#ifndef CIRCCS_DIAGNOSTICS_ORACLE_HPP
#define CIRCCS_DIAGNOSTICS_ORACLE_HPP

// Brute-force references. Everything in this header works on explicit dense
// matrices and plain index arithmetic in the signal domain, never through
// shift_combine or the FFT kernel, so it can certify those paths.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "circcs/circulant.hpp"
#include "circcs/core.hpp"
#include "circcs/dense.hpp"

namespace circcs::diagnostics {

inline constexpr double match_tolerance = 1e-9;   // relative, |a-b| <= tol (1 + |b|)
inline constexpr double differ_tolerance = 1e-6;  // absolute

using circcs::materialize;

/// m x n partial circulant written out from the seed: A(r, c) = seed[(c - r) mod n].
inline DenseMatrix dense_partial_circulant(std::span<const double> seed, std::size_t m) {
  const std::size_t n = seed.size();
  DenseMatrix a(m, n);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) a(r, c) = seed[(c + n - r % n) % n];
  }
  return a;
}

/// Square filter matrix H for the given convention.
inline DenseMatrix dense_filter_matrix(const FilterSpec& h, std::size_t n) {
  DenseMatrix out(n, n);
  const auto taps = h.taps();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < taps.size(); ++j) {
      if (h.convention() == Convention::FirstRow) {
        out(r, (r + j) % n) += taps[j];  // (Hx)_r = sum_j h_j x_{r+j}
      } else {
        out(r, (r + n - j % n) % n) += taps[j];  // (Hx)_r = sum_j h_j x_{r-j}
      }
    }
  }
  return out;
}

/// out_i = x_{(i - s) mod n}
inline std::vector<double> shifted_signal(std::span<const double> x, std::ptrdiff_t s) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  std::vector<double> out(x.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    std::ptrdiff_t src = (i - s) % n;
    if (src < 0) src += n;
    out[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(src)];
  }
  return out;
}

using SignalProcess = std::function<std::vector<double>(std::span<const double>)>;

/// Ground truth: process x in the signal domain, then multiply by the dense
/// m x N partial circulant of `seed`.
inline std::vector<double> dense_processed_measurements(std::span<const double> seed,
                                                        std::size_t m,
                                                        std::span<const double> x,
                                                        const SignalProcess& process) {
  const std::vector<double> px = process ? process(x) : std::vector<double>(x.begin(), x.end());
  if (px.size() != seed.size()) {
    throw DimensionError("dense_processed_measurements: processed signal length differs from seed");
  }
  return dense_partial_circulant(seed, m) * std::span<const double>(px);
}

inline std::vector<double> dense_processed_measurements(const Seed& seed, std::size_t m,
                                                        const Signal& x,
                                                        const SignalProcess& process) {
  return dense_processed_measurements(seed.data(), m, x.data(), process);
}

/// Row j (1-based) of a node ensemble: base row circularly right-shifted by
/// (j - 1) * step, for every base row.
inline DenseMatrix dense_node_matrix(const DenseMatrix& base_rows, std::size_t node,
                                     std::size_t step) {
  const std::size_t n = base_rows.cols();
  const std::size_t shift = ((node - 1) * step) % n;
  DenseMatrix out(base_rows.rows(), n);
  for (std::size_t r = 0; r < base_rows.rows(); ++r) {
    for (std::size_t c = 0; c < n; ++c) out(r, (c + shift) % n) = base_rows(r, c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reference periodic spline 5/3 lifting on raw samples.
//   d_k = o_k - (e_k + e_{k+1}) / 2
//   s_k = e_k + (d_{k-1} + d_k) / 4
//   theta = interleave(K0 s, K1 d),  K0 = 1, K1 = 1/2
// with e_k = x_{2k}, o_k = x_{2k+1} and indices taken modulo n/2.

inline constexpr double reference_gain_low = 1.0;
inline constexpr double reference_gain_high = 0.5;

inline WaveletCoefficients reference_lifting_53(std::span<const double> x) {
  if (x.empty() || x.size() % 2 != 0) throw DimensionError("reference_lifting_53: n must be even");
  const std::size_t half = x.size() / 2;
  std::vector<double> e(half);
  std::vector<double> o(half);
  for (std::size_t k = 0; k < half; ++k) {
    e[k] = x[2 * k];
    o[k] = x[2 * k + 1];
  }
  std::vector<double> d(half);
  for (std::size_t k = 0; k < half; ++k) d[k] = o[k] - 0.5 * (e[k] + e[(k + 1) % half]);
  std::vector<double> s(half);
  for (std::size_t k = 0; k < half; ++k) s[k] = e[k] + 0.25 * (d[(k + half - 1) % half] + d[k]);
  std::vector<double> theta(x.size());
  for (std::size_t k = 0; k < half; ++k) {
    theta[2 * k] = reference_gain_low * s[k];
    theta[2 * k + 1] = reference_gain_high * d[k];
  }
  return WaveletCoefficients(std::move(theta));
}

inline WaveletCoefficients reference_lifting_53(const Signal& x) {
  return reference_lifting_53(x.data());
}

/// Inverse of reference_lifting_53; used only to self-check the reference.
inline std::vector<double> reference_inverse_53(const WaveletCoefficients& theta) {
  const std::size_t half = theta.size() / 2;
  std::vector<double> s(half);
  std::vector<double> d(half);
  for (std::size_t k = 0; k < half; ++k) {
    s[k] = theta.low(k) / reference_gain_low;
    d[k] = theta.high(k) / reference_gain_high;
  }
  std::vector<double> e(half);
  for (std::size_t k = 0; k < half; ++k) e[k] = s[k] - 0.25 * (d[(k + half - 1) % half] + d[k]);
  std::vector<double> x(theta.size());
  for (std::size_t k = 0; k < half; ++k) {
    x[2 * k] = e[k];
    x[2 * k + 1] = d[k] + 0.5 * (e[k] + e[(k + 1) % half]);
  }
  return x;
}

// ---------------------------------------------------------------------------
// Comparison helpers

/// 1-based indices where |a_i - b_i| <= tol (1 + |b_i|).
inline std::vector<std::size_t> discover_valid_set(std::span<const double> result,
                                                   std::span<const double> truth,
                                                   double tol = match_tolerance) {
  if (result.size() != truth.size()) throw DimensionError("discover_valid_set: lengths differ");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < result.size(); ++i) {
    if (std::abs(result[i] - truth[i]) <= tol * (1.0 + std::abs(truth[i]))) out.push_back(i + 1);
  }
  return out;
}

inline std::vector<std::size_t> discover_valid_set(const MaskedMeasurements& result,
                                                   std::span<const double> truth,
                                                   double tol = match_tolerance) {
  return discover_valid_set(result.data(), truth, tol);
}

/// Largest relative error |a-b| / (1 + |b|) over entries flagged valid.
inline double max_valid_error(const MaskedMeasurements& result, std::span<const double> truth) {
  if (result.size() != truth.size()) throw DimensionError("max_valid_error: lengths differ");
  double worst = 0.0;
  for (std::size_t i = 0; i < result.size(); ++i) {
    if (!result.mask()[i]) continue;
    worst = std::max(worst, std::abs(result[i] - truth[i]) / (1.0 + std::abs(truth[i])));
  }
  return worst;
}

/// Smallest absolute deviation over entries flagged invalid; +inf if none.
inline double min_invalid_deviation(const MaskedMeasurements& result,
                                    std::span<const double> truth) {
  if (result.size() != truth.size()) throw DimensionError("min_invalid_deviation: lengths differ");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < result.size(); ++i) {
    if (result.mask()[i]) continue;
    best = std::min(best, std::abs(result[i] - truth[i]));
  }
  return best;
}

/// Largest |a-b| / (1 + |b|) over all entries.
inline double max_relative_error(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("max_relative_error: lengths differ");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]) / (1.0 + std::abs(b[i])));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Registration under a reseeded matrix.
//
// For v = Phi x_{->s} there are two candidate reseeded matrices Phi' with
// v = Phi' x: the one seeded by row (n - s + 1) of the full circulant and the
// one seeded by row (m - s + 1). Both are probed here with a dense product.

struct ReseedCalibration {
  std::size_t derived_row = 0;  ///< 1-based row n - s + 1 (mod n)
  std::size_t alternate_row = 0;  ///< 1-based row m - s + 1 (mod n)
  bool derived_ok = false;
  bool alternate_ok = false;

  /// 1-based row that verified; derived row wins when both do.
  std::size_t verified_row() const {
    if (derived_ok) return derived_row;
    if (alternate_ok) return alternate_row;
    return 0;
  }
};

inline std::size_t full_circulant_row(std::ptrdiff_t one_based, std::size_t n) {
  return detail::wrap_index(one_based - 1, n) + 1;
}

/// Seed of the given 1-based row of the full circulant: the seed circularly
/// right-shifted by row - 1.
inline std::vector<double> circulant_row(std::span<const double> seed, std::size_t row) {
  return shifted_signal(seed, static_cast<std::ptrdiff_t>(row) - 1);
}

inline ReseedCalibration calibrate_reseed(std::span<const double> seed, std::size_t m,
                                          std::ptrdiff_t s, std::uint64_t probe_seed = 0x5eed) {
  const std::size_t n = seed.size();
  ReseedCalibration cal;
  cal.derived_row = full_circulant_row(static_cast<std::ptrdiff_t>(n) - s + 1, n);
  cal.alternate_row = full_circulant_row(static_cast<std::ptrdiff_t>(m) - s + 1, n);

  // Deterministic probe: a fixed LCG sequence in (-1, 1).
  std::vector<double> probe(n);
  std::uint64_t state = probe_seed;
  for (auto& p : probe) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    p = static_cast<double>(state >> 11) / static_cast<double>(1ULL << 53) * 2.0 - 1.0;
  }
  const auto truth = dense_partial_circulant(seed, m) * std::span<const double>(shifted_signal(probe, s));
  auto verifies = [&](std::size_t row) {
    const auto alt = circulant_row(seed, row);
    const auto got = dense_partial_circulant(alt, m) * std::span<const double>(probe);
    return discover_valid_set(got, truth).size() == m;
  };
  cal.derived_ok = verifies(cal.derived_row);
  cal.alternate_ok = verifies(cal.alternate_row);
  return cal;
}

}  // namespace circcs::diagnostics

#endif  // CIRCCS_DIAGNOSTICS_ORACLE_HPP
