#ifndef CIRCCS_SENSING_HPP
#define CIRCCS_SENSING_HPP

// Seed generation and the three acquisition modes: plain partial circulant,
// column-decimated (for x2 interpolation) and even/odd split (for lifting).
//
// Parity: "even samples" are x_0, x_2, ... in 0-based terms, i.e. 1-based
// positions 1, 3, 5, ...  Decimated acquisition keeps columns 2i-1
// (1-based) of the circulant, which are the same physical columns.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "circcs/circulant.hpp"
#include "circcs/core.hpp"

namespace circcs {

enum class Distribution { Gaussian };

struct SensingConfig {
  std::size_t n = 0;
  std::size_t m = 0;
  std::uint64_t prng_seed = 0;
  Distribution distribution = Distribution::Gaussian;

  void validate() const {
    if (n < 1 || m < 1 || m > n) throw DimensionError("SensingConfig: need 1 <= m <= n");
  }
};

/// i.i.d. standard normal samples from a seeded mt19937_64. Reproducible
/// within one build; not a cross-platform fixture.
inline std::vector<double> gaussian_samples(std::size_t n, std::uint64_t prng_seed) {
  std::mt19937_64 rng(prng_seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& v : out) v = dist(rng);
  return out;
}

inline std::string default_seed_label(const SensingConfig& cfg) {
  return "gaussian-n" + std::to_string(cfg.n) + "-p" + std::to_string(cfg.prng_seed);
}

inline Seed generate_seed(const SensingConfig& cfg) {
  cfg.validate();
  return Seed(gaussian_samples(cfg.n, cfg.prng_seed), default_seed_label(cfg));
}

inline std::optional<std::string> seed_ref_of(const Seed& seed) {
  if (seed.label().empty()) return std::nullopt;
  return seed.label();
}

/// y = Phi x with Phi the m x n partial circulant of `seed`. Always uses the
/// two-lane direct kernel.
inline MaskedMeasurements acquire(const Seed& seed, std::size_t m, const Signal& x) {
  if (x.size() != seed.size()) throw DimensionError("acquire: signal and seed lengths differ");
  const CirculantSpec phi(seed, m);
  return MaskedMeasurements::fully_valid(apply(phi, x, Kernel::Direct), seed_ref_of(seed));
}

/// Length-2n vector with x at 0-based even positions and zeros between.
inline std::vector<double> zero_stuff(std::span<const double> x) {
  std::vector<double> up(2 * x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) up[2 * i] = x[i];
  return up;
}

/// Phi^ x where column i of Phi^ is column 2i-1 (1-based) of the m x N
/// partial circulant, N = 2n. Equal to acquire(seed, m, zero_stuff(x)).
inline MaskedMeasurements acquire_decimated(const Seed& seed, std::size_t m, const Signal& x) {
  const std::size_t big_n = seed.size();
  if (big_n % 2 != 0) throw DimensionError("acquire_decimated: seed length must be even");
  if (x.size() * 2 != big_n) throw DimensionError("acquire_decimated: signal length must be N/2");
  if (m < 1 || m > big_n) throw DimensionError("acquire_decimated: need 1 <= m <= N");
  const auto phi = seed.data();
  std::vector<double> y(m);
  for (std::size_t i = 0; i < m; ++i) {
    // Same lane order as detail::correlate_direct; the odd lane only ever
    // sees the stuffed zeros.
    double lane[2] = {0.0, 0.0};
    for (std::size_t c = 0; c < x.size(); ++c) {
      const std::size_t k = 2 * c;
      lane[0] += phi[detail::wrap_index(static_cast<std::ptrdiff_t>(k) - static_cast<std::ptrdiff_t>(i), big_n)] * x[c];
    }
    y[i] = lane[0] + lane[1];
  }
  return MaskedMeasurements::fully_valid(std::move(y), seed_ref_of(seed));
}

/// x restricted to one parity, other entries zeroed.
inline Signal parity_part(const Signal& x, bool odd) {
  std::vector<double> out(x.size(), 0.0);
  for (std::size_t i = odd ? 1 : 0; i < x.size(); i += 2) out[i] = x[i];
  return Signal(std::move(out));
}

struct EvenOddMeasurements {
  MaskedMeasurements even;  ///< senses x_0, x_2, ... (low-band stream)
  MaskedMeasurements odd;   ///< senses x_1, x_3, ...
};

/// Measurements of the even and odd sample streams through the partial
/// circulant with the other parity's columns zeroed. even + odd reproduces
/// acquire(seed, m, x) exactly.
inline EvenOddMeasurements acquire_even_odd(const Seed& seed, std::size_t m, const Signal& x) {
  if (x.size() % 2 != 0) throw DimensionError("acquire_even_odd: signal length must be even");
  if (x.size() != seed.size()) throw DimensionError("acquire_even_odd: signal and seed lengths differ");
  return {acquire(seed, m, parity_part(x, false)), acquire(seed, m, parity_part(x, true))};
}

}  // namespace circcs

#endif  // CIRCCS_SENSING_HPP
