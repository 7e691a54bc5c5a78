#ifndef CIRCCS_DIAGNOSTICS_SCENARIOS_HPP
#define CIRCCS_DIAGNOSTICS_SCENARIOS_HPP

// Randomized self-certification runs. Each scenario drives one
// compressed-domain operation on seeded random data and compares it with the
// dense oracle: valid entries must match, the oracle-discovered valid set
// must equal the claimed one, and corrupted entries must genuinely differ.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "circcs/apps.hpp"
#include "circcs/circulant.hpp"
#include "circcs/core.hpp"
#include "circcs/diagnostics/oracle.hpp"
#include "circcs/filtering.hpp"
#include "circcs/multinode.hpp"
#include "circcs/sensing.hpp"

namespace circcs::diagnostics {

struct ScenarioReport {
  ScenarioReport(std::string scenario, std::size_t trial_count)
      : name(std::move(scenario)), trials(trial_count) {}

  std::string name;
  std::size_t trials = 0;
  bool passed = true;
  double max_valid_error = 0.0;                                      ///< relative
  double min_invalid_deviation = std::numeric_limits<double>::infinity();  ///< absolute
  double seconds = 0.0;
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void fail(std::string what) {
    passed = false;
    if (failures.size() < 20) failures.push_back(std::move(what));
  }
  void track(const MaskedMeasurements& got, std::span<const double> truth) {
    max_valid_error = std::max(max_valid_error, diagnostics::max_valid_error(got, truth));
    min_invalid_deviation = std::min(min_invalid_deviation, diagnostics::min_invalid_deviation(got, truth));
  }
};

namespace detail {

inline std::vector<std::size_t> range_1based(std::size_t first, std::size_t last) {
  std::vector<std::size_t> out;
  for (std::size_t i = first; i <= last; ++i) out.push_back(i);
  return out;
}

inline std::string describe(const std::vector<std::size_t>& v) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << '}';
  return os.str();
}

class TrialRng {
public:
  explicit TrialRng(std::uint64_t seed) : rng_(seed) {}
  std::uint64_t next_seed() { return rng_(); }
  std::vector<double> gaussian(std::size_t n) { return gaussian_samples(n, next_seed()); }
  std::size_t uniform(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }

private:
  std::mt19937_64 rng_;
};

// Common check: the mask, the oracle-discovered set and the claimed set agree,
// valid entries match and invalid ones differ.
inline void check_valid_set(ScenarioReport& rep, const std::string& tag, const MaskedMeasurements& got,
                            std::span<const double> truth, const std::vector<std::size_t>& claimed) {
  rep.track(got, truth);
  const auto discovered = discover_valid_set(got, truth);
  if (discovered != claimed) {
    rep.fail(tag + ": discovered valid set " + describe(discovered) + " != claimed " + describe(claimed));
  }
  if (got.mask().valid_indices() != claimed) {
    rep.fail(tag + ": mask " + describe(got.mask().valid_indices()) + " != claimed " + describe(claimed));
  }
  if (max_valid_error(got, truth) > match_tolerance) rep.fail(tag + ": valid entry error above 1e-9");
  if (min_invalid_deviation(got, truth) <= differ_tolerance) {
    rep.fail(tag + ": an invalid entry is within 1e-6 of the truth");
  }
}

inline FilterSpec random_filter(TrialRng& rng, std::size_t nf, Convention c) {
  auto taps = rng.gaussian(nf);
  return FilterSpec(std::move(taps), c);
}

}  // namespace detail

// Filtering a single partial-circulant acquisition; both conventions.
inline ScenarioReport scenario_theorem1(std::size_t trials, std::uint64_t prng_seed) {
  ScenarioReport rep{"theorem1", trials};
  detail::TrialRng rng(prng_seed);
  const std::size_t n = 256;
  const std::size_t m = 64;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t nf = 2 + t % 7;
    const Seed seed(rng.gaussian(n));
    const Signal x(rng.gaussian(n));
    const auto y = acquire(seed, m, x);
    for (Convention c : {Convention::FirstRow, Convention::FirstColumn}) {
      const auto h = detail::random_filter(rng, nf, c);
      const auto got = filter_measurements(y, h);
      const DenseMatrix hd = dense_filter_matrix(h, n);
      const auto truth = dense_processed_measurements(
          seed, m, x, [&](std::span<const double> s) { return hd * s; });
      const auto claimed = c == Convention::FirstRow ? detail::range_1based(1, m - nf + 1)
                                                     : detail::range_1based(nf, m);
      detail::check_valid_set(rep, "trial " + std::to_string(t) +
                                       (c == Convention::FirstRow ? " first-row" : " first-col") +
                                       " Nf=" + std::to_string(nf),
                              got, truth, claimed);
    }
  }
  return rep;
}

// Zero-row structure of the m-partial commutator and commutation of square
// circulants.
inline ScenarioReport scenario_commutator(std::size_t trials, std::uint64_t prng_seed) {
  ScenarioReport rep{"commutator", trials};
  detail::TrialRng rng(prng_seed);
  double worst_zero = 0.0;
  double weakest_nonzero = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t n = 8 * (1 + t % 8);  // 8..64
    // m < n: for m = n the partial commutator is the full one and vanishes
    const std::size_t m = rng.uniform(std::max<std::size_t>(2, n / 4), n - 1);
    const std::size_t nf = rng.uniform(2, std::min<std::size_t>(8, m));
    const CirculantSpec phi(Seed(rng.gaussian(n)), m);
    const auto h = filter_to_circulant(detail::random_filter(rng, nf, Convention::FirstRow), n);
    const DenseMatrix pc = partial_commutator(phi, h);
    for (std::size_t r = 0; r < m; ++r) {
      const double v = pc.row_max_abs(r);
      if (r < m - nf + 1) {
        worst_zero = std::max(worst_zero, v);
        if (v > 1e-12) rep.fail("trial " + std::to_string(t) + ": row " + std::to_string(r + 1) + " not zero");
      } else {
        weakest_nonzero = std::min(weakest_nonzero, v);
        if (v <= 1e-8) rep.fail("trial " + std::to_string(t) + ": row " + std::to_string(r + 1) + " vanished");
      }
    }
    const CirculantSpec a(Seed(rng.gaussian(n)), n);
    const CirculantSpec b(Seed(rng.gaussian(n)), n);
    const double comm = commutator(a, b).max_abs();
    worst_zero = std::max(worst_zero, comm);
    if (comm > 1e-12) rep.fail("trial " + std::to_string(t) + ": square circulants do not commute");
  }
  rep.max_valid_error = worst_zero;
  rep.min_invalid_deviation = weakest_nonzero;
  rep.notes.push_back("max |zero-row entry| and min |nonzero-row max| reported in the error columns");
  return rep;
}

// Multi-node filtering, the wrapped-index counterexample, the block
// commutator pattern and the stacked-matrix equivalence.
inline ScenarioReport scenario_theorem2(std::size_t trials, std::uint64_t prng_seed) {
  ScenarioReport rep{"theorem2", trials};
  detail::TrialRng rng(prng_seed);
  const std::size_t nodes = 8;
  const std::size_t m = 16;
  const std::size_t n = 64;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t nf = 2 + t % 3;
    const std::string tag = "trial " + std::to_string(t) + " Nf=" + std::to_string(nf);
    const auto ens = build_ensemble({n, m, rng.next_seed()}, nodes);
    const Signal x(rng.gaussian(n));
    const auto ys = acquire_all(ens, x);

    for (Convention c : {Convention::FirstColumn, Convention::FirstRow}) {
      const auto h = detail::random_filter(rng, nf, c);
      ExchangeLog log;
      const auto yf = distributed_filter(ys, h, log);
      const DenseMatrix hd = dense_filter_matrix(h, n);
      const auto hx = hd * x.data();
      for (std::size_t j = 1; j <= nodes; ++j) {
        const auto truth = dense_node_matrix(ens.base_rows(), j, 1) * std::span<const double>(hx);
        const bool expect_valid = c == Convention::FirstColumn ? j >= nf : j + nf - 1 <= nodes;
        const auto& got = yf[j - 1].y;
        if (expect_valid) {
          rep.track(got, truth);
          if (!got.mask().all_valid()) rep.fail(tag + ": node " + std::to_string(j) + " should be valid");
          if (discover_valid_set(got, truth).size() != m) {
            rep.fail(tag + ": node " + std::to_string(j) + " mismatches the dense oracle");
          }
        } else if (!got.mask().none_valid()) {
          rep.fail(tag + ": node " + std::to_string(j) + " should be flagged invalid");
        }
      }
      if (c != Convention::FirstColumn) continue;

      // The same recursion with node indices wrapped modulo J must fail below N_f.
      for (std::size_t j = 1; j < nf; ++j) {
        std::vector<double> wrapped(m, 0.0);
        const auto taps = h.taps();
        for (std::size_t i = 0; i < nf; ++i) {
          const std::size_t src = circcs::detail::wrap_index(static_cast<std::ptrdiff_t>(j) -
                                                                 static_cast<std::ptrdiff_t>(i) - 1,
                                                             nodes) + 1;
          for (std::size_t l = 0; l < m; ++l) wrapped[l] += taps[i] * ys[src - 1].y[l];
        }
        const auto truth = dense_node_matrix(ens.base_rows(), j, 1) * std::span<const double>(hx);
        double dev = 0.0;
        for (std::size_t l = 0; l < m; ++l) dev = std::max(dev, std::abs(wrapped[l] - truth[l]));
        rep.min_invalid_deviation = std::min(rep.min_invalid_deviation, dev);
        if (dev <= differ_tolerance) rep.fail(tag + ": wrapped computation matched at node " + std::to_string(j));
      }

      // Block pattern of the distributed partial commutator.
      const DenseMatrix stacked = stack_ensemble(ens);
      const DenseMatrix dpc = distributed_partial_commutator(stacked, filter_to_circulant(h, n), nodes, m);
      for (std::size_t j = 1; j <= nodes; ++j) {
        double block = 0.0;
        for (std::size_t r = 0; r < m; ++r) block = std::max(block, dpc.row_max_abs((j - 1) * m + r));
        if (j >= nf && block > 1e-12) rep.fail(tag + ": commutator block " + std::to_string(j) + " not zero");
        if (j < nf && block <= 1e-8) rep.fail(tag + ": commutator block " + std::to_string(j) + " vanished");
      }

      // Stacked matrix times x equals the concatenated node measurements.
      const auto stacked_y = stacked * x.data();
      for (std::size_t j = 0; j < nodes; ++j) {
        const auto part = std::span<const double>(stacked_y).subspan(j * m, m);
        if (max_relative_error(ys[j].y.data(), part) > 1e-12) {
          rep.fail(tag + ": stacked product differs at node " + std::to_string(j + 1));
        }
      }
    }
  }
  return rep;
}

inline ScenarioReport scenario_diff2(std::size_t trials, std::uint64_t prng_seed) {
  ScenarioReport rep{"diff2", trials};
  detail::TrialRng rng(prng_seed);
  const std::size_t n = 64;
  const std::size_t m = 16;
  for (std::size_t t = 0; t < trials; ++t) {
    const Seed seed(rng.gaussian(n));
    const Signal x(rng.gaussian(n));
    const auto got = second_difference(acquire(seed, m, x));
    const auto truth = dense_processed_measurements(seed, m, x, [](std::span<const double> s) {
      const auto r = shifted_signal(s, 1);
      const auto l = shifted_signal(s, -1);
      std::vector<double> out(s.size());
      for (std::size_t i = 0; i < s.size(); ++i) out[i] = r[i] - 2.0 * s[i] + l[i];
      return out;
    });
    detail::check_valid_set(rep, "trial " + std::to_string(t), got, truth, detail::range_1based(2, m - 1));
  }
  rep.notes.push_back("corrupted set is {1, m}: two entries, not only the first");
  return rep;
}

inline ScenarioReport scenario_interp2(std::size_t trials, std::uint64_t prng_seed) {
  ScenarioReport rep{"interp2", trials};
  detail::TrialRng rng(prng_seed);
  const std::size_t n = 32;
  const std::size_t big_n = 64;
  const std::size_t m = 16;
  auto interpolated = [](std::span<const double> x) {
    std::vector<double> up(2 * x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) up[2 * i] = x[i];
    const auto r = shifted_signal(up, 1);
    const auto l = shifted_signal(up, -1);
    for (std::size_t i = 0; i < up.size(); ++i) up[i] += 0.5 * (r[i] + l[i]);
    return up;
  };
  for (std::size_t t = 0; t < trials; ++t) {
    const Seed seed(rng.gaussian(big_n));
    const Signal x(rng.gaussian(n));
    const auto got = interpolate2(acquire_decimated(seed, m, x));
    const auto truth = dense_processed_measurements(seed.data(), m, x.data(), interpolated);
    detail::check_valid_set(rep, "trial " + std::to_string(t), got, truth, detail::range_1based(2, m - 1));
  }
  // Constant input: interpolation reproduces the constant.
  const Seed seed(rng.gaussian(big_n));
  const Signal c(std::vector<double>(n, 2.5));
  const auto got = interpolate2(acquire_decimated(seed, m, c));
  const auto truth = dense_partial_circulant(seed.data(), m) * std::span<const double>(std::vector<double>(big_n, 2.5));
  if (max_valid_error(got, truth) > match_tolerance) rep.fail("constant signal not reproduced");
  return rep;
}

inline ScenarioReport scenario_shift(std::size_t trials, std::uint64_t prng_seed) {
  ScenarioReport rep{"shift", trials};
  detail::TrialRng rng(prng_seed);
  const std::size_t n = 128;
  const std::size_t m = 32;
  const std::ptrdiff_t s_max = 31;
  double min_wrong = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < trials; ++t) {
    const Seed seed(rng.gaussian(n));
    const Signal x(rng.gaussian(n));
    const auto z = acquire(seed, m, x);
    for (std::ptrdiff_t s_star = -s_max; s_star <= s_max; ++s_star) {
      const auto v = acquire(seed, m, Signal(shifted_signal(x.data(), s_star)));
      const auto est = shift_retrieve(z, v, s_max);
      const std::string tag = "trial " + std::to_string(t) + " s*=" + std::to_string(s_star);
      rep.max_valid_error = std::max(rep.max_valid_error, est.residuals_by_s.at(s_star));
      if (est.s_hat != s_star) rep.fail(tag + ": retrieved " + std::to_string(est.s_hat));
      if (est.residuals_by_s.at(s_star) > 1e-10) rep.fail(tag + ": residual at true shift above 1e-10");
      for (const auto& [s, r] : est.residuals_by_s) {
        if (s != s_star) min_wrong = std::min(min_wrong, r);
      }
    }
  }
  rep.min_invalid_deviation = min_wrong;
  if (!(min_wrong > 1e-4)) rep.fail("a wrong shift has residual <= 1e-4");
  rep.notes.push_back("error columns: max residual at the true shift, min residual at any wrong shift");
  return rep;
}

inline ScenarioReport scenario_register(std::size_t trials, std::uint64_t prng_seed) {
  ScenarioReport rep{"register", trials};
  detail::TrialRng rng(prng_seed);
  const std::size_t n = 64;
  const std::size_t m = 16;
  std::size_t alternate_hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto s = static_cast<std::ptrdiff_t>(1 + t % 8);
    const std::string tag = "trial " + std::to_string(t) + " s=" + std::to_string(s);
    const Seed seed(rng.gaussian(n), "probe");
    const Signal x(rng.gaussian(n));
    const auto y = acquire(seed, m, x).values();
    const auto v = acquire(seed, m, Signal(shifted_signal(x.data(), s)));

    const auto same = register_shift(v, s, RegistrationMode::SameMatrix);
    const auto claimed = detail::range_1based(1, m - static_cast<std::size_t>(s));
    detail::check_valid_set(rep, tag + " same", same.measurements, y, claimed);

    const auto re = register_shift(v, s, RegistrationMode::ReseededMatrix, seed);
    const auto under_new = dense_partial_circulant(re.reseeded->data(), m) * x.data();
    const double err = max_relative_error(re.measurements.data(), under_new);
    rep.max_valid_error = std::max(rep.max_valid_error, err);
    if (err > match_tolerance) rep.fail(tag + ": v != Phi' x under the reseeded matrix");
    if (re.calibration->verified_row() != n - static_cast<std::size_t>(s) + 1) {
      rep.fail(tag + ": calibration picked row " + std::to_string(re.calibration->verified_row()));
    }
    if (re.calibration->alternate_ok) ++alternate_hits;
  }
  rep.notes.push_back("reseed row n-s+1 verified; row m-s+1 verified in " + std::to_string(alternate_hits) +
                      " of " + std::to_string(trials) + " trials");
  return rep;
}

inline ScenarioReport scenario_wavelet53(std::size_t trials, std::uint64_t prng_seed) {
  ScenarioReport rep{"wavelet53", trials};
  detail::TrialRng rng(prng_seed);
  const std::size_t n = 64;
  const std::size_t m = 16;
  auto coefficients = [](std::span<const double> s) { return reference_lifting_53(s).values(); };
  std::vector<std::size_t> claimed = detail::range_1based(3, m - 2);
  double round_trip = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const Seed seed(rng.gaussian(n));
    const Signal x(rng.gaussian(n));
    const auto split = acquire_even_odd(seed, m, x);
    const auto got = compressive_wavelet_53(split.even, split.odd);
    const auto truth = dense_processed_measurements(seed.data(), m, x.data(), coefficients);
    detail::check_valid_set(rep, "trial " + std::to_string(t), got, truth, claimed);

    const auto back = reference_inverse_53(reference_lifting_53(x));
    for (std::size_t i = 0; i < n; ++i) round_trip = std::max(round_trip, std::abs(back[i] - x[i]));
  }
  if (round_trip > 1e-12) rep.fail("reference lifting round trip error above 1e-12");
  rep.notes.push_back("reference lifting round-trip max error " + std::to_string(round_trip));

  const Seed seed(rng.gaussian(n));
  const Signal c(std::vector<double>(n, -1.75));
  const auto split = acquire_even_odd(seed, m, c);
  const auto got = compressive_wavelet_53(split.even, split.odd);
  const auto theta = reference_lifting_53(c);
  for (std::size_t k = 0; k < n / 2; ++k) {
    if (theta.high(k) != 0.0) rep.fail("constant signal produced nonzero detail");
  }
  const auto truth = dense_partial_circulant(seed.data(), m) * theta.data();
  if (max_valid_error(got, truth) > match_tolerance) rep.fail("constant signal mismatch");
  return rep;
}

inline ScenarioReport scenario_sensing(std::size_t trials, std::uint64_t prng_seed) {
  ScenarioReport rep{"sensing", trials};
  detail::TrialRng rng(prng_seed);
  const std::size_t n = 64;
  const std::size_t m = 16;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::string tag = "trial " + std::to_string(t);
    const Seed seed(rng.gaussian(n));
    const Signal x(rng.gaussian(n));
    const auto y = acquire(seed, m, x);
    const auto split = acquire_even_odd(seed, m, x);
    for (std::size_t i = 0; i < m; ++i) {
      if (split.even[i] + split.odd[i] != y[i]) {
        rep.fail(tag + ": y_e + y_o != y at " + std::to_string(i + 1));
        break;
      }
    }
    const Signal half(rng.gaussian(n / 2));
    const auto dec = acquire_decimated(seed, m, half);
    const auto stuffed = acquire(seed, m, Signal(zero_stuff(half.data())));
    for (std::size_t i = 0; i < m; ++i) {
      if (dec[i] != stuffed[i]) {
        rep.fail(tag + ": decimated != zero-stuffed at " + std::to_string(i + 1));
        break;
      }
    }
    const CirculantSpec phi(seed, m);
    const auto dense = dense_partial_circulant(seed.data(), m) * x.data();
    for (Kernel k : {Kernel::Fast, Kernel::Direct}) {
      const double err = max_relative_error(apply(phi, x, k), dense);
      rep.max_valid_error = std::max(rep.max_valid_error, err);
      if (err > 1e-12) rep.fail(tag + ": apply differs from dense product");
    }
  }
  return rep;
}

struct ScenarioInfo {
  std::string_view name;
  std::size_t default_trials;
  ScenarioReport (*run)(std::size_t, std::uint64_t);
};

inline const std::vector<ScenarioInfo>& scenarios() {
  static const std::vector<ScenarioInfo> list{
      {"theorem1", 100, scenario_theorem1},   {"commutator", 20, scenario_commutator},
      {"theorem2", 50, scenario_theorem2},    {"diff2", 100, scenario_diff2},
      {"interp2", 100, scenario_interp2},     {"shift", 4, scenario_shift},
      {"register", 50, scenario_register},    {"wavelet53", 100, scenario_wavelet53},
      {"sensing", 100, scenario_sensing},
  };
  return list;
}

inline const ScenarioInfo* find_scenario(std::string_view name) {
  for (const auto& s : scenarios()) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

/// Runs one scenario and stamps its wall time.
inline ScenarioReport run_scenario(const ScenarioInfo& info, std::size_t trials, std::uint64_t prng_seed) {
  const auto start = std::chrono::steady_clock::now();
  ScenarioReport rep = info.run(trials, prng_seed);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace circcs::diagnostics

#endif  // CIRCCS_DIAGNOSTICS_SCENARIOS_HPP
