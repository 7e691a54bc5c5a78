#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "circcs/diagnostics/oracle.hpp"
#include "circcs/sensing.hpp"

using namespace circcs;
namespace diag = circcs::diagnostics;

TEST(GenerateSeed, Deterministic) {
  const SensingConfig cfg{256, 64, 42};
  const auto a = generate_seed(cfg);
  const auto b = generate_seed(cfg);
  EXPECT_EQ(a.values(), b.values());
  EXPECT_EQ(a.label(), b.label());
  EXPECT_EQ(a.size(), 256U);
}

TEST(GenerateSeed, DifferentPrngSeedsDiffer) {
  const auto a = generate_seed({64, 16, 1});
  const auto b = generate_seed({64, 16, 2});
  EXPECT_NE(a.values(), b.values());
  EXPECT_NE(a.label(), b.label());
}

TEST(GenerateSeed, GaussianMoments) {
  const auto s = generate_seed({4096, 1, 7});
  const auto v = s.values();
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= v.size();
  EXPECT_LT(std::abs(mean), 0.1);
  EXPECT_LT(std::abs(var - 1.0), 0.1);
}

TEST(GenerateSeed, InvalidConfig) {
  EXPECT_THROW(generate_seed({0, 0, 1}), DimensionError);
  EXPECT_THROW(generate_seed({8, 9, 1}), DimensionError);
  EXPECT_THROW(generate_seed({8, 0, 1}), DimensionError);
}

TEST(Acquire, UnitSeedSelectsLeadingEntries) {
  const auto y = acquire(Seed({1, 0, 0, 0, 0}), 3, Signal({1, 2, 3, 4, 5}));
  EXPECT_EQ(y.values(), (std::vector<double>{1, 2, 3}));
  EXPECT_TRUE(y.mask().all_valid());
}

TEST(Acquire, CarriesSeedLabel) {
  const auto seed = generate_seed({16, 4, 3});
  const auto y = acquire(seed, 4, Signal(gaussian_samples(16, 9)));
  ASSERT_TRUE(y.seed_ref().has_value());
  EXPECT_EQ(*y.seed_ref(), seed.label());
}

TEST(Acquire, MatchesDenseAndIsLinear) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 4 + rng() % 60;
    const std::size_t m = 1 + rng() % n;
    const Seed seed(gaussian_samples(n, rng()));
    const auto x1 = gaussian_samples(n, rng());
    const auto x2 = gaussian_samples(n, rng());
    const double a = 1.5, b = -0.25;
    std::vector<double> mix(n);
    for (std::size_t i = 0; i < n; ++i) mix[i] = a * x1[i] + b * x2[i];

    const auto y1 = acquire(seed, m, Signal(x1));
    const auto y2 = acquire(seed, m, Signal(x2));
    const auto ym = acquire(seed, m, Signal(mix));
    std::vector<double> combo(m);
    for (std::size_t i = 0; i < m; ++i) combo[i] = a * y1[i] + b * y2[i];
    EXPECT_LE(diag::max_relative_error(ym.data(), combo), 1e-12);

    const auto dense = diag::dense_partial_circulant(seed.data(), m) * std::span<const double>(x1);
    EXPECT_LE(diag::max_relative_error(y1.data(), dense), 1e-12);
  }
}

TEST(Acquire, LengthMismatch) {
  EXPECT_THROW(acquire(Seed({1, 2, 3}), 2, Signal({1, 2})), DimensionError);
  EXPECT_THROW(acquire(Seed({1, 2, 3}), 4, Signal({1, 2, 3})), DimensionError);
}

TEST(AcquireDecimated, UnitSeedExample) {
  // N = 8, m = 2: row 2 of the unit-seed circulant picks the stuffed zero.
  const auto y = acquire_decimated(Seed({1, 0, 0, 0, 0, 0, 0, 0}), 2, Signal({3.5, 1, 2, 4}));
  EXPECT_EQ(y.values(), (std::vector<double>{3.5, 0.0}));
}

TEST(AcquireDecimated, EqualsZeroStuffedAcquisitionExactly) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 50; ++t) {
    const std::size_t half = 2 + rng() % 40;
    const std::size_t m = 1 + rng() % (2 * half);
    const Seed seed(gaussian_samples(2 * half, rng()));
    const Signal x(gaussian_samples(half, rng()));
    const auto dec = acquire_decimated(seed, m, x);
    const auto full = acquire(seed, m, Signal(zero_stuff(x.data())));
    EXPECT_EQ(dec.values(), full.values());
  }
}

TEST(AcquireDecimated, Errors) {
  EXPECT_THROW(acquire_decimated(Seed({1, 2, 3}), 2, Signal({1.0})), DimensionError);
  EXPECT_THROW(acquire_decimated(Seed({1, 2, 3, 4}), 2, Signal({1.0})), DimensionError);
}

TEST(ZeroStuff, Layout) {
  const std::vector<double> x{1, 2, 3};
  EXPECT_EQ(zero_stuff(x), (std::vector<double>{1, 0, 2, 0, 3, 0}));
}

TEST(AcquireEvenOdd, SplitSumsToFullAcquisitionExactly) {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 * (2 + rng() % 40);
    const std::size_t m = 1 + rng() % n;
    const Seed seed(gaussian_samples(n, rng()));
    const Signal x(gaussian_samples(n, rng()));
    const auto eo = acquire_even_odd(seed, m, x);
    const auto y = acquire(seed, m, x);
    for (std::size_t i = 0; i < m; ++i) EXPECT_EQ(eo.even[i] + eo.odd[i], y[i]) << i;
  }
}

TEST(AcquireEvenOdd, StreamsSenseOneParity) {
  const Seed seed(gaussian_samples(8, 1));
  const Signal x({1, 2, 3, 4, 5, 6, 7, 8});
  const auto eo = acquire_even_odd(seed, 4, x);
  const auto even = acquire(seed, 4, Signal({1, 0, 3, 0, 5, 0, 7, 0}));
  const auto odd = acquire(seed, 4, Signal({0, 2, 0, 4, 0, 6, 0, 8}));
  EXPECT_EQ(eo.even.values(), even.values());
  EXPECT_EQ(eo.odd.values(), odd.values());
}

TEST(AcquireEvenOdd, OddLengthRejected) {
  EXPECT_THROW(acquire_even_odd(Seed({1, 2, 3}), 2, Signal({1, 2, 3})), DimensionError);
}
