#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "circcs/core.hpp"

using circcs::DimensionError;
using circcs::RangeError;
using circcs::ValidityMask;

namespace {

ValidityMask mask_of(std::initializer_list<bool> v) { return ValidityMask(std::vector<bool>(v)); }

ValidityMask mask_from_bits(unsigned bits, std::size_t m) {
  std::vector<bool> v(m);
  for (std::size_t i = 0; i < m; ++i) v[i] = (bits >> i) & 1U;
  return ValidityMask(std::move(v));
}

ValidityMask random_mask(std::mt19937_64& rng, std::size_t m) {
  std::bernoulli_distribution coin(0.6);
  std::vector<bool> v(m);
  for (std::size_t i = 0; i < m; ++i) v[i] = coin(rng);
  return ValidityMask(std::move(v));
}

bool entrywise_le(const ValidityMask& a, const ValidityMask& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] && !b[i]) return false;
  }
  return true;
}

}  // namespace

TEST(MaskAnd, TruthTable) {
  EXPECT_EQ(circcs::mask_and(mask_of({true, true, false}), mask_of({true, false, false})),
            mask_of({true, false, false}));
}

TEST(MaskAnd, AllTrueIsIdentity) {
  std::mt19937_64 rng(3);
  for (std::size_t m : {1U, 4U, 17U}) {
    const auto ones = ValidityMask::all(m);
    EXPECT_EQ(circcs::mask_and(ones, ones), ones);
    const auto x = random_mask(rng, m);
    EXPECT_EQ(circcs::mask_and(ones, x), x);
  }
}

TEST(MaskAnd, LengthMismatchThrows) {
  EXPECT_THROW(circcs::mask_and(ValidityMask::all(3), ValidityMask::all(4)), DimensionError);
}

TEST(MaskAnd, AlgebraExhaustiveSmall) {
  for (std::size_t m = 1; m <= 4; ++m) {
    const unsigned count = 1U << m;
    for (unsigned a = 0; a < count; ++a) {
      const auto ma = mask_from_bits(a, m);
      EXPECT_EQ(circcs::mask_and(ma, ma), ma);
      for (unsigned b = 0; b < count; ++b) {
        const auto mb = mask_from_bits(b, m);
        EXPECT_EQ(circcs::mask_and(ma, mb), circcs::mask_and(mb, ma));
        for (unsigned c = 0; c < count; ++c) {
          const auto mc = mask_from_bits(c, m);
          EXPECT_EQ(circcs::mask_and(circcs::mask_and(ma, mb), mc),
                    circcs::mask_and(ma, circcs::mask_and(mb, mc)));
        }
      }
    }
  }
}

TEST(MaskAnd, AlgebraRandomized) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = 5 + static_cast<std::size_t>(t % 60);
    const auto a = random_mask(rng, m);
    const auto b = random_mask(rng, m);
    const auto c = random_mask(rng, m);
    EXPECT_EQ(circcs::mask_and(a, b), circcs::mask_and(b, a));
    EXPECT_EQ(circcs::mask_and(circcs::mask_and(a, b), c), circcs::mask_and(a, circcs::mask_and(b, c)));
    EXPECT_EQ(circcs::mask_and(a, a), a);
  }
}

TEST(MaskShift, Examples) {
  EXPECT_EQ(circcs::mask_shift(ValidityMask::all(4), 1), mask_of({false, true, true, true}));
  EXPECT_EQ(circcs::mask_shift(ValidityMask::all(4), 0), ValidityMask::all(4));
  EXPECT_EQ(circcs::mask_shift(ValidityMask::all(4), -2), mask_of({true, true, false, false}));
}

TEST(MaskShift, FollowsInputMask) {
  // right shift by 1 reads entry i-1
  EXPECT_EQ(circcs::mask_shift(mask_of({true, false, true, true}), 1), mask_of({false, true, false, true}));
  EXPECT_EQ(circcs::mask_shift(mask_of({true, false, true, true}), -1), mask_of({false, true, true, false}));
}

TEST(MaskShift, OutOfRangeThrows) {
  EXPECT_THROW(circcs::mask_shift(ValidityMask::all(4), 4), RangeError);
  EXPECT_THROW(circcs::mask_shift(ValidityMask::all(4), -4), RangeError);
  EXPECT_THROW(circcs::mask_shift(ValidityMask::all(1), 1), RangeError);
  EXPECT_NO_THROW(circcs::mask_shift(ValidityMask::all(1), 0));
}

TEST(MaskShift, ValidityNeverResurrects) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 300; ++t) {
    const std::size_t m = 2 + static_cast<std::size_t>(t % 30);
    const auto mask = random_mask(rng, m);
    const auto d = std::uniform_int_distribution<std::ptrdiff_t>(
        -static_cast<std::ptrdiff_t>(m) + 1, static_cast<std::ptrdiff_t>(m) - 1)(rng);
    const auto back = circcs::mask_shift(circcs::mask_shift(mask, d), -d);
    EXPECT_TRUE(entrywise_le(back, mask));
  }
}

TEST(ValidityMask, IndexListsAreOneBased) {
  const auto m = mask_of({false, true, true, false});
  EXPECT_EQ(m.invalid_indices(), (std::vector<std::size_t>{1, 4}));
  EXPECT_EQ(m.valid_indices(), (std::vector<std::size_t>{2, 3}));
  EXPECT_EQ(m.count_valid(), 2U);
}

TEST(Types, RejectNonFinite) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_THROW(circcs::Signal({1.0, nan}), circcs::ValidationError);
  EXPECT_THROW(circcs::Seed({inf}), circcs::ValidationError);
  EXPECT_THROW(circcs::MaskedMeasurements({nan}, ValidityMask::all(1)), circcs::ValidationError);
  EXPECT_THROW(circcs::FilterSpec({1.0, inf}, circcs::Convention::FirstRow), circcs::ValidationError);
}

TEST(Types, RejectEmptyAndMismatched) {
  EXPECT_THROW(circcs::Signal(std::vector<double>{}), DimensionError);
  EXPECT_THROW(circcs::MaskedMeasurements({1.0, 2.0}, ValidityMask::all(3)), DimensionError);
  EXPECT_THROW(circcs::WaveletCoefficients({1.0, 2.0, 3.0}), DimensionError);
}

TEST(Types, FilterNeedsNonzeroTap) {
  EXPECT_THROW(circcs::FilterSpec({0.0, 0.0}, circcs::Convention::FirstColumn), circcs::ValidationError);
  EXPECT_NO_THROW(circcs::FilterSpec({0.0, 2.0}, circcs::Convention::FirstColumn));
}

TEST(Types, WaveletAccessors) {
  const circcs::WaveletCoefficients w({1.0, 2.0, 3.0, 4.0});
  EXPECT_EQ(w.low(0), 1.0);
  EXPECT_EQ(w.high(0), 2.0);
  EXPECT_EQ(w.low(1), 3.0);
  EXPECT_EQ(w.high(1), 4.0);
}
