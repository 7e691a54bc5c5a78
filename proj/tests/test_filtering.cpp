#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "circcs/diagnostics/oracle.hpp"
#include "circcs/filtering.hpp"
#include "circcs/sensing.hpp"

using namespace circcs;
namespace diag = circcs::diagnostics;

namespace {

ValidityMask mask_of(std::initializer_list<bool> v) { return ValidityMask(std::vector<bool>(v)); }

struct Setup {
  Seed seed;
  Signal x;
  MaskedMeasurements y;
};

Setup make(std::size_t n, std::size_t m, std::uint64_t s) {
  Seed seed(gaussian_samples(n, s));
  Signal x(gaussian_samples(n, s + 1000));
  auto y = acquire(seed, m, x);
  return {std::move(seed), std::move(x), std::move(y)};
}

std::vector<double> truth_for_shift(const Setup& st, std::size_t m, std::ptrdiff_t s) {
  return diag::dense_processed_measurements(st.seed.data(), m, st.x.data(),
                                            [s](std::span<const double> v) { return diag::shifted_signal(v, s); });
}

}  // namespace

TEST(ShiftCombine, RightShiftMatchesDenseShiftedSignal) {
  const auto st = make(16, 6, 1);
  const auto r = shift_combine(st.y, {{+1, 1.0}});
  EXPECT_EQ(r.mask(), mask_of({false, true, true, true, true, true}));
  const auto truth = truth_for_shift(st, 6, 1);
  EXPECT_EQ(diag::discover_valid_set(r, truth), r.mask().valid_indices());
  EXPECT_LE(diag::max_valid_error(r, truth), 1e-12);
}

TEST(ShiftCombine, LeftShiftMatchesDenseShiftedSignal) {
  const auto st = make(16, 6, 2);
  const auto r = shift_combine(st.y, {{-1, 1.0}});
  EXPECT_EQ(r.mask(), mask_of({true, true, true, true, true, false}));
  EXPECT_EQ(diag::discover_valid_set(r, truth_for_shift(st, 6, -1)), r.mask().valid_indices());
}

TEST(ShiftCombine, ShiftByTwo) {
  const auto st = make(12, 5, 3);
  const auto r = shift_combine(st.y, {{+2, 1.0}});
  EXPECT_EQ(r.mask(), mask_of({false, false, true, true, true}));
  EXPECT_EQ(diag::discover_valid_set(r, truth_for_shift(st, 5, 2)), r.mask().valid_indices());
}

TEST(ShiftCombine, ZeroOffsetScales) {
  const auto st = make(8, 4, 4);
  const auto r = shift_combine(st.y, {{0, 2.0}});
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(r[i], 2.0 * st.y[i]);
  EXPECT_TRUE(r.mask().all_valid());
}

TEST(ShiftCombine, Errors) {
  const auto st = make(8, 4, 5);
  EXPECT_THROW(shift_combine(st.y, std::span<const ShiftTerm>{}), DimensionError);
  EXPECT_THROW(shift_combine(st.y, {{4, 1.0}}), RangeError);
}

TEST(FilterTerms, SignsFollowConvention) {
  const auto row = filter_terms(FilterSpec({1.0, 0.0, -2.0}, Convention::FirstRow));
  ASSERT_EQ(row.size(), 2U);
  EXPECT_EQ(row[0].offset, 0);
  EXPECT_EQ(row[1].offset, -2);
  EXPECT_EQ(row[1].coeff, -2.0);
  const auto col = filter_terms(FilterSpec({1.0, 3.0}, Convention::FirstColumn));
  EXPECT_EQ(col[1].offset, 1);
}

TEST(ValidCount, Examples) {
  static_assert(valid_count_after_filter(64, 3) == 62);
  EXPECT_EQ(valid_count_after_filter(4, 1), 4U);
  EXPECT_EQ(valid_count_after_filter(2, 5), 0U);
  EXPECT_EQ(valid_count_after_filter(5, 6), 0U);
  EXPECT_EQ(valid_count_after_filter(5, 5), 1U);
}

TEST(FilterMeasurements, IdentityFilter) {
  const auto st = make(16, 8, 6);
  for (Convention c : {Convention::FirstRow, Convention::FirstColumn}) {
    const auto r = filter_measurements(st.y, FilterSpec({1.0}, c));
    EXPECT_EQ(r.values(), st.y.values());
    EXPECT_TRUE(r.mask().all_valid());
  }
}

TEST(FilterMeasurements, TwoTapExamples) {
  const auto st = make(16, 4, 7);
  const auto row = filter_measurements(st.y, FilterSpec({1.0, 1.0}, Convention::FirstRow));
  EXPECT_EQ(row.mask().invalid_indices(), (std::vector<std::size_t>{4}));
  const auto col = filter_measurements(st.y, FilterSpec({1.0, 1.0}, Convention::FirstColumn));
  EXPECT_EQ(col.mask().invalid_indices(), (std::vector<std::size_t>{1}));
}

TEST(FilterMeasurements, MatchesDenseFilteredSignal) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 32 + rng() % 64;
    const std::size_t m = 8 + rng() % 20;
    const std::size_t nf = 1 + rng() % 6;
    const Convention conv = t % 2 == 0 ? Convention::FirstRow : Convention::FirstColumn;
    const FilterSpec h(gaussian_samples(nf, rng()), conv);
    const auto st = make(n, m, rng());
    const auto r = filter_measurements(st.y, h);
    const auto hmat = diag::dense_filter_matrix(h, n);
    const auto truth = diag::dense_processed_measurements(
        st.seed.data(), m, st.x.data(), [&](std::span<const double> v) { return hmat * v; });
    EXPECT_EQ(diag::discover_valid_set(r, truth), r.mask().valid_indices());
    EXPECT_EQ(r.mask().count_valid(), valid_count_after_filter(m, nf));
    EXPECT_GT(diag::min_invalid_deviation(r, truth), diag::differ_tolerance);
  }
}

TEST(FilterMeasurements, LongerThanMeasurementsWarns) {
  const auto st = make(16, 3, 8);
  const auto r = filter_measurements(st.y, FilterSpec({1, 2, 3, 4}, Convention::FirstRow));
  EXPECT_TRUE(r.mask().none_valid());
  EXPECT_TRUE(r.warning().has_value());
}

TEST(FilterMeasurements, LinearInTaps) {
  const auto st = make(32, 12, 9);
  const FilterSpec a({0.5, -1.0, 2.0}, Convention::FirstColumn);
  const FilterSpec b({1.5, 0.25, -0.75}, Convention::FirstColumn);
  const FilterSpec sum({2.0, -0.75, 1.25}, Convention::FirstColumn);
  const auto ra = filter_measurements(st.y, a);
  const auto rb = filter_measurements(st.y, b);
  const auto rs = filter_measurements(st.y, sum);
  const auto combo = add_scaled(ra, rb);
  EXPECT_EQ(combo.mask(), rs.mask());
  EXPECT_LE(diag::max_relative_error(combo.data(), rs.data()), 1e-12);
}

TEST(FilterMeasurements, CompositionAccumulatesCorruption) {
  const auto st = make(64, 20, 10);
  const FilterSpec h1({1.0, -1.0}, Convention::FirstRow);
  const FilterSpec h2({0.5, 0.5, 0.5}, Convention::FirstRow);
  const auto twice = filter_measurements(filter_measurements(st.y, h1), h2);
  EXPECT_EQ(twice.mask().count_valid(), 20U - 1U - 2U);
  const auto m1 = diag::dense_filter_matrix(h1, 64);
  const auto m2 = diag::dense_filter_matrix(h2, 64);
  const auto truth = diag::dense_processed_measurements(
      st.seed.data(), 20, st.x.data(), [&](std::span<const double> v) {
        const auto a = m1 * v;
        return m2 * std::span<const double>(a);
      });
  EXPECT_LE(diag::max_valid_error(twice, truth), 1e-12);
}

TEST(AddScaled, IntersectsMasks) {
  const MaskedMeasurements a({1, 2, 3}, mask_of({true, false, true}));
  const MaskedMeasurements b({1, 1, 1}, mask_of({true, true, false}));
  const auto r = add_scaled(a, b, 2.0);
  EXPECT_EQ(r.values(), (std::vector<double>{3, 4, 5}));
  EXPECT_EQ(r.mask(), mask_of({true, false, false}));
}
