#ifndef CIRCCS_CORE_HPP
#define CIRCCS_CORE_HPP

// Domain types shared by every module: signals, seeds, filters, validity
// masks and masked measurement vectors.
//
// Element access (operator[]) is 0-based. Index *sets* reported to callers
// (invalid_indices, corruption lists) are 1-based.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace circcs {

/// Thrown when operand shapes do not line up.
class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a shift, offset or count is outside its admissible range.
class RangeError : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

/// Thrown when values violate a type invariant (non-finite entries, ...).
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void require_finite(std::span<const double> v, const char* what) {
  for (double e : v) {
    if (!std::isfinite(e)) {
      throw ValidationError(std::string(what) + ": non-finite entry");
    }
  }
}

inline void require_nonempty(std::size_t n, const char* what) {
  if (n == 0) {
    throw DimensionError(std::string(what) + ": length must be at least 1");
  }
}

// ((a mod n) + n) mod n for signed a
inline std::size_t wrap_index(std::ptrdiff_t a, std::size_t n) {
  const auto sn = static_cast<std::ptrdiff_t>(n);
  auto r = a % sn;
  if (r < 0) r += sn;
  return static_cast<std::size_t>(r);
}

}  // namespace detail

/// A length-n real sequence.
class Signal {
public:
  explicit Signal(std::vector<double> data) : data_(std::move(data)) {
    detail::require_nonempty(data_.size(), "Signal");
    detail::require_finite(data_, "Signal");
  }

  std::size_t size() const noexcept { return data_.size(); }
  std::span<const double> data() const noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }
  double operator[](std::size_t i) const { return data_[i]; }

private:
  std::vector<double> data_;
};

/// First row of a circulant matrix. The optional label travels with
/// measurements so two measurement vectors can be checked for a shared
/// sensing matrix.
class Seed {
public:
  explicit Seed(std::vector<double> data, std::string label = {})
      : data_(std::move(data)), label_(std::move(label)) {
    detail::require_nonempty(data_.size(), "Seed");
    detail::require_finite(data_, "Seed");
  }

  std::size_t size() const noexcept { return data_.size(); }
  std::span<const double> data() const noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }
  const std::string& label() const noexcept { return label_; }
  double operator[](std::size_t i) const { return data_[i]; }

private:
  std::vector<double> data_;
  std::string label_;
};

/// Which side of the circulant filter matrix carries the taps.
///
/// FirstRow puts h in the first N_f positions of the first row, so the
/// filtered signal is sum_j h_j x_{<-j} and compressed-domain filtering
/// corrupts the tail. FirstColumn is true circular convolution,
/// sum_j h_j x_{->j}, and corrupts the head.
enum class Convention { FirstRow, FirstColumn };

class FilterSpec {
public:
  FilterSpec(std::vector<double> taps, Convention convention)
      : taps_(std::move(taps)), convention_(convention) {
    detail::require_nonempty(taps_.size(), "FilterSpec");
    detail::require_finite(taps_, "FilterSpec");
    if (std::all_of(taps_.begin(), taps_.end(), [](double t) { return t == 0.0; })) {
      throw ValidationError("FilterSpec: at least one tap must be nonzero");
    }
  }

  std::size_t length() const noexcept { return taps_.size(); }
  std::span<const double> taps() const noexcept { return taps_; }
  Convention convention() const noexcept { return convention_; }

private:
  std::vector<double> taps_;
  Convention convention_;
};

/// Per-entry validity of a measurement vector.
class ValidityMask {
public:
  explicit ValidityMask(std::vector<bool> valid) : valid_(std::move(valid)) {
    detail::require_nonempty(valid_.size(), "ValidityMask");
  }

  static ValidityMask all(std::size_t m, bool value = true) {
    return ValidityMask(std::vector<bool>(m, value));
  }

  std::size_t size() const noexcept { return valid_.size(); }
  bool operator[](std::size_t i) const { return valid_[i]; }
  const std::vector<bool>& values() const noexcept { return valid_; }

  std::size_t count_valid() const noexcept {
    return static_cast<std::size_t>(std::count(valid_.begin(), valid_.end(), true));
  }
  bool all_valid() const noexcept { return count_valid() == valid_.size(); }
  bool none_valid() const noexcept { return count_valid() == 0; }

  /// 1-based positions of corrupted entries, ascending.
  std::vector<std::size_t> invalid_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < valid_.size(); ++i) {
      if (!valid_[i]) out.push_back(i + 1);
    }
    return out;
  }

  /// 1-based positions of valid entries, ascending.
  std::vector<std::size_t> valid_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < valid_.size(); ++i) {
      if (valid_[i]) out.push_back(i + 1);
    }
    return out;
  }

  friend bool operator==(const ValidityMask&, const ValidityMask&) = default;

private:
  std::vector<bool> valid_;
};

inline ValidityMask mask_and(const ValidityMask& a, const ValidityMask& b) {
  if (a.size() != b.size()) {
    throw DimensionError("mask_and: masks have different lengths");
  }
  std::vector<bool> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && b[i];
  return ValidityMask(std::move(out));
}

/// Validity after circularly shifting a measurement vector by `offset`
/// (positive = right). A right shift by d invalidates the first d entries
/// because they wrap around from the tail of y, while the true measurements
/// of the shifted signal would come from rows of the full circulant that were
/// never acquired. Left shifts invalidate the last |d| entries.
inline ValidityMask mask_shift(const ValidityMask& mask, std::ptrdiff_t offset) {
  const auto m = static_cast<std::ptrdiff_t>(mask.size());
  if (offset >= m || -offset >= m) {
    throw RangeError("mask_shift: |offset| must be smaller than the mask length");
  }
  std::vector<bool> out(mask.size(), false);
  for (std::ptrdiff_t i = 0; i < m; ++i) {
    const std::ptrdiff_t src = i - offset;
    if (src >= 0 && src < m) out[static_cast<std::size_t>(i)] = mask[static_cast<std::size_t>(src)];
  }
  return ValidityMask(std::move(out));
}

/// A measurement vector with its validity mask.
///
/// Every entry flagged valid equals the matching entry of the measurement
/// vector the object stands for; invalid entries carry whatever the
/// compressed-domain arithmetic produced and must not be consumed.
class MaskedMeasurements {
public:
  MaskedMeasurements(std::vector<double> data, ValidityMask mask,
                     std::optional<std::string> seed_ref = std::nullopt)
      : data_(std::move(data)), mask_(std::move(mask)), seed_ref_(std::move(seed_ref)) {
    detail::require_nonempty(data_.size(), "MaskedMeasurements");
    if (data_.size() != mask_.size()) {
      throw DimensionError("MaskedMeasurements: data and mask lengths differ");
    }
    detail::require_finite(data_, "MaskedMeasurements");
  }

  /// All entries valid.
  static MaskedMeasurements fully_valid(std::vector<double> data,
                                        std::optional<std::string> seed_ref = std::nullopt) {
    const auto m = data.size();
    return MaskedMeasurements(std::move(data), ValidityMask::all(m), std::move(seed_ref));
  }

  std::size_t size() const noexcept { return data_.size(); }
  std::span<const double> data() const noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }
  double operator[](std::size_t i) const { return data_[i]; }
  const ValidityMask& mask() const noexcept { return mask_; }
  const std::optional<std::string>& seed_ref() const noexcept { return seed_ref_; }

  /// Set when an operation could not produce any valid entry (for instance
  /// a filter longer than the measurement vector).
  const std::optional<std::string>& warning() const noexcept { return warning_; }

  MaskedMeasurements with_warning(std::string w) const {
    MaskedMeasurements copy = *this;
    copy.warning_ = std::move(w);
    return copy;
  }

private:
  std::vector<double> data_;
  ValidityMask mask_;
  std::optional<std::string> seed_ref_;
  std::optional<std::string> warning_;
};

/// Single-level wavelet coefficients, interleaved: low band at 1-based odd
/// positions (0-based even), high band at 1-based even positions.
class WaveletCoefficients {
public:
  explicit WaveletCoefficients(std::vector<double> data) : data_(std::move(data)) {
    detail::require_nonempty(data_.size(), "WaveletCoefficients");
    if (data_.size() % 2 != 0) {
      throw DimensionError("WaveletCoefficients: length must be even");
    }
    detail::require_finite(data_, "WaveletCoefficients");
  }

  std::size_t size() const noexcept { return data_.size(); }
  std::span<const double> data() const noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }
  double low(std::size_t k) const { return data_[2 * k]; }
  double high(std::size_t k) const { return data_[2 * k + 1]; }

private:
  std::vector<double> data_;
};

}  // namespace circcs

#endif  // CIRCCS_CORE_HPP
