#ifndef CIRCCS_DENSE_HPP
#define CIRCCS_DENSE_HPP

// Small row-major dense matrix used for diagnostics and verification only.
// Nothing on the measurement path materializes a matrix.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "circcs/core.hpp"

namespace circcs {

class DenseMatrix {
public:
  static constexpr std::size_t max_elements = std::size_t{1} << 24;

  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    if (rows == 0 || cols == 0) {
      throw DimensionError("DenseMatrix: rows and cols must be positive");
    }
    if (rows > max_elements / cols) {
      throw RangeError("DenseMatrix: size guard exceeded (rows*cols > 2^24)");
    }
    data_.assign(rows * cols, 0.0);
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data_).subspan(r * cols_, cols_);
  }
  std::span<double> row(std::size_t r) {
    return std::span<double>(data_).subspan(r * cols_, cols_);
  }

  std::span<const double> data() const noexcept { return data_; }

  /// Largest |entry| in row r.
  double row_max_abs(std::size_t r) const {
    double best = 0.0;
    for (double v : row(r)) best = std::max(best, std::abs(v));
    return best;
  }

  double max_abs() const {
    double best = 0.0;
    for (double v : data_) best = std::max(best, std::abs(v));
    return best;
  }

  /// Top-left rows x cols block.
  DenseMatrix leading_block(std::size_t rows, std::size_t cols) const {
    if (rows > rows_ || cols > cols_) {
      throw DimensionError("DenseMatrix::leading_block: block exceeds matrix");
    }
    DenseMatrix out(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) out(r, c) = (*this)(r, c);
    }
    return out;
  }

private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

inline DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("DenseMatrix product: inner dimensions differ");
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

inline DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("DenseMatrix difference: shapes differ");
  }
  DenseMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
  }
  return out;
}

/// Plain left-to-right matrix-vector product.
inline std::vector<double> operator*(const DenseMatrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw DimensionError("DenseMatrix matvec: length mismatch");
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * x[k];
    y[i] = acc;
  }
  return y;
}

}  // namespace circcs

#endif  // CIRCCS_DENSE_HPP
