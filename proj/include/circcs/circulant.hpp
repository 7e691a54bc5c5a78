#ifndef CIRCCS_CIRCULANT_HPP
#define CIRCCS_CIRCULANT_HPP

// Partial circulant matrices described by their seed, products with them,
// circular shifts, and the commutator diagnostics.
//
// Row i (0-based) of the matrix built from seed phi is phi circularly
// right-shifted by i, i.e. A(i, k) = phi[(k - i) mod n]. A product with a
// signal is therefore the circular cross-correlation
//   y_i = sum_k phi[(k - i) mod n] x_k,   i < m.

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "circcs/core.hpp"
#include "circcs/dense.hpp"

namespace circcs {

class CirculantSpec {
public:
  CirculantSpec(Seed seed, std::size_t rows) : seed_(std::move(seed)), rows_(rows) {
    if (rows_ < 1 || rows_ > seed_.size()) {
      throw DimensionError("CirculantSpec: rows must lie in [1, n]");
    }
  }

  const Seed& seed() const noexcept { return seed_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return seed_.size(); }
  bool is_square() const noexcept { return rows_ == seed_.size(); }

  double at(std::size_t r, std::size_t c) const {
    return seed_[detail::wrap_index(static_cast<std::ptrdiff_t>(c) - static_cast<std::ptrdiff_t>(r),
                                    seed_.size())];
  }

private:
  Seed seed_;
  std::size_t rows_;
};

inline CirculantSpec circulant_from_first_row(Seed seed, std::size_t rows) {
  return CirculantSpec(std::move(seed), rows);
}

/// Square n x n circulant carrying the filter taps on its first row or first
/// column, depending on the filter's convention.
inline CirculantSpec filter_to_circulant(const FilterSpec& h, std::size_t n) {
  const std::size_t nf = h.length();
  if (nf > n) throw DimensionError("filter_to_circulant: filter longer than n");
  std::vector<double> first_row(n, 0.0);
  const auto taps = h.taps();
  if (h.convention() == Convention::FirstRow) {
    for (std::size_t j = 0; j < nf; ++j) first_row[j] = taps[j];
  } else {
    // First column [h_1..h_Nf, 0..0] <=> first row [h_1, 0..0, h_Nf..h_2].
    first_row[0] = taps[0];
    for (std::size_t j = 1; j < nf; ++j) first_row[n - j] = taps[j];
  }
  return CirculantSpec(Seed(std::move(first_row), "filter"), n);
}

/// Circular shift, positive s to the right: out_i = x_{(i - s) mod n}.
inline std::vector<double> circular_shift(std::span<const double> x, std::ptrdiff_t s) {
  const std::size_t n = x.size();
  std::vector<double> out(n);
  if (n == 0) return out;
  const std::size_t r = detail::wrap_index(s, n);
  for (std::size_t i = 0; i < n; ++i) out[(i + r) % n] = x[i];
  return out;
}

enum class Kernel {
  Auto,    ///< Direct below 32 columns, FFT otherwise.
  Direct,  ///< Two-lane direct summation (0-based even / odd columns).
  Fast,    ///< FFT circular correlation.
};

namespace detail {

// Columns with even and odd 0-based index accumulate separately and meet in
// one final addition. Zeroing all columns of one parity therefore leaves the
// other lane bit-identical, which makes structured acquisitions (even/odd,
// zero-stuffed) add back to the plain acquisition exactly.
inline std::vector<double> correlate_direct(std::span<const double> seed, std::size_t rows,
                                            std::span<const double> x) {
  const std::size_t n = seed.size();
  std::vector<double> y(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    double lane[2] = {0.0, 0.0};
    std::size_t j = (n - i % n) % n;  // seed index for column 0
    for (std::size_t k = 0; k < n; ++k) {
      lane[k & 1U] += seed[j] * x[k];
      if (++j == n) j = 0;
    }
    y[i] = lane[0] + lane[1];
  }
  return y;
}

inline std::vector<double> correlate_fft(std::span<const double> seed, std::size_t rows,
                                         std::span<const double> x) {
  const std::size_t n = seed.size();
  Eigen::FFT<double> fft;
  std::vector<double> a(seed.begin(), seed.end());
  std::vector<double> b(x.begin(), x.end());
  std::vector<std::complex<double>> fa;
  std::vector<std::complex<double>> fb;
  fft.fwd(fa, a);
  fft.fwd(fb, b);
  // y_i = sum_j phi_j x_{j+i}  <=>  Y = conj(F phi) .* F x
  for (std::size_t k = 0; k < fb.size(); ++k) fb[k] *= std::conj(fa[k]);
  std::vector<double> full;
  fft.inv(full, fb);
  full.resize(n);
  full.resize(rows);
  return full;
}

}  // namespace detail

/// Matrix-vector product with a (partial) circulant.
inline std::vector<double> apply(const CirculantSpec& spec, std::span<const double> x,
                                 Kernel kernel = Kernel::Auto) {
  if (x.size() != spec.cols()) throw DimensionError("apply: signal length differs from seed length");
  if (kernel == Kernel::Auto) kernel = spec.cols() < 32 ? Kernel::Direct : Kernel::Fast;
  if (kernel == Kernel::Direct) return detail::correlate_direct(spec.seed().data(), spec.rows(), x);
  return detail::correlate_fft(spec.seed().data(), spec.rows(), x);
}

inline std::vector<double> apply(const CirculantSpec& spec, const Signal& x,
                                 Kernel kernel = Kernel::Auto) {
  return apply(spec, x.data(), kernel);
}

/// Explicit row-shifted matrix.
inline DenseMatrix materialize(const CirculantSpec& spec) {
  DenseMatrix out(spec.rows(), spec.cols());
  for (std::size_t r = 0; r < spec.rows(); ++r) {
    for (std::size_t c = 0; c < spec.cols(); ++c) out(r, c) = spec.at(r, c);
  }
  return out;
}

/// [A, B] = AB - BA for square matrices of equal size.
inline DenseMatrix commutator(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw DimensionError("commutator: operands must be square and of equal size");
  }
  return a * b - b * a;
}

inline DenseMatrix commutator(const CirculantSpec& a, const CirculantSpec& b) {
  if (!a.is_square() || !b.is_square()) throw DimensionError("commutator: operands must be square");
  return commutator(materialize(a), materialize(b));
}

/// m-partial commutator  Phi H - H~ Phi,  with H~ the leading m x m block of H.
/// For a FirstRow filter of length N_f its first m - N_f + 1 rows vanish.
inline DenseMatrix partial_commutator(const CirculantSpec& phi, const CirculantSpec& h) {
  if (!h.is_square() || h.cols() != phi.cols()) {
    throw DimensionError("partial_commutator: H must be square with the same n as Phi");
  }
  const DenseMatrix p = materialize(phi);
  const DenseMatrix hd = materialize(h);
  return p * hd - hd.leading_block(phi.rows(), phi.rows()) * p;
}

/// (J, m)-distributed partial commutator  PhiT H - (H_J kron I_m) PhiT,
/// where PhiT stacks J blocks of m rows and H_J is the leading J x J block
/// of H.
inline DenseMatrix distributed_partial_commutator(const DenseMatrix& phi_tilde,
                                                  const CirculantSpec& h, std::size_t nodes,
                                                  std::size_t m) {
  if (!h.is_square() || h.cols() != phi_tilde.cols()) {
    throw DimensionError("distributed_partial_commutator: H must be square with the same n");
  }
  if (nodes == 0 || m == 0 || phi_tilde.rows() != nodes * m) {
    throw DimensionError("distributed_partial_commutator: PhiT must have J*m rows");
  }
  if (nodes > h.cols()) throw DimensionError("distributed_partial_commutator: J exceeds n");
  const std::size_t n = phi_tilde.cols();
  DenseMatrix mixed(nodes * m, n);
  for (std::size_t j = 0; j < nodes; ++j) {
    for (std::size_t jj = 0; jj < nodes; ++jj) {
      const double w = h.at(j, jj);
      if (w == 0.0) continue;
      for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < n; ++c) mixed(j * m + r, c) += w * phi_tilde(jj * m + r, c);
      }
    }
  }
  return phi_tilde * materialize(h) - mixed;
}

}  // namespace circcs

#endif  // CIRCCS_CIRCULANT_HPP
