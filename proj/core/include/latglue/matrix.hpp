#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace latglue {

using Int = mpz_class;
using Rat = mpq_class;

/// Dense row-major matrix over an exact coefficient type (Int or Rat).
/// All arithmetic in this library goes through arbitrary precision; no
/// operation may silently overflow or round.
template <typename T>
class BasicMat {
public:
  BasicMat() = default;

  BasicMat(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  BasicMat(std::initializer_list<std::initializer_list<long>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw std::invalid_argument("ragged matrix initializer");
      for (long v : row) data_.emplace_back(v);
    }
  }

  static BasicMat identity(std::size_t n) {
    BasicMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static BasicMat diagonal(const std::vector<T>& entries) {
    BasicMat m(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool is_square() const { return rows_ == cols_; }

  bool is_symmetric() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  bool is_zero() const {
    for (const T& v : data_)
      if (v != 0) return false;
    return true;
  }

  BasicMat transposed() const {
    BasicMat m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }

  void set_row(std::size_t i, const std::vector<T>& v) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = v[j];
  }

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
  }

  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, i), (*this)(r, j));
  }

  void negate_row(std::size_t i) {
    for (std::size_t c = 0; c < cols_; ++c) (*this)(i, c) = -(*this)(i, c);
  }

  void negate_col(std::size_t j) {
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, j) = -(*this)(r, j);
  }

  /// row_i += f * row_j
  void add_row_multiple(std::size_t i, std::size_t j, const T& f) {
    for (std::size_t c = 0; c < cols_; ++c) (*this)(i, c) += f * (*this)(j, c);
  }

  /// col_i += f * col_j
  void add_col_multiple(std::size_t i, std::size_t j, const T& f) {
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, i) += f * (*this)(r, j);
  }

  friend BasicMat operator*(const BasicMat& a, const BasicMat& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product shape mismatch");
    BasicMat out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& f = a(i, k);
        if (f == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += f * b(k, j);
      }
    return out;
  }

  friend BasicMat operator+(const BasicMat& a, const BasicMat& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
      throw std::invalid_argument("matrix sum shape mismatch");
    BasicMat out(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = a.data_[i] + b.data_[i];
    return out;
  }

  friend BasicMat operator-(const BasicMat& a) {
    BasicMat out(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = -a.data_[i];
    return out;
  }

  friend bool operator==(const BasicMat& a, const BasicMat& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend std::ostream& operator<<(std::ostream& os, const BasicMat& m) {
    os << "[";
    for (std::size_t i = 0; i < m.rows_; ++i) {
      os << (i ? " [" : "[");
      for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? " " : "") << m(i, j);
      os << "]";
    }
    return os << "]";
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMat = BasicMat<Int>;
using RatMat = BasicMat<Rat>;

RatMat to_rat(const IntMat& m);

/// Fails (returns false) if some entry has a denominator other than 1.
bool to_int(const RatMat& m, IntMat& out);

/// Inertia of a nondegenerate symmetric form: pos positive and neg negative
/// squares after diagonalization over Q.
struct Signature {
  int pos = 0;
  int neg = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Determinant by fraction-free Bareiss elimination; exact for any size.
Int det_exact(const IntMat& m);

/// Determinant of a rational matrix by exact Gaussian elimination.
Rat det_exact(const RatMat& m);

/// Row-style Hermite normal form: u * m = h with u unimodular, pivots
/// positive, entries above each pivot reduced into [0, pivot), zero rows last.
struct HnfResult {
  IntMat h;
  IntMat u;
};
HnfResult hnf(const IntMat& m);

/// Smith normal form: u * m * v = d with u, v unimodular and the diagonal of
/// d a divisibility chain d1 | d2 | ... (nonnegative, zeros trailing).
struct SnfResult {
  IntMat d;
  IntMat u;
  IntMat v;
};
SnfResult snf(const IntMat& m);

/// Exact signature of a symmetric rational matrix via congruence
/// diagonalization.  Throws on degenerate or non-symmetric input.
Signature signature(const RatMat& m);
Signature signature(const IntMat& m);

/// Exact inverse of a square rational matrix; throws on singular input.
RatMat rat_inverse(const RatMat& m);

/// Membership test for the row span over Z of a matrix already in HNF.
bool hnf_span_contains(const IntMat& h, const std::vector<Int>& v);

}  // namespace latglue
