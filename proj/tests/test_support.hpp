#pragma once

// Shared oracles and deterministic generators for the test suites.  The
// oracles are intentionally naive re-implementations, kept independent from
// the library code they are used to check.

#include <random>
#include <vector>

#include "latglue/matrix.hpp"

namespace testsupport {

using latglue::Int;
using latglue::IntMat;
using latglue::Rat;
using latglue::RatMat;

// Cofactor-expansion determinant, practical for dim <= 6.
inline Int cofactor_det(const IntMat& m) {
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  if (n == 1) return m(0, 0);
  Int acc = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (m(0, j) == 0) continue;
    IntMat minor(n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r) {
      std::size_t cc = 0;
      for (std::size_t c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = m(r, c);
      }
    }
    Int term = m(0, j) * cofactor_det(minor);
    if (j % 2)
      acc -= term;
    else
      acc += term;
  }
  return acc;
}

inline IntMat random_int_mat(std::mt19937& rng, std::size_t n, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  IntMat m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = dist(rng);
  return m;
}

inline IntMat random_symmetric_mat(std::mt19937& rng, std::size_t n, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  IntMat m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      m(i, j) = dist(rng);
      m(j, i) = m(i, j);
    }
  return m;
}

// Nondegenerate symmetric matrix with entries in [lo, hi]; retries until the
// cofactor oracle sees a nonzero determinant.
inline IntMat random_nondeg_symmetric(std::mt19937& rng, std::size_t n, int lo, int hi) {
  for (;;) {
    IntMat m = random_symmetric_mat(rng, n, lo, hi);
    if (cofactor_det(m) != 0) return m;
  }
}

// Unimodular matrix built from random elementary row operations.
inline IntMat random_unimodular(std::mt19937& rng, std::size_t n, int ops = 12) {
  std::uniform_int_distribution<int> pick(0, static_cast<int>(n) - 1);
  std::uniform_int_distribution<int> coef(-2, 2);
  IntMat u = IntMat::identity(n);
  for (int k = 0; k < ops; ++k) {
    int i = pick(rng), j = pick(rng);
    if (i == j) {
      u.negate_row(i);
      continue;
    }
    u.add_row_multiple(i, j, Int(coef(rng)));
  }
  return u;
}

}  // namespace testsupport
