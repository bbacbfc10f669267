#include "latglue/matrix.hpp"

#include <stdexcept>

namespace latglue {

RatMat to_rat(const IntMat& m) {
  RatMat out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = Rat(m(i, j));
  return out;
}

bool to_int(const RatMat& m, IntMat& out) {
  out = IntMat(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const Rat& v = m(i, j);
      if (v.get_den() != 1) return false;
      out(i, j) = v.get_num();
    }
  return true;
}

Int det_exact(const IntMat& m) {
  if (!m.is_square()) throw std::invalid_argument("det_exact: matrix not square");
  const std::size_t n = m.rows();
  if (n == 0) return 1;

  IntMat a = m;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Int t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        // Bareiss: division by the previous pivot is always exact.
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        a(i, j) = t;
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign > 0 ? a(n - 1, n - 1) : Int(-a(n - 1, n - 1));
}

Rat det_exact(const RatMat& m) {
  if (!m.is_square()) throw std::invalid_argument("det_exact: matrix not square");
  const std::size_t n = m.rows();
  RatMat a = m;
  Rat det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      a.swap_rows(k, p);
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      Rat f = a(i, k) / a(k, k);
      a.add_row_multiple(i, k, Rat(-f));
    }
  }
  return det;
}

namespace {

// Replace rows i and j by unimodular combinations so that the entry (j, c)
// becomes zero and (i, c) becomes gcd(a, b).  Applied to both m and u.
void xgcd_rows(IntMat& m, IntMat& u, std::size_t i, std::size_t j, std::size_t c) {
  Int a = m(i, c), b = m(j, c), g, x, y;
  mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  Int as = a / g, bs = b / g;
  for (auto* mat : {&m, &u}) {
    for (std::size_t col = 0; col < mat->cols(); ++col) {
      Int ri = (*mat)(i, col), rj = (*mat)(j, col);
      (*mat)(i, col) = x * ri + y * rj;
      (*mat)(j, col) = -bs * ri + as * rj;
    }
  }
}

// Quotient with remainder in (-b/2, b/2]; requires b > 0.
Int div_nearest(const Int& a, const Int& b) {
  Int q, biased = a + (b >> 1);
  mpz_fdiv_q(q.get_mpz_t(), biased.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

HnfResult hnf(const IntMat& m) {
  IntMat h = m;
  IntMat u = IntMat::identity(m.rows());
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && h(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    h.swap_rows(r, p);
    u.swap_rows(r, p);
    for (std::size_t i = r + 1; i < m.rows(); ++i)
      if (h(i, c) != 0) xgcd_rows(h, u, r, i, c);
    if (h(r, c) < 0) {
      h.negate_row(r);
      u.negate_row(r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), h(i, c).get_mpz_t(), h(r, c).get_mpz_t());
      if (q != 0) {
        h.add_row_multiple(i, r, Int(-q));
        u.add_row_multiple(i, r, Int(-q));
      }
    }
    ++r;
  }
  return {h, u};
}

SnfResult snf(const IntMat& m) {
  IntMat d = m;
  IntMat u = IntMat::identity(m.rows());
  IntMat v = IntMat::identity(m.cols());
  const std::size_t n = std::min(m.rows(), m.cols());

  bool exhausted = false;
  for (std::size_t t = 0; t < n && !exhausted; ++t) {
    for (;;) {
      // Re-pick the nonzero entry of least absolute value as the pivot on
      // every round.  With minimal-remainder division any surviving remainder
      // is at most half the pivot, so the pivot at least halves whenever a
      // round fails to finish — that bounds the rounds and, because the
      // multipliers stay near-minimal, keeps the coefficients from blowing up.
      std::size_t pi = t, pj = t;
      bool found = false;
      Int best;
      for (std::size_t i = t; i < m.rows(); ++i)
        for (std::size_t j = t; j < m.cols(); ++j) {
          if (d(i, j) == 0) continue;
          Int a = abs(d(i, j));
          if (!found || a < best) {
            found = true;
            best = a;
            pi = i;
            pj = j;
          }
        }
      if (!found) {
        exhausted = true;
        break;
      }
      d.swap_rows(t, pi);
      u.swap_rows(t, pi);
      d.swap_cols(t, pj);
      v.swap_cols(t, pj);
      if (d(t, t) < 0) {
        d.negate_row(t);
        u.negate_row(t);
      }

      bool dirty = false;
      for (std::size_t i = t + 1; i < m.rows(); ++i) {
        if (d(i, t) == 0) continue;
        Int q = div_nearest(d(i, t), d(t, t));
        if (q != 0) {
          d.add_row_multiple(i, t, Int(-q));
          u.add_row_multiple(i, t, Int(-q));
        }
        if (d(i, t) != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < m.cols(); ++j) {
        if (d(t, j) == 0) continue;
        Int q = div_nearest(d(t, j), d(t, t));
        if (q != 0) {
          d.add_col_multiple(j, t, Int(-q));
          v.add_col_multiple(j, t, Int(-q));
        }
        if (d(t, j) != 0) dirty = true;
      }
      if (dirty) continue;

      // Pivot row and column are clear; the pivot must divide every trailing
      // entry so the diagonal forms a divisibility chain.  Folding an
      // offending row into the pivot row surfaces its entries for the next
      // round's reduction.
      bool fixed = true;
      for (std::size_t i = t + 1; i < m.rows() && fixed; ++i)
        for (std::size_t j = t + 1; j < m.cols() && fixed; ++j)
          if (d(i, j) % d(t, t) != 0) {
            d.add_row_multiple(t, i, Int(1));
            u.add_row_multiple(t, i, Int(1));
            fixed = false;
          }
      if (fixed) break;
    }
  }
  return {d, u, v};
}

Signature signature(const RatMat& m) {
  if (!m.is_symmetric()) throw std::invalid_argument("signature: matrix not symmetric");
  const std::size_t n = m.rows();
  RatMat g = m;
  Signature sig;
  for (std::size_t k = 0; k < n; ++k) {
    if (g(k, k) == 0) {
      std::size_t i = k + 1;
      while (i < n && g(k, i) == 0) ++i;
      if (i == n) {
        // No diagonal pivot and the rest of the row vanishes: degenerate,
        // unless the whole trailing block is zero, which is also degenerate.
        throw std::invalid_argument("signature: degenerate form");
      }
      // g(k,k) <- g(k,k) +/- 2 g(k,i) + g(i,i); one of the signs is nonzero.
      Rat probe = 2 * g(k, i) + g(i, i);
      Rat f = (probe != 0) ? Rat(1) : Rat(-1);
      g.add_row_multiple(k, i, f);
      g.add_col_multiple(k, i, f);
    }
    const Rat pivot = g(k, k);
    if (pivot > 0)
      ++sig.pos;
    else
      ++sig.neg;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (g(i, k) == 0) continue;
      Rat f = g(i, k) / pivot;
      g.add_row_multiple(i, k, Rat(-f));
      g.add_col_multiple(i, k, Rat(-f));
    }
  }
  return sig;
}

Signature signature(const IntMat& m) { return signature(to_rat(m)); }

RatMat rat_inverse(const RatMat& m) {
  if (!m.is_square()) throw std::invalid_argument("rat_inverse: matrix not square");
  const std::size_t n = m.rows();
  RatMat a = m;
  RatMat inv = RatMat::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) throw std::invalid_argument("rat_inverse: singular matrix");
    a.swap_rows(k, p);
    inv.swap_rows(k, p);
    Rat pivot = a(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      a(k, j) /= pivot;
      inv(k, j) /= pivot;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a(i, k) == 0) continue;
      Rat f = a(i, k);
      a.add_row_multiple(i, k, Rat(-f));
      inv.add_row_multiple(i, k, Rat(-f));
    }
  }
  return inv;
}

bool hnf_span_contains(const IntMat& h, const std::vector<Int>& v) {
  if (v.size() != h.cols()) throw std::invalid_argument("hnf_span_contains: length mismatch");
  std::vector<Int> rest = v;
  std::size_t r = 0;
  for (std::size_t c = 0; c < h.cols() && r < h.rows(); ++c) {
    if (h(r, c) == 0) continue;
    if (rest[c] % h(r, c) == 0) {
      Int q = rest[c] / h(r, c);
      if (q != 0)
        for (std::size_t j = 0; j < h.cols(); ++j) rest[j] -= q * h(r, j);
    }
    ++r;
  }
  for (const Int& x : rest)
    if (x != 0) return false;
  return true;
}

}  // namespace latglue
