#pragma once

#include <array>
#include <string>

namespace latglue {

/// The ring O/2 where O is the ring of integers of Q(sqrt(-d)), d square-free.
/// O = Z[w] with w = sqrt(-d) when -d is not 1 mod 4, else w = (1+sqrt(-d))/2;
/// reducing mod 2 leaves the four residues {0, 1, w, 1+w}.  Elements are the
/// codes 0..3 with bit 0 the coefficient of 1 and bit 1 the coefficient of w.
/// The tables are filled from w^2's reduction by the minimal polynomial and
/// then checked exhaustively against the commutative-ring axioms.
struct FiniteRing4 {
  long d = 0;
  std::array<std::array<int, 4>, 4> add_table{};
  std::array<std::array<int, 4>, 4> mul_table{};

  int add(int a, int b) const { return add_table[a][b]; }
  int mul(int a, int b) const { return mul_table[a][b]; }

  /// True when every nonzero element has an inverse (d = 3 mod 8 only).
  bool is_field() const;

  /// One-line structure summary, e.g. "field with four elements (w^2 = w + 1)".
  std::string describe() const;
};

/// Builds O/2 for square-free d >= 1.  w^2 reduces to d mod 2 when d = 1, 2
/// mod 4 and to w + ((1+d)/4 mod 2) when d = 3 mod 4, so the ring is a field
/// exactly for d = 3 mod 8, splits into two copies of the two-element field
/// for d = 7 mod 8, and is local with a square-zero radical otherwise.
/// Errors: precondition when d is not a square-free positive integer.
FiniteRing4 ring_mod2(long d);

/// Order of SL2(O/2), counted by enumerating all 256 two-by-two matrices over
/// ring_mod2(d) and keeping those of determinant 1.  This order equals the
/// index of the level-2 congruence subgroup inside the Bianchi group
/// PSL(2, O): -I and I agree mod 2, so the reduction map factors through PSL,
/// and reduction mod 2 is onto by strong approximation (a classical fact this
/// module assumes rather than re-proves).  Values: 48 when d = 1, 2 mod 4,
/// 60 when d = 3 mod 8, 36 when d = 7 mod 8.
int bianchi_index(long d);

}  // namespace latglue
