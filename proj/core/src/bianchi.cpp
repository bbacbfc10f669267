#include "latglue/bianchi.hpp"

#include "latglue/error.hpp"

namespace latglue {

namespace {

bool square_free(long d) {
  for (long k = 2; k * k <= d; ++k)
    if (d % (k * k) == 0) return false;
  return true;
}

// every axiom over four elements is checked outright; a wrong table is a bug,
// not bad input
void check_ring_axioms(const FiniteRing4& r) {
  for (int a = 0; a < 4; ++a) {
    if (r.add(a, 0) != a) internal_error("ring_mod2: 0 is not an additive identity");
    if (r.mul(a, 1) != a) internal_error("ring_mod2: 1 is not a multiplicative identity");
    if (r.add(a, a) != 0) internal_error("ring_mod2: an element is not its own negative mod 2");
    for (int b = 0; b < 4; ++b) {
      if (r.add(a, b) != r.add(b, a)) internal_error("ring_mod2: addition is not commutative");
      if (r.mul(a, b) != r.mul(b, a))
        internal_error("ring_mod2: multiplication is not commutative");
      for (int c = 0; c < 4; ++c) {
        if (r.add(r.add(a, b), c) != r.add(a, r.add(b, c)))
          internal_error("ring_mod2: addition is not associative");
        if (r.mul(r.mul(a, b), c) != r.mul(a, r.mul(b, c)))
          internal_error("ring_mod2: multiplication is not associative");
        if (r.mul(a, r.add(b, c)) != r.add(r.mul(a, b), r.mul(a, c)))
          internal_error("ring_mod2: multiplication does not distribute over addition");
      }
    }
  }
}

}  // namespace

bool FiniteRing4::is_field() const {
  for (int a = 1; a < 4; ++a) {
    bool invertible = false;
    for (int b = 1; b < 4; ++b)
      if (mul(a, b) == 1) invertible = true;
    if (!invertible) return false;
  }
  return true;
}

std::string FiniteRing4::describe() const {
  if (is_field()) return "field with four elements (w^2 = w + 1)";
  // w*(1+w) = w + w^2; zero exactly when w^2 = w, the split case
  if (mul(2, 3) == 0) return "product of two copies of the two-element field (w^2 = w)";
  if (mul(2, 2) == 0) return "local ring with square-zero radical (w^2 = 0)";
  return "local ring with square-zero radical ((w+1)^2 = 0)";
}

FiniteRing4 ring_mod2(long d) {
  if (d < 1) precondition_error("ring_mod2: d must be a positive integer");
  if (!square_free(d)) precondition_error("ring_mod2: d must be square-free");

  // w^2 = s0 + s1*w mod 2.  For d = 1, 2 mod 4 the generator is sqrt(-d) with
  // w^2 = -d; for d = 3 mod 4 it is (1+sqrt(-d))/2 with w^2 = w - (1+d)/4.
  int s0, s1;
  if (d % 4 == 3) {
    s0 = static_cast<int>(((1 + d) / 4) % 2);
    s1 = 1;
  } else {
    s0 = static_cast<int>(d % 2);
    s1 = 0;
  }

  FiniteRing4 r;
  r.d = d;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      r.add_table[a][b] = a ^ b;
      // (a0 + a1*w)(b0 + b1*w) with w^2 = s0 + s1*w
      int a0 = a & 1, a1 = a >> 1, b0 = b & 1, b1 = b >> 1;
      int c0 = (a0 * b0 + a1 * b1 * s0) & 1;
      int c1 = (a0 * b1 + a1 * b0 + a1 * b1 * s1) & 1;
      r.mul_table[a][b] = c0 | (c1 << 1);
    }
  check_ring_axioms(r);
  return r;
}

int bianchi_index(long d) {
  FiniteRing4 r = ring_mod2(d);
  int count = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int e = 0; e < 4; ++e)
          // subtraction is addition mod 2
          if (r.add(r.mul(a, e), r.mul(b, c)) == 1) ++count;
  return count;
}

}  // namespace latglue
