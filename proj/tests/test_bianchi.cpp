#include <doctest.h>

#include "latglue/bianchi.hpp"
#include "latglue/error.hpp"

using namespace latglue;

namespace {

template <typename F>
void expect_stage(Stage s, F&& f) {
  try {
    f();
    FAIL_CHECK("expected an Error");
  } catch (const Error& e) {
    CHECK(e.stage() == s);
  }
}

constexpr int kOne = 1, kOmega = 2, kOmegaPlusOne = 3;

}  // namespace

TEST_SUITE("bianchi") {

TEST_CASE("residue rings across the four discriminant classes") {
  // d = 3 mod 8: minimal polynomial x^2 + x + 1 is irreducible mod 2
  FiniteRing4 f4 = ring_mod2(3);
  CHECK(f4.is_field());
  CHECK(f4.mul(kOmega, kOmega) == kOmegaPlusOne);
  CHECK(f4.mul(kOmega, kOmegaPlusOne) == kOne);

  // d = 7 mod 8: x^2 + x splits, so w and 1+w are complementary idempotents
  FiniteRing4 split = ring_mod2(7);
  CHECK_FALSE(split.is_field());
  CHECK(split.mul(kOmega, kOmega) == kOmega);
  CHECK(split.mul(kOmega, kOmegaPlusOne) == 0);

  // d = 1 mod 4: w^2 = 1, so (1+w)^2 = 0 and the ring is local, not a field
  FiniteRing4 local_odd = ring_mod2(1);
  CHECK_FALSE(local_odd.is_field());
  CHECK(local_odd.mul(kOmega, kOmega) == kOne);
  CHECK(local_odd.mul(kOmegaPlusOne, kOmegaPlusOne) == 0);

  // d = 2 mod 4: w^2 = 0 outright
  FiniteRing4 local_even = ring_mod2(2);
  CHECK_FALSE(local_even.is_field());
  CHECK(local_even.mul(kOmega, kOmega) == 0);
}

TEST_CASE("ring axioms re-checked from outside") {
  for (long d : {1L, 2L, 3L, 5L, 7L, 11L, 15L}) {
    FiniteRing4 r = ring_mod2(d);
    for (int a = 0; a < 4; ++a) {
      CHECK(r.add(a, 0) == a);
      CHECK(r.mul(a, kOne) == a);
      CHECK(r.add(a, a) == 0);
      for (int b = 0; b < 4; ++b) {
        CHECK(r.add(a, b) == r.add(b, a));
        CHECK(r.mul(a, b) == r.mul(b, a));
        for (int c = 0; c < 4; ++c) {
          CHECK(r.add(r.add(a, b), c) == r.add(a, r.add(b, c)));
          CHECK(r.mul(r.mul(a, b), c) == r.mul(a, r.mul(b, c)));
          CHECK(r.mul(a, r.add(b, c)) == r.add(r.mul(a, b), r.mul(a, c)));
        }
      }
    }
  }
}

TEST_CASE("ring descriptions name the structure") {
  CHECK(ring_mod2(3).describe() == "field with four elements (w^2 = w + 1)");
  CHECK(ring_mod2(7).describe() ==
        "product of two copies of the two-element field (w^2 = w)");
  CHECK(ring_mod2(2).describe() == "local ring with square-zero radical (w^2 = 0)");
  CHECK(ring_mod2(1).describe() == "local ring with square-zero radical ((w+1)^2 = 0)");
}

TEST_CASE("non-square-free and non-positive inputs are rejected") {
  expect_stage(Stage::precondition, [] { ring_mod2(0); });
  expect_stage(Stage::precondition, [] { ring_mod2(-5); });
  expect_stage(Stage::precondition, [] { ring_mod2(4); });
  expect_stage(Stage::precondition, [] { ring_mod2(12); });
  expect_stage(Stage::precondition, [] { ring_mod2(18); });
  expect_stage(Stage::precondition, [] { bianchi_index(50); });
}

TEST_CASE("congruence indices on the smallest discriminants") {
  // cross-checked against closed-form group orders: |SL2(F4)| = 4^3 - 4 = 60,
  // |SL2(F2 x F2)| = 6^2 = 36, and for the local rings 6 * 8 = 48 (the kernel
  // of reduction to F2 consists of I + tN with tr N even, eight matrices)
  for (long d : {1L, 2L, 5L}) CHECK(bianchi_index(d) == 48);
  for (long d : {3L, 11L, 19L}) CHECK(bianchi_index(d) == 60);
  for (long d : {7L, 15L, 23L}) CHECK(bianchi_index(d) == 36);
}

TEST_CASE("indices depend only on the residue class up to fifty") {
  int tested = 0;
  for (long d = 1; d <= 50; ++d) {
    bool square_free = true;
    for (long k = 2; k * k <= d; ++k)
      if (d % (k * k) == 0) square_free = false;
    if (!square_free) continue;
    int expected = (d % 4 == 1 || d % 4 == 2) ? 48 : (d % 8 == 3 ? 60 : 36);
    CHECK(bianchi_index(d) == expected);
    ++tested;
  }
  CHECK(tested == 31);
}

}  // TEST_SUITE
