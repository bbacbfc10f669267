#include <algorithm>
#include <doctest.h>

#include "latglue/error.hpp"
#include "latglue/gluing.hpp"

using namespace latglue;

namespace {

Lattice lat(IntMat g) { return Lattice::from_gram(std::move(g)); }

Lattice lorentz_diag(long k, std::size_t dim) {
  IntMat g(dim, dim);
  g(0, 0) = -k;
  for (std::size_t i = 1; i < dim; ++i) g(i, i) = 1;
  return lat(std::move(g));
}

Lattice l_m7() { return lorentz_diag(7, 4); }
Lattice k_p7() { return lat(IntMat{{7, 0, 0}, {0, 1, 0}, {0, 0, 1}}); }

template <typename F>
void expect_stage(Stage s, F&& f) {
  try {
    f();
    FAIL_CHECK("expected an Error");
  } catch (const Error& e) {
    CHECK(e.stage() == s);
  }
}

bool has_failure(const Certificate& c, const std::string& name) {
  return std::find(c.failures.begin(), c.failures.end(), name) != c.failures.end();
}

// Membership of a rational vector (coordinates of L + K) in the glued
// lattice: its coefficients over glue_basis must be integers.
bool member(const Embedding& e, const std::vector<Rat>& w) {
  const std::size_t n = e.glue_basis.rows();
  REQUIRE(w.size() == n);
  RatMat row(1, n);
  for (std::size_t j = 0; j < n; ++j) row(0, j) = w[j];
  RatMat coeff = row * rat_inverse(e.glue_basis);
  for (std::size_t j = 0; j < n; ++j)
    if (coeff(0, j).get_den() != 1) return false;
  return true;
}

std::string sym_text(const GenusSpec& spec, long p) {
  for (const auto& s : spec.symbols)
    if (s.prime == p) return render_symbol(s);
  FAIL("no symbol at the requested prime");
  return {};
}

}  // namespace

TEST_SUITE("gluing") {

TEST_CASE("companion spec for fixed lattices") {
  GenusSpec s7 = companion_spec(l_m7());
  CHECK(s7.sig == Signature{3, 0});
  CHECK(s7.det == 7);
  REQUIRE(s7.symbols.size() == 2);
  CHECK(sym_text(s7, 2) == "[1^+3]_1");
  CHECK(sym_text(s7, 7) == "1^+2 7^+1");
  CHECK(genus_exists(s7).exists);

  GenusSpec s2 = companion_spec(lorentz_diag(2, 4));
  CHECK(s2.sig == Signature{3, 0});
  CHECK(s2.det == 2);
  REQUIRE(s2.symbols.size() == 1);
  CHECK(sym_text(s2, 2) == "[1^+2 2^+1]_3");

  GenusSpec s3 = companion_spec(lorentz_diag(3, 4));
  CHECK(s3.det == 3);
  CHECK(sym_text(s3, 2) == "[1^-3]_5");
  CHECK(sym_text(s3, 3) == "1^+2 3^+1");

  // no unit block at 3 on the source side; the negated scale-3 data is
  // copied and the unit block balances the sign product
  GenusSpec s33 = companion_spec(lat(IntMat{{-3, 0}, {0, 3}}));
  CHECK(s33.sig == Signature{3, 0});
  CHECK(s33.det == 9);
  CHECK(sym_text(s33, 2) == "[1^+3]_3");
  CHECK(sym_text(s33, 3) == "1^-1 3^-2");
}

TEST_CASE("companion spec rejects out-of-domain input") {
  expect_stage(Stage::precondition, [] { companion_spec(lat(IntMat{{-1, 0}, {0, 1}})); });
  expect_stage(Stage::precondition, [] { companion_spec(standard_lorentzian(3)); });
  // discriminant group Z/4: the 2-part is not 2-elementary
  expect_stage(Stage::precondition, [] { companion_spec(lorentz_diag(4, 4)); });
}

TEST_CASE("companion search finds the expected lattices") {
  CHECK(companion_search(l_m7(), 50).gram() == IntMat{{1, 0, 0}, {0, 1, 0}, {0, 0, 7}});
  CHECK(companion_search(lorentz_diag(3, 4), 50).gram() ==
        IntMat{{1, 0, 0}, {0, 1, 0}, {0, 0, 3}});
  CHECK(companion_search(lorentz_diag(15, 4), 50).gram() ==
        IntMat{{1, 0, 0}, {0, 1, 0}, {0, 0, 15}});
  CHECK(companion_search(lorentz_diag(2, 4), 50).gram() ==
        IntMat{{1, 0, 0}, {0, 1, 0}, {0, 0, 2}});
  CHECK(companion_search(lorentz_diag(6, 5), 50).gram() ==
        IntMat{{1, 0, 0}, {0, 1, 0}, {0, 0, 6}});
}

TEST_CASE("companion search reaches non-diagonal candidates") {
  // no diagonal form works here: the discriminant form of diag(1,3,3) has no
  // orthogonal pair of norms (1/3, 2/3), so the general phase must find the
  // hexagonal-plane companion
  Lattice l = lat(IntMat{{-3, 0}, {0, 3}});
  Lattice k = companion_search(l, 20);
  CHECK(k.gram() == IntMat{{2, -1, 0}, {-1, 2, 0}, {0, 0, 3}});

  DiscriminantGroup dl = discriminant_group(l), dk = discriminant_group(k);
  GlueMap phi = anti_isometry(l, dl, k, dk);
  CHECK(glue(l, k, phi).certificate.ok());

  // deterministic: same input, same companion
  CHECK(companion_search(l, 33).gram() == k.gram());
}

TEST_CASE("companion search exhausts a zero budget") {
  try {
    companion_search(l_m7(), 0);
    FAIL_CHECK("expected an Error");
  } catch (const Error& e) {
    CHECK(e.stage() == Stage::search);
    CHECK(std::string(e.what()).find("target genus") != std::string::npos);
  }
}

TEST_CASE("anti isometry on cyclic discriminant groups") {
  Lattice l = l_m7(), k = k_p7();
  DiscriminantGroup dl = discriminant_group(l), dk = discriminant_group(k);
  GlueMap phi = anti_isometry(l, dl, k, dk);
  REQUIRE(phi.images.size() == 1);
  REQUIRE(phi.images[0].size() == 1);
  CHECK(phi.images[0][0] == 1);  // norms 6/7 vs 1/7: c^2 = 1, smallest c

  Lattice a2 = lat(IntMat{{2, 1}, {1, 2}});
  Lattice d13 = lat(IntMat{{1, 0}, {0, 3}});
  DiscriminantGroup da2 = discriminant_group(a2), dd13 = discriminant_group(d13);
  GlueMap psi = anti_isometry(a2, da2, d13, dd13);
  CHECK(psi.images == std::vector<std::vector<Int>>{{1}});

  // norm 1/3 against itself needs c^2 = 2 mod 3: impossible
  expect_stage(Stage::search, [&] { anti_isometry(d13, dd13, d13, dd13); });

  // mismatched groups Z/3 vs Z/7
  Lattice d17 = lat(IntMat{{1, 0}, {0, 7}});
  DiscriminantGroup dd17 = discriminant_group(d17);
  expect_stage(Stage::precondition, [&] { anti_isometry(d13, dd13, d17, dd17); });

  // trivial groups: empty map
  Lattice u1 = standard_lorentzian(1);
  DiscriminantGroup du = discriminant_group(u1);
  CHECK(anti_isometry(u1, du, u1, du).images.empty());
}

TEST_CASE("glue on the rank seven example") {
  Lattice l = l_m7(), k = k_p7();
  DiscriminantGroup dl = discriminant_group(l), dk = discriminant_group(k);

  // the glue group generated by the class of (4/7, 0, 0, 0 | 3/7, 0, 0)
  std::vector<Rat> ul{Rat(4, 7), 0, 0, 0};
  std::vector<Rat> uk{Rat(3, 7), 0, 0};
  Int alpha = disc_coords(dl, ul)[0];
  Int beta = disc_coords(dk, uk)[0];
  Int alpha_inv;
  REQUIRE(mpz_invert(alpha_inv.get_mpz_t(), alpha.get_mpz_t(), Int(7).get_mpz_t()) != 0);
  GlueMap phi{{{beta * alpha_inv % 7}}};

  Embedding e = glue(l, k, phi);
  CHECK(e.glued.det() == -1);
  CHECK(e.glue_index == 7);
  CHECK(e.m == 3);
  CHECK(e.glued.sig() == Signature{6, 1});
  CHECK(e.certificate.ok());
  CHECK(e.certificate.failures.empty());
  REQUIRE(e.glue_gens.rows() == 1);

  // u and v = (3/7)e0 + (4/7)e4 (= 6u mod L + K) lie in the glued lattice
  CHECK(member(e, {Rat(4, 7), 0, 0, 0, Rat(3, 7), 0, 0}));
  CHECK(member(e, {Rat(3, 7), 0, 0, 0, Rat(4, 7), 0, 0}));
  // the diagonal class (1/7)(e0 + e4) does not
  CHECK(!member(e, {Rat(1, 7), 0, 0, 0, Rat(1, 7), 0, 0}));
  // the adjoined generator itself is a member
  std::vector<Rat> gen(7);
  for (std::size_t j = 0; j < 7; ++j) gen[j] = e.glue_gens(0, j);
  CHECK(member(e, gen));
}

TEST_CASE("glue rejects a non-isotropic graph") {
  // c = 3 is a group isomorphism but no anti-isometry: the glue generator
  // gets norm 6/7 + 9/7 which is not integral
  expect_stage(Stage::verify, [] { glue(l_m7(), k_p7(), GlueMap{{{3}}}); });
}

TEST_CASE("glue with an empty map is the direct sum") {
  Lattice l = standard_lorentzian(1);
  Lattice k = lat(IntMat{{1, 0}, {0, 1}});
  Embedding e = glue(l, k, GlueMap{});
  CHECK(e.glued.gram() == direct_sum(l, k).gram());
  CHECK(e.glue_basis == to_rat(IntMat::identity(4)));
  CHECK(e.glue_index == 1);
  CHECK(e.m == 2);
  CHECK(e.certificate.ok());
}

TEST_CASE("verifier pinpoints failing checks") {
  Lattice l = l_m7(), k = k_p7();
  DiscriminantGroup dl = discriminant_group(l), dk = discriminant_group(k);
  Embedding good = glue(l, k, anti_isometry(l, dl, k, dk));
  REQUIRE(good.certificate.ok());

  // doubling a basis row keeps the Gram integral but ruins unimodularity
  Embedding doubled = good;
  for (std::size_t j = 0; j < 7; ++j) doubled.glue_basis(0, j) *= 2;
  Certificate c1 = verify_embedding(doubled);
  CHECK(!c1.ok());
  CHECK(c1.integral);
  CHECK(!c1.unimodular);
  CHECK(has_failure(c1, "unimodular"));

  // the identity basis glues nothing: L + K itself is not unimodular, but
  // every other invariant of the plain direct sum is in order
  Embedding id{l, k, GlueMap{}, RatMat(0, 7), to_rat(IntMat::identity(7)),
               direct_sum(l, k), Int(1), 3, Certificate{}};
  Certificate c2 = verify_embedding(id);
  CHECK(c2.integral);
  CHECK(!c2.unimodular);
  CHECK(c2.signature_ok);
  CHECK(c2.odd_type);
  CHECK(c2.complement_ok);
  CHECK(c2.failures == std::vector<std::string>{"unimodular"});

  // a denominator that survives into the Gram fails integrality first
  Embedding junk = id;
  junk.glue_basis(0, 0) = Rat(1, 7);
  Certificate c3 = verify_embedding(junk);
  CHECK(!c3.integral);
  CHECK(c3.failures == std::vector<std::string>{"integral Gram"});

  // claimed padding dimension must match K
  Embedding wrong_m = good;
  wrong_m.m = 5;
  Certificate c4 = verify_embedding(wrong_m);
  CHECK(!c4.ok());
  CHECK(has_failure(c4, "embedding shape"));
}

TEST_CASE("embed unimodular end to end") {
  Embedding e = embed_unimodular(l_m7(), 50);
  CHECK(e.k.gram() == IntMat{{1, 0, 0}, {0, 1, 0}, {0, 0, 7}});
  CHECK(e.glued.det() == -1);
  CHECK(e.glued.sig() == Signature{6, 1});
  CHECK(e.glue_index == 7);
  CHECK(e.m == 3);
  CHECK(e.certificate.ok());

  // identical runs give identical bases
  Embedding e2 = embed_unimodular(l_m7(), 50);
  CHECK(e.glue_basis == e2.glue_basis);
  CHECK(e.k.gram() == e2.k.gram());
}

TEST_CASE("embed unimodular pads unimodular input") {
  Embedding e = embed_unimodular(standard_lorentzian(2), 10);
  IntMat want(6, 6);
  want(0, 0) = -1;
  for (std::size_t i = 1; i < 6; ++i) want(i, i) = 1;
  CHECK(e.glued.gram() == want);
  CHECK(e.glue_index == 1);
  CHECK(e.m == 3);
  CHECK(e.glue_basis == to_rat(IntMat::identity(6)));
  CHECK(e.certificate.ok());
}

TEST_CASE("embedding laws across small determinants") {
  for (long kdet : {2L, 3L, 5L, 6L, 7L, 10L, 11L, 13L, 14L, 15L}) {
    CAPTURE(kdet);
    Lattice l = lorentz_diag(kdet, 4);
    Embedding e = embed_unimodular(l, 100);
    CHECK(e.certificate.ok());
    CHECK(e.glue_index == discriminant_group(l).order());
    CHECK(e.glue_index == kdet);
    // index law: det(glued) * |G|^2 = det(L) * det(K)
    CHECK(e.glued.det() * e.glue_index * e.glue_index == l.det() * e.k.det());
    CHECK((e.glued.det() == 1 || e.glued.det() == -1));
    CHECK(e.glued.sig() == Signature{6, 1});
  }

  Embedding e5 = embed_unimodular(lorentz_diag(10, 5), 100);
  CHECK(e5.certificate.ok());
  CHECK(e5.glued.sig() == Signature{7, 1});
  CHECK(e5.glued.det() * Int(100) == lorentz_diag(10, 5).det() * e5.k.det());
}

}  // TEST_SUITE
