#include "latglue/gluing.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>

#include "latglue/error.hpp"

namespace latglue {

namespace {

int mod8l(long x) { return static_cast<int>(((x % 8) + 8) % 8); }

Int odd_part(const Int& n, const Int& p) {
  Int u;
  mpz_remove(u.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
  return u;
}

std::string render_spec(const GenusSpec& spec) {
  std::ostringstream os;
  os << "sig=" << spec.sig.pos << "," << spec.sig.neg << " det=" << spec.det;
  for (const auto& sym : spec.symbols) os << " " << sym.prime << "=" << render_symbol(sym);
  return os.str();
}

std::optional<GlueMap> try_anti_isometry(const Lattice& l, const DiscriminantGroup& dl,
                                         const Lattice& k, const DiscriminantGroup& dk) {
  const std::size_t r = dl.rank();
  GlueMap phi;
  if (r == 0) return phi;

  // Target values for the generators of the source group.
  std::vector<Rat> want_norm(r);
  std::vector<std::vector<Rat>> want_pair(r, std::vector<Rat>(r));
  std::vector<std::vector<Int>> units(r, std::vector<Int>(r, 0));
  for (std::size_t i = 0; i < r; ++i) units[i][i] = 1;
  for (std::size_t i = 0; i < r; ++i) {
    want_norm[i] = frac(-disc_norm(l, dl, units[i]));
    for (std::size_t j = 0; j < i; ++j)
      want_pair[i][j] = frac(-disc_pairing(l, dl, units[i], units[j]));
  }

  std::vector<std::vector<Int>> images;

  // Surjectivity of the finished assignment: the images together with the
  // relations d_j e_j must span the full coefficient lattice.
  auto surjective = [&]() {
    IntMat s(2 * r, r);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) {
        s(i, j) = images[i][j];
        s(r + i, j) = i == j ? dk.factors[i] : Int(0);
      }
    IntMat h = hnf(s).h;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j)
        if (h(i, j) != (i == j ? 1 : 0)) return false;
    return true;
  };

  std::function<bool(std::size_t)> dfs = [&](std::size_t i) -> bool {
    if (i == r) return surjective();
    const Int& di = dl.factors[i];
    std::vector<Int> c(r, 0);
    std::function<bool(std::size_t)> assign = [&](std::size_t pos) -> bool {
      if (pos == r) {
        // order of the image must divide the order of the generator
        for (std::size_t j = 0; j < r; ++j) {
          Int g, ord;
          mpz_gcd(g.get_mpz_t(), c[j].get_mpz_t(), dk.factors[j].get_mpz_t());
          ord = dk.factors[j] / g;
          if (di % ord != 0) return false;
        }
        if (disc_norm(k, dk, c) != want_norm[i]) return false;
        for (std::size_t j = 0; j < i; ++j)
          if (disc_pairing(k, dk, c, images[j]) != want_pair[i][j]) return false;
        images.push_back(c);
        if (dfs(i + 1)) return true;
        images.pop_back();
        return false;
      }
      for (Int v = 0; v < dk.factors[pos]; ++v) {
        c[pos] = v;
        if (assign(pos + 1)) return true;
      }
      return false;
    };
    return assign(0);
  };

  if (!dfs(0)) return std::nullopt;
  phi.images = std::move(images);
  return phi;
}

}  // namespace

GenusSpec companion_spec(const Lattice& l) {
  if (l.dim() == 0) precondition_error("companion_spec: empty lattice");
  if (l.is_unimodular())
    precondition_error("companion_spec: unimodular input needs no companion");

  DiscriminantGroup dg = discriminant_group(l);
  const int m = std::max(static_cast<int>(dg.rank()) + 1, 3);
  Int d = l.det();
  if (l.sig().neg % 2 != 0) d = -d;
  if (d <= 0) internal_error("companion_spec: determinant sign bookkeeping");

  long alpha = 0;
  if (d % 2 == 0) {
    for (const Int& f : dg.factors) {
      if (f % 2 != 0) continue;
      if (f % 4 == 0)
        precondition_error(
            "companion_spec: the 2-part of the discriminant group is not 2-elementary; "
            "pass to a strongly square-free lattice first");
      ++alpha;
    }
    if (alpha != valuation(d, Int(2))) internal_error("companion_spec: 2-valuation bookkeeping");
  }

  GenusSpec spec;
  spec.sig = Signature{m, 0};
  spec.det = d;

  // Odd primes dividing d: negate L's local symbol, keep its scale > 1
  // blocks, and let a scale-1 block absorb the remaining dimension and fix
  // the sign product required by the determinant condition.
  std::vector<PadicSymbol> odd_syms;
  for (const auto& [p, e] : factorize(d)) {
    if (p == 2) continue;
    PadicSymbol neg = negate_symbol(padic_symbol(l, p));
    PadicSymbol out;
    out.prime = p;
    int copied = 0, eps_rest = 1;
    for (const auto& b : neg.blocks)
      if (b.exponent > 0) {
        out.blocks.push_back(b);
        copied += b.dim;
        eps_rest *= b.eps;
      }
    JordanBlock unit;
    unit.exponent = 0;
    unit.scale = 1;
    unit.dim = m - copied;
    if (unit.dim <= 0) internal_error("companion_spec: no room for the unit block");
    unit.eps = legendre(odd_part(d, p), p) * eps_rest;
    out.blocks.insert(out.blocks.begin(), unit);
    odd_syms.push_back(std::move(out));
  }

  long t = m;
  for (const auto& sym : odd_syms) t += p_excess(sym);

  PadicSymbol two;
  two.prime = 2;
  if (d % 2 != 0) {
    JordanBlock b;
    b.exponent = 0;
    b.scale = 1;
    b.dim = m;
    b.eps = kronecker2(d);
    b.type2 = false;
    b.oddity = mod8l(t);
    two.blocks.push_back(b);
  } else {
    JordanBlock b1, b2;
    b2.exponent = 1;
    b2.scale = 2;
    b2.dim = static_cast<int>(alpha);
    b2.eps = 1;
    b2.type2 = false;
    b2.oddity = static_cast<int>(alpha % 2);
    b1.exponent = 0;
    b1.scale = 1;
    b1.dim = m - static_cast<int>(alpha);
    b1.eps = kronecker2(odd_part(d, Int(2)));
    b1.type2 = false;
    b1.oddity = mod8l(t - b2.oddity);
    two.blocks = {b1, b2};
  }
  spec.symbols.push_back(std::move(two));
  for (auto& s : odd_syms) spec.symbols.push_back(std::move(s));

  if (!genus_exists(spec).exists)
    internal_error("companion_spec: constructed genus fails its own existence check");
  return spec;
}

namespace {

// Nondecreasing positive tuples with the given product, lexicographically
// ascending; fn returning true stops the enumeration.
bool enum_sorted_diagonals(const Int& rem, int slots, const Int& lo, std::vector<Int>& acc,
                           const std::function<bool(const std::vector<Int>&)>& fn) {
  if (slots == 0) {
    if (rem == 1) return fn(acc);
    return false;
  }
  for (Int a = lo;; ++a) {
    Int pw = 1;
    bool over = false;
    for (int i = 0; i < slots && !over; ++i) {
      pw *= a;
      if (pw > rem) over = true;
    }
    if (over) break;
    if (rem % a != 0) continue;
    acc.push_back(a);
    bool stop = enum_sorted_diagonals(rem / a, slots - 1, a, acc, fn);
    acc.pop_back();
    if (stop) return true;
  }
  return false;
}

// Symmetric integer matrices in lexicographic order of the upper triangle
// (row-major), diagonal in [1, bound], off-diagonal in [-bound, bound],
// only determinant-d leaves reach fn.  Pruning never skips a candidate:
// leading minors are linear in each diagonal entry, so the smallest value
// keeping them positive is solved for directly, the last diagonal entry is
// forced by the target determinant, and off-diagonal entries are capped by
// g_ij^2 < g_ii * g_jj <= g_ii * bound.
struct GeneralEnum {
  int m;
  Int d;
  long bound;
  std::function<bool(const IntMat&)> fn;
  IntMat g;

  GeneralEnum(int m_, Int d_, long bound_, std::function<bool(const IntMat&)> fn_)
      : m(m_), d(std::move(d_)), bound(bound_), fn(std::move(fn_)), g(m_, m_) {}

  Int leading_minor(int k) const {
    if (k == 0) return 1;
    IntMat sub(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) sub(i, j) = g(i, j);
    return det_exact(sub);
  }

  bool fill(int i, int j) {
    if (i == m) return det_exact(g) == d ? fn(g) : false;
    const int ni = j == m - 1 ? i + 1 : i;
    const int nj = j == m - 1 ? i + 1 : j + 1;
    if (i == j) {
      const Int a = leading_minor(i);  // positive by induction
      g(i, i) = 0;
      const Int c0 = leading_minor(i + 1);  // minor(i+1) = a*g_ii + c0
      if (i == m - 1) {
        const Int num = d - c0;
        if (num % a != 0) return false;
        const Int x = num / a;
        if (x < 1 || x > bound) return false;
        g(i, i) = x;
        return fill(ni, nj);
      }
      Int vmin;  // least value with a positive leading minor
      const Int mc0 = -c0;
      mpz_fdiv_q(vmin.get_mpz_t(), mc0.get_mpz_t(), a.get_mpz_t());
      vmin += 1;
      if (vmin < 1) vmin = 1;
      for (Int v = vmin; v <= bound; ++v) {
        g(i, i) = v;
        if (fill(ni, nj)) return true;
      }
      return false;
    }
    const Int cap2 = g(i, i) * bound;
    Int cap;
    mpz_sqrt(cap.get_mpz_t(), cap2.get_mpz_t());
    if (cap > bound) cap = bound;
    const Int mcap = -cap;
    for (Int v = mcap; v <= cap; ++v) {
      g(i, j) = v;
      g(j, i) = v;
      if (fill(ni, nj)) return true;
    }
    g(i, j) = 0;
    g(j, i) = 0;
    return false;
  }
};

}  // namespace

Lattice companion_search(const Lattice& l, long budget) {
  const GenusSpec spec = companion_spec(l);
  const Int d = spec.det;
  const int m = spec.sig.pos;
  const DiscriminantGroup dl = discriminant_group(l);

  const PadicSymbol* two_sym = nullptr;
  std::vector<const PadicSymbol*> odd_syms;
  for (const auto& s : spec.symbols) {
    if (s.prime == 2)
      two_sym = &s;
    else
      odd_syms.push_back(&s);
  }

  // Cheap rejection by canonical invariants of the target genus: invariant
  // factors, the full local symbols at odd primes, and scales/dimensions/
  // types at 2 (unit signs and oddities at 2 are not stable under symbol
  // equivalence, so they are left to the semantic test).
  auto survives_prune = [&](const Lattice& cand, const DiscriminantGroup& dk) {
    if (dk.factors != dl.factors) return false;
    for (const PadicSymbol* ts : odd_syms) {
      PadicSymbol cs = padic_symbol(cand, ts->prime);
      if (cs.blocks.size() != ts->blocks.size()) return false;
      for (std::size_t i = 0; i < cs.blocks.size(); ++i)
        if (cs.blocks[i].exponent != ts->blocks[i].exponent ||
            cs.blocks[i].dim != ts->blocks[i].dim || cs.blocks[i].eps != ts->blocks[i].eps)
          return false;
    }
    if (d % 2 == 0 && two_sym != nullptr) {
      PadicSymbol cs = padic_symbol(cand, Int(2));
      if (cs.blocks.size() != two_sym->blocks.size()) return false;
      for (std::size_t i = 0; i < cs.blocks.size(); ++i)
        if (cs.blocks[i].exponent != two_sym->blocks[i].exponent ||
            cs.blocks[i].dim != two_sym->blocks[i].dim ||
            cs.blocks[i].type2 != two_sym->blocks[i].type2)
          return false;
    }
    return true;
  };

  long tested = 0;
  std::optional<Lattice> found;

  // A candidate is a positive-definite symmetric Gram with determinant d
  // that survives the genus prune; the budget caps how many reach the
  // semantic test.  Acceptance is an anti-isometry of discriminant forms,
  // double-checked by gluing and verifying the result.
  auto consider = [&](const IntMat& gram) -> bool {
    Lattice cand = Lattice::from_gram(gram);
    DiscriminantGroup dk = discriminant_group(cand);
    if (!survives_prune(cand, dk)) return false;
    if (tested >= budget) return true;
    ++tested;
    auto phi = try_anti_isometry(l, dl, cand, dk);
    if (!phi) return false;
    Embedding e = glue(l, cand, *phi);
    if (!e.certificate.ok()) return false;
    found = std::move(cand);
    return true;
  };

  std::vector<Int> acc;
  enum_sorted_diagonals(d, m, Int(1), acc, [&](const std::vector<Int>& diag) {
    IntMat g(m, m);
    for (int i = 0; i < m; ++i) g(i, i) = diag[i];
    return consider(g);
  });

  // General phase: iterative deepening on the entry bound so companions with
  // small entries are found quickly; the max-entry filter keeps each pass
  // from revisiting candidates of the previous ones.
  for (long b2 = 1; b2 <= budget && !found && tested < budget; ++b2) {
    GeneralEnum en(m, d, b2, [&](const IntMat& gram) -> bool {
      Int mx = 0;
      for (std::size_t i = 0; i < gram.rows(); ++i)
        for (std::size_t j = i; j < gram.cols(); ++j) {
          Int a = gram(i, j) < 0 ? Int(-gram(i, j)) : gram(i, j);
          if (a > mx) mx = a;
        }
      if (mx != b2) return false;
      return consider(gram);
    });
    en.fill(0, 0);
  }

  if (!found)
    search_error("companion_search: no companion found (budget " + std::to_string(budget) +
                 ", candidates tested " + std::to_string(tested) +
                 "); target genus: " + render_spec(spec));
  return std::move(*found);
}

GlueMap anti_isometry(const Lattice& l, const DiscriminantGroup& dl, const Lattice& k,
                      const DiscriminantGroup& dk) {
  if (dl.factors != dk.factors)
    precondition_error("anti_isometry: discriminant groups are not isomorphic");
  auto phi = try_anti_isometry(l, dl, k, dk);
  if (!phi) search_error("anti_isometry: no form-negating isomorphism exists");
  return std::move(*phi);
}

Embedding glue(const Lattice& l, const Lattice& k, const GlueMap& phi) {
  const DiscriminantGroup dl = discriminant_group(l);
  const DiscriminantGroup dk = discriminant_group(k);
  if (phi.images.size() != dl.rank())
    precondition_error("glue: one image per generator of the source group required");
  for (const auto& im : phi.images)
    if (im.size() != dk.rank())
      precondition_error("glue: image coefficient count does not match the target group");

  const std::size_t nl = l.dim(), nk = k.dim(), n = nl + nk;
  const Lattice sum = direct_sum(l, k);

  RatMat gens(dl.rank(), n);
  for (std::size_t i = 0; i < dl.rank(); ++i) {
    for (std::size_t j = 0; j < nl; ++j) gens(i, j) = dl.lifts(i, j);
    for (std::size_t j = 0; j < nk; ++j) {
      Rat y = 0;
      for (std::size_t t = 0; t < dk.rank(); ++t) y += Rat(phi.images[i][t]) * dk.lifts(t, j);
      gens(i, nl + j) = frac(y);
    }
  }

  Int dcom = 1;
  for (std::size_t i = 0; i < gens.rows(); ++i)
    for (std::size_t j = 0; j < n; ++j)
      mpz_lcm(dcom.get_mpz_t(), dcom.get_mpz_t(), gens(i, j).get_den().get_mpz_t());

  IntMat stack(n + dl.rank(), n);
  for (std::size_t i = 0; i < n; ++i) stack(i, i) = dcom;
  for (std::size_t i = 0; i < gens.rows(); ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rat v = gens(i, j) * dcom;
      if (v.get_den() != 1) internal_error("glue: common denominator bookkeeping");
      stack(n + i, j) = v.get_num();
    }

  IntMat h = hnf(stack).h;
  for (std::size_t i = n; i < stack.rows(); ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (h(i, j) != 0) internal_error("glue: basis rank bookkeeping");

  RatMat basis(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rat v(h(i, j), dcom);
      v.canonicalize();
      basis(i, j) = v;
    }

  RatMat gq = basis * to_rat(sum.gram()) * basis.transposed();
  IntMat gi;
  if (!to_int(gq, gi))
    verify_error("glue: non-integral Gram — the glue group is not isotropic");

  Embedding e{l,
              k,
              phi,
              std::move(gens),
              std::move(basis),
              Lattice::from_gram(std::move(gi)),
              dl.order(),
              static_cast<int>(nk),
              Certificate{}};

  if (e.glued.det() * e.glue_index * e.glue_index != sum.det())
    internal_error("glue: determinant law violated");

  e.certificate = verify_embedding(e);
  return e;
}

Certificate verify_embedding(const Embedding& e) {
  Certificate c;
  c.m = e.m;
  c.glue_index = e.glue_index;
  const std::size_t nl = e.l.dim(), nk = e.k.dim(), n = nl + nk;
  auto fail = [&](const char* name) { c.failures.emplace_back(name); };

  if (e.glue_basis.rows() != n || e.glue_basis.cols() != n || e.m != static_cast<int>(nk)) {
    fail("embedding shape");
    return c;
  }

  const Lattice sum = direct_sum(e.l, e.k);
  RatMat gq = e.glue_basis * to_rat(sum.gram()) * e.glue_basis.transposed();
  IntMat gi;
  c.integral = to_int(gq, gi);
  if (!c.integral) {
    fail("integral Gram");
    return c;
  }

  const Int det = det_exact(gi);
  c.unimodular = det == 1 || det == -1;
  if (!c.unimodular) fail("unimodular");

  const Signature target{e.l.sig().pos + static_cast<int>(nk), e.l.sig().neg};
  c.signature_ok = det != 0 && signature(gi) == target;
  if (!c.signature_ok) fail("signature");

  for (std::size_t i = 0; i < n && !c.odd_type; ++i)
    if (gi(i, i) % 2 != 0) c.odd_type = true;
  if (!c.odd_type) fail("odd type");

  // K's orthogonal complement inside the glued lattice must be exactly the
  // image of L: compute the left kernel of the pairing against K and match
  // it, back in L + K coordinates, against the standard copy of L.
  c.complement_ok = [&]() {
    if (det == 0) return false;
    RatMat binv;
    try {
      binv = rat_inverse(e.glue_basis);
    } catch (const std::exception&) {
      return false;
    }
    RatMat zk_q(nk, n);
    for (std::size_t j = 0; j < nk; ++j)
      for (std::size_t t = 0; t < n; ++t) zk_q(j, t) = binv(nl + j, t);
    IntMat zk;
    if (!to_int(zk_q, zk)) return false;  // K not inside the glued lattice

    SnfResult s = snf(gi * zk.transposed());
    std::size_t rank = 0;
    for (std::size_t i = 0; i < nk; ++i)
      if (s.d(i, i) != 0) ++rank;
    if (rank != nk || n - rank != nl) return false;

    IntMat w(nl, n);
    for (std::size_t i = 0; i < nl; ++i)
      for (std::size_t j = 0; j < n; ++j) w(i, j) = s.u(rank + i, j);

    RatMat wb_q = to_rat(w) * e.glue_basis;
    IntMat wb;
    if (!to_int(wb_q, wb)) return false;
    for (std::size_t i = 0; i < nl; ++i)
      for (std::size_t j = nl; j < n; ++j)
        if (wb(i, j) != 0) return false;
    IntMat a(nl, nl);
    for (std::size_t i = 0; i < nl; ++i)
      for (std::size_t j = 0; j < nl; ++j) a(i, j) = wb(i, j);
    const Int da = det_exact(a);
    if (da != 1 && da != -1) return false;

    // Gram agreement through the witness: W Gq W^T = A Gram_L A^T.
    return w * gi * w.transposed() == a * e.l.gram() * a.transposed();
  }();
  if (!c.complement_ok) fail("complement recovers L");
  return c;
}

Embedding embed_unimodular(const Lattice& l, long budget) {
  if (l.is_unimodular()) {
    Lattice k = Lattice::from_gram(IntMat::identity(3));
    return glue(l, k, GlueMap{});
  }
  Lattice k = companion_search(l, budget);
  const DiscriminantGroup dl = discriminant_group(l);
  const DiscriminantGroup dk = discriminant_group(k);
  GlueMap phi = anti_isometry(l, dl, k, dk);
  Embedding e = glue(l, k, phi);
  if (!e.certificate.ok())
    internal_error("embed_unimodular: accepted companion failed verification");
  return e;
}

}  // namespace latglue
