#include "latglue/lattice.hpp"

#include <utility>

#include "latglue/error.hpp"

namespace latglue {

Rat frac(const Rat& x) {
  Int fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  Rat out = x - Rat(fl);
  out.canonicalize();
  return out;
}

std::vector<std::pair<Int, int>> factorize(const Int& n) {
  if (n == 0) precondition_error("factorize: zero input");
  Int rest = abs(n);
  std::vector<std::pair<Int, int>> out;
  auto strip = [&](const Int& p) {
    int e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  };
  strip(Int(2));
  Int p = 3;
  // Trial division is adequate for determinant-sized inputs; anything with a
  // large composite cofactor is outside this library's intended scale.
  while (p * p <= rest && p < 2000000) {
    strip(p);
    p += 2;
  }
  if (rest > 1) {
    if (mpz_probab_prime_p(rest.get_mpz_t(), 40) == 0)
      precondition_error("factorize: input too large to factor (" + rest.get_str() + ")");
    out.emplace_back(rest, 1);
  }
  return out;
}

bool is_square_free(const Int& n) {
  if (n == 0) return false;
  for (const auto& [p, e] : factorize(n))
    if (e > 1) return false;
  return true;
}

Lattice Lattice::from_gram(IntMat gram, std::string name) {
  if (!gram.is_square()) precondition_error("lattice: Gram matrix not square");
  if (!gram.is_symmetric()) precondition_error("lattice: Gram matrix not symmetric");
  Lattice l;
  l.det_ = det_exact(gram);
  if (l.det_ == 0) precondition_error("lattice: Gram matrix is singular");
  l.sig_ = gram.rows() ? signature(gram) : Signature{};
  l.gram_ = std::move(gram);
  l.name_ = std::move(name);
  return l;
}

Lattice standard_lorentzian(std::size_t n) {
  IntMat g = IntMat::identity(n + 1);
  g(0, 0) = -1;
  return Lattice::from_gram(g, "I_" + std::to_string(n) + ",1");
}

Int DiscriminantGroup::order() const {
  Int o = 1;
  for (const Int& d : factors) o *= d;
  return o;
}

DiscriminantGroup discriminant_group(const Lattice& l) {
  const std::size_t n = l.dim();
  SnfResult s = snf(l.gram());
  DiscriminantGroup dg;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n; ++i)
    if (s.d(i, i) > 1) {
      keep.push_back(i);
      dg.factors.push_back(s.d(i, i));
    }

  // L* is spanned over Z by the rows of D^{-1} U, so row i of U scaled by
  // 1/d_i represents a generator of the Z/d_i summand of L*/L.
  dg.lifts = RatMat(keep.size(), n);
  for (std::size_t r = 0; r < keep.size(); ++r)
    for (std::size_t j = 0; j < n; ++j)
      dg.lifts(r, j) = frac(Rat(s.u(keep[r], j), dg.factors[r]));

  IntMat av = l.gram() * s.v;
  dg.coord_map = IntMat(n, keep.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t r = 0; r < keep.size(); ++r) dg.coord_map(i, r) = av(i, keep[r]);
  return dg;
}

std::vector<Int> disc_coords(const DiscriminantGroup& dg, const std::vector<Rat>& w) {
  if (w.size() != dg.coord_map.rows()) precondition_error("disc_coords: length mismatch");
  std::vector<Int> out(dg.rank());
  for (std::size_t r = 0; r < dg.rank(); ++r) {
    Rat t = 0;
    for (std::size_t i = 0; i < w.size(); ++i) t += w[i] * Rat(dg.coord_map(i, r));
    t.canonicalize();
    if (t.get_den() != 1) precondition_error("disc_coords: vector not in the dual lattice");
    Int c = t.get_num();
    mpz_fdiv_r(out[r].get_mpz_t(), c.get_mpz_t(), dg.factors[r].get_mpz_t());
  }
  return out;
}

namespace {

Rat pairing_of_lifts(const Lattice& l, const std::vector<Rat>& a, const std::vector<Rat>& b) {
  Rat acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      if (b[j] != 0) acc += a[i] * Rat(l.gram()(i, j)) * b[j];
  }
  return frac(acc);
}

std::vector<Rat> lift_of_coords(const DiscriminantGroup& dg, const std::vector<Int>& coords) {
  std::vector<Rat> w(dg.lifts.cols(), Rat(0));
  for (std::size_t r = 0; r < dg.rank(); ++r)
    for (std::size_t j = 0; j < w.size(); ++j) w[j] += Rat(coords[r]) * dg.lifts(r, j);
  return w;
}

}  // namespace

DiscForm discriminant_form(const Lattice& l, const DiscriminantGroup& dg) {
  DiscForm f;
  f.pairings = RatMat(dg.rank(), dg.rank());
  for (std::size_t i = 0; i < dg.rank(); ++i)
    for (std::size_t j = i; j < dg.rank(); ++j) {
      Rat v = pairing_of_lifts(l, dg.lifts.row(i), dg.lifts.row(j));
      f.pairings(i, j) = v;
      f.pairings(j, i) = v;
    }
  return f;
}

Rat disc_norm(const Lattice& l, const DiscriminantGroup& dg, const std::vector<Int>& coords) {
  auto w = lift_of_coords(dg, coords);
  return pairing_of_lifts(l, w, w);
}

Rat disc_pairing(const Lattice& l, const DiscriminantGroup& dg, const std::vector<Int>& a,
                 const std::vector<Int>& b) {
  return pairing_of_lifts(l, lift_of_coords(dg, a), lift_of_coords(dg, b));
}

Lattice direct_sum(const Lattice& a, const Lattice& b) {
  IntMat g(a.dim() + b.dim(), a.dim() + b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) g(i, j) = a.gram()(i, j);
  for (std::size_t i = 0; i < b.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) g(a.dim() + i, a.dim() + j) = b.gram()(i, j);
  return Lattice::from_gram(std::move(g));
}

Lattice negate(const Lattice& l) { return Lattice::from_gram(-l.gram()); }

SsfInfo is_ssf(const Lattice& l) {
  DiscriminantGroup dg = discriminant_group(l);
  SsfInfo info;
  info.delta = dg.rank();
  if (2 * info.delta > l.dim()) return info;
  for (const Int& d : dg.factors)
    if (!is_square_free(d)) return info;
  info.ssf = true;
  return info;
}

SublatticeResult sublattice(const Lattice& l, const IntMat& rows) {
  if (rows.rows() != l.dim() || rows.cols() != l.dim())
    precondition_error("sublattice: need a square basis matrix of full size");
  Int idx = det_exact(rows);
  if (idx == 0) precondition_error("sublattice: rows are linearly dependent");
  IntMat g = rows * l.gram() * rows.transposed();
  Lattice sub = Lattice::from_gram(std::move(g));
  if (sub.det() != idx * idx * l.det())
    internal_error("sublattice: determinant law violated");
  return {std::move(sub), abs(idx)};
}

}  // namespace latglue
