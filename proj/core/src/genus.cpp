#include "latglue/genus.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "latglue/error.hpp"

namespace latglue {

namespace {

Int int_pow(const Int& p, long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e));
  return r;
}

int mod8(const Int& x) {
  Int r;
  mpz_fdiv_r_ui(r.get_mpz_t(), x.get_mpz_t(), 8);
  return static_cast<int>(r.get_si());
}

int mod8(long x) { return static_cast<int>(((x % 8) + 8) % 8); }

// Residue mod 8 of a 2-adic unit a/b: since b^2 = 1 mod 8 for odd b, the
// inverse of b agrees with b itself mod 8.
int unit_mod8(const Rat& x) { return mod8(Int(x.get_num() * x.get_den())); }

bool is_prime(const Int& p) {
  return mpz_probab_prime_p(p.get_mpz_t(), 40) > 0;
}

}  // namespace

int legendre(const Int& a, const Int& p) {
  if (p == 2 || !is_prime(p)) precondition_error("legendre: p must be an odd prime");
  return mpz_legendre(a.get_mpz_t(), p.get_mpz_t());
}

int kronecker2(const Int& a) {
  if (mpz_even_p(a.get_mpz_t())) precondition_error("kronecker2: argument must be odd");
  int r = mod8(a);
  return (r == 1 || r == 7) ? 1 : -1;
}

long valuation(const Int& x, const Int& p) {
  if (x == 0) precondition_error("valuation: zero has no finite valuation");
  Int rest;
  return static_cast<long>(
      mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t()));
}

long valuation(const Rat& x, const Int& p) {
  if (x == 0) precondition_error("valuation: zero has no finite valuation");
  return valuation(Int(x.get_num()), p) - valuation(Int(x.get_den()), p);
}

JordanDecomposition jordan_decompose(const Lattice& l, const Int& p) {
  if (!is_prime(p)) precondition_error("jordan_decompose: p must be prime");
  const std::size_t n = l.dim();
  RatMat g = to_rat(l.gram());
  RatMat t = RatMat::identity(n);

  auto sym_swap = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    g.swap_rows(i, j);
    g.swap_cols(i, j);
    t.swap_rows(i, j);
  };
  // g <- E g E^T and t <- E t for E = I + c e_{r,k}; row before column keeps
  // the congruence exact.
  auto sym_add = [&](std::size_t r, std::size_t k, const Rat& c) {
    if (c == 0) return;
    g.add_row_multiple(r, k, c);
    g.add_col_multiple(r, k, c);
    t.add_row_multiple(r, k, c);
  };

  struct Piece {
    std::size_t start;
    std::size_t len;
    long exp;
  };
  std::vector<Piece> pieces;

  std::size_t k = 0;
  while (k < n) {
    bool found = false;
    long vmin = 0;
    for (std::size_t i = k; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        if (g(i, j) == 0) continue;
        long v = valuation(g(i, j), p);
        if (!found || v < vmin) {
          found = true;
          vmin = v;
        }
      }
    if (!found) internal_error("jordan_decompose: degenerate trailing block");

    std::size_t di = n;
    for (std::size_t i = k; i < n; ++i)
      if (g(i, i) != 0 && valuation(g(i, i), p) == vmin) {
        di = i;
        break;
      }

    if (di == n && p != 2) {
      // Only off-diagonal entries attain the minimum; adding row j onto row i
      // puts 2 g(i,j) + g(j,j) on the diagonal, of valuation exactly vmin.
      for (std::size_t i = k; i < n && di == n; ++i)
        for (std::size_t j = i + 1; j < n && di == n; ++j)
          if (g(i, j) != 0 && valuation(g(i, j), p) == vmin) {
            sym_add(i, j, Rat(1));
            di = i;
          }
    }

    if (di < n) {
      sym_swap(di, k);
      const Rat piv = g(k, k);
      for (std::size_t r = k + 1; r < n; ++r)
        if (g(r, k) != 0) sym_add(r, k, Rat(-g(r, k) / piv));
      pieces.push_back({k, 1, vmin});
      k += 1;
      continue;
    }

    // p = 2 with every diagonal entry of higher valuation: split off the 2x2
    // block of a minimal off-diagonal entry.  Its determinant has valuation
    // exactly 2 vmin, so the elimination coefficients are 2-integral.
    std::size_t bi = n, bj = n;
    for (std::size_t i = k; i < n && bi == n; ++i)
      for (std::size_t j = i + 1; j < n && bi == n; ++j)
        if (g(i, j) != 0 && valuation(g(i, j), p) == vmin) {
          bi = i;
          bj = j;
        }
    if (bi == n) internal_error("jordan_decompose: lost the minimal entry");
    sym_swap(bi, k);
    sym_swap(bj, k + 1);

    const Rat a = g(k, k), b = g(k, k + 1), d = g(k + 1, k + 1);
    const Rat det2 = a * d - b * b;
    for (std::size_t r = k + 2; r < n; ++r) {
      const Rat x = g(r, k), y = g(r, k + 1);
      if (x == 0 && y == 0) continue;
      sym_add(r, k, Rat(-(x * d - y * b) / det2));
      sym_add(r, k + 1, Rat(-(y * a - x * b) / det2));
    }
    pieces.push_back({k, 2, vmin});
    k += 2;
  }

  std::stable_sort(pieces.begin(), pieces.end(),
                   [](const Piece& a, const Piece& b) { return a.exp < b.exp; });
  std::vector<std::size_t> order;
  order.reserve(n);
  for (const Piece& pc : pieces)
    for (std::size_t i = 0; i < pc.len; ++i) order.push_back(pc.start + i);

  JordanDecomposition jd;
  jd.transform = RatMat(n, n);
  RatMat g2(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      g2(i, j) = g(order[i], order[j]);
      jd.transform(i, j) = t(order[i], j);
    }
  }

  std::size_t pos = 0, pi = 0;
  while (pi < pieces.size()) {
    std::size_t pj = pi;
    std::size_t len = 0;
    while (pj < pieces.size() && pieces[pj].exp == pieces[pi].exp) {
      len += pieces[pj].len;
      ++pj;
    }
    JordanDecomposition::Constituent c;
    c.exponent = static_cast<int>(pieces[pi].exp);
    c.scale = int_pow(p, pieces[pi].exp);
    c.block = RatMat(len, len);
    const Rat s(c.scale);
    for (std::size_t i = 0; i < len; ++i)
      for (std::size_t j = 0; j < len; ++j)
        c.block(i, j) = g2(pos + i, pos + j) / s;
    // Cross terms between different scales must have been eliminated.
    for (std::size_t i = pos; i < pos + len; ++i)
      for (std::size_t j = pos + len; j < n; ++j)
        if (g2(i, j) != 0) internal_error("jordan_decompose: residual cross term");
    jd.constituents.push_back(std::move(c));
    pos += len;
    pi = pj;
  }
  return jd;
}

PadicSymbol padic_symbol(const Lattice& l, const Int& p) {
  JordanDecomposition jd = jordan_decompose(l, p);
  PadicSymbol sym;
  sym.prime = p;
  for (const auto& c : jd.constituents) {
    JordanBlock b;
    b.exponent = c.exponent;
    b.scale = c.scale;
    b.dim = static_cast<int>(c.block.rows());
    const Rat u = det_exact(c.block);
    if (p == 2) {
      b.eps = kronecker2(Int(u.get_num() * u.get_den()));
      int t = 0;
      bool any_odd = false;
      for (std::size_t i = 0; i < c.block.rows(); ++i) {
        const Rat& e = c.block(i, i);
        if (e != 0 && mpz_odd_p(e.get_num().get_mpz_t())) {
          any_odd = true;
          t = (t + unit_mod8(e)) % 8;
        }
      }
      b.type2 = !any_odd;
      b.oddity = any_odd ? t : 0;
    } else {
      b.eps = legendre(Int(u.get_num()), p) * legendre(Int(u.get_den()), p);
      b.type2 = false;
      b.oddity = 0;
    }
    sym.blocks.push_back(b);
  }
  return sym;
}

int p_excess(const PadicSymbol& sym) {
  if (sym.prime == 2) precondition_error("p_excess: defined for odd p only");
  long e = 0;
  for (const auto& b : sym.blocks) {
    e += static_cast<long>(mod8(Int(b.scale - 1))) * b.dim;
    if (b.exponent % 2 != 0 && b.eps == -1) e += 4;
  }
  return mod8(e);
}

int oddity(const PadicSymbol& sym) {
  if (sym.prime != 2) precondition_error("oddity: defined for p = 2 only");
  long t = 0;
  for (const auto& b : sym.blocks) {
    t += b.oddity;
    if (b.exponent % 2 != 0 && b.eps == -1) t += 4;
  }
  return mod8(t);
}

OddityCheck oddity_formula_check(const Lattice& l) {
  OddityCheck c;
  long lhs = l.sig().pos - l.sig().neg;
  for (const auto& [p, mult] : factorize(Int(abs(l.det()))))
    if (p != 2) lhs += p_excess(padic_symbol(l, p));
  c.lhs = mod8(lhs);
  c.rhs = oddity(padic_symbol(l, Int(2)));
  c.ok = c.lhs == c.rhs;
  return c;
}

PadicSymbol negate_symbol(const PadicSymbol& sym) {
  PadicSymbol out = sym;
  if (sym.prime == 2) {
    for (auto& b : out.blocks) b.oddity = mod8(-long(b.oddity));
  } else {
    const int m1 = legendre(Int(-1), sym.prime);
    for (auto& b : out.blocks)
      if (b.dim % 2 != 0) b.eps *= m1;
  }
  return out;
}

GenusSpec genus_spec_of(const Lattice& l) {
  GenusSpec spec;
  spec.sig = l.sig();
  spec.det = l.det();
  spec.symbols.push_back(padic_symbol(l, Int(2)));
  for (const auto& [p, mult] : factorize(Int(abs(l.det()))))
    if (p != 2) spec.symbols.push_back(padic_symbol(l, p));
  return spec;
}

namespace {

// Structural validation; throws on malformed input, returns the spec with
// symbols sorted by prime, blocks sorted by scale, and derived fields fixed.
GenusSpec normalize_spec(const GenusSpec& in) {
  GenusSpec s = in;
  if (s.sig.pos < 0 || s.sig.neg < 0)
    precondition_error("genus spec: negative signature entry");
  const long dim = s.sig.pos + s.sig.neg;
  if (dim <= 0) precondition_error("genus spec: dimension must be positive");
  if (s.det == 0) precondition_error("genus spec: determinant is zero");
  const bool det_neg = s.det < 0;
  if (det_neg != (s.sig.neg % 2 != 0))
    precondition_error("genus spec: determinant sign inconsistent with signature");

  std::sort(s.symbols.begin(), s.symbols.end(),
            [](const PadicSymbol& a, const PadicSymbol& b) { return a.prime < b.prime; });
  bool has2 = false;
  for (std::size_t i = 0; i < s.symbols.size(); ++i) {
    PadicSymbol& sym = s.symbols[i];
    if (i > 0 && sym.prime == s.symbols[i - 1].prime)
      precondition_error("genus spec: duplicate symbol for one prime");
    if (!is_prime(sym.prime)) precondition_error("genus spec: symbol prime is not prime");
    if (sym.prime == 2) has2 = true;
    if (sym.blocks.empty()) precondition_error("genus spec: empty symbol");

    std::stable_sort(sym.blocks.begin(), sym.blocks.end(),
                     [](const JordanBlock& a, const JordanBlock& b) {
                       return a.exponent < b.exponent;
                     });
    long total = 0, detval = 0;
    for (std::size_t j = 0; j < sym.blocks.size(); ++j) {
      JordanBlock& b = sym.blocks[j];
      if (b.exponent < 0) precondition_error("genus spec: negative scale exponent");
      if (j > 0 && b.exponent == sym.blocks[j - 1].exponent)
        precondition_error("genus spec: repeated scale in one symbol");
      if (b.dim <= 0) precondition_error("genus spec: block dimension must be positive");
      if (b.eps != 1 && b.eps != -1) precondition_error("genus spec: block sign must be +-1");
      b.scale = int_pow(sym.prime, b.exponent);
      if (sym.prime == 2) {
        b.oddity = mod8(long(b.oddity));
      } else {
        b.type2 = false;
        b.oddity = 0;
      }
      total += b.dim;
      detval += static_cast<long>(b.exponent) * b.dim;
    }
    if (total != dim)
      precondition_error("genus spec: symbol dimensions do not sum to the rank");
    if (detval != valuation(s.det, sym.prime))
      precondition_error("genus spec: symbol scales inconsistent with the determinant");
  }
  if (!has2) precondition_error("genus spec: missing 2-adic symbol");
  for (const auto& [p, mult] : factorize(Int(abs(s.det)))) {
    if (p == 2) continue;
    bool present = false;
    for (const auto& sym : s.symbols) present = present || sym.prime == p;
    if (!present)
      precondition_error("genus spec: no symbol for an odd prime dividing the determinant");
  }
  return s;
}

}  // namespace

GenusVerdict genus_exists(const GenusSpec& in) {
  const GenusSpec s = normalize_spec(in);
  GenusVerdict v;

  // Product of block signs must match the residue character of the
  // prime-to-p part of the determinant.
  for (const auto& sym : s.symbols) {
    Int unit;
    mpz_remove(unit.get_mpz_t(), s.det.get_mpz_t(), sym.prime.get_mpz_t());
    int prod = 1;
    for (const auto& b : sym.blocks) prod *= b.eps;
    const int want = sym.prime == 2 ? kronecker2(unit) : legendre(unit, sym.prime);
    if (prod != want) {
      std::ostringstream os;
      os << "determinant condition at p=" << sym.prime;
      v.violations.push_back(os.str());
    }
  }

  // Global oddity formula.
  {
    long lhs = s.sig.pos - s.sig.neg;
    int rhs = 0;
    for (const auto& sym : s.symbols) {
      if (sym.prime == 2)
        rhs = oddity(sym);
      else
        lhs += p_excess(sym);
    }
    if (mod8(lhs) != rhs) v.violations.push_back("oddity formula");
  }

  // Local 2-adic conditions, per block and per compartment.
  for (const auto& sym : s.symbols) {
    if (sym.prime != 2) continue;
    const auto& bs = sym.blocks;
    for (const auto& b : bs) {
      std::ostringstream at;
      at << " at scale " << b.scale;
      if (b.type2 && b.oddity % 8 != 0)
        v.violations.push_back("oddity of type II block" + at.str());
      const int t = b.type2 ? 0 : b.oddity;
      if ((t - b.dim) % 2 != 0) v.violations.push_back("oddity parity" + at.str());
    }
    // Compartments: maximal runs of type I blocks at consecutive scales.
    std::size_t i = 0;
    while (i < bs.size()) {
      if (bs[i].type2) {
        ++i;
        continue;
      }
      std::size_t j = i + 1;
      while (j < bs.size() && !bs[j].type2 && bs[j].exponent == bs[j - 1].exponent + 1)
        ++j;
      long total = 0;
      for (std::size_t k = i; k < j; ++k) total += bs[k].dim;
      if (total <= 2) {
        for (std::size_t k = i; k < j; ++k) {
          const JordanBlock& b = bs[k];
          std::ostringstream at;
          at << " at scale " << b.scale;
          const int t = mod8(long(b.oddity));
          if (b.dim == 1) {
            const bool ok = b.eps == 1 ? (t == 1 || t == 7) : (t == 3 || t == 5);
            if (!ok) v.violations.push_back("dimension-1 oddity table" + at.str());
          } else if (b.dim == 2) {
            const bool ok = b.eps == 1 ? (t == 0 || t == 2 || t == 6)
                                       : (t == 2 || t == 4 || t == 6);
            if (!ok) v.violations.push_back("dimension-2 oddity table" + at.str());
          }
        }
      }
      i = j;
    }
  }

  v.exists = v.violations.empty();
  return v;
}

namespace {

void render_block(std::ostream& os, const JordanBlock& b) {
  os << b.scale << '^' << (b.eps > 0 ? '+' : '-') << b.dim;
}

}  // namespace

std::string render_symbol(const PadicSymbol& sym) {
  std::ostringstream os;
  const auto& bs = sym.blocks;
  bool first = true;
  std::size_t i = 0;
  while (i < bs.size()) {
    if (!first) os << ' ';
    first = false;
    if (sym.prime != 2 || bs[i].type2) {
      render_block(os, bs[i]);
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < bs.size() && !bs[j].type2 && bs[j].exponent == bs[j - 1].exponent + 1)
      ++j;
    long t = 0;
    os << '[';
    for (std::size_t k = i; k < j; ++k) {
      if (k > i) os << ' ';
      render_block(os, bs[k]);
      t += bs[k].oddity;
    }
    os << "]_" << mod8(t);
    i = j;
  }
  return os.str();
}

namespace {

struct SymbolParser {
  const std::string& text;
  std::size_t pos = 0;

  explicit SymbolParser(const std::string& t) : text(t) {}

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == ','))
      ++pos;
  }
  bool done() {
    skip_ws();
    return pos == text.size();
  }
  char peek() { return pos < text.size() ? text[pos] : '\0'; }
  void expect(char c, const char* what) {
    if (peek() != c) parse_error(std::string("symbol: expected ") + what);
    ++pos;
  }
  Int number() {
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) parse_error("symbol: expected a number");
    return Int(text.substr(start, pos - start));
  }
  long subscript() {
    bool neg = false;
    if (peek() == '-') {
      neg = true;
      ++pos;
    }
    Int n = number();
    return neg ? -n.get_si() : n.get_si();
  }

  // scale^[sign]dim
  JordanBlock block(const Int& p) {
    JordanBlock b;
    Int scale = number();
    expect('^', "'^'");
    int sign = 1;
    if (peek() == '+' || peek() == '-') {
      sign = peek() == '-' ? -1 : 1;
      ++pos;
    }
    Int dim = number();
    if (scale <= 0) parse_error("symbol: scale must be positive");
    int e = 0;
    Int s = scale;
    while (s % p == 0) {
      s /= p;
      ++e;
    }
    if (s != 1) parse_error("symbol: scale is not a power of the prime");
    b.exponent = e;
    b.scale = scale;
    b.eps = sign;
    b.dim = static_cast<int>(dim.get_si());
    if (b.dim <= 0) parse_error("symbol: block dimension must be positive");
    return b;
  }
};

// Preferred oddity split for a bracketed pair of one-dimensional blocks:
// pick the table-legal assignment summing to t when one exists.
void split_pair_oddity(JordanBlock& a, JordanBlock& b, long t) {
  auto allowed = [](int eps) {
    return eps == 1 ? std::vector<int>{1, 7} : std::vector<int>{3, 5};
  };
  for (int ta : allowed(a.eps))
    for (int tb : allowed(b.eps))
      if ((ta + tb) % 8 == mod8(t)) {
        a.oddity = ta;
        b.oddity = tb;
        return;
      }
  a.oddity = mod8(t - 1);
  b.oddity = 1;
}

}  // namespace

PadicSymbol parse_symbol(const Int& p, const std::string& text) {
  if (!is_prime(p)) precondition_error("parse_symbol: p must be prime");
  PadicSymbol sym;
  sym.prime = p;
  SymbolParser sp(text);
  while (!sp.done()) {
    if (sp.peek() == '[') {
      if (p != 2) parse_error("symbol: brackets only apply to p = 2");
      ++sp.pos;
      std::vector<JordanBlock> group;
      for (;;) {
        sp.skip_ws();
        group.push_back(sp.block(p));
        sp.skip_ws();
        if (sp.peek() == ']') {
          ++sp.pos;
          break;
        }
      }
      sp.expect('_', "'_' after ']'");
      long t = sp.subscript();
      for (auto& b : group) b.type2 = false;
      if (group.size() == 1) {
        group[0].oddity = mod8(t);
      } else if (group.size() == 2 && group[0].dim == 1 && group[1].dim == 1) {
        split_pair_oddity(group[0], group[1], t);
      } else {
        long rest = 0;
        for (std::size_t i = 1; i < group.size(); ++i) {
          group[i].oddity = group[i].dim % 2;
          rest += group[i].oddity;
        }
        group[0].oddity = mod8(t - rest);
      }
      for (auto& b : group) sym.blocks.push_back(b);
    } else {
      JordanBlock b = sp.block(p);
      if (sp.peek() == '_') {
        if (p != 2) parse_error("symbol: oddity subscripts only apply to p = 2");
        ++sp.pos;
        b.type2 = false;
        b.oddity = mod8(sp.subscript());
      } else {
        b.type2 = p == 2;
        b.oddity = 0;
      }
      sym.blocks.push_back(b);
    }
  }
  if (sym.blocks.empty()) parse_error("symbol: empty");
  std::stable_sort(sym.blocks.begin(), sym.blocks.end(),
                   [](const JordanBlock& a, const JordanBlock& b) {
                     return a.exponent < b.exponent;
                   });
  return sym;
}

}  // namespace latglue
