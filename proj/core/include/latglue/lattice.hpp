#pragma once

#include <string>
#include <vector>

#include "latglue/matrix.hpp"

namespace latglue {

/// An integral lattice given by a symmetric nondegenerate Gram matrix over Z.
/// Vectors are rows; the form is (x, y) = x * gram * y^T.
class Lattice {
public:
  /// Validates symmetry and nonsingularity; caches determinant and signature.
  static Lattice from_gram(IntMat gram, std::string name = "");

  std::size_t dim() const { return gram_.rows(); }
  const IntMat& gram() const { return gram_; }
  const Int& det() const { return det_; }
  Signature sig() const { return sig_; }
  const std::string& name() const { return name_; }

  bool is_unimodular() const { return det_ == 1 || det_ == -1; }

private:
  Lattice() = default;
  IntMat gram_;
  Int det_;
  Signature sig_;
  std::string name_;
};

/// diag(-1, 1, ..., 1) of dimension n + 1.
Lattice standard_lorentzian(std::size_t n);

/// The quotient L*/L in invariant-factor form.  factors is the divisibility
/// chain d_1 | d_2 | ... restricted to d_i > 1; lifts row i is a representative
/// of the i-th generator in L* (coordinates in the basis of L, reduced to
/// [0, 1)); the class of lifts row i has order exactly factors[i].
struct DiscriminantGroup {
  std::vector<Int> factors;
  RatMat lifts;
  /// gram * V columns for the nontrivial factors; coords of w in generator
  /// coordinates are w * coord_map reduced mod factors (see disc_coords).
  IntMat coord_map;

  std::size_t rank() const { return factors.size(); }
  Int order() const;
};

DiscriminantGroup discriminant_group(const Lattice& l);

/// Coordinates of the class of w (a rational vector in L*) with respect to the
/// generators of the discriminant group, each reduced into [0, d_i).
std::vector<Int> disc_coords(const DiscriminantGroup& dg, const std::vector<Rat>& w);

/// The torsion form on the discriminant group with values in Q/Z, represented
/// in [0, 1).  pairings(i, j) = frac(lift_i * gram * lift_j^T); the diagonal
/// carries the norms.  Note the Q/2Z refinement of the norms is not retained.
struct DiscForm {
  RatMat pairings;
  const Rat& norm(std::size_t i) const { return pairings(i, i); }
};

DiscForm discriminant_form(const Lattice& l, const DiscriminantGroup& dg);

/// Norm in Q/Z (reduced to [0,1)) of the class with the given generator
/// coordinates; pairing likewise for two classes.
Rat disc_norm(const Lattice& l, const DiscriminantGroup& dg, const std::vector<Int>& coords);
Rat disc_pairing(const Lattice& l, const DiscriminantGroup& dg, const std::vector<Int>& a,
                 const std::vector<Int>& b);

Lattice direct_sum(const Lattice& a, const Lattice& b);

/// Same module with the form negated.
Lattice negate(const Lattice& l);

/// Strongly square-free: rank of the discriminant group at most dim/2 and all
/// invariant factors square-free.
struct SsfInfo {
  bool ssf = false;
  std::size_t delta = 0;
};
SsfInfo is_ssf(const Lattice& l);

/// Finite-index sublattice spanned by the given row vectors (one per row of
/// rows, coordinates in the basis of l).  index = |det rows|.
struct SublatticeResult {
  Lattice lattice;
  Int index;
};
SublatticeResult sublattice(const Lattice& l, const IntMat& rows);

/// frac(x): the representative of x mod 1 in [0, 1).
Rat frac(const Rat& x);

/// Trial-division factorization (p, multiplicity), ascending p.  Refuses
/// inputs whose unfactored part exceeds the desk-scale bound.
std::vector<std::pair<Int, int>> factorize(const Int& n);

bool is_square_free(const Int& n);

}  // namespace latglue
