#pragma once

#include <string>
#include <vector>

#include "latglue/gluing.hpp"
#include "latglue/lattice.hpp"
#include "latglue/matrix.hpp"

namespace latglue {

/// Automorphisms act on row vectors: g is an automorphism of L when
/// g * A * g^T == A for the Gram matrix A.  Every function below uses that
/// convention; nothing in this header transposes behind your back.
using AutElement = IntMat;

/// A level-2 automorphism of l carried across a glued embedding: `extension`
/// is the block action source ⊕ h on l ⊕ k (h acts on the companion), and
/// `conjugated` is the same action rewritten on the glue basis, i.e.
/// B * extension * B^{-1} for B = glue_basis.  It is integral and preserves
/// the glued Gram.
struct ExtendedAut {
  AutElement source;
  AutElement extension;
  IntMat conjugated;
};

/// Result of check_level2_extension: the extension that was found plus the
/// named checks that failed on its conjugated action (empty means the
/// automorphism lands in the level-2 congruence subgroup of the glued
/// unimodular lattice).
struct ExtensionCheck {
  ExtendedAut ext;
  std::vector<std::string> failures;
  bool ok() const noexcept { return failures.empty(); }
};

/// Outcome of verify_example_matrices.
struct CheckResult {
  std::vector<std::string> failures;
  bool ok() const noexcept { return failures.empty(); }
};

/// Exact test of g * A * g^T == A.  Rejects a non-square or wrongly sized
/// matrix as a precondition violation.
bool is_automorphism(const Lattice& l, const IntMat& g);

/// True when g is entrywise congruent to the identity mod m (m >= 1).
/// Callers are expected to pass an automorphism of l; only the shape is
/// checked here.
bool congruence_level(const Lattice& l, const IntMat& g, const Int& m);

/// Reflection in a vector v with (v,v) != 0: x -> x - 2(x,v)/(v,v) * v.
/// Fails as a precondition violation when the map is not integral on the
/// lattice.  The result is an involution in Aut(L); for (v,v) = ±1 it is
/// congruent to the identity mod 2.
AutElement reflection(const Lattice& l, const std::vector<Int>& v);

/// Deterministic desk-scale harvest of automorphisms: ±identity, every
/// reflection in a vector of norm ±1 or ±2 with entries bounded by `bound`
/// in absolute value, and all matrices found by backtracking over rows with
/// the right norms and pairings among vectors with entries within the bound.
/// Deduplicated and sorted by entries, so identical inputs give identical
/// lists.  This is a generator harvest for property testing, not a full
/// automorphism-group computation.
std::vector<AutElement> find_automorphisms(const Lattice& l, long bound);

/// Extend a level-2 automorphism g of e.l across the embedding: compute the
/// action induced by g on the discriminant group of l, transport it through
/// the glue map to the required action on the discriminant group of the
/// companion, and search Aut(k) for an h inducing it (candidate order:
/// identity, global negation, signed diagonals, signed permutations, then a
/// bounded harvest).  Because g is congruent to the identity mod 2, a
/// candidate is accepted only when the conjugated action is too — on even
/// discriminant orders the induced action alone does not separate the
/// candidates.  Returns the block extension g ⊕ h together with its integral
/// conjugate on the glue basis.  A failure to find h is a search limitation
/// and is reported as such.
ExtendedAut extend_automorphism(const Embedding& e, const AutElement& g);

/// Check that a level-2 automorphism of e.l extends to a level-2
/// automorphism of the glued unimodular lattice: extend_automorphism must
/// succeed and the conjugated action must be integral, preserve the glued
/// Gram, and be congruent to the identity mod 2.  Rejects g outside the
/// level-2 subgroup as a precondition violation.
ExtensionCheck check_level2_extension(const Embedding& e, const AutElement& g);

/// Exact replay of the bundled rank-7 worked example: the hard-coded change
/// of basis B turns diag(-7,1,1,1,7,1,1) into diag(-1,1,1,1,1,1,1), and for
/// concrete block extensions γ of automorphisms of diag(-7,1,1,1) the
/// conjugate B * γ * B^{-1} matches the expected closed-form pattern
/// entrywise.
CheckResult verify_example_matrices();

}  // namespace latglue
