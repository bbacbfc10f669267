#pragma once

#include <string>
#include <vector>

#include "latglue/genus.hpp"
#include "latglue/lattice.hpp"
#include "latglue/matrix.hpp"

namespace latglue {

/// An anti-isometry of discriminant forms, one image per generator of the
/// source group, as coefficient vectors over the target group's generators.
/// Defines the totally isotropic glue group (the graph of the map).
struct GlueMap {
  std::vector<std::vector<Int>> images;
};

/// Result flags of verify_embedding; ok() means every check passed.
/// failures lists the names of the checks that did not.
struct Certificate {
  bool integral = false;
  bool unimodular = false;
  bool signature_ok = false;
  bool odd_type = false;
  bool complement_ok = false;
  int m = 0;
  Int glue_index = 0;
  std::vector<std::string> failures;

  bool ok() const {
    return integral && unimodular && signature_ok && odd_type && complement_ok;
  }
};

/// The glued overlattice of L + K along the graph of phi.  glue_basis rows
/// are a basis of the glued lattice in L + K coordinates (HNF-canonical,
/// scaled by the common denominator); glue_gens holds the lifted generators
/// (x_i | y_i) that were adjoined.
struct Embedding {
  Lattice l;
  Lattice k;
  GlueMap phi;
  RatMat glue_gens;
  RatMat glue_basis;
  Lattice glued;
  Int glue_index = 1;
  int m = 0;
  Certificate certificate;
};

/// Genus of the positive-definite companion lattice: signature (m, 0) with
/// m = max(delta + 1, 3), determinant (-1)^s det L, local data negated
/// against L's so that the discriminant forms can cancel.  Rejects
/// unimodular input and even determinants whose 2-part of the discriminant
/// group is not 2-elementary.
GenusSpec companion_spec(const Lattice& l);

/// Deterministic search for a companion in the genus of companion_spec:
/// sorted diagonal Grams first (divisor enumeration, lexicographic), then
/// general symmetric positive-definite Grams by growing entry bound up to
/// the budget.  Candidates are pruned against the target genus cheaply;
/// the budget also caps how many surviving candidates are semantically
/// tested.  Exhaustion reports the target spec.
Lattice companion_search(const Lattice& l, long budget);

/// Anti-isometry of discriminant forms: order-preserving group isomorphism
/// negating norms and pairings, found generator by generator in coefficient
/// lexicographic order.  Throws when the groups differ or no map exists.
GlueMap anti_isometry(const Lattice& l, const DiscriminantGroup& dl, const Lattice& k,
                      const DiscriminantGroup& dk);

/// Overlattice of L + K generated by the standard basis and the lifts of
/// the graph of phi.  Throws when the resulting Gram is not integral (phi
/// not isotropic).  The returned certificate is already verified.
Embedding glue(const Lattice& l, const Lattice& k, const GlueMap& phi);

/// Re-derives every certificate claim from l, k and glue_basis alone:
/// integral Gram, |det| = 1, signature (r + m, s), odd type, and K's
/// orthogonal complement being exactly the image of L.
Certificate verify_embedding(const Embedding& e);

/// Full pipeline: companion spec, search, anti-isometry, glue, verify.
/// Unimodular L is padded with the standard cubic lattice of dimension 3.
Embedding embed_unimodular(const Lattice& l, long budget);

}  // namespace latglue
