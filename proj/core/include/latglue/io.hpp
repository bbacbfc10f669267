#pragma once

#include <string>

#include "latglue/genus.hpp"
#include "latglue/gluing.hpp"
#include "latglue/lattice.hpp"
#include "latglue/matrix.hpp"

namespace latglue {

/// Exact scalar text formats used everywhere in the JSON layer: integers in
/// decimal, rationals as "p/q" ("p" alone when the denominator is 1).  No
/// value ever travels through a float.
std::string int_to_string(const Int& x);
Int int_from_string(const std::string& text);
std::string rat_to_string(const Rat& x);
Rat rat_from_string(const std::string& text);

/// Whole-file helpers; unreadable paths raise parse errors, short writes
/// raise internal errors.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

/// Lattice file: {"gram": [[integers]]} with an optional "name".  Malformed
/// JSON is reported with line and column; a non-square or asymmetric matrix
/// is a parse error, a singular one fails from_gram's precondition.
std::string lattice_to_json(const Lattice& l);
Lattice lattice_from_json(const std::string& text);
Lattice read_lattice_file(const std::string& path);

/// Bare integer matrix file: {"matrix": [[integers]]}.
std::string matrix_to_json(const IntMat& m);
IntMat matrix_from_json(const std::string& text);
IntMat read_matrix_file(const std::string& path);

/// Embedding record.  Raw data (l_gram, k_gram, phi, glue_gens, glue_basis
/// with fraction strings, m, glue_index) plus the stored certificate flags
/// and the glued Gram for readability.  The reader rebuilds the glued
/// lattice from glue_basis and the component Grams, ignoring the stored
/// copy; when the rebuilt Gram is not an integral lattice (a tampered file)
/// the direct sum of the components stands in, so re-verification still runs
/// and reports the defect instead of the reader crashing.
std::string embedding_to_json(const Embedding& e);
Embedding embedding_from_json(const std::string& text);
Embedding read_embedding_file(const std::string& path);

/// Genus spec as JSON {"signature": [r, s], "det": "n", "symbols": {"p":
/// rendered symbol}} or as a compact one-liner "sig=3,1 det=-7 2=[1^+3]_1
/// 7=1^+3,7^-1" (whitespace-separated tokens, commas inside symbols).
std::string genus_spec_to_json(const GenusSpec& s);
GenusSpec genus_spec_from_json(const std::string& text);
GenusSpec genus_spec_from_compact(const std::string& text);

}  // namespace latglue
