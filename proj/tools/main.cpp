#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "latglue/aut.hpp"
#include "latglue/bianchi.hpp"
#include "latglue/error.hpp"
#include "latglue/genus.hpp"
#include "latglue/gluing.hpp"
#include "latglue/io.hpp"
#include "latglue/lattice.hpp"

using nlohmann::json;
using namespace latglue;

namespace {

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::parse: return "parse";
    case Stage::precondition: return "precondition";
    case Stage::search: return "search";
    case Stage::verify: return "verify";
    case Stage::internal: return "internal";
  }
  return "internal";
}

int stage_exit_code(Stage s) {
  switch (s) {
    case Stage::parse: return 2;
    case Stage::precondition: return 3;
    case Stage::search: return 4;
    case Stage::verify: return 5;
    case Stage::internal: return 1;
  }
  return 1;
}

void print_report(const json& j) { std::cout << j.dump(2) << "\n"; }

json matrix_value(const IntMat& m) { return json::parse(matrix_to_json(m))["matrix"]; }

json certificate_value(const Certificate& c) {
  json j;
  j["complement_ok"] = c.complement_ok;
  j["failures"] = c.failures;
  j["glue_index"] = int_to_string(c.glue_index);
  j["integral"] = c.integral;
  j["m"] = c.m;
  j["odd_type"] = c.odd_type;
  j["signature_ok"] = c.signature_ok;
  j["unimodular"] = c.unimodular;
  return j;
}

int run_analyze(const std::string& path) {
  Lattice l = read_lattice_file(path);
  json j;
  j["det"] = int_to_string(l.det());
  j["dim"] = l.dim();
  if (!l.name().empty()) j["name"] = l.name();
  j["signature"] = json::array({l.sig().pos, l.sig().neg});
  j["unimodular"] = l.is_unimodular();

  DiscriminantGroup dg = discriminant_group(l);
  json factors = json::array();
  for (const Int& f : dg.factors) factors.push_back(int_to_string(f));
  j["invariant_factors"] = std::move(factors);

  SsfInfo ssf = is_ssf(l);
  j["ssf"] = json{{"delta", ssf.delta}, {"flag", ssf.ssf}};

  GenusSpec spec = genus_spec_of(l);
  json symbols, excesses;
  for (const PadicSymbol& sym : spec.symbols) {
    symbols[int_to_string(sym.prime)] = render_symbol(sym);
    if (sym.prime == 2)
      j["oddity"] = oddity(sym);
    else
      excesses[int_to_string(sym.prime)] = p_excess(sym);
  }
  j["symbols"] = std::move(symbols);
  j["p_excesses"] = std::move(excesses);

  OddityCheck oc = oddity_formula_check(l);
  j["oddity_formula"] = json{{"lhs", oc.lhs}, {"ok", oc.ok}, {"rhs", oc.rhs}};

  print_report(j);
  return 0;
}

int run_embed(const std::string& path, long budget, const std::string& out) {
  Lattice l = read_lattice_file(path);
  Embedding e = embed_unimodular(l, budget);
  Certificate fresh = verify_embedding(e);

  json j;
  j["budget"] = budget;
  j["certificate"] = certificate_value(fresh);
  j["det_glued"] = int_to_string(e.glued.det());
  j["glue_index"] = int_to_string(e.glue_index);
  j["m"] = e.m;
  std::string serialized = embedding_to_json(e);
  if (out.empty()) {
    j["embedding"] = json::parse(serialized);
  } else {
    write_text_file(out, serialized);
    j["embedding_file"] = out;
  }
  print_report(j);
  return fresh.ok() ? 0 : 5;
}

int run_verify(const std::string& path) {
  Embedding e = read_embedding_file(path);
  Certificate fresh = verify_embedding(e);
  const Certificate& stored = e.certificate;
  bool stored_matches = fresh.complement_ok == stored.complement_ok &&
                        fresh.integral == stored.integral && fresh.odd_type == stored.odd_type &&
                        fresh.signature_ok == stored.signature_ok &&
                        fresh.unimodular == stored.unimodular && fresh.m == stored.m &&
                        fresh.glue_index == stored.glue_index;
  json j;
  j["certificate"] = certificate_value(fresh);
  j["ok"] = fresh.ok();
  j["stored_certificate_matches"] = stored_matches;
  print_report(j);
  return fresh.ok() ? 0 : 5;
}

int run_genus(const std::vector<std::string>& args) {
  GenusSpec spec = [&] {
    if (args.size() == 1 && std::filesystem::exists(args[0])) {
      std::string content = read_text_file(args[0]);
      const auto first = content.find_first_not_of(" \t\r\n");
      if (first != std::string::npos && content[first] == '{')
        return genus_spec_from_json(content);
      return genus_spec_from_compact(content);
    }
    std::string joined;
    for (const std::string& a : args) {
      if (!joined.empty()) joined += ' ';
      joined += a;
    }
    if (args.size() == 1 && joined.find('=') == std::string::npos)
      parse_error("genus: no such file: " + joined);
    return genus_spec_from_compact(joined);
  }();

  GenusVerdict v = genus_exists(spec);
  json j;
  j["det"] = int_to_string(spec.det);
  j["exists"] = v.exists;
  j["signature"] = json::array({spec.sig.pos, spec.sig.neg});
  j["violations"] = v.violations;
  print_report(j);
  return v.exists ? 0 : 5;
}

int run_extend(const std::string& lattice_path, const std::string& embedding_path,
               const std::string& aut_path) {
  Lattice l = read_lattice_file(lattice_path);
  Embedding e = read_embedding_file(embedding_path);
  if (l.gram() != e.l.gram())
    precondition_error("extend: the lattice file does not match the embedding's base lattice");
  IntMat g = read_matrix_file(aut_path);
  ExtensionCheck chk = check_level2_extension(e, g);
  json j;
  j["conjugated"] = matrix_value(chk.ext.conjugated);
  j["extension"] = matrix_value(chk.ext.extension);
  j["failures"] = chk.failures;
  j["ok"] = chk.ok();
  j["source"] = matrix_value(chk.ext.source);
  print_report(j);
  return chk.ok() ? 0 : 5;
}

json bianchi_entry(long d) {
  FiniteRing4 r = ring_mod2(d);
  std::string residue;
  if (d % 4 == 1)
    residue = "1 mod 4";
  else if (d % 4 == 2)
    residue = "2 mod 4";
  else if (d % 8 == 3)
    residue = "3 mod 8";
  else
    residue = "7 mod 8";
  json e;
  e["d"] = d;
  e["index"] = bianchi_index(d);
  e["residue"] = residue;
  e["ring"] = r.describe();
  return e;
}

int run_bianchi(long d, bool have_d, const std::vector<long>& range) {
  json entries = json::array();
  if (have_d) {
    entries.push_back(bianchi_entry(d));
  } else {
    if (range[0] > range[1])
      precondition_error("bianchi: empty range");
    for (long x = std::max(1L, range[0]); x <= range[1]; ++x)
      if (is_square_free(Int(x))) entries.push_back(bianchi_entry(x));
  }
  json j;
  j["entries"] = std::move(entries);
  print_report(j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact lattice invariants, certified unimodular gluing, congruence indices"};
  app.require_subcommand(1);

  std::string analyze_path;
  CLI::App* analyze = app.add_subcommand("analyze", "determinant, signature, discriminant group and local symbols of a lattice file");
  analyze->add_option("path", analyze_path, "lattice JSON file")->required();

  std::string embed_path, embed_out;
  long embed_budget = 100;
  CLI::App* embed = app.add_subcommand("embed", "embed a Lorentzian lattice into an odd unimodular lattice and certify it");
  embed->add_option("path", embed_path, "lattice JSON file")->required();
  embed->add_option("--budget", embed_budget, "companion search budget (default 100)");
  embed->add_option("--out", embed_out, "write the embedding JSON here instead of inlining it");

  std::string verify_path;
  CLI::App* verify = app.add_subcommand("verify", "recompute every certificate claim of a stored embedding");
  verify->add_option("path", verify_path, "embedding JSON file")->required();

  std::vector<std::string> genus_args;
  CLI::App* genus = app.add_subcommand("genus", "decide existence of a genus given by symbols");
  genus->add_option("spec", genus_args, "spec file or inline tokens: sig=r,s det=n p=symbol ...")
      ->required()
      ->expected(-1);

  std::string ext_lattice, ext_embedding, ext_aut;
  CLI::App* extend = app.add_subcommand("extend", "extend a level-2 automorphism across a stored embedding");
  extend->add_option("lattice", ext_lattice, "lattice JSON file")->required();
  extend->add_option("embedding", ext_embedding, "embedding JSON file")->required();
  extend->add_option("automorphism", ext_aut, "matrix JSON file")->required();

  long bianchi_d = 0;
  std::vector<long> bianchi_range;
  CLI::App* bianchi = app.add_subcommand("bianchi", "level-2 congruence index of the Bianchi group for square-free d");
  CLI::Option* opt_d = bianchi->add_option("--d", bianchi_d, "single square-free d");
  CLI::Option* opt_range = bianchi->add_option("--range", bianchi_range, "inclusive range A B (square-free d only)")->expected(2);
  opt_d->excludes(opt_range);
  opt_range->excludes(opt_d);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) return run_analyze(analyze_path);
    if (*embed) return run_embed(embed_path, embed_budget, embed_out);
    if (*verify) return run_verify(verify_path);
    if (*genus) return run_genus(genus_args);
    if (*extend) return run_extend(ext_lattice, ext_embedding, ext_aut);
    if (*bianchi) {
      if (!*opt_d && !*opt_range)
        precondition_error("bianchi: pass --d N or --range A B");
      return run_bianchi(bianchi_d, static_cast<bool>(*opt_d), bianchi_range);
    }
  } catch (const Error& e) {
    json j;
    j["error"] = json{{"message", e.what()}, {"stage", stage_name(e.stage())}};
    print_report(j);
    return stage_exit_code(e.stage());
  } catch (const std::exception& e) {
    json j;
    j["error"] = json{{"message", e.what()}, {"stage", "internal"}};
    print_report(j);
    return 1;
  }
  return 1;
}
