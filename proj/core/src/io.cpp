#include "latglue/io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "latglue/error.hpp"

namespace latglue {

using nlohmann::json;

namespace {

// nlohmann reports byte offsets; turn them into line/column for the message
[[noreturn]] void parse_error_at(const std::string& text, std::size_t byte,
                                 const std::string& what) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  std::ostringstream os;
  os << "line " << line << " column " << col << ": " << what;
  parse_error(os.str());
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    parse_error_at(text, e.byte, e.what());
  }
}

Int int_from_value(const json& v, const char* what) {
  if (v.is_number_integer() || v.is_number_unsigned()) return Int(v.get<long>());
  if (v.is_string()) return int_from_string(v.get<std::string>());
  parse_error(std::string(what) + ": expected an integer or a decimal string");
}

json int_to_value(const Int& x) {
  if (x.fits_slong_p()) return json(x.get_si());
  return json(int_to_string(x));
}

IntMat int_matrix_from_value(const json& v, const char* what) {
  if (!v.is_array() || v.empty()) parse_error(std::string(what) + ": expected a non-empty array of rows");
  const std::size_t rows = v.size();
  std::size_t cols = 0;
  for (std::size_t i = 0; i < rows; ++i)
    if (!v[i].is_array() || v[i].empty())
      parse_error(std::string(what) + ": expected every row to be a non-empty array");
  cols = v[0].size();
  IntMat m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (v[i].size() != cols) parse_error(std::string(what) + ": rows have unequal lengths");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = int_from_value(v[i][j], what);
  }
  return m;
}

json int_matrix_to_value(const IntMat& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(int_to_value(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

RatMat rat_matrix_from_value(const json& v, const char* what) {
  if (!v.is_array() || v.empty()) parse_error(std::string(what) + ": expected a non-empty array of rows");
  const std::size_t rows = v.size();
  for (std::size_t i = 0; i < rows; ++i)
    if (!v[i].is_array() || v[i].empty())
      parse_error(std::string(what) + ": expected every row to be a non-empty array");
  const std::size_t cols = v[0].size();
  RatMat m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (v[i].size() != cols) parse_error(std::string(what) + ": rows have unequal lengths");
    for (std::size_t j = 0; j < cols; ++j) {
      const json& e = v[i][j];
      if (e.is_string())
        m(i, j) = rat_from_string(e.get<std::string>());
      else if (e.is_number_integer() || e.is_number_unsigned())
        m(i, j) = Rat(e.get<long>());
      else
        parse_error(std::string(what) + ": expected a fraction string");
    }
  }
  return m;
}

json rat_matrix_to_value(const RatMat& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(rat_to_string(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

const json& require_key(const json& obj, const char* key, const char* what) {
  auto it = obj.find(key);
  if (it == obj.end())
    parse_error(std::string(what) + ": missing required key \"" + key + "\"");
  return *it;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string int_to_string(const Int& x) { return x.get_str(); }

Int int_from_string(const std::string& text) {
  try {
    return Int(text);
  } catch (const std::invalid_argument&) {
    parse_error("not a decimal integer: \"" + text + "\"");
  }
}

std::string rat_to_string(const Rat& x) { return x.get_str(); }

Rat rat_from_string(const std::string& text) {
  Rat q;
  try {
    q = Rat(text);
  } catch (const std::invalid_argument&) {
    parse_error("not a fraction: \"" + text + "\"");
  }
  if (q.get_den() == 0) parse_error("zero denominator in fraction: \"" + text + "\"");
  q.canonicalize();
  return q;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_error("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) parse_error("cannot read file: " + path);
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) internal_error("cannot open file for writing: " + path);
  out << content;
  out.flush();
  if (!out) internal_error("cannot write file: " + path);
}

std::string lattice_to_json(const Lattice& l) {
  json j;
  j["gram"] = int_matrix_to_value(l.gram());
  if (!l.name().empty()) j["name"] = l.name();
  return dump(j);
}

Lattice lattice_from_json(const std::string& text) {
  json j = parse_json(text);
  if (!j.is_object()) parse_error("lattice file: expected a JSON object");
  IntMat gram = int_matrix_from_value(require_key(j, "gram", "lattice file"), "lattice file gram");
  if (gram.rows() != gram.cols()) parse_error("lattice file: gram matrix is not square");
  if (!gram.is_symmetric()) parse_error("lattice file: gram matrix is not symmetric");
  std::string name;
  if (auto it = j.find("name"); it != j.end()) {
    if (!it->is_string()) parse_error("lattice file: name must be a string");
    name = it->get<std::string>();
  }
  return Lattice::from_gram(std::move(gram), std::move(name));
}

Lattice read_lattice_file(const std::string& path) {
  return lattice_from_json(read_text_file(path));
}

std::string matrix_to_json(const IntMat& m) {
  json j;
  j["matrix"] = int_matrix_to_value(m);
  return dump(j);
}

IntMat matrix_from_json(const std::string& text) {
  json j = parse_json(text);
  if (!j.is_object()) parse_error("matrix file: expected a JSON object");
  return int_matrix_from_value(require_key(j, "matrix", "matrix file"), "matrix file");
}

IntMat read_matrix_file(const std::string& path) {
  return matrix_from_json(read_text_file(path));
}

std::string embedding_to_json(const Embedding& e) {
  json cert;
  cert["complement_ok"] = e.certificate.complement_ok;
  cert["failures"] = e.certificate.failures;
  cert["glue_index"] = int_to_string(e.certificate.glue_index);
  cert["integral"] = e.certificate.integral;
  cert["m"] = e.certificate.m;
  cert["odd_type"] = e.certificate.odd_type;
  cert["signature_ok"] = e.certificate.signature_ok;
  cert["unimodular"] = e.certificate.unimodular;

  json j;
  j["certificate"] = std::move(cert);
  j["glue_basis"] = rat_matrix_to_value(e.glue_basis);
  j["glue_gens"] = rat_matrix_to_value(e.glue_gens);
  j["glue_index"] = int_to_string(e.glue_index);
  j["glued_gram"] = int_matrix_to_value(e.glued.gram());
  j["k_gram"] = int_matrix_to_value(e.k.gram());
  if (!e.k.name().empty()) j["k_name"] = e.k.name();
  j["l_gram"] = int_matrix_to_value(e.l.gram());
  if (!e.l.name().empty()) j["l_name"] = e.l.name();
  j["m"] = e.m;
  json phi = json::array();
  for (const auto& image : e.phi.images) {
    json row = json::array();
    for (const Int& c : image) row.push_back(int_to_value(c));
    phi.push_back(std::move(row));
  }
  j["phi"] = std::move(phi);
  return dump(j);
}

Embedding embedding_from_json(const std::string& text) {
  json j = parse_json(text);
  if (!j.is_object()) parse_error("embedding file: expected a JSON object");

  IntMat lg = int_matrix_from_value(require_key(j, "l_gram", "embedding file"), "embedding l_gram");
  IntMat kg = int_matrix_from_value(require_key(j, "k_gram", "embedding file"), "embedding k_gram");
  if (lg.rows() != lg.cols() || !lg.is_symmetric())
    parse_error("embedding file: l_gram is not a symmetric square matrix");
  if (kg.rows() != kg.cols() || !kg.is_symmetric())
    parse_error("embedding file: k_gram is not a symmetric square matrix");
  std::string l_name, k_name;
  if (auto it = j.find("l_name"); it != j.end() && it->is_string()) l_name = it->get<std::string>();
  if (auto it = j.find("k_name"); it != j.end() && it->is_string()) k_name = it->get<std::string>();
  Lattice l = Lattice::from_gram(std::move(lg), std::move(l_name));
  Lattice k = Lattice::from_gram(std::move(kg), std::move(k_name));

  GlueMap phi;
  const json& jphi = require_key(j, "phi", "embedding file");
  if (!jphi.is_array()) parse_error("embedding file: phi must be an array of coordinate rows");
  for (const json& row : jphi) {
    if (!row.is_array()) parse_error("embedding file: phi must be an array of coordinate rows");
    std::vector<Int> image;
    for (const json& c : row) image.push_back(int_from_value(c, "embedding phi"));
    phi.images.push_back(std::move(image));
  }

  // glue_gens is legitimately empty when nothing was glued (unimodular input)
  const json& jgens = require_key(j, "glue_gens", "embedding file");
  RatMat gens;
  if (!jgens.is_array()) parse_error("embedding file: glue_gens must be an array");
  if (!jgens.empty()) gens = rat_matrix_from_value(jgens, "embedding glue_gens");
  RatMat basis =
      rat_matrix_from_value(require_key(j, "glue_basis", "embedding file"), "embedding glue_basis");
  Int glue_index = int_from_value(require_key(j, "glue_index", "embedding file"), "embedding glue_index");
  const json& jm = require_key(j, "m", "embedding file");
  if (!jm.is_number_integer()) parse_error("embedding file: m must be an integer");
  int m = jm.get<int>();

  const json& jc = require_key(j, "certificate", "embedding file");
  if (!jc.is_object()) parse_error("embedding file: certificate must be an object");
  Certificate cert;
  auto flag = [&](const char* key) {
    const json& v = require_key(jc, key, "embedding certificate");
    if (!v.is_boolean()) parse_error(std::string("embedding certificate: ") + key + " must be a boolean");
    return v.get<bool>();
  };
  cert.complement_ok = flag("complement_ok");
  cert.integral = flag("integral");
  cert.odd_type = flag("odd_type");
  cert.signature_ok = flag("signature_ok");
  cert.unimodular = flag("unimodular");
  cert.glue_index = int_from_value(require_key(jc, "glue_index", "embedding certificate"),
                                   "embedding certificate glue_index");
  const json& jcm = require_key(jc, "m", "embedding certificate");
  if (!jcm.is_number_integer()) parse_error("embedding certificate: m must be an integer");
  cert.m = jcm.get<int>();
  const json& jf = require_key(jc, "failures", "embedding certificate");
  if (!jf.is_array()) parse_error("embedding certificate: failures must be an array");
  for (const json& f : jf) {
    if (!f.is_string()) parse_error("embedding certificate: failures must be strings");
    cert.failures.push_back(f.get<std::string>());
  }

  // rebuild the glued lattice from the raw data; a tampered basis that no
  // longer spans an integral lattice falls back to the plain direct sum so
  // that verification can run and name the defect
  Lattice glued = direct_sum(l, k);
  const std::size_t n = l.dim() + k.dim();
  if (basis.rows() == n && basis.cols() == n) {
    RatMat gq = basis * to_rat(glued.gram()) * basis.transposed();
    IntMat gi;
    if (to_int(gq, gi)) {
      try {
        glued = Lattice::from_gram(std::move(gi));
      } catch (const Error&) {
        // keep the direct sum; the certificate check reports the failure
      }
    }
  }

  return Embedding{std::move(l),   std::move(k),   std::move(phi), std::move(gens),
                   std::move(basis), std::move(glued), glue_index,   m,
                   std::move(cert)};
}

Embedding read_embedding_file(const std::string& path) {
  return embedding_from_json(read_text_file(path));
}

std::string genus_spec_to_json(const GenusSpec& s) {
  json syms;
  for (const PadicSymbol& sym : s.symbols) syms[int_to_string(sym.prime)] = render_symbol(sym);
  json j;
  j["det"] = int_to_string(s.det);
  j["signature"] = json::array({s.sig.pos, s.sig.neg});
  j["symbols"] = std::move(syms);
  return dump(j);
}

GenusSpec genus_spec_from_json(const std::string& text) {
  json j = parse_json(text);
  if (!j.is_object()) parse_error("genus spec: expected a JSON object");
  GenusSpec s;
  const json& sig = require_key(j, "signature", "genus spec");
  if (!sig.is_array() || sig.size() != 2 || !sig[0].is_number_integer() ||
      !sig[1].is_number_integer())
    parse_error("genus spec: signature must be a pair of integers");
  s.sig.pos = sig[0].get<int>();
  s.sig.neg = sig[1].get<int>();
  if (s.sig.pos < 0 || s.sig.neg < 0) parse_error("genus spec: signature counts must be nonnegative");
  s.det = int_from_value(require_key(j, "det", "genus spec"), "genus spec det");
  const json& syms = require_key(j, "symbols", "genus spec");
  if (!syms.is_object()) parse_error("genus spec: symbols must be an object keyed by prime");
  for (auto it = syms.begin(); it != syms.end(); ++it) {
    Int p = int_from_string(it.key());
    if (!it.value().is_string()) parse_error("genus spec: each symbol must be a string");
    s.symbols.push_back(parse_symbol(p, it.value().get<std::string>()));
  }
  return s;
}

GenusSpec genus_spec_from_compact(const std::string& text) {
  GenusSpec s;
  bool saw_sig = false, saw_det = false;
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= token.size())
      parse_error("genus spec: expected key=value tokens, got \"" + token + "\"");
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    if (key == "sig") {
      if (saw_sig) parse_error("genus spec: duplicate sig token");
      const auto comma = value.find(',');
      if (comma == std::string::npos)
        parse_error("genus spec: sig must be \"r,s\", got \"" + value + "\"");
      Int r = int_from_string(value.substr(0, comma));
      Int sn = int_from_string(value.substr(comma + 1));
      if (r < 0 || sn < 0 || !r.fits_sint_p() || !sn.fits_sint_p())
        parse_error("genus spec: signature counts out of range");
      s.sig.pos = static_cast<int>(r.get_si());
      s.sig.neg = static_cast<int>(sn.get_si());
      saw_sig = true;
    } else if (key == "det") {
      if (saw_det) parse_error("genus spec: duplicate det token");
      s.det = int_from_string(value);
      saw_det = true;
    } else {
      Int p = int_from_string(key);
      for (const PadicSymbol& prev : s.symbols)
        if (prev.prime == p) parse_error("genus spec: duplicate symbol for prime " + key);
      s.symbols.push_back(parse_symbol(p, value));
    }
  }
  if (!saw_sig) parse_error("genus spec: missing sig=r,s token");
  if (!saw_det) parse_error("genus spec: missing det=n token");
  return s;
}

}  // namespace latglue
