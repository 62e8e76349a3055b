// Axiom/inequality system construction, validation, and text round trip.
#include "proofkit/systems.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "proofkit/circuit_io.hpp"
#include "proofkit/errors.hpp"

namespace proofkit {

namespace {

std::vector<std::string> union_space(const std::vector<Circuit>& cs) {
  std::vector<std::string> names;
  std::map<std::string, bool> seen;
  for (const Circuit& c : cs) {
    for (const std::string& n : c.var_names()) {
      if (!seen.count(n)) {
        seen[n] = true;
        names.push_back(n);
      }
    }
  }
  return names;
}

std::vector<Circuit> align_all(const std::vector<Circuit>& cs, const Ring& ring,
                               const std::vector<std::string>& names, const char* what) {
  std::vector<Circuit> out;
  for (const Circuit& c : cs) {
    if (!(c.ring() == ring)) throw RingMismatch(std::string(what) + " ring differs from the system ring");
    if (c.outputs().size() != 1) throw ArityMismatch(std::string(what) + " outputs", 1, c.outputs().size());
    out.push_back(with_var_space(c, names));
  }
  return out;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> t;
  std::string w;
  while (in >> w) t.push_back(w);
  return t;
}

const std::map<std::string, Provenance>& provenance_names() {
  static const std::map<std::string, Provenance> m = {
      {"user", Provenance::UserIneq},     {"eqpos", Provenance::EqPos},
      {"eqneg", Provenance::EqNeg},       {"boolx", Provenance::BoolX},
      {"bool1mx", Provenance::Bool1mX},   {"boolsqpos", Provenance::BoolSqPos},
      {"boolsqneg", Provenance::BoolSqNeg}};
  return m;
}

}  // namespace

std::pair<Ring, size_t> parse_ring_at(const std::vector<std::string>& t, size_t pos, size_t line) {
  if (pos >= t.size() || t[pos] != "ring") throw SyntaxError(line, "expected 'ring'");
  ++pos;
  if (pos >= t.size()) throw SyntaxError(line, "missing ring name");
  if (t[pos] == "Z") return {Ring::Z(), pos + 1};
  if (t[pos] == "Q") return {Ring::Q(), pos + 1};
  if (t[pos] == "Q(y)") return {Ring::Qy(), pos + 1};
  if (t[pos] == "GF") {
    if (pos + 1 >= t.size()) throw SyntaxError(line, "GF needs a modulus");
    return {Ring::GF(mpz_class(t[pos + 1])), pos + 2};
  }
  throw SyntaxError(line, "unknown ring '" + t[pos] + "'");
}

TextSections read_text_sections(const std::string& text) {
  TextSections out;
  std::istringstream in(text);
  std::string raw;
  size_t line_no = 0;
  bool in_circuit = false;
  std::string label, body;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::vector<std::string> t = split_ws(raw);
    if (in_circuit) {
      if (!t.empty() && t[0] == "end") {
        if (t.size() != 2 || t[1] != "circuit") throw SyntaxError(line_no, "expected 'end circuit'");
        out.circuits.emplace_back(label, body);
        in_circuit = false;
      } else {
        body += raw + "\n";
      }
      continue;
    }
    if (t.empty() || t[0][0] == '#') continue;
    if (t[0] == "begin" && t.size() >= 2 && t[1] == "circuit") {
      if (t.size() > 3) throw SyntaxError(line_no, "too many tokens after 'begin circuit'");
      label = t.size() == 3 ? t[2] : "";
      body.clear();
      in_circuit = true;
      continue;
    }
    if (!out.circuits.empty()) throw SyntaxError(line_no, "expected 'begin circuit'");
    out.header_lines.push_back(t);
    out.header_linenos.push_back(line_no);
  }
  if (in_circuit) throw SyntaxError(line_no, "unterminated circuit section");
  if (out.header_lines.empty()) throw SyntaxError(1, "missing header line");
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

std::string resolve_ref(const std::string& base_file, const std::string& ref) {
  if (!ref.empty() && ref[0] == '/') return ref;
  const size_t slash = base_file.find_last_of('/');
  if (slash == std::string::npos) return ref;
  return base_file.substr(0, slash + 1) + ref;
}

std::string provenance_str(Provenance p) {
  for (const auto& [name, val] : provenance_names())
    if (val == p) return name;
  return "user";
}

AxiomSystem make_axiom_system(Ring ring, std::vector<Circuit> axioms, bool include_boolean) {
  AxiomSystem s;
  s.ring = std::move(ring);
  s.var_names = union_space(axioms);
  s.axioms = align_all(axioms, s.ring, s.var_names, "axiom");
  s.include_boolean = include_boolean;
  return s;
}

std::vector<Circuit> effective_axioms(const AxiomSystem& s) {
  std::vector<Circuit> out = s.axioms;
  if (s.include_boolean) {
    for (const std::string& name : s.var_names) {
      CircuitBuilder b(s.ring);
      for (const std::string& n : s.var_names) b.var(n);
      const uint32_t x = b.var(name);
      out.push_back(b.take({b.sub(b.square(x), x)}));
    }
  }
  return out;
}

bool same_system(const AxiomSystem& a, const AxiomSystem& b) {
  if (!(a.ring == b.ring) || a.include_boolean != b.include_boolean ||
      a.var_names != b.var_names || a.axioms.size() != b.axioms.size())
    return false;
  for (size_t i = 0; i < a.axioms.size(); ++i)
    if (!a.axioms[i].structurally_equal(b.axioms[i])) return false;
  return true;
}

std::string axiom_system_to_text(const AxiomSystem& s) {
  std::string out = "axioms ring " + s.ring.str() + " booleans " +
                    (s.include_boolean ? "on" : "off") + "\n";
  for (const Circuit& a : s.axioms) {
    out += "begin circuit\n" + serialize_circuit(a);
    if (out.back() != '\n') out += '\n';
    out += "end circuit\n";
  }
  return out;
}

AxiomSystem axiom_system_from_text(const std::string& text) {
  const TextSections sec = read_text_sections(text);
  if (sec.header_lines.size() != 1)
    throw SyntaxError(sec.header_linenos.back(), "axiom files take a single header line");
  const std::vector<std::string>& h = sec.header_lines[0];
  const size_t hline = sec.header_linenos[0];
  if (h[0] != "axioms") throw SyntaxError(hline, "expected 'axioms' header");
  auto [ring, pos] = parse_ring_at(h, 1, hline);
  if (pos + 2 != h.size() || h[pos] != "booleans" ||
      (h[pos + 1] != "on" && h[pos + 1] != "off"))
    throw SyntaxError(hline, "expected 'booleans {on|off}'");
  const bool booleans = h[pos + 1] == "on";
  std::vector<Circuit> axioms;
  for (const auto& [label, body] : sec.circuits) {
    if (!label.empty()) throw SyntaxError(hline, "axiom sections take no label");
    axioms.push_back(parse_circuit(body));
  }
  return make_axiom_system(ring, std::move(axioms), booleans);
}

AxiomSystem load_axiom_system(const std::string& path) {
  return axiom_system_from_text(read_text_file(path));
}

void save_axiom_system(const std::string& path, const AxiomSystem& s) {
  write_text_file(path, axiom_system_to_text(s));
}

InequalitySystem make_inequality_system(Ring ring, std::vector<Circuit> inequalities,
                                        std::vector<Provenance> tags) {
  if (!ring.ordered()) throw RingMismatch("inequality systems need an ordered ring (Z or Q)");
  if (tags.size() != inequalities.size())
    throw ArityMismatch("provenance tags", inequalities.size(), tags.size());
  InequalitySystem s;
  s.ring = std::move(ring);
  s.var_names = union_space(inequalities);
  s.inequalities = align_all(inequalities, s.ring, s.var_names, "inequality");
  s.tags = std::move(tags);
  return s;
}

InequalitySystem inequalities_from_equalities(const AxiomSystem& s) {
  if (!s.ring.ordered()) throw RingMismatch("inequality systems need an ordered ring (Z or Q)");
  std::vector<Circuit> ineqs;
  std::vector<Provenance> tags;
  for (const Circuit& f : s.axioms) {
    CircuitBuilder b(s.ring);
    for (const std::string& n : s.var_names) b.var(n);
    const uint32_t id = b.import(f);
    ineqs.push_back(b.take({id}));
    tags.push_back(Provenance::EqPos);
    ineqs.push_back(b.take({b.neg(id)}));
    tags.push_back(Provenance::EqNeg);
  }
  if (s.include_boolean) {
    for (const std::string& name : s.var_names) {
      CircuitBuilder b(s.ring);
      for (const std::string& n : s.var_names) b.var(n);
      const uint32_t x = b.var(name);
      const uint32_t sq = b.sub(b.square(x), x);
      ineqs.push_back(b.take({x}));
      tags.push_back(Provenance::BoolX);
      ineqs.push_back(b.take({b.sub(b.constant_i(1), x)}));
      tags.push_back(Provenance::Bool1mX);
      ineqs.push_back(b.take({sq}));
      tags.push_back(Provenance::BoolSqPos);
      ineqs.push_back(b.take({b.neg(sq)}));
      tags.push_back(Provenance::BoolSqNeg);
    }
  }
  return make_inequality_system(s.ring, std::move(ineqs), std::move(tags));
}

bool same_system(const InequalitySystem& a, const InequalitySystem& b) {
  if (!(a.ring == b.ring) || a.var_names != b.var_names || a.tags != b.tags ||
      a.inequalities.size() != b.inequalities.size())
    return false;
  for (size_t i = 0; i < a.inequalities.size(); ++i)
    if (!a.inequalities[i].structurally_equal(b.inequalities[i])) return false;
  return true;
}

std::string inequality_system_to_text(const InequalitySystem& s) {
  std::string out = "ineqs ring " + s.ring.str() + "\n";
  for (size_t i = 0; i < s.inequalities.size(); ++i) {
    out += "begin circuit " + provenance_str(s.tags[i]) + "\n" +
           serialize_circuit(s.inequalities[i]);
    if (out.back() != '\n') out += '\n';
    out += "end circuit\n";
  }
  return out;
}

InequalitySystem inequality_system_from_text(const std::string& text) {
  const TextSections sec = read_text_sections(text);
  if (sec.header_lines.size() != 1)
    throw SyntaxError(sec.header_linenos.back(), "inequality files take a single header line");
  const std::vector<std::string>& h = sec.header_lines[0];
  const size_t hline = sec.header_linenos[0];
  if (h[0] != "ineqs") throw SyntaxError(hline, "expected 'ineqs' header");
  auto [ring, pos] = parse_ring_at(h, 1, hline);
  if (pos != h.size()) throw SyntaxError(hline, "trailing tokens after ring");
  std::vector<Circuit> ineqs;
  std::vector<Provenance> tags;
  for (const auto& [label, body] : sec.circuits) {
    auto it = provenance_names().find(label);
    if (it == provenance_names().end())
      throw SyntaxError(hline, "unknown provenance tag '" + label + "'");
    tags.push_back(it->second);
    ineqs.push_back(parse_circuit(body));
  }
  return make_inequality_system(ring, std::move(ineqs), std::move(tags));
}

InequalitySystem load_inequality_system(const std::string& path) {
  return inequality_system_from_text(read_text_file(path));
}

void save_inequality_system(const std::string& path, const InequalitySystem& s) {
  write_text_file(path, inequality_system_to_text(s));
}

}  // namespace proofkit
