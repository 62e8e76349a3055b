#include "proofkit/circuit_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "proofkit/errors.hpp"

namespace proofkit {

namespace {

bool is_ident(const std::string& s) {
  if (s.empty() || (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')) return false;
  for (char ch : s) {
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') return false;
  }
  return true;
}

bool is_number(const std::string& s) {
  size_t i = s.size() && s[0] == '-' ? 1 : 0;
  if (i == s.size()) return false;
  bool slash = false;
  bool digit_after_slash = false;
  for (; i < s.size(); ++i) {
    if (s[i] == '/') {
      if (slash || i == 0) return false;
      slash = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    if (slash) digit_after_slash = true;
  }
  return !slash || digit_after_slash;
}

mpq_class parse_rational(const std::string& s, size_t line) {
  if (!is_number(s)) throw SyntaxError(line, "malformed rational '" + s + "'");
  mpq_class q(s);
  q.canonicalize();
  return q;
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::string cur;
  for (char ch : line) {
    if (ch == '#') break;
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) toks.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) toks.push_back(std::move(cur));
  return toks;
}

UPoly parse_coeff_list(const std::string& s, size_t line) {
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
    throw SyntaxError(line, "malformed coefficient list '" + s + "'");
  }
  std::vector<mpq_class> coeffs;
  std::string body = s.substr(1, s.size() - 2);
  if (!body.empty()) {
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) coeffs.push_back(parse_rational(item, line));
  }
  return UPoly::from_coeffs(std::move(coeffs));
}

RatFunc parse_ratconst(const std::string& s, size_t line) {
  const size_t mid = s.find("]/[");
  if (mid == std::string::npos) throw SyntaxError(line, "ratconst expects [num]/[den]");
  const UPoly num = parse_coeff_list(s.substr(0, mid + 1), line);
  const UPoly den = parse_coeff_list(s.substr(mid + 2), line);
  if (den.is_zero()) throw SyntaxError(line, "ratconst denominator is zero");
  return RatFunc(num, den);
}

std::string coeff_list_str(const UPoly& p) {
  std::string out = "[";
  const auto& cs = p.coeffs();
  if (cs.empty()) {
    out += "0";
  } else {
    for (size_t i = 0; i < cs.size(); ++i) {
      if (i) out += ",";
      out += cs[i].get_str();
    }
  }
  return out + "]";
}

}  // namespace

Circuit parse_circuit(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  size_t line_no = 0;

  bool have_ring = false;
  Ring ring = Ring::Q();
  bool gates_started = false;
  std::vector<std::string> var_names;
  std::map<std::string, uint32_t> var_ids;
  std::vector<Gate> gates;
  std::map<std::string, uint32_t> gate_ids;
  std::vector<uint32_t> outputs;
  bool have_output = false;

  // Operands may name a gate or a declared input variable; a variable operand
  // creates one implicit var gate on first use.
  std::map<uint32_t, uint32_t> implicit_var_gate;
  auto gate_ref = [&](const std::string& name, size_t line) {
    auto it = gate_ids.find(name);
    if (it != gate_ids.end()) return it->second;
    auto vit = var_ids.find(name);
    if (vit != var_ids.end()) {
      auto git = implicit_var_gate.find(vit->second);
      if (git != implicit_var_gate.end()) return git->second;
      const uint32_t id = static_cast<uint32_t>(gates.size());
      gates.push_back(Gate::var(vit->second));
      implicit_var_gate[vit->second] = id;
      return id;
    }
    throw UnknownGateRef(line, name);
  };

  while (std::getline(in, raw)) {
    ++line_no;
    const std::vector<std::string> t = tokenize(raw);
    if (t.empty()) continue;
    if (have_output) throw SyntaxError(line_no, "content after the output line");

    if (t[0] == "ring") {
      if (have_ring) throw SyntaxError(line_no, "duplicate ring line");
      if (t.size() == 2 && t[1] == "Z") ring = Ring::Z();
      else if (t.size() == 2 && t[1] == "Q") ring = Ring::Q();
      else if (t.size() == 2 && t[1] == "Q(y)") ring = Ring::Qy();
      else if (t.size() == 3 && t[1] == "GF") {
        if (!is_number(t[2]) || t[2].find('/') != std::string::npos) {
          throw SyntaxError(line_no, "GF modulus must be an integer");
        }
        try {
          ring = Ring::GF(mpz_class(t[2]));
        } catch (const BadParams& e) {
          throw SyntaxError(line_no, e.what());
        }
      } else {
        throw SyntaxError(line_no, "unknown ring");
      }
      have_ring = true;
      continue;
    }
    if (!have_ring) throw SyntaxError(line_no, "expected a ring line first");

    if (t[0] == "input") {
      if (gates_started) throw SyntaxError(line_no, "input line after gate definitions");
      if (t.size() < 2) throw SyntaxError(line_no, "input line without variable names");
      for (size_t i = 1; i < t.size(); ++i) {
        if (!is_ident(t[i])) throw SyntaxError(line_no, "invalid variable name '" + t[i] + "'");
        if (var_ids.count(t[i])) throw SyntaxError(line_no, "duplicate variable '" + t[i] + "'");
        var_ids[t[i]] = static_cast<uint32_t>(var_names.size());
        var_names.push_back(t[i]);
      }
      continue;
    }

    if (t[0] == "output") {
      if (t.size() < 2) throw SyntaxError(line_no, "output line without gates");
      for (size_t i = 1; i < t.size(); ++i) outputs.push_back(gate_ref(t[i], line_no));
      have_output = true;
      continue;
    }

    // Gate definition: <name> = <op> ...
    if (t.size() < 3 || t[1] != "=" || !is_ident(t[0])) {
      throw SyntaxError(line_no, "expected '<gate> = <op> ...'");
    }
    if (gate_ids.count(t[0])) throw SyntaxError(line_no, "redefinition of gate '" + t[0] + "'");
    gates_started = true;
    const std::string& op = t[2];
    Gate g;
    if (op == "var") {
      if (t.size() != 4) throw SyntaxError(line_no, "var expects one variable name");
      auto it = var_ids.find(t[3]);
      if (it == var_ids.end()) throw SyntaxError(line_no, "undeclared variable '" + t[3] + "'");
      g = Gate::var(it->second);
    } else if (op == "const") {
      if (t.size() != 4) throw SyntaxError(line_no, "const expects one value");
      if (t[3] == "y") {
        if (ring.tag != RingTag::RationalFunctionField) {
          throw SyntaxError(line_no, "constant y requires ring Q(y)");
        }
        g = Gate::constant_y();
      } else {
        g = Gate::constant(parse_rational(t[3], line_no));
      }
    } else if (op == "ratconst") {
      if (ring.tag != RingTag::RationalFunctionField) {
        throw SyntaxError(line_no, "ratconst requires ring Q(y)");
      }
      if (t.size() != 4) throw SyntaxError(line_no, "ratconst expects one [num]/[den] value");
      g = Gate::constant_rat(parse_ratconst(t[3], line_no));
    } else if (op == "add" || op == "mul" || op == "divc") {
      if (t.size() != 5) throw SyntaxError(line_no, op + " expects two operand gates");
      const uint32_t a = gate_ref(t[3], line_no);
      const uint32_t b = gate_ref(t[4], line_no);
      g = op == "add" ? Gate::add(a, b) : op == "mul" ? Gate::mul(a, b) : Gate::divc(a, b);
    } else {
      throw SyntaxError(line_no, "unknown operation '" + op + "'");
    }
    gate_ids[t[0]] = static_cast<uint32_t>(gates.size());
    gates.push_back(std::move(g));
  }

  if (!have_output) throw SyntaxError(line_no + 1, "missing output line");
  return Circuit::build(ring, std::move(gates), std::move(outputs), std::move(var_names));
}

std::string serialize_circuit(const Circuit& c) {
  std::string out = "ring " + c.ring().str() + "\n";
  if (c.num_vars() > 0) {
    out += "input";
    for (const auto& n : c.var_names()) out += " " + n;
    out += "\n";
  }
  for (uint32_t id = 0; id < c.size(); ++id) {
    const Gate& g = c.gate(id);
    out += "g" + std::to_string(id + 1) + " = ";
    switch (g.kind) {
      case GateKind::Var:
        out += "var " + c.var_names()[g.a];
        break;
      case GateKind::Const:
        if (!g.cfun) {
          out += "const " + g.cval.get_str();
        } else if (g.cfun->is_variable()) {
          out += "const y";
        } else {
          out += "ratconst " + coeff_list_str(g.cfun->num()) + "/" + coeff_list_str(g.cfun->den());
        }
        break;
      case GateKind::Add:
        out += "add g" + std::to_string(g.a + 1) + " g" + std::to_string(g.b + 1);
        break;
      case GateKind::Mul:
        out += "mul g" + std::to_string(g.a + 1) + " g" + std::to_string(g.b + 1);
        break;
      case GateKind::DivC:
        out += "divc g" + std::to_string(g.a + 1) + " g" + std::to_string(g.b + 1);
        break;
    }
    out += "\n";
  }
  out += "output";
  for (uint32_t o : c.outputs()) out += " g" + std::to_string(o + 1);
  out += "\n";
  return out;
}

Circuit load_circuit(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open circuit file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_circuit(ss.str());
}

void save_circuit(const std::string& path, const Circuit& c) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write circuit file " + path);
  out << serialize_circuit(c);
}

}  // namespace proofkit
