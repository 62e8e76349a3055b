// Positivstellensatz and LS-style derivations: exact replay over sparse
// polynomials, conic compilation, and the one-term-per-line file formats.
#include "proofkit/psls.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "proofkit/errors.hpp"
#include "proofkit/pit.hpp"

namespace proofkit {

namespace {

void check_ordered(const Ring& r, const char* what) {
  if (r.tag != RingTag::IntegerRing && r.tag != RingTag::RationalField)
    throw RingMismatch(std::string(what) + " live over ordered rings");
}

std::vector<std::string> union_names(const std::vector<std::string>& a,
                                     const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  for (const std::string& n : b) {
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  }
  return out;
}

// Validates 1-based subset indices, sorts and deduplicates, and enforces the
// sum-of-squares restriction to at most one inequality.
std::vector<size_t> canonical_subset(const std::vector<size_t>& subset, size_t nineq,
                                     bool sos_restricted) {
  for (size_t j : subset) {
    if (j < 1 || j > nineq) throw BadSubsetIndex(j);
  }
  std::vector<size_t> out = subset;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (sos_restricted && out.size() > 1)
    throw NotSoS("a sum-of-squares certificate admits cone products of at most one inequality");
  return out;
}

SparsePoly minus_one(const Ring& ring, const std::vector<std::string>& names) {
  return SparsePoly::constant(ring, names, Coeff(mpq_class(-1)));
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

}  // namespace

size_t ps_monomial_size(const PsRefutation& r) {
  size_t total = 0;
  for (const SparsePoly& p : r.cofactors) total += p.num_terms();
  for (const ConeTerm& ct : r.cone) {
    if (ct.squares.empty()) continue;
    std::vector<std::string> names;
    for (const SparsePoly& s : ct.squares) names = union_names(names, s.var_names());
    SparsePoly sum(ct.squares.front().ring(), names);
    for (const SparsePoly& s : ct.squares) {
      const SparsePoly sr = poly_with_var_space(s, names);
      sum += sr * sr;
    }
    total += sum.num_terms();
  }
  return total;
}

bool verify_ps(const PsRefutation& r, const AxiomSystem& equalities,
               const InequalitySystem& inequalities) {
  if (!(equalities.ring == inequalities.ring))
    throw RingMismatch("equalities and inequalities must share a ring");
  check_ordered(equalities.ring, "Positivstellensatz certificates");
  const std::vector<std::string> space =
      union_names(equalities.var_names, inequalities.var_names);
  const std::vector<Circuit> eff = effective_axioms(equalities);
  if (r.cofactors.size() != eff.size())
    throw ArityMismatch("equality cofactors", eff.size(), r.cofactors.size());

  SparsePoly acc(equalities.ring, space);
  for (size_t i = 0; i < eff.size(); ++i) {
    acc += poly_with_var_space(r.cofactors[i], space) * expand(with_var_space(eff[i], space));
  }
  for (const ConeTerm& ct : r.cone) {
    const std::vector<size_t> sub =
        canonical_subset(ct.subset, inequalities.inequalities.size(), r.sos_restricted);
    SparsePoly prod = SparsePoly::constant(equalities.ring, space, coeff_one(equalities.ring));
    for (size_t j : sub) {
      prod = prod * expand(with_var_space(inequalities.inequalities[j - 1], space));
    }
    SparsePoly sq(equalities.ring, space);
    for (const SparsePoly& s : ct.squares) {
      const SparsePoly sr = poly_with_var_space(s, space);
      sq += sr * sr;
    }
    acc += prod * sq;
  }
  return acc == minus_one(equalities.ring, space);
}

CpsProof ps_to_cps(const PsRefutation& r, const AxiomSystem& equalities,
                   const InequalitySystem& inequalities) {
  if (!(equalities.ring == inequalities.ring))
    throw RingMismatch("equalities and inequalities must share a ring");
  check_ordered(equalities.ring, "Positivstellensatz certificates");
  const Ring& ring = equalities.ring;
  const std::vector<std::string> space =
      union_names(equalities.var_names, inequalities.var_names);
  const std::vector<Circuit> eff = effective_axioms(equalities);
  if (r.cofactors.size() != eff.size())
    throw ArityMismatch("equality cofactors", eff.size(), r.cofactors.size());

  InequalitySystem base = inequalities_from_equalities(equalities);
  std::vector<Circuit> all = base.inequalities;
  std::vector<Provenance> tags = base.tags;
  for (size_t j = 0; j < inequalities.inequalities.size(); ++j) {
    all.push_back(inequalities.inequalities[j]);
    tags.push_back(inequalities.tags[j]);
  }
  InequalitySystem sys = make_inequality_system(ring, std::move(all), std::move(tags));

  const size_t m = equalities.axioms.size();
  const size_t nb = equalities.include_boolean ? equalities.var_names.size() : 0;
  const size_t ineq_off = 2 * m + 4 * nb;
  // 1-based placeholder indices of the doubled system: user axiom pairs come
  // first, then per-variable blocks x, 1-x, x^2-x, -(x^2-x).
  const auto pos_idx = [&](size_t i) { return i < m ? 2 * i + 1 : 2 * m + 4 * (i - m) + 3; };
  const auto neg_idx = [&](size_t i) { return i < m ? 2 * i + 2 : 2 * m + 4 * (i - m) + 4; };
  std::map<std::string, size_t> boolx_of;
  for (size_t v = 0; v < nb; ++v) boolx_of[equalities.var_names[v]] = 2 * m + 4 * v + 1;

  CircuitBuilder b(ring);
  for (const std::string& n : cps_proof_space(sys)) b.var(n);
  const auto y = [&](size_t idx1) { return b.var("y" + std::to_string(idx1)); };
  // A monomial over the system variables, re-rooted at the protected x >= 0
  // placeholders so substitution restores it and the circuit stays conic.
  const auto mono = [&](const SparsePoly::Exps& e, const mpq_class& coef) {
    uint32_t node = b.constant(coef);
    for (size_t v = 0; v < e.size(); ++v) {
      if (e[v] == 0) continue;
      const auto it = boolx_of.find(space[v]);
      if (it == boolx_of.end()) {
        throw Error("cofactor monomial reads " + space[v] +
                    " but the equality system carries no boolean axiom for it");
      }
      for (uint32_t k = 0; k < e[v]; ++k) node = b.mul(node, y(it->second));
    }
    return node;
  };

  std::vector<uint32_t> terms;
  for (size_t i = 0; i < eff.size(); ++i) {
    const SparsePoly p = poly_with_var_space(r.cofactors[i], space);
    for (const auto& [e, c] : p.terms()) {
      const mpq_class q = std::get<mpq_class>(c);
      if (q > 0) terms.push_back(b.mul(mono(e, q), y(pos_idx(i))));
      else terms.push_back(b.mul(mono(e, mpq_class(-q)), y(neg_idx(i))));
    }
  }

  std::map<std::vector<size_t>, std::vector<const SparsePoly*>> merged;
  for (const ConeTerm& ct : r.cone) {
    const std::vector<size_t> sub =
        canonical_subset(ct.subset, inequalities.inequalities.size(), r.sos_restricted);
    auto& sqs = merged[sub];
    for (const SparsePoly& s : ct.squares) sqs.push_back(&s);
  }
  for (const auto& [sub, sqs] : merged) {
    if (sqs.empty()) continue;
    std::vector<uint32_t> squares;
    for (const SparsePoly* s : sqs) {
      squares.push_back(
          b.square(b.import(circuit_from_poly(poly_with_var_space(*s, space), ring, space))));
    }
    uint32_t node = b.sum(std::move(squares));
    for (size_t j : sub) node = b.mul(y(ineq_off + j), node);
    terms.push_back(node);
  }

  const Circuit proof = with_var_space(b.take({b.sum(std::move(terms))}), cps_proof_space(sys));
  CircuitBuilder tb(ring);
  for (const std::string& n : sys.var_names) tb.var(n);
  const Circuit target = tb.take({tb.constant_i(-1)});
  const bool real = cps_real_mode(sys);
  return {proof, std::move(sys), target, real};
}

std::string ls_rule_str(LsRule r) {
  switch (r) {
    case LsRule::Axiom: return "axiom";
    case LsRule::SquareAxiom: return "square";
    case LsRule::Sum: return "sum";
    case LsRule::ScaleNonneg: return "scale";
    case LsRule::Product: return "product";
  }
  return "";
}

size_t ls_monomial_size(const LsDerivation& d) {
  size_t total = 0;
  for (const LsLine& l : d.lines) {
    total += l.poly.num_terms();
    if (l.root) total += l.root->num_terms();
  }
  return total;
}

namespace {

// Shared replay loop: checks every justification and returns the stated
// polynomials over the system's variable space.
std::vector<SparsePoly> replay_ls(const LsDerivation& d, const InequalitySystem& system) {
  check_ordered(system.ring, "derivations");
  const std::vector<std::string>& space = system.var_names;
  std::vector<SparsePoly> axs;
  axs.reserve(system.inequalities.size());
  for (const Circuit& h : system.inequalities) axs.push_back(expand(h));
  std::vector<SparsePoly> lines;
  lines.reserve(d.lines.size());
  for (size_t ln = 1; ln <= d.lines.size(); ++ln) {
    const LsLine& l = d.lines[ln - 1];
    const SparsePoly stated = poly_with_var_space(l.poly, space);
    const auto premise = [&](size_t k) -> const SparsePoly& {
      if (k < 1 || k >= ln) throw RuleMismatch(ln, "premise must be an earlier line");
      return lines[k - 1];
    };
    SparsePoly derived(system.ring, space);
    switch (l.rule) {
      case LsRule::Axiom:
        if (l.i < 1 || l.i > axs.size()) throw RuleMismatch(ln, "axiom index out of range");
        derived = axs[l.i - 1];
        break;
      case LsRule::SquareAxiom: {
        if (!l.root) throw RuleMismatch(ln, "square line without a root polynomial");
        const SparsePoly h = poly_with_var_space(*l.root, space);
        derived = h * h;
        break;
      }
      case LsRule::Sum:
        derived = premise(l.i) + premise(l.j);
        break;
      case LsRule::ScaleNonneg: {
        if (l.alpha < 0) throw NegativeScalar(ln);
        derived = premise(l.i).scaled(Coeff(mpq_class(l.alpha)));
        break;
      }
      case LsRule::Product:
        derived = premise(l.i) * premise(l.j);
        break;
    }
    if (stated != derived) throw RuleMismatch(ln, "stated polynomial does not match the rule");
    lines.push_back(stated);
  }
  return lines;
}

}  // namespace

bool verify_ls(const LsDerivation& d, const InequalitySystem& system) {
  const std::vector<SparsePoly> lines = replay_ls(d, system);
  return !lines.empty() && lines.back() == minus_one(system.ring, system.var_names);
}

CpsProof ls_to_cps(const LsDerivation& d, const InequalitySystem& system) {
  if (!verify_ls(d, system))
    throw Error("only derivations ending at the constant -1 compile to conic proofs");
  const Ring& ring = system.ring;
  CircuitBuilder b(ring);
  for (const std::string& n : cps_proof_space(system)) b.var(n);
  std::vector<uint32_t> nodes;
  nodes.reserve(d.lines.size());
  for (const LsLine& l : d.lines) {
    uint32_t node = 0;
    switch (l.rule) {
      case LsRule::Axiom:
        node = b.var("y" + std::to_string(l.i));
        break;
      case LsRule::SquareAxiom:
        node = b.square(b.import(
            circuit_from_poly(poly_with_var_space(*l.root, system.var_names), ring,
                              system.var_names)));
        break;
      case LsRule::Sum:
        node = b.add(nodes[l.i - 1], nodes[l.j - 1]);
        break;
      case LsRule::ScaleNonneg:
        node = b.mul(b.constant(mpq_class(l.alpha)), nodes[l.i - 1]);
        break;
      case LsRule::Product:
        node = b.mul(nodes[l.i - 1], nodes[l.j - 1]);
        break;
    }
    nodes.push_back(node);
  }
  const Circuit proof = with_var_space(b.take({nodes.back()}), cps_proof_space(system));
  CircuitBuilder tb(ring);
  for (const std::string& n : system.var_names) tb.var(n);
  const Circuit target = tb.take({tb.constant_i(-1)});
  return {proof, system, target, cps_real_mode(system)};
}

namespace {

void append_vars(std::string& out, const std::vector<std::string>& names) {
  out += "vars";
  for (const std::string& n : names) out += " " + n;
  out += "\n";
}

// Keyword-driven block reader shared by the two certificate formats: keeps
// the current term buffer and flushes it into a polynomial when the next
// keyword or the end of the file arrives.
struct PolyBlocks {
  Ring ring = Ring::Q();
  std::vector<std::string> names;
  std::string buffer;
  size_t buffer_start = 0;

  SparsePoly flush() {
    std::string text;
    std::swap(text, buffer);
    try {
      return poly_from_lines(text, ring, names);
    } catch (const SyntaxError& e) {
      std::string what = e.what();
      const auto colon = what.find(": ");
      if (colon != std::string::npos) what = what.substr(colon + 2);
      throw SyntaxError(buffer_start + e.line - 1, what);
    }
  }
};

}  // namespace

std::string ps_to_text(const PsRefutation& r, const std::vector<std::string>& var_names,
                       const std::string& eq_ref, const std::string& iq_ref) {
  std::string out = "ps\nsystem " + eq_ref + "\n";
  out += "ineqs " + (iq_ref.empty() ? std::string("none") : iq_ref) + "\n";
  out += std::string("sos ") + (r.sos_restricted ? "on" : "off") + "\n";
  append_vars(out, var_names);
  for (const SparsePoly& p : r.cofactors) {
    out += "cofactor\n" + poly_to_lines(poly_with_var_space(p, var_names));
  }
  for (const ConeTerm& ct : r.cone) {
    out += "cone";
    for (size_t j : ct.subset) out += " " + std::to_string(j);
    out += "\n";
    for (const SparsePoly& s : ct.squares) {
      out += "square\n" + poly_to_lines(poly_with_var_space(s, var_names));
    }
  }
  return out;
}

PsFile load_ps(const std::string& path) {
  const std::string text = read_text_file(path);
  std::istringstream is(text);
  std::string line;
  size_t ln = 0;
  std::vector<std::vector<std::string>> header;
  std::vector<size_t> header_lines;
  PsFile out;
  PolyBlocks blocks;
  bool cone_seen = false;
  // Destination of the current term buffer.
  enum class Dest { None, Cofactor, Square } dest = Dest::None;
  const auto flush = [&]() {
    if (dest == Dest::Cofactor) out.refutation.cofactors.push_back(blocks.flush());
    else if (dest == Dest::Square) out.refutation.cone.back().squares.push_back(blocks.flush());
    dest = Dest::None;
  };
  while (std::getline(is, line)) {
    ++ln;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::vector<std::string> t = split_ws(line);
    if (t.empty()) continue;
    if (header.size() < 5) {
      header.push_back(t);
      header_lines.push_back(ln);
      if (header.size() == 5) {
        if (header[0].size() != 1 || header[0][0] != "ps")
          throw SyntaxError(header_lines[0], "expected 'ps' header");
        if (header[1].size() != 2 || header[1][0] != "system")
          throw SyntaxError(header_lines[1], "expected 'system <path>'");
        if (header[2].size() != 2 || header[2][0] != "ineqs")
          throw SyntaxError(header_lines[2], "expected 'ineqs <path>' or 'ineqs none'");
        if (header[3].size() != 2 || header[3][0] != "sos" ||
            (header[3][1] != "on" && header[3][1] != "off"))
          throw SyntaxError(header_lines[3], "expected 'sos on' or 'sos off'");
        if (header[4].empty() || header[4][0] != "vars")
          throw SyntaxError(header_lines[4], "expected 'vars <name...>'");
        out.equalities = load_axiom_system(resolve_ref(path, header[1][1]));
        if (header[2][1] == "none") {
          out.inequalities = make_inequality_system(out.equalities.ring, {}, {});
        } else {
          out.inequalities = load_inequality_system(resolve_ref(path, header[2][1]));
        }
        out.refutation.sos_restricted = header[3][1] == "on";
        blocks.ring = out.equalities.ring;
        blocks.names.assign(header[4].begin() + 1, header[4].end());
      }
      continue;
    }
    if (t[0] == "cofactor") {
      flush();
      if (cone_seen) throw SyntaxError(ln, "cofactors come before cone terms");
      if (t.size() != 1) throw SyntaxError(ln, "'cofactor' takes no arguments");
      dest = Dest::Cofactor;
      continue;
    }
    if (t[0] == "cone") {
      flush();
      cone_seen = true;
      ConeTerm ct;
      for (size_t k = 1; k < t.size(); ++k) {
        try {
          ct.subset.push_back(std::stoull(t[k]));
        } catch (const std::exception&) {
          throw SyntaxError(ln, "bad subset index '" + t[k] + "'");
        }
      }
      out.refutation.cone.push_back(std::move(ct));
      continue;
    }
    if (t[0] == "square") {
      flush();
      if (!cone_seen) throw SyntaxError(ln, "'square' belongs to a cone term");
      if (t.size() != 1) throw SyntaxError(ln, "'square' takes no arguments");
      dest = Dest::Square;
      continue;
    }
    if (dest == Dest::None) throw SyntaxError(ln, "unexpected line '" + t[0] + "'");
    if (blocks.buffer.empty()) blocks.buffer_start = ln;
    blocks.buffer += line + "\n";
  }
  flush();
  return out;
}

std::string ls_to_text(const LsDerivation& d, const std::vector<std::string>& var_names,
                       const std::string& system_ref) {
  std::string out = "ls\nsystem " + system_ref + "\n";
  append_vars(out, var_names);
  for (const LsLine& l : d.lines) {
    out += "line " + ls_rule_str(l.rule);
    switch (l.rule) {
      case LsRule::Axiom:
        out += " " + std::to_string(l.i);
        break;
      case LsRule::SquareAxiom:
        break;
      case LsRule::Sum:
      case LsRule::Product:
        out += " " + std::to_string(l.i) + " " + std::to_string(l.j);
        break;
      case LsRule::ScaleNonneg:
        out += " " + std::to_string(l.i) + " " + l.alpha.get_str();
        break;
    }
    out += "\n";
    if (l.rule == LsRule::SquareAxiom) {
      out += "root\n" + poly_to_lines(poly_with_var_space(*l.root, var_names));
    }
    out += "poly\n" + poly_to_lines(poly_with_var_space(l.poly, var_names));
  }
  return out;
}

std::pair<LsDerivation, InequalitySystem> load_ls(const std::string& path) {
  const std::string text = read_text_file(path);
  std::istringstream is(text);
  std::string line;
  size_t ln = 0;
  std::vector<std::vector<std::string>> header;
  std::vector<size_t> header_lines;
  LsDerivation d;
  InequalitySystem sys;
  PolyBlocks blocks;
  // 0 = between lines, 1 = expecting root terms, 2 = expecting poly terms.
  int part = 0;
  const auto flush = [&]() {
    if (part == 0) return;
    if (d.lines.empty()) throw SyntaxError(ln, "terms outside a line block");
    if (part == 1) d.lines.back().root = blocks.flush();
    else d.lines.back().poly = blocks.flush();
  };
  while (std::getline(is, line)) {
    ++ln;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::vector<std::string> t = split_ws(line);
    if (t.empty()) continue;
    if (header.size() < 3) {
      header.push_back(t);
      header_lines.push_back(ln);
      if (header.size() == 3) {
        if (header[0].size() != 1 || header[0][0] != "ls")
          throw SyntaxError(header_lines[0], "expected 'ls' header");
        if (header[1].size() != 2 || header[1][0] != "system")
          throw SyntaxError(header_lines[1], "expected 'system <path>'");
        if (header[2].empty() || header[2][0] != "vars")
          throw SyntaxError(header_lines[2], "expected 'vars <name...>'");
        sys = load_inequality_system(resolve_ref(path, header[1][1]));
        blocks.ring = sys.ring;
        blocks.names.assign(header[2].begin() + 1, header[2].end());
      }
      continue;
    }
    if (t[0] == "line") {
      flush();
      part = 0;
      if (t.size() < 2) throw SyntaxError(ln, "expected 'line <rule> ...'");
      LsLine l{SparsePoly(sys.ring, blocks.names), LsRule::Axiom, 0, 0, mpz_class(0), {}};
      const auto want_args = [&](size_t n) {
        if (t.size() != 2 + n) throw SyntaxError(ln, "wrong argument count for '" + t[1] + "'");
      };
      const auto num = [&](size_t k) -> size_t {
        try {
          return std::stoull(t[k]);
        } catch (const std::exception&) {
          throw SyntaxError(ln, "bad index '" + t[k] + "'");
        }
      };
      if (t[1] == "axiom") {
        want_args(1);
        l.rule = LsRule::Axiom;
        l.i = num(2);
      } else if (t[1] == "square") {
        want_args(0);
        l.rule = LsRule::SquareAxiom;
      } else if (t[1] == "sum" || t[1] == "product") {
        want_args(2);
        l.rule = t[1] == "sum" ? LsRule::Sum : LsRule::Product;
        l.i = num(2);
        l.j = num(3);
      } else if (t[1] == "scale") {
        want_args(2);
        l.rule = LsRule::ScaleNonneg;
        l.i = num(2);
        try {
          l.alpha = mpz_class(t[3]);
        } catch (const std::invalid_argument&) {
          throw SyntaxError(ln, "bad scaling factor '" + t[3] + "'");
        }
      } else {
        throw SyntaxError(ln, "unknown rule '" + t[1] + "'");
      }
      d.lines.push_back(std::move(l));
      continue;
    }
    if (t[0] == "root") {
      flush();
      if (d.lines.empty() || d.lines.back().rule != LsRule::SquareAxiom)
        throw SyntaxError(ln, "'root' belongs to a square line");
      part = 1;
      continue;
    }
    if (t[0] == "poly") {
      flush();
      if (d.lines.empty()) throw SyntaxError(ln, "'poly' belongs to a line block");
      part = 2;
      continue;
    }
    if (part == 0) throw SyntaxError(ln, "unexpected line '" + t[0] + "'");
    if (blocks.buffer.empty()) blocks.buffer_start = ln;
    blocks.buffer += line + "\n";
  }
  flush();
  return {std::move(d), std::move(sys)};
}

}  // namespace proofkit
