// Conic proof system: cone membership, verification, the binary-value
// refutation generator, placeholder factoring and the equational-to-conic
// compiler.
#include "proofkit/cps.hpp"

#include <map>
#include <optional>
#include <sstream>
#include <utility>

#include "proofkit/circuit_io.hpp"
#include "proofkit/errors.hpp"
#include "proofkit/transforms.hpp"

namespace proofkit {

namespace {

// Same gates under another ring; legal whenever every constant is a valid
// constant of the target ring.
Circuit rering(const Circuit& c, const Ring& r) {
  return Circuit::build(r, c.gates(), c.outputs(), c.var_names());
}

Circuit select_output(const Circuit& c, size_t k) {
  CircuitBuilder b(c.ring());
  for (const std::string& n : c.var_names()) b.var(n);
  const std::vector<uint32_t> outs = b.import_outputs(c);
  return b.take({outs[k]});
}

std::string leaf_str(const Circuit& c, uint32_t id) {
  const Gate& g = c.gate(id);
  if (g.kind == GateKind::Var) return "variable " + c.var_names()[g.a];
  return "constant " + g.cval.get_str();
}

}  // namespace

ConicVerdict conic_check(const Circuit& c, const std::set<std::string>& protected_vars) {
  const RingTag t = c.ring().tag;
  if (t != RingTag::IntegerRing && t != RingTag::RationalField)
    throw RingMismatch("the cone test needs an ordered ring");
  const size_t sz = c.size();
  std::vector<char> reach(sz, 0);
  std::vector<uint32_t> parent(sz, UINT32_MAX);
  for (uint32_t out : c.outputs()) reach[out] = 1;
  for (uint32_t id = static_cast<uint32_t>(sz); id-- > 0;) {
    if (!reach[id]) continue;
    const Gate& g = c.gate(id);
    if (g.kind == GateKind::Var || g.kind == GateKind::Const) continue;
    if (c.is_squaring(id)) continue;
    for (uint32_t op : {g.a, g.b}) {
      if (!reach[op]) {
        reach[op] = 1;
        parent[op] = id;
      }
    }
  }
  for (uint32_t id = 0; id < sz; ++id) {
    if (!reach[id]) continue;
    const Gate& g = c.gate(id);
    bool bad = false;
    if (g.kind == GateKind::Var) bad = protected_vars.count(c.var_names()[g.a]) == 0;
    else if (g.kind == GateKind::Const) bad = g.cval < 0;
    if (!bad) continue;
    ConicVerdict v;
    v.conic = false;
    for (uint32_t cur = id; cur != UINT32_MAX; cur = parent[cur]) v.path.push_back(cur);
    return v;
  }
  return {};
}

std::vector<std::string> cps_placeholder_names(const InequalitySystem& s) {
  std::vector<std::string> out;
  for (size_t i = 1; i <= s.inequalities.size(); ++i) out.push_back("y" + std::to_string(i));
  return out;
}

std::vector<std::string> cps_proof_space(const InequalitySystem& s) {
  std::vector<std::string> out = s.var_names;
  for (std::string& n : cps_placeholder_names(s)) {
    for (const std::string& x : s.var_names) {
      if (x == n) throw Error("system variable " + x + " collides with a placeholder name");
    }
    out.push_back(std::move(n));
  }
  return out;
}

bool cps_real_mode(const InequalitySystem& s) {
  for (Provenance t : s.tags) {
    if (t == Provenance::BoolX || t == Provenance::Bool1mX || t == Provenance::BoolSqPos ||
        t == Provenance::BoolSqNeg) {
      return false;
    }
  }
  return true;
}

CpsVerdict verify_cps(const CpsProof& p, const PitOptions& opt) {
  const InequalitySystem& s = p.system;
  if (!(p.proof.ring() == s.ring) || !(p.target.ring() == s.ring))
    throw RingMismatch("proof and target must share the system ring");
  const size_t nineq = s.inequalities.size();
  for (const Gate& g : p.proof.gates()) {
    if (g.kind != GateKind::Var) continue;
    const std::string& n = p.proof.var_names()[g.a];
    if (n.size() < 2 || n[0] != 'y' || n[1] == '0') continue;
    if (n.find_first_not_of("0123456789", 1) != std::string::npos) continue;
    const size_t k = std::stoull(n.substr(1));
    if (k > nineq) throw ArityMismatch("inequality placeholders", nineq, k);
  }
  const std::vector<std::string> space = cps_proof_space(s);
  const Circuit proof = with_var_space(p.proof, space);
  const Circuit target = with_var_space(p.target, space);

  const std::vector<std::string> phs = cps_placeholder_names(s);
  const ConicVerdict cv = conic_check(proof, std::set<std::string>(phs.begin(), phs.end()));
  if (!cv.conic) {
    throw ConicViolation("proof circuit is not conic: " + leaf_str(proof, cv.path.front()) +
                             " reaches an output with no squaring in between",
                         cv.path);
  }

  std::vector<Circuit> aligned;
  aligned.reserve(nineq);
  for (const Circuit& h : s.inequalities) aligned.push_back(with_var_space(h, space));
  std::map<std::string, const Circuit*> bind;
  for (size_t i = 0; i < nineq; ++i) bind[phs[i]] = &aligned[i];
  const Circuit plugged = with_var_space(substitute_by_name(proof, bind), space);

  CpsVerdict v;
  v.matches_target = pit_equal(plugged, target, opt);
  v.accepted = v.matches_target.equal;
  return v;
}

CpsProof gen_bvp_cps(uint32_t n, const mpz_class& M) {
  if (n == 0) throw BadParams("the binary value principle needs at least one variable");
  if (M < 1) throw BadParams("the shift constant must be at least 1");
  const Ring ring = M == 1 ? Ring::Z() : Ring::Q();
  const std::optional<Circuit> tau =
      M == 1 ? std::nullopt : std::optional<Circuit>(rering(tau_int(M), ring));

  std::vector<Circuit> ineq;
  std::vector<Provenance> tags;
  // Indices 1..n: x_i >= 0, in variable order; the conic proof reads these.
  for (uint32_t i = 1; i <= n; ++i) {
    CircuitBuilder b(ring);
    ineq.push_back(b.take({b.var("x" + std::to_string(i))}));
    tags.push_back(Provenance::BoolX);
  }
  // The weighted sum f = sum_i 2^(i-1) x_i + M as a doubling chain.
  CircuitBuilder fb(ring);
  std::vector<uint32_t> xs;
  for (uint32_t i = 1; i <= n; ++i) xs.push_back(fb.var("x" + std::to_string(i)));
  uint32_t acc = xs[n - 1];
  for (uint32_t i = n - 1; i-- > 0;) acc = fb.add(xs[i], fb.add(acc, acc));
  const uint32_t m_node = tau ? fb.import(*tau) : fb.constant_i(1);
  const uint32_t f_node = fb.add(acc, m_node);
  const Circuit f = fb.take({f_node});
  const Circuit neg_f = fb.take({fb.sub(fb.constant_i(0), f_node)});
  // Index n+1: -f >= 0; the proof's final placeholder.
  ineq.push_back(neg_f);
  tags.push_back(Provenance::EqNeg);
  // Index n+2: f >= 0, completing the equality pair.
  ineq.push_back(f);
  tags.push_back(Provenance::EqPos);
  // Remaining boolean-range entries, unused by the proof.
  for (uint32_t i = 1; i <= n; ++i) {
    CircuitBuilder b(ring);
    const uint32_t x = b.var("x" + std::to_string(i));
    const uint32_t sq = b.square(x);
    ineq.push_back(b.take({b.sub(b.constant_i(1), x)}));
    tags.push_back(Provenance::Bool1mX);
    ineq.push_back(b.take({b.sub(sq, x)}));
    tags.push_back(Provenance::BoolSqPos);
    ineq.push_back(b.take({b.sub(x, sq)}));
    tags.push_back(Provenance::BoolSqNeg);
  }
  InequalitySystem sys = make_inequality_system(ring, std::move(ineq), std::move(tags));

  CircuitBuilder pb(ring);
  std::vector<uint32_t> ys;
  for (uint32_t i = 1; i <= n + 1; ++i) ys.push_back(pb.var("y" + std::to_string(i)));
  uint32_t pacc = ys[n - 1];
  for (uint32_t i = n - 1; i-- > 0;) pacc = pb.add(ys[i], pb.add(pacc, pacc));
  uint32_t proof_node = pb.add(pacc, ys[n]);
  if (tau) proof_node = pb.divc(proof_node, pb.import(*tau));
  const Circuit proof = with_var_space(pb.take({proof_node}), cps_proof_space(sys));

  CircuitBuilder tb(ring);
  for (const std::string& x : sys.var_names) tb.var(x);
  const Circuit target = tb.take({tb.constant_i(-1)});

  return {proof, std::move(sys), target, /*real_mode=*/false};
}

std::vector<Circuit> factor_placeholders(const Circuit& c,
                                         const std::vector<std::string>& placeholders) {
  if (c.outputs().size() != 1) throw ArityMismatch("factored circuit outputs", 1, c.outputs().size());
  std::vector<Circuit> out;
  out.reserve(placeholders.size());
  Circuit rest = c;
  for (const std::string& w : placeholders) {
    const Circuit parts = split_on_var(rest, w);
    out.push_back(with_var_space(select_output(parts, 1), c.var_names()));
    rest = with_var_space(select_output(parts, 0), c.var_names());
  }
  if (!is_zero(rest).equal) {
    throw NotInPlaceholderIdeal(
        "a nonzero residual remains after peeling off every placeholder");
  }
  return out;
}

CpsProof ips_to_cps(const IpsProof& p) {
  const IpsProof q = explicit_booleans(p);
  const AxiomSystem& s = q.system;
  InequalitySystem sys = inequalities_from_equalities(s);

  const std::vector<std::string> phs = placeholder_names(s);
  const std::vector<std::string> space = proof_space(s);
  const std::vector<Circuit> cof = factor_placeholders(with_var_space(q.proof, space), phs);

  std::vector<Circuit> axioms;
  axioms.reserve(s.axioms.size());
  std::map<std::string, const Circuit*> bind;
  for (size_t i = 0; i < s.axioms.size(); ++i) axioms.push_back(with_var_space(s.axioms[i], space));
  for (size_t i = 0; i < phs.size(); ++i) bind[phs[i]] = &axioms[i];

  CircuitBuilder b(s.ring);
  for (const std::string& n : cps_proof_space(sys)) b.var(n);
  std::vector<uint32_t> terms;
  for (size_t i = 0; i < cof.size(); ++i) {
    // Cofactors may still read placeholders; replace them by their axioms so
    // the halves below are circuits over the system variables alone.
    const Circuit ci = with_var_space(substitute_by_name(cof[i], bind), s.var_names);
    const SplitResult sp = minus_normalize(ci, SplitMode::Halves);
    terms.push_back(b.mul(b.var("y" + std::to_string(2 * i + 1)), b.import(sp.pos)));
    terms.push_back(b.mul(b.var("y" + std::to_string(2 * i + 2)), b.import(sp.neg)));
  }
  const Circuit proof = with_var_space(b.take({b.sum(std::move(terms))}), cps_proof_space(sys));
  const Circuit target = with_var_space(q.target, sys.var_names);
  const bool real = cps_real_mode(sys);
  return {proof, std::move(sys), target, real};
}

namespace {

void append_section(std::string& out, const std::string& label, const Circuit& c) {
  out += "begin circuit " + label + "\n";
  out += serialize_circuit(c);
  if (out.back() != '\n') out += '\n';
  out += "end circuit\n";
}

}  // namespace

std::string cps_proof_to_text(const CpsProof& p, const std::string& system_ref) {
  std::string out = "cps\nsystem " + system_ref + "\n";
  out += std::string("real ") + (p.real_mode ? "on" : "off") + "\n";
  append_section(out, "target", p.target);
  append_section(out, "proof", p.proof);
  return out;
}

CpsProof load_cps_proof(const std::string& path) {
  const TextSections sec = read_text_sections(read_text_file(path));
  if (sec.header_lines.size() != 3)
    throw SyntaxError(sec.header_linenos.empty() ? 1 : sec.header_linenos.back(),
                      "expected a kind line, a system line and a real line");
  if (sec.header_lines[0].size() != 1 || sec.header_lines[0][0] != "cps")
    throw SyntaxError(sec.header_linenos[0], "expected 'cps' header");
  if (sec.header_lines[1].size() != 2 || sec.header_lines[1][0] != "system")
    throw SyntaxError(sec.header_linenos[1], "expected 'system <path>'");
  if (sec.header_lines[2].size() != 2 || sec.header_lines[2][0] != "real" ||
      (sec.header_lines[2][1] != "on" && sec.header_lines[2][1] != "off"))
    throw SyntaxError(sec.header_linenos[2], "expected 'real on' or 'real off'");
  InequalitySystem sys = load_inequality_system(resolve_ref(path, sec.header_lines[1][1]));
  std::optional<Circuit> target, proof;
  for (const auto& [label, body] : sec.circuits) {
    if (label == "target" && !target) target = parse_circuit(body);
    else if (label == "proof" && !proof) proof = parse_circuit(body);
    else throw SyntaxError(1, "unexpected or repeated section '" + label + "'");
  }
  if (!target || !proof) throw SyntaxError(1, "proof files need one target and one proof section");
  return {*proof, std::move(sys), *target, sec.header_lines[2][1] == "on"};
}

void save_cps_proof(const std::string& path, const CpsProof& p, const std::string& system_ref) {
  write_text_file(path, cps_proof_to_text(p, system_ref));
}

}  // namespace proofkit
