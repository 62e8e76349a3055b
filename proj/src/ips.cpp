// IPS/IPS-LIN verification, Nullstellensatz certificate search, and the
// composition operators (sum, product, case split, substitution).
#include "proofkit/ips.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "proofkit/circuit_io.hpp"
#include "proofkit/errors.hpp"

namespace proofkit {

namespace {

PitOptions force_exact_for_qy(const Ring& ring, PitOptions opt) {
  if (ring.tag == RingTag::RationalFunctionField) opt.mode = PitMode::Exact;
  return opt;
}

Circuit zero_circuit(const Ring& ring) {
  CircuitBuilder b(ring);
  return b.take({b.constant_i(0)});
}

// Variable names a circuit actually reads, in gate order.
std::vector<std::string> read_var_names(const Circuit& c) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const Gate& g : c.gates()) {
    if (g.kind != GateKind::Var) continue;
    const std::string& n = c.var_names()[g.a];
    if (seen.insert(n).second) out.push_back(n);
  }
  return out;
}

Circuit var_circuit(const Ring& ring, const std::string& name) {
  CircuitBuilder b(ring);
  return b.take({b.var(name)});
}

Circuit one_minus(const Circuit& h) {
  CircuitBuilder b(h.ring());
  for (const std::string& n : h.var_names()) b.var(n);
  return b.take({b.sub(b.constant_i(1), b.import(h))});
}

// Same shape and, axiom by axiom, the same polynomials; structural equality
// is the fast path.
bool systems_equivalent(const AxiomSystem& a, const AxiomSystem& b) {
  if (!(a.ring == b.ring) || a.include_boolean != b.include_boolean ||
      a.var_names != b.var_names || a.axioms.size() != b.axioms.size())
    return false;
  for (size_t i = 0; i < a.axioms.size(); ++i) {
    if (a.axioms[i].structurally_equal(b.axioms[i])) continue;
    if (!pit_equal(a.axioms[i], b.axioms[i]).equal) return false;
  }
  return true;
}

// Builds a circuit computing p over the given variable space.
}  // namespace

std::vector<std::string> placeholder_names(const AxiomSystem& s) {
  std::vector<std::string> out;
  for (size_t i = 1; i <= s.axioms.size(); ++i) out.push_back("y" + std::to_string(i));
  if (s.include_boolean)
    for (size_t i = 1; i <= s.var_names.size(); ++i) out.push_back("z" + std::to_string(i));
  return out;
}

std::vector<std::string> proof_space(const AxiomSystem& s) {
  std::vector<std::string> out = s.var_names;
  for (std::string& n : placeholder_names(s)) out.push_back(std::move(n));
  return out;
}

IpsVerdict verify_ips(const IpsProof& p, const PitOptions& opt) {
  const AxiomSystem& s = p.system;
  if (!(p.proof.ring() == s.ring) || !(p.target.ring() == s.ring))
    throw RingMismatch("proof and target must share the system ring");
  const PitOptions o = force_exact_for_qy(s.ring, opt);
  const std::vector<std::string> space = proof_space(s);
  const Circuit proof = with_var_space(p.proof, space);
  const Circuit target = with_var_space(p.target, space);

  const std::vector<std::string> phs = placeholder_names(s);
  const Circuit zero = zero_circuit(s.ring);
  std::map<std::string, const Circuit*> to_zero;
  for (const std::string& n : phs) to_zero[n] = &zero;

  IpsVerdict v;
  v.vanish_at_zero = is_zero(with_var_space(substitute_by_name(proof, to_zero), space), o);

  const std::vector<Circuit> eff = effective_axioms(s);
  std::vector<Circuit> aligned;
  std::map<std::string, const Circuit*> to_axiom;
  aligned.reserve(eff.size());
  for (const Circuit& f : eff) aligned.push_back(with_var_space(f, space));
  for (size_t i = 0; i < phs.size(); ++i) to_axiom[phs[i]] = &aligned[i];
  const Circuit plugged = with_var_space(substitute_by_name(proof, to_axiom), space);
  v.matches_target = pit_equal(plugged, target, o);

  v.accepted = v.vanish_at_zero.equal && v.matches_target.equal;
  if (v.accepted && s.ring.tag != RingTag::RationalFunctionField &&
      !p.target.depends_on_vars(p.target.output())) {
    const Value val = evaluate_single(p.target, Assignment::booleans(0, p.target.num_vars(), s.ring));
    mpq_class m;
    if (std::holds_alternative<mpz_class>(val)) m = std::get<mpz_class>(val);
    else m = std::get<mpq_class>(val);
    if (m != 0) v.refuted_constant = m;
  }
  return v;
}

PitVerdict verify_ips_lin(const IpsLinCert& cert, const AxiomSystem& system,
                          const PitOptions& opt) {
  const std::vector<Circuit> eff = effective_axioms(system);
  if (cert.cofactors.size() != eff.size())
    throw ArityMismatch("cofactors", eff.size(), cert.cofactors.size());
  const PitOptions o = force_exact_for_qy(system.ring, opt);
  CircuitBuilder b(system.ring);
  for (const std::string& n : system.var_names) b.var(n);
  std::vector<uint32_t> terms;
  for (size_t i = 0; i < eff.size(); ++i)
    terms.push_back(b.mul(b.import(eff[i]), b.import(cert.cofactors[i])));
  const uint32_t total = b.sum(std::move(terms));
  const uint32_t one = b.constant_i(1);
  return pit_equal(b.take({total}, false), b.take({one}, false), o);
}

std::optional<IpsLinCert> ns_search(const AxiomSystem& system, size_t degree_bound,
                                    const NsOptions& opt) {
  if (system.ring.tag != RingTag::RationalField)
    throw RingMismatch("certificate search runs over Q");
  const std::vector<Circuit> eff = effective_axioms(system);
  const size_t n = system.var_names.size();

  std::vector<SparsePoly::Exps> monomials;
  SparsePoly::Exps cur(n, 0);
  const auto enumerate = [&](auto&& self, size_t i, size_t left) -> void {
    if (i + 1 == n) {
      for (size_t d = 0; d <= left; ++d) {
        cur[i] = static_cast<uint32_t>(d);
        monomials.push_back(cur);
      }
      cur[i] = 0;
      return;
    }
    for (size_t d = 0; d <= left; ++d) {
      cur[i] = static_cast<uint32_t>(d);
      self(self, i + 1, left - d);
    }
    cur[i] = 0;
  };
  if (n == 0) monomials.push_back(cur);
  else enumerate(enumerate, 0, degree_bound);

  const size_t unknowns = eff.size() * monomials.size();
  if (unknowns > opt.max_unknowns)
    throw BudgetExceeded("certificate search unknowns", unknowns, opt.max_unknowns);
  if (unknowns == 0) return std::nullopt;

  std::vector<SparsePoly> expanded;
  expanded.reserve(eff.size());
  for (const Circuit& f : eff) expanded.push_back(expand(f));

  // One row per constraint monomial: sum over columns (i, m) of the
  // coefficient of the row monomial in F_i * x^m, equal to 1 at the constant
  // monomial and 0 elsewhere.
  struct Row {
    std::map<size_t, mpq_class> a;
    mpq_class rhs;
  };
  std::vector<Row> rows;
  std::map<SparsePoly::Exps, size_t> row_of;
  const auto row_idx = [&](const SparsePoly::Exps& e) {
    const auto it = row_of.find(e);
    if (it != row_of.end()) return it->second;
    const size_t id = rows.size();
    row_of.emplace(e, id);
    rows.emplace_back();
    return id;
  };
  for (size_t i = 0; i < eff.size(); ++i) {
    for (const auto& [e, c] : expanded[i].terms()) {
      const mpq_class& q = std::get<mpq_class>(c);
      for (size_t j = 0; j < monomials.size(); ++j) {
        SparsePoly::Exps mu = e;
        for (size_t k = 0; k < n; ++k) mu[k] += monomials[j][k];
        const size_t r = row_idx(mu);
        const size_t col = i * monomials.size() + j;
        mpq_class& cell = rows[r].a[col];
        cell += q;
        if (cell == 0) rows[r].a.erase(col);
      }
    }
  }
  rows[row_idx(SparsePoly::Exps(n, 0))].rhs = 1;

  // Sparse Gauss-Jordan light: repeatedly pick the remaining row with the
  // smallest leading column, normalize, eliminate that column from the other
  // remaining rows, then back-substitute.
  std::vector<Row> reduced;
  std::vector<size_t> pivot_col;
  std::vector<Row> remaining = std::move(rows);
  while (true) {
    size_t best = remaining.size();
    size_t best_col = 0;
    for (size_t r = 0; r < remaining.size(); ++r) {
      if (remaining[r].a.empty()) continue;
      const size_t lead = remaining[r].a.begin()->first;
      if (best == remaining.size() || lead < best_col) {
        best = r;
        best_col = lead;
      }
    }
    if (best == remaining.size()) break;
    Row piv = std::move(remaining[best]);
    remaining.erase(remaining.begin() + static_cast<long>(best));
    const mpq_class lead = piv.a.begin()->second;
    for (auto& [c, v] : piv.a) v /= lead;
    piv.rhs /= lead;
    for (Row& r : remaining) {
      const auto it = r.a.find(best_col);
      if (it == r.a.end()) continue;
      const mpq_class f = it->second;
      r.a.erase(it);
      for (const auto& [c, v] : piv.a) {
        if (c == best_col) continue;
        mpq_class& cell = r.a[c];
        cell -= f * v;
        if (cell == 0) r.a.erase(c);
      }
      r.rhs -= f * piv.rhs;
    }
    pivot_col.push_back(best_col);
    reduced.push_back(std::move(piv));
  }
  for (const Row& r : remaining)
    if (r.rhs != 0) return std::nullopt;

  std::vector<mpq_class> sol(unknowns, mpq_class(0));
  for (size_t k = reduced.size(); k-- > 0;) {
    mpq_class v = reduced[k].rhs;
    for (const auto& [c, coef] : reduced[k].a) {
      if (c == pivot_col[k]) continue;
      v -= coef * sol[c];
    }
    sol[pivot_col[k]] = v;
  }

  IpsLinCert cert;
  for (size_t i = 0; i < eff.size(); ++i) {
    SparsePoly p(system.ring, system.var_names);
    for (size_t j = 0; j < monomials.size(); ++j) {
      const mpq_class& q = sol[i * monomials.size() + j];
      if (q != 0) p.add_term(monomials[j], Coeff(q));
    }
    cert.cofactors.push_back(circuit_from_poly(p, system.ring, system.var_names));
  }
  PitOptions exact;
  exact.mode = PitMode::Exact;
  if (!verify_ips_lin(cert, system, exact).equal)
    throw Error("certificate search produced cofactors that do not re-verify");
  return cert;
}

IpsProof ips_refutation_from_lin(const IpsLinCert& cert, const AxiomSystem& system) {
  const std::vector<std::string> ph = placeholder_names(system);
  if (cert.cofactors.size() != ph.size())
    throw ArityMismatch("certificate cofactors", ph.size(), cert.cofactors.size());
  CircuitBuilder b(system.ring);
  for (const std::string& n : proof_space(system)) b.var(n);
  const uint32_t zero = b.constant_i(0);
  std::vector<uint32_t> terms;
  for (size_t i = 0; i < ph.size(); ++i) {
    if (!(cert.cofactors[i].ring() == system.ring))
      throw RingMismatch("cofactor ring differs from the system ring");
    terms.push_back(b.mul(b.var(ph[i]), b.sub(zero, b.import(cert.cofactors[i]))));
  }
  const Circuit proof = with_var_space(b.take({b.sum(std::move(terms))}), proof_space(system));
  CircuitBuilder tb(system.ring);
  for (const std::string& n : system.var_names) tb.var(n);
  const Circuit target = with_var_space(tb.take({tb.constant_i(-1)}), system.var_names);
  return {proof, system, target};
}

IpsProof compose_sum(const IpsProof& a, const IpsProof& b) {
  if (!same_system(a.system, b.system))
    throw SystemMismatch("sum composition needs both proofs over the same system");
  CircuitBuilder pb(a.system.ring);
  for (const std::string& n : proof_space(a.system)) pb.var(n);
  const Circuit proof =
      with_var_space(pb.take({pb.add(pb.import(a.proof), pb.import(b.proof))}), proof_space(a.system));
  CircuitBuilder tb(a.system.ring);
  for (const std::string& n : a.system.var_names) tb.var(n);
  const Circuit target =
      with_var_space(tb.take({tb.add(tb.import(a.target), tb.import(b.target))}), a.system.var_names);
  return {proof, a.system, target};
}

IpsProof compose_product(const IpsProof& a, const IpsProof& b, const Circuit& hg) {
  if (!same_system(a.system, b.system))
    throw SystemMismatch("product composition needs both proofs over the same system");
  if (hg.outputs().size() != 2) throw ArityMismatch("shared circuit outputs", 2, hg.outputs().size());
  CircuitBuilder pb(a.system.ring);
  for (const std::string& n : proof_space(a.system)) pb.var(n);
  const std::vector<uint32_t> ho = pb.import_outputs(hg);
  const uint32_t lhs = pb.mul(pb.import(a.proof), ho[0]);
  const uint32_t rhs = pb.mul(ho[1], pb.import(b.proof));
  const Circuit proof = with_var_space(pb.take({pb.add(lhs, rhs)}), proof_space(a.system));
  CircuitBuilder tb(a.system.ring);
  for (const std::string& n : a.system.var_names) tb.var(n);
  const std::vector<uint32_t> th = tb.import_outputs(hg);
  const uint32_t tl = tb.mul(tb.import(a.target), th[0]);
  const uint32_t tr = tb.mul(th[1], tb.import(b.target));
  const Circuit target = with_var_space(tb.take({tb.add(tl, tr)}), a.system.var_names);
  return {proof, a.system, target};
}

namespace {

AxiomSystem extend_system(const AxiomSystem& base, const std::vector<Circuit>& hs,
                          uint64_t key, size_t level) {
  std::vector<Circuit> ax = base.axioms;
  for (size_t i = 0; i < level; ++i)
    ax.push_back(((key >> i) & 1) ? one_minus(hs[i]) : hs[i]);
  return make_axiom_system(base.ring, std::move(ax), base.include_boolean);
}

std::string case_bits_str(uint64_t key, size_t level) {
  std::string s;
  for (size_t i = 0; i < level; ++i) s += ((key >> i) & 1) ? '1' : '0';
  return s;
}

// Merges the two proofs that split on the level-th case circuit (1-based)
// into one proof over the system extended by the first level-1 cases only.
IpsProof combine_pair(const AxiomSystem& base, const std::vector<Circuit>& hs,
                      uint64_t key, size_t level, const IpsProof& p0, const IpsProof& p1,
                      const std::string& bool_ph) {
  const AxiomSystem ext = extend_system(base, hs, key, level - 1);
  if (!systems_equivalent(p0.system, extend_system(base, hs, key, level)))
    throw SystemMismatch("case " + case_bits_str(key, level) + " proof is over the wrong system");
  if (!systems_equivalent(p1.system, extend_system(base, hs, key | (uint64_t{1} << (level - 1)), level)))
    throw SystemMismatch("case " + case_bits_str(key | (uint64_t{1} << (level - 1)), level) +
                         " proof is over the wrong system");
  {
    auto [ta, tb] = align_vars(p0.target, p1.target);
    if (!pit_equal(ta, tb).equal) throw SystemMismatch("case proofs prove different targets");
  }

  const std::string w = "y" + std::to_string(base.axioms.size() + level);
  const Circuit& h = hs[level - 1];
  const Circuit hbar = one_minus(h);

  const Circuit s0 = split_on_var(with_var_space(p0.proof, proof_space(p0.system)), w);
  const Circuit s1 = split_on_var(with_var_space(p1.proof, proof_space(p1.system)), w);
  std::map<std::string, const Circuit*> m0{{w, &h}}, m1{{w, &hbar}};
  const Circuit sub0 = substitute_by_name(s0, m0);
  const Circuit sub1 = substitute_by_name(s1, m1);

  CircuitBuilder b(base.ring);
  for (const std::string& n : proof_space(ext)) b.var(n);
  const uint32_t hn = b.import(h);
  const uint32_t hbarn = b.sub(b.constant_i(1), hn);
  const std::vector<uint32_t> o0 = b.import_outputs(sub0);
  const std::vector<uint32_t> o1 = b.import_outputs(sub1);
  const uint32_t yb = b.var(bool_ph);
  const uint32_t main = b.add(b.mul(hbarn, o0[0]), b.mul(hn, o1[0]));
  const uint32_t fix = b.mul(yb, b.add(o0[1], o1[1]));
  const Circuit proof = with_var_space(b.take({b.sub(main, fix)}), proof_space(ext));
  return {proof, ext, with_var_space(p0.target, ext.var_names)};
}

}  // namespace

IpsProof by_cases(const AxiomSystem& base, const std::vector<Circuit>& case_circuits,
                  const std::map<uint64_t, IpsProof>& proofs) {
  const size_t r = case_circuits.size();
  if (r >= 63) throw BadParams("too many case circuits");
  std::vector<Circuit> hs;
  hs.reserve(r);
  for (const Circuit& h : case_circuits) {
    if (!(h.ring() == base.ring)) throw RingMismatch("case circuit ring differs from the system ring");
    hs.push_back(with_var_space(h, base.var_names));
  }

  // Booleanity H^2-H of every case circuit must be an effective base axiom;
  // remember its placeholder name.
  const std::vector<Circuit> eff = effective_axioms(base);
  const std::vector<std::string> phs = placeholder_names(base);
  std::vector<std::string> bool_ph(r);
  for (size_t i = 0; i < r; ++i) {
    CircuitBuilder bb(base.ring);
    for (const std::string& n : base.var_names) bb.var(n);
    const uint32_t hh = bb.import(hs[i]);
    const Circuit want = bb.take({bb.sub(bb.mul(hh, hh), hh)});
    bool found = false;
    for (size_t j = 0; j < eff.size() && !found; ++j) {
      if (eff[j].structurally_equal(want) || pit_equal(eff[j], want).equal) {
        bool_ph[i] = phs[j];
        found = true;
      }
    }
    if (!found) throw MissingBooleanityAxiom(std::to_string(i + 1));
  }

  std::map<uint64_t, IpsProof> cur = proofs;
  for (uint64_t key = 0; key < (uint64_t{1} << r); ++key)
    if (!cur.count(key)) throw MissingCase(case_bits_str(key, r));
  for (size_t level = r; level >= 1; --level) {
    std::map<uint64_t, IpsProof> next;
    const uint64_t top = uint64_t{1} << (level - 1);
    for (uint64_t key = 0; key < top; ++key) {
      const IpsProof& p0 = cur.at(key);
      const IpsProof& p1 = cur.at(key | top);
      next.emplace(key, combine_pair(base, hs, key, level, p0, p1, bool_ph[level - 1]));
    }
    cur = std::move(next);
  }
  const IpsProof& res = cur.at(0);
  if (!systems_equivalent(res.system, base))
    throw SystemMismatch("case proofs are over the wrong base system");
  return {res.proof, base, res.target};
}

IpsProof explicit_booleans(const IpsProof& p) {
  if (!p.system.include_boolean) return p;
  const size_t m = p.system.axioms.size();
  const AxiomSystem ns = make_axiom_system(p.system.ring, effective_axioms(p.system), false);
  std::vector<Circuit> holders;
  holders.reserve(p.system.var_names.size());
  for (size_t i = 1; i <= p.system.var_names.size(); ++i)
    holders.push_back(var_circuit(p.system.ring, "y" + std::to_string(m + i)));
  std::map<std::string, const Circuit*> ren;
  for (size_t i = 1; i <= holders.size(); ++i) ren["z" + std::to_string(i)] = &holders[i - 1];
  const Circuit proof = with_var_space(substitute_by_name(p.proof, ren), proof_space(ns));
  return {proof, ns, with_var_space(p.target, ns.var_names)};
}

IpsProof substitute_proof(const IpsProof& p, const std::map<std::string, const Circuit*>& bindings) {
  const IpsProof q = explicit_booleans(p);
  const std::vector<std::string> phs = placeholder_names(q.system);
  const std::set<std::string> ph_set(phs.begin(), phs.end());
  const std::set<std::string> sys_vars(q.system.var_names.begin(), q.system.var_names.end());
  for (const auto& [name, c] : bindings) {
    if (!sys_vars.count(name)) throw Error("binding for unknown system variable '" + name + "'");
    if (!(c->ring() == q.system.ring)) throw RingMismatch("binding ring differs from the system ring");
    if (c->outputs().size() != 1) throw ArityMismatch("binding outputs", 1, c->outputs().size());
    for (const std::string& rv : read_var_names(*c))
      if (ph_set.count(rv)) throw Error("binding variable '" + rv + "' collides with a placeholder");
  }

  std::vector<std::string> new_x;
  std::set<std::string> seen;
  for (const std::string& n : q.system.var_names) {
    const auto it = bindings.find(n);
    if (it == bindings.end()) {
      if (seen.insert(n).second) new_x.push_back(n);
    } else {
      for (const std::string& rv : read_var_names(*it->second))
        if (seen.insert(rv).second) new_x.push_back(rv);
    }
  }

  std::vector<Circuit> new_axioms;
  new_axioms.reserve(q.system.axioms.size());
  for (const Circuit& f : q.system.axioms)
    new_axioms.push_back(with_var_space(substitute_by_name(f, bindings), new_x));
  AxiomSystem ns = make_axiom_system(q.system.ring, std::move(new_axioms), false);
  if (ns.axioms.empty()) ns.var_names = new_x;

  const Circuit proof = with_var_space(substitute_by_name(q.proof, bindings), proof_space(ns));
  const Circuit target = with_var_space(substitute_by_name(q.target, bindings), ns.var_names);
  return {proof, ns, target};
}

namespace {

void append_section(std::string& out, const std::string& label, const Circuit& c) {
  out += "begin circuit " + label + "\n";
  out += serialize_circuit(c);
  if (out.back() != '\n') out += '\n';
  out += "end circuit\n";
}

// Shared shape of the two proof file kinds: a kind line, a system reference,
// then labeled circuit sections.
struct ProofFile {
  std::string system_ref;
  std::vector<std::pair<std::string, std::string>> circuits;
};

ProofFile parse_proof_file(const std::string& text, const std::string& kind) {
  const TextSections sec = read_text_sections(text);
  if (sec.header_lines.size() != 2)
    throw SyntaxError(sec.header_linenos.back(), "expected a kind line and a system line");
  if (sec.header_lines[0].size() != 1 || sec.header_lines[0][0] != kind)
    throw SyntaxError(sec.header_linenos[0], "expected '" + kind + "' header");
  if (sec.header_lines[1].size() != 2 || sec.header_lines[1][0] != "system")
    throw SyntaxError(sec.header_linenos[1], "expected 'system <path>'");
  return {sec.header_lines[1][1], sec.circuits};
}

}  // namespace

std::string ips_proof_to_text(const IpsProof& p, const std::string& system_ref) {
  std::string out = "ips\nsystem " + system_ref + "\n";
  append_section(out, "target", p.target);
  append_section(out, "proof", p.proof);
  return out;
}

IpsProof load_ips_proof(const std::string& path) {
  const ProofFile pf = parse_proof_file(read_text_file(path), "ips");
  const AxiomSystem sys = load_axiom_system(resolve_ref(path, pf.system_ref));
  std::optional<Circuit> target, proof;
  for (const auto& [label, body] : pf.circuits) {
    if (label == "target" && !target) target = parse_circuit(body);
    else if (label == "proof" && !proof) proof = parse_circuit(body);
    else throw SyntaxError(1, "unexpected or repeated section '" + label + "'");
  }
  if (!target || !proof) throw SyntaxError(1, "proof files need one target and one proof section");
  return {*proof, sys, *target};
}

std::string ips_lin_to_text(const IpsLinCert& cert, const std::string& system_ref) {
  std::string out = "ipslin\nsystem " + system_ref + "\n";
  for (const Circuit& c : cert.cofactors) append_section(out, "cofactor", c);
  return out;
}

std::pair<IpsLinCert, AxiomSystem> load_ips_lin(const std::string& path) {
  const ProofFile pf = parse_proof_file(read_text_file(path), "ipslin");
  AxiomSystem sys = load_axiom_system(resolve_ref(path, pf.system_ref));
  IpsLinCert cert;
  for (const auto& [label, body] : pf.circuits) {
    if (label != "cofactor") throw SyntaxError(1, "unexpected section '" + label + "'");
    cert.cofactors.push_back(parse_circuit(body));
  }
  return {std::move(cert), std::move(sys)};
}

}  // namespace proofkit
