#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "proofkit/cps.hpp"
#include "proofkit/errors.hpp"
#include "proofkit/ips.hpp"
#include "proofkit/pit.hpp"
#include "proofkit/systems.hpp"
#include "proofkit/transforms.hpp"
#include "test_util.hpp"

using namespace proofkit;
using namespace proofkit::testutil;

namespace {

// Independent cone oracle: explicit upward search from every bad leaf along
// edges that skip squaring gates, the direct reading of the acceptance rule.
bool oracle_has_bad_path(const Circuit& c, const std::set<std::string>& prot) {
  std::vector<std::vector<uint32_t>> up(c.size());
  for (uint32_t id = 0; id < c.size(); ++id) {
    const Gate& g = c.gate(id);
    if (g.kind == GateKind::Var || g.kind == GateKind::Const) continue;
    if (c.is_squaring(id)) continue;
    up[g.a].push_back(id);
    up[g.b].push_back(id);
  }
  const std::set<uint32_t> outs(c.outputs().begin(), c.outputs().end());
  for (uint32_t id = 0; id < c.size(); ++id) {
    const Gate& g = c.gate(id);
    const bool bad = (g.kind == GateKind::Var && prot.count(c.var_names()[g.a]) == 0) ||
                     (g.kind == GateKind::Const && g.cval < 0);
    if (!bad) continue;
    std::vector<char> seen(c.size(), 0);
    std::vector<uint32_t> stack{id};
    seen[id] = 1;
    while (!stack.empty()) {
      const uint32_t cur = stack.back();
      stack.pop_back();
      if (outs.count(cur)) return true;
      for (uint32_t nxt : up[cur]) {
        if (!seen[nxt]) {
          seen[nxt] = 1;
          stack.push_back(nxt);
        }
      }
    }
  }
  return false;
}

// A rejection witness must be a genuine squaring-free bad-leaf-to-output path.
void check_witness(const Circuit& c, const std::vector<uint32_t>& path,
                   const std::set<std::string>& prot) {
  REQUIRE(!path.empty());
  const Gate& leaf = c.gate(path.front());
  const bool bad = (leaf.kind == GateKind::Var && prot.count(c.var_names()[leaf.a]) == 0) ||
                   (leaf.kind == GateKind::Const && leaf.cval < 0);
  CHECK(bad);
  bool is_out = false;
  for (uint32_t o : c.outputs()) is_out |= o == path.back();
  CHECK(is_out);
  for (size_t k = 0; k + 1 < path.size(); ++k) {
    const Gate& g = c.gate(path[k + 1]);
    CHECK(g.kind != GateKind::Var);
    CHECK(g.kind != GateKind::Const);
    CHECK(!c.is_squaring(path[k + 1]));
    CHECK((g.a == path[k] || g.b == path[k]));
  }
}

void agree_with_oracle(const Circuit& c, const std::set<std::string>& prot) {
  const ConicVerdict v = conic_check(c, prot);
  REQUIRE(v.conic == !oracle_has_bad_path(c, prot));
  if (!v.conic) check_witness(c, v.path, prot);
}

// Every DAG of at most max_gates gates whose last gate is the output, over
// leaves {x, y, -1, 1} and the binary gates add and mul.
void enumerate_dags(std::vector<Gate>& gates, size_t max_gates,
                    const std::set<std::string>& prot) {
  if (!gates.empty()) {
    Circuit c = Circuit::build(Ring::Z(), gates, {static_cast<uint32_t>(gates.size() - 1)},
                               {"x", "y"});
    agree_with_oracle(c, prot);
    if (gates.size() == max_gates) return;
  }
  const uint32_t n = static_cast<uint32_t>(gates.size());
  const auto recurse = [&](Gate g) {
    gates.push_back(std::move(g));
    enumerate_dags(gates, max_gates, prot);
    gates.pop_back();
  };
  recurse(Gate::var(0));
  recurse(Gate::var(1));
  recurse(Gate::constant(mpq_class(-1)));
  recurse(Gate::constant(mpq_class(1)));
  for (uint32_t a = 0; a < n; ++a) {
    for (uint32_t b = 0; b < n; ++b) {
      recurse(Gate::add(a, b));
      recurse(Gate::mul(a, b));
    }
  }
}

// Random circuit that is conic by construction: protected leaves, nonnegative
// constants, squares of arbitrary subcircuits, and sums, products and
// positive-constant divisions of conic nodes.
Circuit random_conic(std::mt19937_64& rng, CircuitBuilder& b, size_t steps) {
  auto pick = [&rng](size_t n) { return std::uniform_int_distribution<size_t>(0, n - 1)(rng); };
  std::vector<uint32_t> any;
  std::vector<uint32_t> conic;
  for (int i = 1; i <= 3; ++i) {
    any.push_back(b.var("x" + std::to_string(i)));
    conic.push_back(b.var("y" + std::to_string(i)));
  }
  any.push_back(b.constant_i(-2));
  conic.push_back(b.constant_i(3));
  for (uint32_t id : conic) any.push_back(id);
  for (size_t s = 0; s < steps; ++s) {
    uint32_t id;
    switch (pick(6)) {
      case 0: id = b.square(any[pick(any.size())]); break;
      case 1: id = b.add(conic[pick(conic.size())], conic[pick(conic.size())]); break;
      case 2: id = b.mul(conic[pick(conic.size())], conic[pick(conic.size())]); break;
      case 3: id = b.divc(conic[pick(conic.size())], b.constant_i(2)); break;
      case 4: id = b.add(any[pick(any.size())], any[pick(any.size())]); any.push_back(id); continue;
      default: id = b.mul(any[pick(any.size())], any[pick(any.size())]); any.push_back(id); continue;
    }
    conic.push_back(id);
    any.push_back(id);
  }
  return b.take({conic.back()});
}

Circuit const_circuit(const Ring& ring, long v, const std::vector<std::string>& names) {
  CircuitBuilder b(ring);
  for (const std::string& n : names) b.var(n);
  return b.take({b.constant_i(v)});
}

}  // namespace

TEST_CASE("cone test matches the path oracle on every small DAG") {
  std::vector<Gate> gates;
  enumerate_dags(gates, 4, {"y"});
}

TEST_CASE("cone test matches the path oracle on random circuits") {
  std::mt19937_64 rng(2024);
  RandCircuitOpts o;
  o.ring = Ring::Q();
  o.target_gates = 14;
  o.nvars = 4;
  o.allow_divc = true;
  for (int trial = 0; trial < 400; ++trial) {
    const Circuit c = random_circuit(rng, o);
    agree_with_oracle(c, {});
    agree_with_oracle(c, {"x1", "x3"});
    agree_with_oracle(c, {"x1", "x2", "x3", "x4"});
  }
}

TEST_CASE("cone test hand examples") {
  // (3*(-x1) + 1)^2: the only path from -1 and x1 crosses the squaring gate.
  CircuitBuilder b(Ring::Q());
  const uint32_t x1 = b.var("x1");
  const uint32_t inner = b.add(b.mul(b.constant_i(3), b.neg(x1)), b.constant_i(1));
  const Circuit sq = b.take({b.square(inner)});
  CHECK(conic_check(sq, {}).conic);

  // x1 * y2 has a squaring-free path through the x1 leaf.
  CircuitBuilder b2(Ring::Q());
  const Circuit prod = b2.take({b2.mul(b2.var("x1"), b2.var("y2"))});
  const ConicVerdict v = conic_check(prod, {"y2"});
  CHECK_FALSE(v.conic);
  check_witness(prod, v.path, {"y2"});
  CHECK(prod.gate(v.path.front()).kind == GateKind::Var);
  CHECK(prod.var_names()[prod.gate(v.path.front()).a] == "x1");

  // y1 + ... + yn over protected placeholders.
  CircuitBuilder b3(Ring::Q());
  std::vector<uint32_t> ys;
  std::set<std::string> prot;
  for (int i = 1; i <= 6; ++i) {
    ys.push_back(b3.var("y" + std::to_string(i)));
    prot.insert("y" + std::to_string(i));
  }
  CHECK(conic_check(b3.take({b3.sum(ys)}), prot).conic);

  CircuitBuilder bqy(Ring::Qy());
  CHECK_THROWS_AS(conic_check(bqy.take({bqy.constant_i(1)}), {}), RingMismatch);
  CircuitBuilder bgf(Ring::GF(7));
  CHECK_THROWS_AS(conic_check(bgf.take({bgf.constant_i(1)}), {}), RingMismatch);
}

TEST_CASE("constructed conic circuits are accepted and nonnegative") {
  std::mt19937_64 rng(77);
  auto rnd = [&rng](long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(rng);
  };
  const std::set<std::string> prot{"y1", "y2", "y3"};
  for (int trial = 0; trial < 60; ++trial) {
    CircuitBuilder b(Ring::Q());
    const Circuit c = random_conic(rng, b, 12);
    CHECK(conic_check(c, prot).conic);
    // Protected leaves sample nonnegative values, the rest sample anywhere.
    for (int pt = 0; pt < 20; ++pt) {
      std::vector<mpq_class> vals;
      for (const std::string& n : c.var_names()) {
        mpq_class v(n[0] == 'y' ? rnd(0, 7) : rnd(-7, 7), rnd(1, 4));
        v.canonicalize();
        vals.push_back(v);
      }
      CHECK(eval_at_q(c, vals) >= 0);
    }
    // Planting a bare unprotected leaf or negative constant breaks conicity.
    CircuitBuilder bb(Ring::Q());
    const uint32_t base = bb.import(c);
    const uint32_t bad = trial % 2 == 0 ? bb.var("x1") : bb.constant_i(-1);
    const Circuit broken = bb.take({bb.add(base, bad)});
    const ConicVerdict v = conic_check(broken, prot);
    CHECK_FALSE(v.conic);
    check_witness(broken, v.path, prot);
  }
}

TEST_CASE("binary value refutation generator") {
  const CpsProof p1 = gen_bvp_cps(1);
  CHECK(p1.system.ring.tag == RingTag::IntegerRing);
  CHECK_FALSE(p1.real_mode);
  REQUIRE(p1.system.inequalities.size() == 6);
  CHECK(p1.system.tags[0] == Provenance::BoolX);
  CHECK(p1.system.tags[1] == Provenance::EqNeg);
  CHECK(p1.system.tags[2] == Provenance::EqPos);
  CHECK(p1.system.tags[3] == Provenance::Bool1mX);
  CHECK(p1.system.tags[4] == Provenance::BoolSqPos);
  CHECK(p1.system.tags[5] == Provenance::BoolSqNeg);
  // The n = 1 proof is the bare sum y1 + y2.
  REQUIRE(p1.proof.size() == 3);
  CHECK(p1.proof.gate(2).kind == GateKind::Add);
  // Substituting x1 for y1 and -(x1 + 1) for y2 collapses to -1.
  const Circuit y1c = p1.system.inequalities[0];
  const Circuit y2c = p1.system.inequalities[1];
  const Circuit plugged =
      substitute_by_name(p1.proof, {{"y1", &y1c}, {"y2", &y2c}});
  const SparsePoly got = expand(plugged);
  REQUIRE(got.num_terms() == 1);
  CHECK(got.coeff_at(SparsePoly::Exps(got.nvars(), 0)) == Coeff(mpq_class(-1)));
  CHECK(verify_cps(p1).accepted);

  for (uint32_t n : {2u, 3u, 6u, 12u}) {
    const CpsProof p = gen_bvp_cps(n);
    CHECK(p.system.inequalities.size() == 4 * n + 2);
    CHECK(verify_cps(p).accepted);
    const SparsePoly t = expand(p.target);
    REQUIRE(t.num_terms() == 1);
    CHECK(t.coeff_at(SparsePoly::Exps(t.nvars(), 0)) == Coeff(mpq_class(-1)));
    // The proof touches only the weighted placeholders and the shifted sum.
    std::set<std::string> read;
    for (const Gate& g : p.proof.gates()) {
      if (g.kind == GateKind::Var) read.insert(p.proof.var_names()[g.a]);
    }
    CHECK(read.size() == n + 1);
    CHECK(read.count("y" + std::to_string(n + 1)) == 1);
  }

  // Scaling by M moves to Q and divides the sum by the constant gadget.
  const CpsProof pm = gen_bvp_cps(3, 5);
  CHECK(pm.system.ring.tag == RingTag::RationalField);
  CHECK(pm.proof.constant_free());
  CHECK(verify_cps(pm).accepted);

  // Linear size growth in n.
  for (uint32_t n : {4u, 16u, 64u}) {
    CHECK(gen_bvp_cps(n).proof.size() <= 8 * n + 40);
  }

  CHECK_THROWS_AS(gen_bvp_cps(0), BadParams);
  CHECK_THROWS_AS(gen_bvp_cps(3, 0), BadParams);
}

TEST_CASE("verification rejects swapped and mistargeted proofs") {
  const CpsProof good = gen_bvp_cps(3);
  CHECK(verify_cps(good).accepted);

  // Replacing a placeholder with x1 plants a squaring-free bad path.
  CircuitBuilder xb(Ring::Z());
  const Circuit x1 = xb.take({xb.var("x1")});
  CpsProof swapped = good;
  swapped.proof = substitute_by_name(good.proof, {{"y1", &x1}});
  CHECK_THROWS_AS(verify_cps(swapped), ConicViolation);
  try {
    verify_cps(swapped);
  } catch (const ConicViolation& e) {
    CHECK(!e.path.empty());
  }

  // A wrong target is an ordinary rejection, not a malformed proof.
  CpsProof mistarget = good;
  mistarget.target = const_circuit(Ring::Z(), 1, good.system.var_names);
  const CpsVerdict v = verify_cps(mistarget);
  CHECK_FALSE(v.accepted);
  CHECK_FALSE(v.matches_target.equal);

  // A placeholder index past the system arity.
  CircuitBuilder b(Ring::Q());
  std::vector<Circuit> ineqs;
  ineqs.push_back(b.take({b.var("x1")}));
  CircuitBuilder b2(Ring::Q());
  ineqs.push_back(b2.take({b2.sub(b2.constant_i(1), b2.var("x1"))}));
  const InequalitySystem sys = make_inequality_system(
      Ring::Q(), ineqs, {Provenance::UserIneq, Provenance::UserIneq});
  CircuitBuilder pb(Ring::Q());
  const Circuit stray = pb.take({pb.var("y3")});
  CHECK_THROWS_AS(verify_cps({stray, sys, const_circuit(Ring::Q(), 0, {"x1"}), true}),
                  ArityMismatch);
  CircuitBuilder ub(Ring::Q());
  const Circuit unknown = ub.take({ub.var("w9")});
  CHECK_THROWS_AS(verify_cps({unknown, sys, const_circuit(Ring::Q(), 0, {"x1"}), true}),
                  VariableMismatch);

  // real_mode is independent metadata; a real proof over user inequalities
  // passes when the conic and substitution conditions hold.
  CircuitBuilder rb(Ring::Q());
  const Circuit rsum = rb.take({rb.add(rb.var("y1"), rb.var("y2"))});
  const CpsVerdict rv =
      verify_cps({rsum, sys, const_circuit(Ring::Q(), 1, {"x1"}), true});
  CHECK(rv.accepted);
  CHECK(cps_real_mode(sys));
  CHECK_FALSE(cps_real_mode(good.system));
}

TEST_CASE("placeholder factoring") {
  // y1*x + y2 peels into cofactors x and 1.
  CircuitBuilder b(Ring::Q());
  const uint32_t y1 = b.var("y1");
  const uint32_t y2 = b.var("y2");
  const uint32_t x = b.var("x");
  const Circuit c = b.take({b.add(b.mul(y1, x), y2)});
  const std::vector<Circuit> cof = factor_placeholders(c, {"y1", "y2"});
  REQUIRE(cof.size() == 2);
  CircuitBuilder xb(Ring::Q());
  const auto [c0, x_only] = align_vars(cof[0], xb.take({xb.var("x")}));
  CHECK(pit_equal(c0, x_only).equal);
  CircuitBuilder ob(Ring::Q());
  const auto [c1, one_only] = align_vars(cof[1], ob.take({ob.constant_i(1)}));
  CHECK(pit_equal(c1, one_only).equal);

  // y1*y2 admits (y2, 0) or the symmetric split; the defining identity is
  // sum_i y_i * C_i = c.
  CircuitBuilder b2(Ring::Q());
  const Circuit prod = b2.take({b2.mul(b2.var("y1"), b2.var("y2"))});
  const std::vector<Circuit> cof2 = factor_placeholders(prod, {"y1", "y2"});
  REQUIRE(cof2.size() == 2);
  CircuitBuilder rb(Ring::Q());
  std::vector<uint32_t> terms;
  for (size_t i = 0; i < 2; ++i) {
    terms.push_back(rb.mul(rb.var("y" + std::to_string(i + 1)), rb.import(cof2[i])));
  }
  const Circuit recon = rb.take({rb.sum(std::move(terms))});
  const auto [ra, rp] = align_vars(recon, prod);
  CHECK(pit_equal(ra, rp).equal);

  // y1 + 1 is not in the placeholder ideal.
  CircuitBuilder b3(Ring::Q());
  const Circuit off = b3.take({b3.add(b3.var("y1"), b3.constant_i(1))});
  CHECK_THROWS_AS(factor_placeholders(off, {"y1"}), NotInPlaceholderIdeal);
}

TEST_CASE("equational refutations compile to conic proofs") {
  // Binary value principle with two bits over Q.
  CircuitBuilder fb(Ring::Q());
  const uint32_t fx1 = fb.var("x1");
  const uint32_t fx2 = fb.var("x2");
  const uint32_t f =
      fb.add(fb.add(fx1, fb.mul(fb.constant_i(2), fx2)), fb.constant_i(1));
  const AxiomSystem bvp2 = make_axiom_system(Ring::Q(), {fb.take({f})}, true);

  std::optional<IpsLinCert> cert;
  for (size_t d = 0; d <= 4 && !cert; ++d) cert = ns_search(bvp2, d);
  REQUIRE(cert.has_value());

  const IpsProof ips = ips_refutation_from_lin(*cert, bvp2);
  const IpsVerdict iv = verify_ips(ips);
  CHECK(iv.accepted);
  REQUIRE(iv.refuted_constant.has_value());
  CHECK(*iv.refuted_constant == -1);

  const CpsProof cps = ips_to_cps(ips);
  CHECK(cps.real_mode);
  // Explicit booleans double every effective axiom into a sign pair.
  CHECK(cps.system.inequalities.size() == 6);
  for (size_t i = 0; i < 6; ++i) {
    CHECK(cps.system.tags[i] == (i % 2 == 0 ? Provenance::EqPos : Provenance::EqNeg));
  }
  const CpsVerdict cv = verify_cps(cps);
  CHECK(cv.accepted);
  const SparsePoly t = expand(cps.target);
  REQUIRE(t.num_terms() == 1);
  CHECK(t.coeff_at(SparsePoly::Exps(t.nvars(), 0)) == Coeff(mpq_class(-1)));

  // Quadratic size bound relative to the proof plus its system.
  size_t input = ips.proof.size();
  for (const Circuit& a : bvp2.axioms) input += a.size();
  CHECK(cps.proof.size() <= 50 * (input + 4) * (input + 4));

  // The halves split needs division by 2, so Z proofs propagate the error.
  CircuitBuilder zb(Ring::Z());
  const Circuit zf = zb.take({zb.var("x1")});
  const AxiomSystem zsys = make_axiom_system(Ring::Z(), {zf}, false);
  CircuitBuilder zp(Ring::Z());
  const Circuit zproof = zp.take({zp.mul(zp.var("y1"), zp.var("x1"))});
  CircuitBuilder zt(Ring::Z());
  const Circuit ztarget = zt.take({zt.square(zt.var("x1"))});
  CHECK_THROWS_AS(ips_to_cps({zproof, zsys, ztarget}), RingUnsupported);
}

TEST_CASE("compiled proofs survive a file round trip") {
  const CpsProof p = gen_bvp_cps(2);
  const std::string dir = "tmp_cps_dir";
  std::filesystem::create_directory(dir);
  save_inequality_system(dir + "/sys.txt", p.system);
  save_cps_proof(dir + "/proof.cps", p, "sys.txt");

  const CpsProof back = load_cps_proof(dir + "/proof.cps");
  CHECK(back.real_mode == p.real_mode);
  CHECK(same_system(back.system, p.system));
  CHECK(back.proof.structurally_equal(p.proof));
  CHECK(back.target.structurally_equal(p.target));
  CHECK(verify_cps(back).accepted);
  CHECK(cps_proof_to_text(back, "sys.txt") == cps_proof_to_text(p, "sys.txt"));

  write_text_file(dir + "/bad.cps", "cps\nreal on\n");
  CHECK_THROWS_AS(load_cps_proof(dir + "/bad.cps"), SyntaxError);
  std::filesystem::remove_all(dir);
}
