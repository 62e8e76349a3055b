// Axiom/inequality systems and the IPS layer: verification against
// evaluation- and expansion-based oracles, certificate search, composition,
// case splits, substitution, and the proof file round trip.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <random>

#include "proofkit/circuit.hpp"
#include "proofkit/circuit_io.hpp"
#include "proofkit/errors.hpp"
#include "proofkit/ips.hpp"
#include "proofkit/pit.hpp"
#include "proofkit/systems.hpp"
#include "test_util.hpp"

using namespace proofkit;
using namespace proofkit::testutil;

namespace {

// Oracle: the cofactor combination sums to the constant 1, checked through
// sparse expansion rather than the verifier under test.
bool oracle_lin_cert(const IpsLinCert& cert, const AxiomSystem& sys) {
  const std::vector<Circuit> eff = effective_axioms(sys);
  if (eff.size() != cert.cofactors.size()) return false;
  SparsePoly total(sys.ring, sys.var_names);
  for (size_t i = 0; i < eff.size(); ++i)
    total += expand(with_var_space(eff[i], sys.var_names)) *
             expand(with_var_space(cert.cofactors[i], sys.var_names));
  return total == SparsePoly::constant(sys.ring, sys.var_names, coeff_one(sys.ring));
}

// Oracle: numeric spot check of the two proof conditions at random rational
// points, independent of the identity tester.
bool oracle_ips_holds(const IpsProof& p, std::mt19937_64& rng, int points) {
  const std::vector<std::string> space = proof_space(p.system);
  const Circuit proof = with_var_space(p.proof, space);
  const Circuit target = with_var_space(p.target, p.system.var_names);
  const size_t nx = p.system.var_names.size();
  const std::vector<Circuit> eff = effective_axioms(p.system);
  std::uniform_int_distribution<long> num(-7, 7);
  for (int t = 0; t < points; ++t) {
    std::vector<mpq_class> xs;
    for (size_t i = 0; i < nx; ++i) {
      mpq_class v(num(rng), 3);
      v.canonicalize();
      xs.push_back(v);
    }
    std::vector<mpq_class> at_zero = xs;
    at_zero.resize(space.size(), mpq_class(0));
    if (eval_at_q(proof, at_zero) != 0) return false;
    std::vector<mpq_class> at_axioms = xs;
    for (const Circuit& f : eff) at_axioms.push_back(eval_at_q(with_var_space(f, p.system.var_names), xs));
    if (eval_at_q(proof, at_axioms) != eval_at_q(target, xs)) return false;
  }
  return true;
}

mpz_class eval_at_z(const Circuit& c, const std::vector<mpz_class>& vars) {
  return std::get<mpz_class>(evaluate_single(c, Assignment::of_z(vars)));
}

Circuit bool_axiom(const Ring& ring, const std::vector<std::string>& space,
                   const std::string& name) {
  CircuitBuilder b(ring);
  for (const std::string& n : space) b.var(n);
  const uint32_t x = b.var(name);
  return b.take({b.sub(b.square(x), x)});
}

const char* kX1Text =
    "ring Q\n"
    "input x1\n"
    "g0 = var x1\n"
    "output g0\n";

const char* kBvp1Text =
    "ring Q\n"
    "input x1\n"
    "g0 = var x1\n"
    "g1 = const 1\n"
    "g2 = add g0 g1\n"
    "output g2\n";

}  // namespace

TEST_CASE("axiom systems: construction, effective axioms, text round trip") {
  const Circuit a1 = ckt(
      "ring Q\n"
      "input x1 x2\n"
      "g0 = var x1\n"
      "g1 = var x2\n"
      "g2 = add g0 g1\n"
      "output g2\n");
  const Circuit a2 = ckt(
      "ring Q\n"
      "input x3\n"
      "g0 = var x3\n"
      "output g0\n");
  const AxiomSystem s = make_axiom_system(Ring::Q(), {a1, a2}, true);
  CHECK(s.var_names == std::vector<std::string>{"x1", "x2", "x3"});
  CHECK(s.axioms.size() == 2);
  CHECK(s.num_effective() == 5);
  const std::vector<Circuit> eff = effective_axioms(s);
  REQUIRE(eff.size() == 5);
  // The appended booleanity circuits compute x_i^2 - x_i.
  for (size_t i = 0; i < 3; ++i) {
    SparsePoly want(Ring::Q(), s.var_names);
    SparsePoly::Exps sq(3, 0), lin(3, 0);
    sq[i] = 2;
    lin[i] = 1;
    want.add_term(sq, Coeff(mpq_class(1)));
    want.add_term(lin, Coeff(mpq_class(-1)));
    CHECK(expand(eff[2 + i]) == want);
  }

  CHECK(same_system(s, s));
  const AxiomSystem s2 = make_axiom_system(Ring::Q(), {a1, a2}, false);
  CHECK_FALSE(same_system(s, s2));

  const std::string text = axiom_system_to_text(s);
  const AxiomSystem back = axiom_system_from_text(text);
  CHECK(same_system(s, back));
  CHECK(axiom_system_to_text(back) == text);

  save_axiom_system("tmp_ips_sys.txt", s);
  CHECK(same_system(load_axiom_system("tmp_ips_sys.txt"), s));

  CHECK_THROWS_AS(axiom_system_from_text("nonsense header\n"), SyntaxError);
  CHECK_THROWS_AS(axiom_system_from_text(""), SyntaxError);
  const Circuit az = ckt("ring Z\ninput x1\ng0 = var x1\noutput g0\n");
  CHECK_THROWS_AS(make_axiom_system(Ring::Q(), {az}, false), RingMismatch);
}

TEST_CASE("inequality systems: equality expansion and round trip") {
  const Circuit a = ckt(
      "ring Q\n"
      "input x1 x2\n"
      "g0 = var x1\n"
      "g1 = var x2\n"
      "g2 = add g0 g1\n"
      "output g2\n");
  const AxiomSystem s = make_axiom_system(Ring::Q(), {a}, true);
  const InequalitySystem iq = inequalities_from_equalities(s);
  REQUIRE(iq.inequalities.size() == 2 + 4 * 2);
  CHECK(iq.tags[0] == Provenance::EqPos);
  CHECK(iq.tags[1] == Provenance::EqNeg);
  CHECK(iq.tags[2] == Provenance::BoolX);
  CHECK(iq.tags[3] == Provenance::Bool1mX);
  CHECK(iq.tags[4] == Provenance::BoolSqPos);
  CHECK(iq.tags[5] == Provenance::BoolSqNeg);
  CHECK(expand(iq.inequalities[0]) == expand(with_var_space(a, iq.var_names)));
  CHECK(expand(iq.inequalities[1]) == -expand(with_var_space(a, iq.var_names)));
  // BoolX for x1 is the variable itself; Bool1mX is 1 - x1.
  SparsePoly x1p(Ring::Q(), iq.var_names);
  x1p.add_term({1, 0}, Coeff(mpq_class(1)));
  CHECK(expand(iq.inequalities[2]) == x1p);
  SparsePoly onem(Ring::Q(), iq.var_names);
  onem.add_term({0, 0}, Coeff(mpq_class(1)));
  onem.add_term({1, 0}, Coeff(mpq_class(-1)));
  CHECK(expand(iq.inequalities[3]) == onem);

  const std::string text = inequality_system_to_text(iq);
  const InequalitySystem back = inequality_system_from_text(text);
  CHECK(same_system(iq, back));
  CHECK(inequality_system_to_text(back) == text);

  CHECK_THROWS_AS(make_inequality_system(Ring::GF(7), {}, {}), RingMismatch);
  CHECK_THROWS_AS(make_inequality_system(Ring::Q(), {a}, {}), ArityMismatch);
}

TEST_CASE("placeholder names and proof space") {
  const Circuit a = ckt(
      "ring Q\n"
      "input x1 x2\n"
      "g0 = var x1\n"
      "g1 = var x2\n"
      "g2 = mul g0 g1\n"
      "output g2\n");
  const AxiomSystem s = make_axiom_system(Ring::Q(), {a, a}, true);
  CHECK(placeholder_names(s) == std::vector<std::string>{"y1", "y2", "z1", "z2"});
  CHECK(proof_space(s) == std::vector<std::string>{"x1", "x2", "y1", "y2", "z1", "z2"});
  const AxiomSystem nb = make_axiom_system(Ring::Q(), {a}, false);
  CHECK(placeholder_names(nb) == std::vector<std::string>{"y1"});
}

TEST_CASE("verify_ips: acceptance, rejection, refuted constant") {
  std::mt19937_64 rng(7001);
  const AxiomSystem s = make_axiom_system(Ring::Q(), {ckt(kX1Text)}, false);

  const IpsProof ok{ckt("ring Q\ninput y1\ng0 = var y1\noutput g0\n"), s, ckt(kX1Text)};
  CHECK(oracle_ips_holds(ok, rng, 10));
  const IpsVerdict v = verify_ips(ok);
  CHECK(v.accepted);
  CHECK(v.vanish_at_zero.equal);
  CHECK(v.matches_target.equal);
  CHECK_FALSE(v.refuted_constant.has_value());

  const IpsProof bad{
      ckt("ring Q\ninput y1\ng0 = var y1\ng1 = const 1\ng2 = add g0 g1\noutput g2\n"), s,
      ckt(kX1Text)};
  const IpsVerdict vb = verify_ips(bad);
  CHECK_FALSE(vb.accepted);
  CHECK_FALSE(vb.vanish_at_zero.equal);

  // Over Z with axioms x1 + 1 = 0 and booleanity, the combination
  // z1 - y1*x1 + 2*y1 collapses to the constant 2.
  const AxiomSystem zs =
      make_axiom_system(Ring::Z(), {ckt("ring Z\ninput x1\ng0 = var x1\ng1 = const 1\ng2 = add g0 g1\noutput g2\n")},
                        true);
  const Circuit zproof = ckt(
      "ring Z\n"
      "input x1 y1 z1\n"
      "g0 = var z1\n"
      "g1 = var y1\n"
      "g2 = var x1\n"
      "g3 = const -1\n"
      "g4 = mul g1 g2\n"
      "g5 = mul g3 g4\n"
      "g6 = const 2\n"
      "g7 = mul g6 g1\n"
      "g8 = add g0 g5\n"
      "g9 = add g8 g7\n"
      "output g9\n");
  // Oracle: the plugged combination evaluates to 2 everywhere.
  for (long x = -4; x <= 4; ++x) {
    const mpz_class fx = x + 1, bx = mpz_class(x) * x - x;
    CHECK(eval_at_z(with_var_space(zproof, {"x1", "y1", "z1"}), {mpz_class(x), fx, bx}) == 2);
  }
  const Circuit ztarget = ckt("ring Z\ninput x1\ng0 = const 2\noutput g0\n");
  const IpsVerdict vz = verify_ips({zproof, zs, ztarget});
  CHECK(vz.accepted);
  REQUIRE(vz.refuted_constant.has_value());
  CHECK(*vz.refuted_constant == 2);

  // Reading a variable outside the proof space is a structural error.
  const IpsProof stray{ckt("ring Q\ninput w9\ng0 = var w9\noutput g0\n"), s, ckt(kX1Text)};
  CHECK_THROWS_AS(verify_ips(stray), VariableMismatch);
}

TEST_CASE("verify_ips_lin: explicit cofactors over x1 and x1-1") {
  const Circuit f1 = ckt(kX1Text);
  const Circuit f2 = ckt(
      "ring Q\n"
      "input x1\n"
      "g0 = var x1\n"
      "g1 = const -1\n"
      "g2 = add g0 g1\n"
      "output g2\n");
  const AxiomSystem s = make_axiom_system(Ring::Q(), {f1, f2}, false);
  const Circuit one = ckt("ring Q\ninput x1\ng0 = const 1\noutput g0\n");
  const Circuit minus_one = ckt("ring Q\ninput x1\ng0 = const -1\noutput g0\n");

  IpsLinCert good{{one, minus_one}};
  CHECK(oracle_lin_cert(good, s));
  CHECK(verify_ips_lin(good, s).equal);

  IpsLinCert bad{{one, one}};
  CHECK_FALSE(oracle_lin_cert(bad, s));
  CHECK_FALSE(verify_ips_lin(bad, s).equal);

  IpsLinCert short_cert{{one}};
  CHECK_THROWS_AS(verify_ips_lin(short_cert, s), ArityMismatch);
}

TEST_CASE("ns_search: certificates within the bound, none for satisfiable systems") {
  const AxiomSystem bvp1 = make_axiom_system(Ring::Q(), {ckt(kBvp1Text)}, true);
  CHECK_FALSE(ns_search(bvp1, 0).has_value());
  const auto c1 = ns_search(bvp1, 1);
  REQUIRE(c1.has_value());
  CHECK(c1->cofactors.size() == 2);
  CHECK(oracle_lin_cert(*c1, bvp1));
  CHECK(verify_ips_lin(*c1, bvp1).equal);

  // Determinism: the same search yields structurally identical cofactors.
  const auto c1b = ns_search(bvp1, 1);
  REQUIRE(c1b.has_value());
  for (size_t i = 0; i < c1->cofactors.size(); ++i)
    CHECK(c1->cofactors[i].structurally_equal(c1b->cofactors[i]));

  const Circuit bvp2c = ckt(
      "ring Q\n"
      "input x1 x2\n"
      "g0 = var x1\n"
      "g1 = const 2\n"
      "g2 = var x2\n"
      "g3 = mul g1 g2\n"
      "g4 = add g0 g3\n"
      "g5 = const 1\n"
      "g6 = add g4 g5\n"
      "output g6\n");
  const AxiomSystem bvp2 = make_axiom_system(Ring::Q(), {bvp2c}, true);
  bool found = false;
  for (size_t d = 0; d <= 4 && !found; ++d) {
    const auto c = ns_search(bvp2, d);
    if (c) {
      found = true;
      CHECK(oracle_lin_cert(*c, bvp2));
      CHECK(verify_ips_lin(*c, bvp2).equal);
    }
  }
  CHECK(found);

  // x1 + x2 - 3 = 0 has no boolean solution either.
  const Circuit sub3 = ckt(
      "ring Q\n"
      "input x1 x2\n"
      "g0 = var x1\n"
      "g1 = var x2\n"
      "g2 = add g0 g1\n"
      "g3 = const -3\n"
      "g4 = add g2 g3\n"
      "output g4\n");
  const AxiomSystem uns = make_axiom_system(Ring::Q(), {sub3}, true);
  bool found3 = false;
  for (size_t d = 0; d <= 4 && !found3; ++d) {
    const auto c = ns_search(uns, d);
    if (c) {
      found3 = true;
      CHECK(oracle_lin_cert(*c, uns));
    }
  }
  CHECK(found3);

  // Satisfiable controls never produce a certificate at any degree.
  const AxiomSystem sat1 = make_axiom_system(Ring::Q(), {ckt(kX1Text)}, true);
  const Circuit sub1 = ckt(
      "ring Q\n"
      "input x1 x2\n"
      "g0 = var x1\n"
      "g1 = var x2\n"
      "g2 = add g0 g1\n"
      "g3 = const -1\n"
      "g4 = add g2 g3\n"
      "output g4\n");
  const AxiomSystem sat2 = make_axiom_system(Ring::Q(), {sub1}, true);
  for (size_t d = 0; d <= 4; ++d) {
    CHECK_FALSE(ns_search(sat1, d).has_value());
    CHECK_FALSE(ns_search(sat2, d).has_value());
  }

  NsOptions tight;
  tight.max_unknowns = 3;
  CHECK_THROWS_AS(ns_search(bvp2, 2, tight), BudgetExceeded);
  const AxiomSystem zsys =
      make_axiom_system(Ring::Z(), {ckt("ring Z\ninput x1\ng0 = var x1\noutput g0\n")}, true);
  CHECK_THROWS_AS(ns_search(zsys, 1), RingMismatch);
}

TEST_CASE("compose_sum and compose_product") {
  std::mt19937_64 rng(7002);
  const Circuit f1 = ckt(kX1Text);
  const Circuit f2 = ckt("ring Q\ninput x2\ng0 = var x2\noutput g0\n");
  const AxiomSystem s = make_axiom_system(Ring::Q(), {f1, f2}, false);
  const IpsProof a{ckt("ring Q\ninput y1\ng0 = var y1\noutput g0\n"), s,
                   ckt("ring Q\ninput x1 x2\ng0 = var x1\noutput g0\n")};
  const IpsProof b{ckt("ring Q\ninput y2\ng0 = var y2\noutput g0\n"), s,
                   ckt("ring Q\ninput x1 x2\ng0 = var x2\noutput g0\n")};
  REQUIRE(verify_ips(a).accepted);
  REQUIRE(verify_ips(b).accepted);

  const IpsProof sum = compose_sum(a, b);
  CHECK(verify_ips(sum).accepted);
  CHECK(oracle_ips_holds(sum, rng, 8));
  CHECK(sum.proof.size() <= a.proof.size() + b.proof.size() + 1);
  SparsePoly want_sum(Ring::Q(), {"x1", "x2"});
  want_sum.add_term({1, 0}, Coeff(mpq_class(1)));
  want_sum.add_term({0, 1}, Coeff(mpq_class(1)));
  CHECK(expand(with_var_space(sum.target, {"x1", "x2"})) == want_sum);

  const Circuit hg = ckt(
      "ring Q\n"
      "input x1 x2\n"
      "g0 = var x2\n"
      "g1 = var x1\n"
      "output g0 g1\n");
  const IpsProof prod = compose_product(a, b, hg);
  CHECK(verify_ips(prod).accepted);
  CHECK(oracle_ips_holds(prod, rng, 8));
  CHECK(prod.proof.size() <= a.proof.size() + b.proof.size() + hg.size() + 5);
  SparsePoly want_prod(Ring::Q(), {"x1", "x2"});
  want_prod.add_term({1, 1}, Coeff(mpq_class(2)));
  CHECK(expand(with_var_space(prod.target, {"x1", "x2"})) == want_prod);

  const AxiomSystem other = make_axiom_system(Ring::Q(), {f1}, false);
  const IpsProof c{ckt("ring Q\ninput y1\ng0 = var y1\noutput g0\n"), other, ckt(kX1Text)};
  CHECK_THROWS_AS(compose_sum(a, c), SystemMismatch);
  CHECK_THROWS_AS(compose_product(a, c, hg), SystemMismatch);
  CHECK_THROWS_AS(compose_product(a, b, f1), ArityMismatch);
}

TEST_CASE("by_cases: one case circuit, proofs that use the case axiom") {
  std::mt19937_64 rng(7003);
  const Circuit boolean = bool_axiom(Ring::Q(), {"x1"}, "x1");
  const AxiomSystem base = make_axiom_system(Ring::Q(), {boolean}, false);
  const Circuit h = ckt(kX1Text);
  const Circuit one_minus_x1 = ckt(
      "ring Q\n"
      "input x1\n"
      "g0 = const 1\n"
      "g1 = var x1\n"
      "g2 = const -1\n"
      "g3 = mul g2 g1\n"
      "g4 = add g0 g3\n"
      "output g4\n");
  const Circuit target = ckt(
      "ring Q\n"
      "input x1\n"
      "g0 = var x1\n"
      "g1 = mul g0 g0\n"
      "g2 = mul g1 g0\n"
      "g3 = const -1\n"
      "g4 = mul g3 g1\n"
      "g5 = add g2 g4\n"
      "output g5\n");

  const AxiomSystem sys0 = make_axiom_system(Ring::Q(), {boolean, h}, false);
  const AxiomSystem sys1 = make_axiom_system(Ring::Q(), {boolean, one_minus_x1}, false);
  // Case x1 = 0: target = (x1^2 - x1) * x1 via the case axiom x1.
  const IpsProof p0{ckt(
                        "ring Q\n"
                        "input x1 y2\n"
                        "g0 = var y2\n"
                        "g1 = var x1\n"
                        "g2 = mul g1 g1\n"
                        "g3 = const -1\n"
                        "g4 = mul g3 g1\n"
                        "g5 = add g2 g4\n"
                        "g6 = mul g0 g5\n"
                        "output g6\n"),
                    sys0, target};
  // Case x1 = 1: target = -(1 - x1) * x1^2 via the case axiom 1 - x1.
  const IpsProof p1{ckt(
                        "ring Q\n"
                        "input x1 y2\n"
                        "g0 = var y2\n"
                        "g1 = var x1\n"
                        "g2 = mul g1 g1\n"
                        "g3 = const -1\n"
                        "g4 = mul g3 g2\n"
                        "g5 = mul g0 g4\n"
                        "output g5\n"),
                    sys1, target};
  REQUIRE(verify_ips(p0).accepted);
  REQUIRE(verify_ips(p1).accepted);

  const IpsProof merged = by_cases(base, {h}, {{0, p0}, {1, p1}});
  CHECK(verify_ips(merged).accepted);
  CHECK(oracle_ips_holds(merged, rng, 10));
  CHECK(same_system(merged.system, base));
  {
    auto [ta, tb] = align_vars(merged.target, target);
    CHECK(pit_equal(ta, tb).equal);
  }
  const size_t smax = std::max(p0.proof.size(), p1.proof.size());
  CHECK(merged.proof.size() <= 8 * (smax + h.size() + 8));

  CHECK_THROWS_AS(by_cases(base, {h}, {{0, p0}}), MissingCase);
  const AxiomSystem no_bool = make_axiom_system(Ring::Q(), {ckt(kX1Text)}, false);
  CHECK_THROWS_AS(by_cases(no_bool, {h}, {{0, p0}, {1, p1}}), MissingBooleanityAxiom);
  CHECK_THROWS_AS(by_cases(base, {h}, {{0, p1}, {1, p0}}), SystemMismatch);
}

TEST_CASE("by_cases: two case circuits over a boolean system") {
  std::mt19937_64 rng(7004);
  const Circuit base_ax = ckt(
      "ring Q\n"
      "input x1 x2\n"
      "g0 = var x1\n"
      "g1 = var x2\n"
      "g2 = add g0 g1\n"
      "g3 = const -2\n"
      "g4 = add g2 g3\n"
      "output g4\n");
  const AxiomSystem base = make_axiom_system(Ring::Q(), {base_ax}, true);
  const Circuit h1 = ckt("ring Q\ninput x1 x2\ng0 = var x1\noutput g0\n");
  const Circuit h2 = ckt("ring Q\ninput x1 x2\ng0 = var x2\noutput g0\n");
  const Circuit target = ckt(
      "ring Q\n"
      "input x1 x2\n"
      "g0 = var x1\n"
      "g1 = mul g0 g0\n"
      "g2 = const -1\n"
      "g3 = mul g2 g0\n"
      "g4 = add g1 g3\n"
      "output g4\n");
  const Circuit not1 = ckt(
      "ring Q\n"
      "input x1 x2\n"
      "g0 = const 1\n"
      "g1 = var x1\n"
      "g2 = const -1\n"
      "g3 = mul g2 g1\n"
      "g4 = add g0 g3\n"
      "output g4\n");
  const Circuit not2 = ckt(
      "ring Q\n"
      "input x1 x2\n"
      "g0 = const 1\n"
      "g1 = var x2\n"
      "g2 = const -1\n"
      "g3 = mul g2 g1\n"
      "g4 = add g0 g3\n"
      "output g4\n");
  // The proof depends on the assumed value of x1: (x1 - 1) * y2 when the
  // case axiom is x1, and -x1 * y2 when it is 1 - x1.
  const Circuit use0 = ckt(
      "ring Q\n"
      "input x1 x2 y2\n"
      "g0 = var y2\n"
      "g1 = var x1\n"
      "g2 = const -1\n"
      "g3 = add g1 g2\n"
      "g4 = mul g0 g3\n"
      "output g4\n");
  const Circuit use1 = ckt(
      "ring Q\n"
      "input x1 x2 y2\n"
      "g0 = var y2\n"
      "g1 = var x1\n"
      "g2 = mul g0 g1\n"
      "g3 = const -1\n"
      "g4 = mul g3 g2\n"
      "output g4\n");

  std::map<uint64_t, IpsProof> proofs;
  for (uint64_t key = 0; key < 4; ++key) {
    const Circuit& a1 = (key & 1) ? not1 : h1;
    const Circuit& a2 = (key & 2) ? not2 : h2;
    const AxiomSystem sys = make_axiom_system(Ring::Q(), {base_ax, a1, a2}, true);
    const IpsProof p{(key & 1) ? use1 : use0, sys, target};
    REQUIRE(verify_ips(p).accepted);
    proofs.emplace(key, p);
  }

  const IpsProof merged = by_cases(base, {h1, h2}, proofs);
  CHECK(verify_ips(merged).accepted);
  CHECK(oracle_ips_holds(merged, rng, 10));
  CHECK(same_system(merged.system, base));
  size_t smax = 0;
  for (const auto& [k, p] : proofs) smax = std::max(smax, p.proof.size());
  CHECK(merged.proof.size() <= 64 * (smax + h1.size() + h2.size() + 8));
}

TEST_CASE("explicit booleans and substitution") {
  std::mt19937_64 rng(7005);
  const AxiomSystem s = make_axiom_system(
      Ring::Q(), {ckt("ring Q\ninput x1\ng0 = var x1\ng1 = const 1\ng2 = add g0 g1\noutput g2\n")},
      true);
  const Circuit target = ckt(
      "ring Q\n"
      "input x1\n"
      "g0 = var x1\n"
      "g1 = mul g0 g0\n"
      "g2 = const -1\n"
      "g3 = mul g2 g0\n"
      "g4 = add g1 g3\n"
      "output g4\n");
  const IpsProof p{ckt("ring Q\ninput z1\ng0 = var z1\noutput g0\n"), s, target};
  REQUIRE(verify_ips(p).accepted);

  const IpsProof q = explicit_booleans(p);
  CHECK_FALSE(q.system.include_boolean);
  CHECK(q.system.axioms.size() == 2);
  CHECK(placeholder_names(q.system) == std::vector<std::string>{"y1", "y2"});
  CHECK(verify_ips(q).accepted);
  CHECK(oracle_ips_holds(q, rng, 8));

  // Substitution x1 -> x2 + x3 carries the proof to the substituted system.
  const Circuit hsub = ckt(
      "ring Q\n"
      "input x2 x3\n"
      "g0 = var x2\n"
      "g1 = var x3\n"
      "g2 = add g0 g1\n"
      "output g2\n");
  const std::map<std::string, const Circuit*> bind{{"x1", &hsub}};
  const IpsProof ps = substitute_proof(p, bind);
  CHECK(ps.system.var_names == std::vector<std::string>{"x2", "x3"});
  CHECK(verify_ips(ps).accepted);
  CHECK(oracle_ips_holds(ps, rng, 8));
  // The substituted target is (x2+x3)^2 - (x2+x3).
  SparsePoly want(Ring::Q(), {"x2", "x3"});
  want.add_term({2, 0}, Coeff(mpq_class(1)));
  want.add_term({1, 1}, Coeff(mpq_class(2)));
  want.add_term({0, 2}, Coeff(mpq_class(1)));
  want.add_term({1, 0}, Coeff(mpq_class(-1)));
  want.add_term({0, 1}, Coeff(mpq_class(-1)));
  CHECK(expand(with_var_space(ps.target, {"x2", "x3"})) == want);

  const Circuit collide = ckt("ring Q\ninput y1\ng0 = var y1\noutput g0\n");
  CHECK_THROWS_AS(substitute_proof(p, {{"x1", &collide}}), Error);
  CHECK_THROWS_AS(substitute_proof(p, {{"x9", &hsub}}), Error);
  const Circuit zc = ckt("ring Z\ninput x2\ng0 = var x2\noutput g0\n");
  CHECK_THROWS_AS(substitute_proof(p, {{"x1", &zc}}), RingMismatch);
}

TEST_CASE("proof files: save, load, byte round trip") {
  const AxiomSystem s = make_axiom_system(Ring::Q(), {ckt(kX1Text)}, false);
  const IpsProof p{ckt("ring Q\ninput y1\ng0 = var y1\noutput g0\n"), s, ckt(kX1Text)};

  std::filesystem::create_directory("tmp_ips_dir");
  save_axiom_system("tmp_ips_dir/sys.txt", s);
  const std::string text = ips_proof_to_text(p, "sys.txt");
  write_text_file("tmp_ips_dir/proof.txt", text);
  const IpsProof back = load_ips_proof("tmp_ips_dir/proof.txt");
  CHECK(same_system(back.system, s));
  CHECK(back.proof.structurally_equal(p.proof));
  CHECK(back.target.structurally_equal(p.target));
  CHECK(ips_proof_to_text(back, "sys.txt") == text);
  CHECK(verify_ips(back).accepted);

  const Circuit one = ckt("ring Q\ninput x1\ng0 = const 1\noutput g0\n");
  const Circuit minus_one = ckt("ring Q\ninput x1\ng0 = const -1\noutput g0\n");
  const Circuit f2 = ckt(
      "ring Q\n"
      "input x1\n"
      "g0 = var x1\n"
      "g1 = const -1\n"
      "g2 = add g0 g1\n"
      "output g2\n");
  const AxiomSystem s2 = make_axiom_system(Ring::Q(), {ckt(kX1Text), f2}, false);
  save_axiom_system("tmp_ips_dir/sys2.txt", s2);
  const IpsLinCert cert{{one, minus_one}};
  const std::string ltext = ips_lin_to_text(cert, "sys2.txt");
  write_text_file("tmp_ips_dir/lin.txt", ltext);
  const auto [lcert, lsys] = load_ips_lin("tmp_ips_dir/lin.txt");
  CHECK(same_system(lsys, s2));
  REQUIRE(lcert.cofactors.size() == 2);
  CHECK(lcert.cofactors[0].structurally_equal(one));
  CHECK(lcert.cofactors[1].structurally_equal(minus_one));
  CHECK(ips_lin_to_text(lcert, "sys2.txt") == ltext);
  CHECK(verify_ips_lin(lcert, lsys).equal);

  write_text_file("tmp_ips_dir/bad1.txt", "ips\nbegin circuit target\nend circuit\n");
  CHECK_THROWS_AS(load_ips_proof("tmp_ips_dir/bad1.txt"), SyntaxError);
  write_text_file("tmp_ips_dir/bad2.txt", "ips\nsystem sys.txt\nbegin circuit oops\n" +
                                              std::string(kX1Text) + "end circuit\n");
  CHECK_THROWS_AS(load_ips_proof("tmp_ips_dir/bad2.txt"), SyntaxError);
}

TEST_CASE("rational function field systems force exact identity testing") {
  const Circuit x1y = ckt("ring Q(y)\ninput x1\ng0 = var x1\noutput g0\n");
  const AxiomSystem s = make_axiom_system(Ring::Qy(), {x1y}, false);
  const IpsProof p{ckt("ring Q(y)\ninput y1\ng0 = var y1\noutput g0\n"), s, x1y};
  PitOptions opt;
  opt.mode = PitMode::Randomized;
  const IpsVerdict v = verify_ips(p, opt);
  CHECK(v.accepted);
  CHECK(v.vanish_at_zero.exact);
  CHECK(v.matches_target.exact);

  const Circuit f2 = ckt(
      "ring Q(y)\n"
      "input x1\n"
      "g0 = var x1\n"
      "g1 = const -1\n"
      "g2 = add g0 g1\n"
      "output g2\n");
  const AxiomSystem s2 = make_axiom_system(Ring::Qy(), {x1y, f2}, false);
  const IpsLinCert cert{{ckt("ring Q(y)\ninput x1\ng0 = const 1\noutput g0\n"),
                         ckt("ring Q(y)\ninput x1\ng0 = const -1\noutput g0\n")}};
  const PitVerdict lv = verify_ips_lin(cert, s2, opt);
  CHECK(lv.equal);
  CHECK(lv.exact);
}
