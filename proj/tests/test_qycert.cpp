#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "proofkit/errors.hpp"
#include "proofkit/ips.hpp"
#include "proofkit/pit.hpp"
#include "proofkit/qycert.hpp"
#include "proofkit/ratfunc.hpp"
#include "proofkit/systems.hpp"
#include "test_util.hpp"

using namespace proofkit;
using namespace proofkit::testutil;

namespace {

RatFunc one_over_y_plus(long t) {
  return RatFunc(UPoly(mpq_class(1)), UPoly::from_coeffs({mpq_class(t), mpq_class(1)}));
}

// Independent replay of the certificate identity by sparse polynomial
// arithmetic, bypassing the pit layer.
bool oracle_cert_identity(const QyCert& c) {
  const std::vector<Circuit> eff = effective_axioms(c.system);
  REQUIRE(eff.size() == c.cert.cofactors.size());
  SparsePoly acc(Ring::Qy(), c.system.var_names);
  for (size_t i = 0; i < eff.size(); ++i) {
    acc += expand(eff[i]) * expand(c.cert.cofactors[i]);
  }
  return acc == SparsePoly::constant(Ring::Qy(), c.system.var_names,
                                     Coeff(RatFunc::constant(1)));
}

// P - f*Q must expand to zero; all three circuits are compared over Q(y).
void check_decomposition(const Circuit& f, const Circuit& p, const Circuit& q) {
  CircuitBuilder b(Ring::Qy());
  for (const std::string& name : f.var_names()) b.var(name);
  const uint32_t lhs = b.import(to_qy(p));
  const uint32_t rhs = b.mul(b.import(f), b.import(to_qy(q)));
  CHECK(is_zero(b.take({b.sub(lhs, rhs)})).equal);
}

// Reads a Z[y] circuit back as a dense univariate polynomial.
UPoly upoly_from(const Circuit& zy) {
  const SparsePoly p = expand(to_qy(zy));
  const RatFunc f = std::get<RatFunc>(p.coeff_at({}));
  REQUIRE(f.den() == UPoly(mpq_class(1)));
  return f.num();
}

mpq_class rnd_q(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-30, 30);
  std::uniform_int_distribution<long> den(1, 9);
  mpq_class q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

}  // namespace

TEST_CASE("certificate generator base structure") {
  const QyCert c = gen_cert({1});
  REQUIRE(c.cert.cofactors.size() == 2);
  CHECK(c.system.ring == Ring::Qy());
  CHECK(c.system.include_boolean);
  REQUIRE(c.system.axioms.size() == 1);

  // The head cofactor mixes the two shifted base certificates at x1, and the
  // booleanity cofactor is their weighted difference.
  CircuitBuilder b(Ring::Qy());
  const uint32_t x1 = b.var("x1");
  const uint32_t h00 = b.const_rat(one_over_y_plus(0));
  const uint32_t h01 = b.const_rat(one_over_y_plus(1));
  const Circuit expected_h0 =
      b.take({b.add(b.mul(x1, h01), b.mul(b.sub(b.constant_i(1), x1), h00))});
  const Circuit expected_h1 = b.take({b.sub(h00, h01)});
  CHECK(pit_equal(c.cert.cofactors[0], expected_h0).equal);
  CHECK(pit_equal(c.cert.cofactors[1], expected_h1).equal);

  CHECK(oracle_cert_identity(c));
  CHECK(verify_ips_lin(c.cert, c.system).equal);

  CHECK_THROWS_AS(gen_cert({0}), BadParams);
  CHECK_THROWS_AS(gen_cert({3, 5}, 7), BudgetExceeded);
}

TEST_CASE("certificate generator verifies across small weights") {
  for (const std::vector<mpz_class>& a :
       {std::vector<mpz_class>{1, 2}, {2, 3}, {1, 1, 1}, {1, 2, 4}, {4, 3, 2, 1},
        {1, 2, 4, 8}, {3, 1, 4, 1, 5}}) {
    const QyCert c = gen_cert(a);
    CHECK(oracle_cert_identity(c));
    CHECK(verify_ips_lin(c.cert, c.system).equal);
    CHECK(linear_axiom_coeffs(c.system) == a);
  }

  // Weighted by powers of two, the base denominators run through every
  // shift y + t, t = 0..7.
  const QyCert c = gen_cert({1, 2, 4});
  std::set<long> shifts;
  for (const Circuit& cof : c.cert.cofactors) {
    for (uint32_t id = 0; id < cof.size(); ++id) {
      const Gate& g = cof.gate(id);
      if (g.kind != GateKind::Const || !g.cfun || g.cfun->is_rational()) continue;
      const UPoly& den = g.cfun->den();
      REQUIRE(den.degree() == 1);
      REQUIRE(den.coeff(1) == 1);
      REQUIRE(g.cfun->num() == UPoly(mpq_class(1)));
      shifts.insert(den.coeff(0).get_num().get_si());
    }
  }
  CHECK(shifts == std::set<long>{0, 1, 2, 3, 4, 5, 6, 7});

  // Size grows polynomially with the weight sum, not with its bit length.
  size_t prev = gen_cert({1}).cert.cofactors[0].size();
  for (long s : {4L, 8L, 16L}) {
    const size_t cur = gen_cert({mpz_class(s)}).cert.cofactors[0].size();
    CHECK(cur >= prev);
    prev = cur;
  }
}

TEST_CASE("specialization at rational points") {
  const QyCert c = gen_cert({1, 2});

  const auto [lin5, sys5] = specialize(c, 5);
  CHECK(sys5.ring == Ring::Q());
  CHECK(verify_ips_lin(lin5, sys5).equal);
  // The specialized head axiom reads 5 + x1 + 2*x2.
  const SparsePoly f0 = expand(sys5.axioms[0]);
  CHECK(f0.coeff_at({0, 0}) == Coeff(mpq_class(5)));
  CHECK(f0.coeff_at({1, 0}) == Coeff(mpq_class(1)));
  CHECK(f0.coeff_at({0, 1}) == Coeff(mpq_class(2)));

  mpq_class half(1, 2);
  const auto [linh, sysh] = specialize(c, half);
  CHECK(verify_ips_lin(linh, sysh).equal);

  // Base denominators y+t for t = 0..3 put poles at 0, -1, -2, -3.
  for (long bad : {0L, -1L, -2L, -3L}) {
    CHECK_THROWS_AS(specialize(c, mpq_class(bad)), DenominatorRoot);
  }
  try {
    specialize(c, mpq_class(-1));
  } catch (const DenominatorRoot& e) {
    CHECK(e.point == -1);
  }

  std::mt19937_64 rng(11);
  int done = 0;
  while (done < 20) {
    const mpq_class pt = rnd_q(rng);
    if (pt.get_den() == 1 && pt <= 0 && pt >= -3) continue;
    const auto [lin, sys] = specialize(c, pt);
    CHECK(verify_ips_lin(lin, sys).equal);
    ++done;
  }
}

TEST_CASE("numerator denominator split of rational circuits") {
  // 1/(y+1) splits into P = 1 and Q = y + 1.
  CircuitBuilder b1(Ring::Qy());
  const Circuit inv = b1.take({b1.const_rat(one_over_y_plus(1))});
  const auto [p1, q1] = qy_decompose(inv);
  CHECK(upoly_from(q1) == UPoly::from_coeffs({mpq_class(1), mpq_class(1)}));
  CHECK(upoly_from(p1) == UPoly(mpq_class(1)));
  check_decomposition(inv, p1, q1);

  // x1/y + x2/(y+1) has denominator y(y+1) and numerator x1(y+1) + x2 y.
  CircuitBuilder b2(Ring::Qy());
  const uint32_t t1 = b2.mul(b2.var("x1"), b2.const_rat(one_over_y_plus(0)));
  const uint32_t t2 = b2.mul(b2.var("x2"), b2.const_rat(one_over_y_plus(1)));
  const Circuit mix = b2.take({b2.add(t1, t2)});
  const auto [p2, q2] = qy_decompose(mix);
  CHECK(upoly_from(q2) == UPoly::from_coeffs({mpq_class(0), mpq_class(1), mpq_class(1)}));
  check_decomposition(mix, p2, q2);

  // Division-free circuits keep denominator 1.
  std::mt19937_64 rng(5);
  RandCircuitOpts o;
  o.ring = Ring::Qy();
  o.nvars = 3;
  o.target_gates = 16;
  for (int trial = 0; trial < 40; ++trial) {
    const Circuit c = random_circuit(rng, o);
    const auto [p, q] = qy_decompose(c);
    CHECK(upoly_from(q) == UPoly(mpq_class(1)));
    check_decomposition(c, p, q);
  }

  // Rational constants move their denominators into Q.
  CircuitBuilder b3(Ring::Qy());
  mpq_class half(1, 2);
  const Circuit scaled = b3.take({b3.mul(b3.constant(half), b3.var("x1"))});
  const auto [p3, q3] = qy_decompose(scaled);
  CHECK(upoly_from(q3) == UPoly(mpq_class(2)));
  check_decomposition(scaled, p3, q3);

  CircuitBuilder bq(Ring::Q());
  CHECK_THROWS_AS(qy_decompose(bq.take({bq.constant_i(1)})), RingMismatch);
  CircuitBuilder by(Ring::Qy());
  by.var("y");
  CHECK_THROWS_AS(qy_decompose(by.take({by.constant_i(1)})), VariableMismatch);
}

TEST_CASE("decomposition size bound on generated cofactors") {
  for (const std::vector<mpz_class>& a :
       {std::vector<mpz_class>{1}, {1, 2}, {1, 2, 4}}) {
    const QyCert c = gen_cert(a);
    for (const Circuit& cof : c.cert.cofactors) {
      const size_t measure = expand_ratfunc_leaves(cof).size();
      const auto [p, q] = qy_decompose(cof);
      check_decomposition(cof, p, q);
      CHECK(p.size() < 3 * measure);
      CHECK(q.size() < 3 * measure);
    }
  }
}

TEST_CASE("denominator root census over the power weights") {
  const QyCert c2 = gen_cert({1, 2});
  const RootCensus r2 = denominator_root_census(c2, 2);
  CHECK(r2.roots == std::vector<mpz_class>{0, -1, -2, -3});
  CHECK(r2.denominator_product.degree() >= 4);
  for (const mpz_class& k : r2.roots) {
    CHECK(r2.denominator_product.eval(mpq_class(k)) == 0);
  }

  const QyCert c1 = gen_cert({1});
  const RootCensus r1 = denominator_root_census(c1, 1);
  CHECK(r1.roots == std::vector<mpz_class>{0, -1});

  // A tampered cofactor breaks the cleared identity.
  QyCert broken = c2;
  CircuitBuilder tb(Ring::Qy());
  tb.var("x1");
  tb.var("x2");
  broken.cert.cofactors[0] = tb.take({tb.const_rat(one_over_y_plus(1))});
  CHECK_THROWS_AS(denominator_root_census(broken, 2), MissingRoot);

  CHECK_THROWS_AS(denominator_root_census(gen_cert({1, 3}), 2), BadParams);
  CHECK_THROWS_AS(denominator_root_census(c2, 3), BadParams);
}

TEST_CASE("certificates survive the linear proof file format") {
  const QyCert c = gen_cert({1, 2});
  const std::string dir = "tmp_qycert_dir";
  std::filesystem::create_directory(dir);
  save_axiom_system(dir + "/sys.txt", c.system);
  const std::string text = ips_lin_to_text(c.cert, "sys.txt");
  write_text_file(dir + "/cert.ipslin", text);

  const auto [lin, sys] = load_ips_lin(dir + "/cert.ipslin");
  CHECK(same_system(sys, c.system));
  REQUIRE(lin.cofactors.size() == c.cert.cofactors.size());
  for (size_t i = 0; i < lin.cofactors.size(); ++i) {
    CHECK(lin.cofactors[i].structurally_equal(c.cert.cofactors[i]));
  }
  CHECK(verify_ips_lin(lin, sys).equal);
  CHECK(ips_lin_to_text(lin, "sys.txt") == text);
  std::filesystem::remove_all(dir);
}
