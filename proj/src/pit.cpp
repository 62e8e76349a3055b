#include "proofkit/pit.hpp"

#include <optional>
#include <set>

#include "proofkit/errors.hpp"
#include "proofkit/transforms.hpp"

namespace proofkit {

namespace {

std::vector<bool> reachable(const Circuit& c) {
  std::vector<bool> r(c.size(), false);
  for (uint32_t o : c.outputs()) r[o] = true;
  for (uint32_t id = c.size(); id-- > 0;) {
    if (!r[id]) continue;
    const Gate& g = c.gate(id);
    if (g.kind == GateKind::Add || g.kind == GateKind::Mul || g.kind == GateKind::DivC) {
      r[g.a] = true;
      r[g.b] = true;
    }
  }
  return r;
}

Coeff const_coeff(const Ring& ring, const Gate& g) {
  if (ring.tag == RingTag::RationalFunctionField) {
    if (g.cfun) return *g.cfun;
    return RatFunc::constant(g.cval);
  }
  return g.cval;
}

Circuit select_output(const Circuit& c, std::size_t i) {
  return Circuit::build(c.ring(), c.gates(), {c.outputs()[i]}, c.var_names());
}

// Sum of coefficient magnitudes per output of a division-free Z circuit; an
// upper bound on every coefficient of the expanded polynomial.
std::vector<mpz_class> l1_bounds(const Circuit& c, uint32_t max_bits) {
  const auto reach = reachable(c);
  std::vector<mpz_class> l1(c.size());
  for (uint32_t id = 0; id < c.size(); ++id) {
    if (!reach[id]) continue;
    const Gate& g = c.gate(id);
    switch (g.kind) {
      case GateKind::Var:
        l1[id] = 1;
        break;
      case GateKind::Const:
        l1[id] = abs(g.cval.get_num());
        break;
      case GateKind::Add:
        l1[id] = l1[g.a] + l1[g.b];
        break;
      case GateKind::Mul:
        l1[id] = l1[g.a] * l1[g.b];
        break;
      case GateKind::DivC:
        throw RingMismatch("coefficient bounds need a division-free circuit");
    }
    if (mpz_sizeinbase(l1[id].get_mpz_t(), 2) > max_bits) {
      throw DegreeBoundOverflow("coefficient bound exceeds the field size limit");
    }
  }
  std::vector<mpz_class> out;
  out.reserve(c.outputs().size());
  for (uint32_t o : c.outputs()) out.push_back(l1[o]);
  return out;
}

mpq_class pow_bound(const mpz_class& deg, const mpz_class& p, uint32_t trials) {
  mpq_class per(deg, p);
  per.canonicalize();
  if (per > 1) per = 1;
  mpq_class bound;
  mpz_pow_ui(bound.get_num_mpz_t(), per.get_num_mpz_t(), trials);
  mpz_pow_ui(bound.get_den_mpz_t(), per.get_den_mpz_t(), trials);
  bound.canonicalize();
  return bound;
}

PitVerdict randomized_gf(const Circuit& a, const Circuit& b, const PitOptions& opts) {
  const mpz_class& p = a.ring().modulus;
  mpz_class deg = 0;
  for (const auto& d : syntactic_degrees(a)) deg = std::max(deg, d);
  for (const auto& d : syntactic_degrees(b)) deg = std::max(deg, d);

  gmp_randclass rnd(gmp_randinit_mt);
  rnd.seed(opts.seed);
  const std::size_t nvars = a.num_vars();

  PitVerdict v;
  v.exact = false;
  v.field_size = p;
  for (uint32_t t = 1; t <= opts.trials; ++t) {
    std::vector<mpz_class> point(nvars);
    for (auto& x : point) x = rnd.get_z_range(p);
    const Assignment asg = Assignment::of_z(point);
    const auto va = evaluate(a, asg);
    const auto vb = evaluate(b, asg);
    for (std::size_t i = 0; i < va.size(); ++i) {
      if (std::get<mpz_class>(va[i]) != std::get<mpz_class>(vb[i])) {
        v.equal = false;
        v.trials = t;
        v.error_bound = 0;
        v.witness = point;
        return v;
      }
    }
  }
  v.equal = true;
  v.trials = opts.trials;
  v.error_bound = pow_bound(deg, p, opts.trials);
  return v;
}

PitVerdict randomized_zq(const Circuit& a, const Circuit& b, const PitOptions& opts) {
  const bool is_q = a.ring().tag == RingTag::RationalField;
  const std::size_t nouts = a.outputs().size();

  // Integer-coefficient forms: lift_i computes M_i * output_i with M_i != 0.
  std::vector<Circuit> la, lb;
  std::vector<mpz_class> ma, mb;
  for (std::size_t i = 0; i < nouts; ++i) {
    if (is_q) {
      LiftResult ra = q_to_z_lift(select_output(a, i));
      LiftResult rb = q_to_z_lift(select_output(b, i));
      la.push_back(with_var_space(ra.lifted, a.var_names()));
      lb.push_back(with_var_space(rb.lifted, a.var_names()));
      ma.push_back(ra.M);
      mb.push_back(rb.M);
    } else {
      la.push_back(select_output(a, i));
      lb.push_back(select_output(b, i));
      ma.push_back(1);
      mb.push_back(1);
    }
  }

  // Prime large enough that (1) the Schwartz-Zippel bound meets the requested
  // confidence and (2) no nonzero coefficient of M_b*lift_a - M_a*lift_b can
  // vanish modulo it, so "difference is zero mod p" only happens by sampling.
  mpz_class deg = 0;
  mpz_class threshold = 1;
  for (std::size_t i = 0; i < nouts; ++i) {
    const mpz_class da = syntactic_degrees(la[i])[0];
    const mpz_class db = syntactic_degrees(lb[i])[0];
    deg = std::max(deg, std::max(da, db));
    const mpz_class l1 =
        abs(mb[i]) * l1_bounds(la[i], opts.max_field_bits)[0] +
        abs(ma[i]) * l1_bounds(lb[i], opts.max_field_bits)[0];
    threshold = std::max(threshold, l1);
  }
  mpz_class sz = deg;
  mpz_mul_2exp(sz.get_mpz_t(), sz.get_mpz_t(), opts.confidence_bits + 1);
  threshold = std::max(threshold, sz);
  if (mpz_sizeinbase(threshold.get_mpz_t(), 2) > opts.max_field_bits) {
    throw DegreeBoundOverflow("required sampling field exceeds the size limit");
  }
  mpz_class p;
  mpz_nextprime(p.get_mpz_t(), threshold.get_mpz_t());
  for (bool clean = false; !clean;) {
    clean = true;
    for (std::size_t i = 0; i < nouts; ++i) {
      if (ma[i] % p == 0 || mb[i] % p == 0) {
        clean = false;
        mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
        break;
      }
    }
  }

  const Ring gf = Ring::GF(p);
  std::vector<Circuit> ga, gb;
  std::vector<mpz_class> sa, sb;  // cross-multipliers reduced mod p
  for (std::size_t i = 0; i < nouts; ++i) {
    ga.push_back(Circuit::build(gf, la[i].gates(), la[i].outputs(), la[i].var_names()));
    gb.push_back(Circuit::build(gf, lb[i].gates(), lb[i].outputs(), lb[i].var_names()));
    mpz_class xa = mb[i] % p, xb = ma[i] % p;
    if (xa < 0) xa += p;
    if (xb < 0) xb += p;
    sa.push_back(xa);
    sb.push_back(xb);
  }

  gmp_randclass rnd(gmp_randinit_mt);
  rnd.seed(opts.seed);
  const std::size_t nvars = a.num_vars();

  PitVerdict v;
  v.exact = false;
  v.field_size = p;
  for (uint32_t t = 1; t <= opts.trials; ++t) {
    std::vector<mpz_class> point(nvars);
    for (auto& x : point) x = rnd.get_z_range(p);
    const Assignment asg = Assignment::of_z(point);
    for (std::size_t i = 0; i < nouts; ++i) {
      const mpz_class va = std::get<mpz_class>(evaluate_single(ga[i], asg));
      const mpz_class vb = std::get<mpz_class>(evaluate_single(gb[i], asg));
      if ((sa[i] * va - sb[i] * vb) % p != 0) {
        v.equal = false;
        v.trials = t;
        v.error_bound = 0;
        v.witness = point;
        return v;
      }
    }
  }
  v.equal = true;
  v.trials = opts.trials;
  v.error_bound = pow_bound(deg, p, opts.trials);
  return v;
}

}  // namespace

std::vector<SparsePoly> expand_outputs(const Circuit& c, std::size_t budget) {
  const auto reach = reachable(c);
  const auto& names = c.var_names();
  std::vector<std::optional<SparsePoly>> poly(c.size());
  for (uint32_t id = 0; id < c.size(); ++id) {
    if (!reach[id]) continue;
    const Gate& g = c.gate(id);
    std::optional<SparsePoly> p;
    switch (g.kind) {
      case GateKind::Var:
        p = SparsePoly::variable(c.ring(), names, g.a);
        break;
      case GateKind::Const:
        p = SparsePoly::constant(c.ring(), names, const_coeff(c.ring(), g));
        break;
      case GateKind::Add:
        p = *poly[g.a] + *poly[g.b];
        break;
      case GateKind::Mul:
        p = *poly[g.a] * *poly[g.b];
        break;
      case GateKind::DivC: {
        const Coeff den = poly[g.b]->coeff_at(SparsePoly::Exps(names.size(), 0));
        p = poly[g.a]->scaled(coeff_inv(c.ring(), den));
        break;
      }
    }
    if (p->num_terms() > budget) {
      throw BudgetExceeded("monomials", p->num_terms(), budget);
    }
    poly[id] = std::move(p);
  }
  std::vector<SparsePoly> out;
  out.reserve(c.outputs().size());
  for (uint32_t o : c.outputs()) out.push_back(*poly[o]);
  return out;
}

SparsePoly expand(const Circuit& c, std::size_t budget) {
  if (c.outputs().size() != 1) throw Error("expand expects a single-output circuit");
  return expand_outputs(c, budget).front();
}

Circuit circuit_from_poly(const SparsePoly& p, const Ring& ring,
                          const std::vector<std::string>& names) {
  CircuitBuilder b(ring);
  std::vector<uint32_t> vars;
  for (const std::string& n : names) vars.push_back(b.var(n));
  std::vector<uint32_t> terms;
  for (const auto& [e, c] : p.terms()) {
    if (!std::holds_alternative<mpq_class>(c))
      throw RingUnsupported("rational-function coefficients have no circuit constant");
    if (e.size() > vars.size()) throw VariableMismatch("monomial reads past the variable space");
    uint32_t node = b.constant(std::get<mpq_class>(c));
    for (size_t i = 0; i < e.size(); ++i)
      for (uint32_t k = 0; k < e[i]; ++k) node = b.mul(node, vars[i]);
    terms.push_back(node);
  }
  return b.take({b.sum(std::move(terms))});
}

PitVerdict pit_equal(const Circuit& a, const Circuit& b0, const PitOptions& opts) {
  if (!(a.ring() == b0.ring())) {
    throw RingMismatch("identity testing needs both circuits over one ring");
  }
  if (a.outputs().size() != b0.outputs().size()) {
    throw ArityMismatch("outputs", a.outputs().size(), b0.outputs().size());
  }
  const std::set<std::string> sa(a.var_names().begin(), a.var_names().end());
  const std::set<std::string> sb(b0.var_names().begin(), b0.var_names().end());
  if (sa != sb) {
    throw VariableMismatch("circuits declare different variable sets");
  }
  const Circuit& b =
      a.var_names() == b0.var_names() ? b0 : with_var_space(b0, a.var_names());

  if (opts.mode == PitMode::Exact) {
    const auto pa = expand_outputs(a, opts.expand_budget);
    const auto pb = expand_outputs(b, opts.expand_budget);
    PitVerdict v;
    v.exact = true;
    v.error_bound = 0;
    v.equal = true;
    for (std::size_t i = 0; i < pa.size(); ++i) {
      if (pa[i] != pb[i]) {
        v.equal = false;
        break;
      }
    }
    return v;
  }

  switch (a.ring().tag) {
    case RingTag::RationalFunctionField:
      throw RingUnsupported("randomized identity testing is unavailable over Q(y); use exact mode");
    case RingTag::PrimeField:
      return randomized_gf(a, b, opts);
    case RingTag::IntegerRing:
    case RingTag::RationalField:
      return randomized_zq(a, b, opts);
  }
  throw RingMismatch("unknown ring");
}

PitVerdict is_zero(const Circuit& c, const PitOptions& opts) {
  std::vector<Gate> gates;
  gates.push_back(Gate::constant(mpq_class(0)));
  const std::vector<uint32_t> outs(c.outputs().size(), 0);
  const Circuit zero = Circuit::build(c.ring(), std::move(gates), outs, c.var_names());
  return pit_equal(c, zero, opts);
}

}  // namespace proofkit
