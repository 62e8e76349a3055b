// Q(y) linear certificates: recursive generation, specialization at rational
// points, integer P/Q decomposition, and the denominator root census.
#include "proofkit/qycert.hpp"

#include <array>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <variant>

#include "proofkit/errors.hpp"
#include "proofkit/pit.hpp"
#include "proofkit/ratfunc.hpp"
#include "proofkit/sparse_poly.hpp"

namespace proofkit {

namespace {

// Horner chain for an integer-coefficient polynomial in the node `y`.
uint32_t horner(CircuitBuilder& b, const UPoly& p, uint32_t y) {
  if (p.is_zero()) return b.constant_i(0);
  uint32_t node = b.constant(p.lead());
  for (long i = p.degree() - 1; i >= 0; --i) {
    node = b.add(b.mul(node, y), b.constant(p.coeff(static_cast<size_t>(i))));
  }
  return node;
}

// Substitutes y := point into one Q(y) circuit, producing a circuit over Q.
Circuit substitute_y(const Circuit& c, const mpq_class& point, size_t cofactor_index) {
  CircuitBuilder b(Ring::Q());
  for (const std::string& name : c.var_names()) b.var(name);
  std::vector<uint32_t> node(c.size());
  for (uint32_t id = 0; id < c.size(); ++id) {
    const Gate& g = c.gate(id);
    switch (g.kind) {
      case GateKind::Var:
        node[id] = b.var(c.var_names()[g.a]);
        break;
      case GateKind::Const:
        if (g.cfun) {
          if (!g.cfun->defined_at(point)) throw DenominatorRoot(point, cofactor_index);
          node[id] = b.constant(g.cfun->eval(point));
        } else {
          node[id] = b.constant(g.cval);
        }
        break;
      case GateKind::Add:
        node[id] = b.add(node[g.a], node[g.b]);
        break;
      case GateKind::Mul:
        node[id] = b.mul(node[g.a], node[g.b]);
        break;
      case GateKind::DivC:
        node[id] = b.divc(node[g.a], node[g.b]);
        break;
    }
  }
  std::vector<uint32_t> outs;
  for (uint32_t o : c.outputs()) outs.push_back(node[o]);
  return b.take(std::move(outs));
}

// A Z[y] circuit lifted over Q(y) collapses to one rational-function
// coefficient whose denominator is 1; returns its numerator polynomial.
UPoly upoly_of(const Circuit& zy) {
  const SparsePoly p = expand(to_qy(zy));
  if (p.nvars() != 0) throw Error("expected a circuit over y alone");
  const RatFunc f = std::get<RatFunc>(p.coeff_at({}));
  if (!(f.den() == UPoly(mpq_class(1))))
    throw Error("expected a polynomial value, found a genuine fraction");
  return f.num();
}

}  // namespace

QyCert gen_cert(const std::vector<mpz_class>& a, size_t budget) {
  mpz_class total = 0;
  for (const mpz_class& ai : a) {
    if (ai < 1) throw BadParams("certificate coefficients must be positive integers");
    total += ai;
  }
  if (cmp(total, static_cast<unsigned long>(budget)) > 0) {
    const size_t count =
        total.fits_ulong_p() ? total.get_ui() : std::numeric_limits<size_t>::max();
    throw BudgetExceeded("certificate coefficient sum", count, budget);
  }
  const size_t n = a.size();
  std::vector<uint64_t> au(n);
  for (size_t i = 0; i < n; ++i) au[i] = a[i].get_ui();

  CircuitBuilder b(Ring::Qy());
  std::vector<uint32_t> xs(n);
  for (size_t i = 0; i < n; ++i) xs[i] = b.var("x" + std::to_string(i + 1));
  const uint32_t zero = b.constant_i(0);
  const uint32_t one = b.constant_i(1);

  // H(k, i, t) certifies cofactor i of y + t + a_1 x_1 + ... + a_k x_k = 0;
  // the t arguments reachable from the top are subset sums of a, so the memo
  // stays polynomial in sum a_i.
  std::map<std::array<uint64_t, 3>, uint32_t> memo;
  std::function<uint32_t(uint64_t, uint64_t, uint64_t)> H =
      [&](uint64_t k, uint64_t i, uint64_t t) -> uint32_t {
    if (i > k) return zero;
    const std::array<uint64_t, 3> key{k, i, t};
    const auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    uint32_t node;
    if (k == 0) {
      node = b.const_rat(RatFunc(
          UPoly(mpq_class(1)),
          UPoly::from_coeffs({mpq_class(static_cast<unsigned long>(t)), mpq_class(1)})));
    } else if (i == k) {
      const uint32_t diff = b.sub(H(k - 1, 0, t), H(k - 1, 0, t + au[k - 1]));
      node = b.mul(b.constant(mpq_class(a[k - 1])), diff);
    } else {
      const uint32_t mixed = b.mul(xs[k - 1], H(k - 1, i, t + au[k - 1]));
      const uint32_t kept = b.mul(b.sub(one, xs[k - 1]), H(k - 1, i, t));
      node = b.add(mixed, kept);
    }
    memo.emplace(key, node);
    return node;
  };

  IpsLinCert cert;
  for (size_t i = 0; i <= n; ++i) {
    cert.cofactors.push_back(b.take({H(n, i, 0)}));
  }

  CircuitBuilder sb(Ring::Qy());
  std::vector<uint32_t> terms;
  for (size_t i = 0; i < n; ++i) {
    terms.push_back(sb.mul(sb.constant(mpq_class(a[i])), sb.var("x" + std::to_string(i + 1))));
  }
  const uint32_t f0 = sb.add(sb.const_y(), sb.sum(std::move(terms)));
  AxiomSystem system = make_axiom_system(Ring::Qy(), {sb.take({f0})}, true);
  return {std::move(cert), std::move(system)};
}

std::vector<mpz_class> linear_axiom_coeffs(const AxiomSystem& system) {
  if (!(system.ring == Ring::Qy()) || system.axioms.empty())
    throw BadParams("expected a Q(y) system led by y + sum a_i x_i");
  const SparsePoly p = expand(system.axioms[0]);
  const uint32_t n = p.nvars();
  if (p.num_terms() != static_cast<size_t>(n) + 1)
    throw BadParams("the leading axiom is not y + sum a_i x_i");
  std::vector<mpz_class> out(n);
  for (const auto& [e, c] : p.terms()) {
    const RatFunc& f = std::get<RatFunc>(c);
    uint64_t degree = 0;
    size_t which = 0;
    for (size_t v = 0; v < e.size(); ++v) {
      degree += e[v];
      if (e[v]) which = v;
    }
    if (degree == 0) {
      if (!f.is_variable()) throw BadParams("the constant term of the leading axiom is not y");
    } else if (degree == 1) {
      if (!f.is_rational()) throw BadParams("a variable coefficient depends on y");
      const mpq_class q = f.as_rational();
      if (q.get_den() != 1 || q < 1)
        throw BadParams("variable coefficients must be positive integers");
      out[which] = q.get_num();
    } else {
      throw BadParams("the leading axiom is not linear");
    }
  }
  return out;
}

std::pair<IpsLinCert, AxiomSystem> specialize(const QyCert& cert, const mpq_class& c) {
  if (!(cert.system.ring == Ring::Qy()))
    throw RingMismatch("specialization expects a certificate over Q(y)");
  IpsLinCert lin;
  for (size_t j = 0; j < cert.cert.cofactors.size(); ++j) {
    try {
      lin.cofactors.push_back(substitute_y(cert.cert.cofactors[j], c, j));
    } catch (const DivByZeroConstant&) {
      throw DenominatorRoot(c, j);
    }
  }
  std::vector<Circuit> axioms;
  for (size_t j = 0; j < cert.system.axioms.size(); ++j) {
    axioms.push_back(substitute_y(cert.system.axioms[j], c, j));
  }
  AxiomSystem sys = make_axiom_system(Ring::Q(), std::move(axioms), cert.system.include_boolean);
  return {std::move(lin), std::move(sys)};
}

Circuit to_qy(const Circuit& c) {
  if (!c.ring().ordered()) throw RingMismatch("the y lift expects a circuit over Z or Q");
  CircuitBuilder b(Ring::Qy());
  for (const std::string& name : c.var_names()) {
    if (name != "y") b.var(name);
  }
  std::vector<uint32_t> node(c.size());
  for (uint32_t id = 0; id < c.size(); ++id) {
    const Gate& g = c.gate(id);
    switch (g.kind) {
      case GateKind::Var:
        node[id] = c.var_names()[g.a] == "y" ? b.const_y() : b.var(c.var_names()[g.a]);
        break;
      case GateKind::Const:
        node[id] = b.constant(g.cval);
        break;
      case GateKind::Add:
        node[id] = b.add(node[g.a], node[g.b]);
        break;
      case GateKind::Mul:
        node[id] = b.mul(node[g.a], node[g.b]);
        break;
      case GateKind::DivC:
        node[id] = b.divc(node[g.a], node[g.b]);
        break;
    }
  }
  std::vector<uint32_t> outs;
  for (uint32_t o : c.outputs()) outs.push_back(node[o]);
  return b.take(std::move(outs));
}

Circuit expand_ratfunc_leaves(const Circuit& c) {
  if (!(c.ring() == Ring::Qy())) return c;
  CircuitBuilder b(Ring::Qy());
  for (const std::string& name : c.var_names()) b.var(name);
  std::vector<uint32_t> node(c.size());
  for (uint32_t id = 0; id < c.size(); ++id) {
    const Gate& g = c.gate(id);
    switch (g.kind) {
      case GateKind::Var:
        node[id] = b.var(c.var_names()[g.a]);
        break;
      case GateKind::Const:
        if (!g.cfun) {
          node[id] = b.constant(g.cval);
        } else if (g.cfun->is_variable()) {
          node[id] = b.const_y();
        } else if (g.cfun->is_rational()) {
          node[id] = b.constant(g.cfun->as_rational());
        } else {
          // Clear coefficient denominators so both halves sit in Z[y].
          mpz_class l = 1;
          for (const mpq_class& q : g.cfun->num().coeffs()) l = lcm(l, q.get_den());
          for (const mpq_class& q : g.cfun->den().coeffs()) l = lcm(l, q.get_den());
          const UPoly scale{mpq_class(l)};
          const uint32_t y = b.const_y();
          node[id] = b.divc(horner(b, g.cfun->num() * scale, y),
                            horner(b, g.cfun->den() * scale, y));
        }
        break;
      case GateKind::Add:
        node[id] = b.add(node[g.a], node[g.b]);
        break;
      case GateKind::Mul:
        node[id] = b.mul(node[g.a], node[g.b]);
        break;
      case GateKind::DivC:
        node[id] = b.divc(node[g.a], node[g.b]);
        break;
    }
  }
  std::vector<uint32_t> outs;
  for (uint32_t o : c.outputs()) outs.push_back(node[o]);
  return b.take(std::move(outs));
}

std::pair<Circuit, Circuit> qy_decompose(const Circuit& input) {
  if (!(input.ring() == Ring::Qy()))
    throw RingMismatch("the decomposition expects a circuit over Q(y)");
  if (input.outputs().size() != 1)
    throw ArityMismatch("decomposition input outputs", 1, input.outputs().size());
  for (const std::string& name : input.var_names()) {
    if (name == "y") throw VariableMismatch("the input already declares a variable named y");
  }
  const Circuit c = expand_ratfunc_leaves(input);
  CircuitBuilder b(Ring::Z());
  for (const std::string& name : c.var_names()) b.var(name);
  const uint32_t y = b.var("y");
  const uint32_t one = b.constant_i(1);
  std::vector<uint32_t> P(c.size()), Q(c.size());
  for (uint32_t id = 0; id < c.size(); ++id) {
    const Gate& g = c.gate(id);
    switch (g.kind) {
      case GateKind::Var:
        P[id] = b.var(c.var_names()[g.a]);
        Q[id] = one;
        break;
      case GateKind::Const:
        if (g.cfun) {
          P[id] = y;
          Q[id] = one;
        } else {
          P[id] = b.constant(mpq_class(g.cval.get_num()));
          Q[id] = b.constant(mpq_class(g.cval.get_den()));
        }
        break;
      case GateKind::Add:
        P[id] = b.add(b.mul(P[g.a], Q[g.b]), b.mul(P[g.b], Q[g.a]));
        Q[id] = b.mul(Q[g.a], Q[g.b]);
        break;
      case GateKind::Mul:
        P[id] = b.mul(P[g.a], P[g.b]);
        Q[id] = b.mul(Q[g.a], Q[g.b]);
        break;
      case GateKind::DivC:
        P[id] = b.mul(P[g.a], Q[g.b]);
        Q[id] = b.mul(Q[g.a], P[g.b]);
        break;
    }
  }
  const uint32_t root = c.outputs()[0];
  Circuit num = b.take({P[root]});
  Circuit den = with_var_space(b.take({Q[root]}), {"y"});
  return {std::move(num), std::move(den)};
}

RootCensus denominator_root_census(const QyCert& cert, uint32_t n) {
  const std::vector<mpz_class> as = linear_axiom_coeffs(cert.system);
  if (as.size() != n) throw BadParams("the certificate ranges over a different variable count");
  if (n > 20) throw BadParams("the census enumerates 2^n assignments; n is capped at 20");
  mpz_class w = 1;
  for (uint32_t i = 0; i < n; ++i) {
    if (as[i] != w) throw BadParams("the census expects the weights a_i = 2^(i-1)");
    w *= 2;
  }
  const size_t m = effective_axioms(cert.system).size();
  if (cert.cert.cofactors.size() != m)
    throw ArityMismatch("certificate cofactors", m, cert.cert.cofactors.size());

  std::vector<UPoly> dens;
  UPoly product(mpq_class(1));
  SparsePoly head(Ring::Qy(), {});
  for (size_t j = 0; j < m; ++j) {
    auto [p, q] = qy_decompose(cert.cert.cofactors[j]);
    const UPoly qj = upoly_of(q);
    if (j == 0) head = expand(to_qy(p));
    dens.push_back(qj);
    product = product * qj;
  }
  UPoly tail(mpq_class(1));
  for (size_t j = 1; j < m; ++j) tail = tail * dens[j];

  RootCensus out{product, {}};
  for (uint64_t k = 0; k < (uint64_t{1} << n); ++k) {
    std::vector<Coeff> bits;
    for (uint32_t i = 0; i < n; ++i) {
      bits.emplace_back(RatFunc::constant(mpq_class((k >> i) & 1)));
    }
    const RatFunc at_bits = std::get<RatFunc>(head.eval(bits));
    const UPoly shifted =
        UPoly::from_coeffs({mpq_class(static_cast<unsigned long>(k)), mpq_class(1)});
    if (!(at_bits.den() == UPoly(mpq_class(1))) ||
        !(at_bits.num() * shifted * tail == product)) {
      throw MissingRoot(mpz_class(static_cast<unsigned long>(k)));
    }
    out.roots.push_back(-mpz_class(static_cast<unsigned long>(k)));
  }
  return out;
}

}  // namespace proofkit
