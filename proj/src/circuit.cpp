#include "proofkit/circuit.hpp"

#include <algorithm>
#include <set>

#include "proofkit/errors.hpp"

namespace proofkit {

Gate Gate::constant_y() {
  Gate g;
  g.kind = GateKind::Const;
  g.cfun = std::make_shared<const RatFunc>(RatFunc::variable());
  return g;
}

Gate Gate::constant_rat(const RatFunc& f) {
  if (f.is_rational()) return constant(f.as_rational());
  Gate g;
  g.kind = GateKind::Const;
  g.cfun = std::make_shared<const RatFunc>(f);
  return g;
}

bool Gate::same_payload(const Gate& o) const {
  if ((cfun == nullptr) != (o.cfun == nullptr)) return false;
  if (cfun) return *cfun == *o.cfun;
  return cval == o.cval;
}

namespace {

mpz_class mod_pos(const mpz_class& v, const mpz_class& p) {
  mpz_class r = v % p;
  if (r < 0) r += p;
  return r;
}

mpz_class mod_inv(const mpz_class& a, const mpz_class& p) {
  mpz_class r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t()) == 0) {
    throw RingMismatch("constant denominator is not invertible modulo " + p.get_str());
  }
  return r;
}

// Exact value of a variable-free gate, used to validate divc denominators.
mpq_class const_value_q(const std::vector<Gate>& gates, uint32_t id) {
  const Gate& g = gates[id];
  switch (g.kind) {
    case GateKind::Const:
      return g.cval;
    case GateKind::Add:
      return const_value_q(gates, g.a) + const_value_q(gates, g.b);
    case GateKind::Mul:
      return const_value_q(gates, g.a) * const_value_q(gates, g.b);
    case GateKind::DivC: {
      const mpq_class den = const_value_q(gates, g.b);
      if (den == 0) throw DivByZeroConstant(id);
      return const_value_q(gates, g.a) / den;
    }
    case GateKind::Var:
      break;
  }
  throw DivByVariable(id);
}

RatFunc const_value_rat(const std::vector<Gate>& gates, uint32_t id) {
  const Gate& g = gates[id];
  switch (g.kind) {
    case GateKind::Const:
      return g.cfun ? *g.cfun : RatFunc::constant(g.cval);
    case GateKind::Add:
      return const_value_rat(gates, g.a) + const_value_rat(gates, g.b);
    case GateKind::Mul:
      return const_value_rat(gates, g.a) * const_value_rat(gates, g.b);
    case GateKind::DivC: {
      const RatFunc den = const_value_rat(gates, g.b);
      if (den.is_zero()) throw DivByZeroConstant(id);
      return const_value_rat(gates, g.a) / den;
    }
    case GateKind::Var:
      break;
  }
  throw DivByVariable(id);
}

}  // namespace

Circuit Circuit::build(Ring ring, std::vector<Gate> gates, std::vector<uint32_t> outputs,
                       std::vector<std::string> var_names, bool enforce_constant_free) {
  Circuit c;
  c.ring_ = std::move(ring);
  c.gates_ = std::move(gates);
  c.outputs_ = std::move(outputs);
  c.var_names_ = std::move(var_names);

  if (c.gates_.empty()) throw Error("a circuit needs at least one gate");
  if (c.outputs_.empty()) throw Error("a circuit needs at least one output");
  {
    std::set<std::string> seen;
    for (const auto& n : c.var_names_) {
      if (n.empty() || !seen.insert(n).second) throw Error("empty or duplicate variable name");
    }
  }

  const bool rat_ring = c.ring_.tag == RingTag::RationalField ||
                        c.ring_.tag == RingTag::RationalFunctionField;
  c.var_dep_.assign(c.gates_.size(), false);
  bool cfree = true;
  for (uint32_t id = 0; id < c.gates_.size(); ++id) {
    Gate& g = c.gates_[id];
    switch (g.kind) {
      case GateKind::Var:
        if (g.a >= c.var_names_.size()) throw Error("gate " + std::to_string(id) + " references variable index out of range");
        c.var_dep_[id] = true;
        break;
      case GateKind::Const:
        if (g.cfun && c.ring_.tag != RingTag::RationalFunctionField) {
          throw RingMismatch("rational-function constant in a " + c.ring_.str() + " circuit");
        }
        if (!g.cfun) {
          if (c.ring_.tag == RingTag::IntegerRing && g.cval.get_den() != 1) {
            throw RingMismatch("non-integer constant " + g.cval.get_str() + " in a Z circuit");
          }
          if (c.ring_.tag == RingTag::PrimeField) {
            // Canonical residue, folding an inverse for fractional input.
            mpz_class num = mod_pos(g.cval.get_num(), c.ring_.modulus);
            if (g.cval.get_den() != 1) num = mod_pos(num * mod_inv(g.cval.get_den(), c.ring_.modulus), c.ring_.modulus);
            g.cval = mpq_class(num);
          }
        }
        if (g.cfun) {
          if (!g.cfun->is_variable()) cfree = false;
        } else if (g.cval != 0 && g.cval != 1 && g.cval != -1) {
          cfree = false;
        }
        if (enforce_constant_free && !cfree) throw ConstInConstantFree(id);
        break;
      case GateKind::Add:
      case GateKind::Mul:
        if (g.a >= id || g.b >= id) throw CycleOrForwardRef(id);
        c.var_dep_[id] = c.var_dep_[g.a] || c.var_dep_[g.b];
        break;
      case GateKind::DivC: {
        if (g.a >= id || g.b >= id) throw CycleOrForwardRef(id);
        if (!rat_ring) throw RingMismatch("divc gate in a " + c.ring_.str() + " circuit");
        if (c.var_dep_[g.b]) throw DivByVariable(id);
        if (c.ring_.tag == RingTag::RationalField) {
          if (const_value_q(c.gates_, g.b) == 0) throw DivByZeroConstant(id);
        } else {
          if (const_value_rat(c.gates_, g.b).is_zero()) throw DivByZeroConstant(id);
        }
        c.var_dep_[id] = c.var_dep_[g.a];
        break;
      }
    }
  }
  for (uint32_t out : c.outputs_) {
    if (out >= c.gates_.size()) throw Error("output references gate out of range");
  }
  c.constant_free_ = cfree;
  return c;
}

std::optional<uint32_t> Circuit::var_index(std::string_view name) const {
  for (uint32_t i = 0; i < var_names_.size(); ++i) {
    if (var_names_[i] == name) return i;
  }
  return std::nullopt;
}

bool Circuit::structurally_equal(const Circuit& o) const {
  if (!(ring_ == o.ring_) || gates_.size() != o.gates_.size() || outputs_ != o.outputs_ ||
      var_names_ != o.var_names_) {
    return false;
  }
  for (size_t i = 0; i < gates_.size(); ++i) {
    const Gate& g = gates_[i];
    const Gate& h = o.gates_[i];
    if (g.kind != h.kind || g.a != h.a || g.b != h.b) return false;
    if (g.kind == GateKind::Const && !g.same_payload(h)) return false;
  }
  return true;
}

Metrics metrics(const Circuit& c) {
  Metrics m;
  m.size = c.size();
  const auto& gates = c.gates();
  std::vector<size_t> depth(gates.size(), 0), mdepth(gates.size(), 0);
  for (uint32_t id = 0; id < gates.size(); ++id) {
    const Gate& g = gates[id];
    if (g.kind == GateKind::Var || g.kind == GateKind::Const) continue;
    depth[id] = 1 + std::max(depth[g.a], depth[g.b]);
    mdepth[id] = std::max(mdepth[g.a], mdepth[g.b]) + (g.kind == GateKind::Mul ? 1 : 0);
  }
  const std::vector<mpz_class> degs = syntactic_degrees(c);
  m.syntactic_degree = 0;
  for (size_t i = 0; i < c.outputs().size(); ++i) {
    const uint32_t out = c.outputs()[i];
    m.depth = std::max(m.depth, depth[out]);
    m.multiplicative_depth = std::max(m.multiplicative_depth, mdepth[out]);
    m.syntactic_degree = std::max(m.syntactic_degree, degs[i]);
  }
  return m;
}

std::vector<mpz_class> syntactic_degrees(const Circuit& c) {
  const auto& gates = c.gates();
  std::vector<mpz_class> deg(gates.size());
  for (uint32_t id = 0; id < gates.size(); ++id) {
    const Gate& g = gates[id];
    switch (g.kind) {
      case GateKind::Var:
        deg[id] = 1;
        break;
      case GateKind::Const:
        deg[id] = 0;
        break;
      case GateKind::Add:
        deg[id] = std::max(deg[g.a], deg[g.b]);
        break;
      case GateKind::Mul:
        deg[id] = deg[g.a] + deg[g.b];
        break;
      case GateKind::DivC:
        deg[id] = deg[g.a];
        break;
    }
  }
  std::vector<mpz_class> out;
  out.reserve(c.outputs().size());
  for (uint32_t o : c.outputs()) out.push_back(deg[o]);
  return out;
}

Assignment Assignment::of_z(const std::vector<mpz_class>& vs) {
  Assignment a;
  a.values.assign(vs.begin(), vs.end());
  return a;
}

Assignment Assignment::of_q(const std::vector<mpq_class>& vs) {
  Assignment a;
  a.values.assign(vs.begin(), vs.end());
  return a;
}

Assignment Assignment::of_ratfunc(const std::vector<RatFunc>& vs) {
  Assignment a;
  a.values.assign(vs.begin(), vs.end());
  return a;
}

Assignment Assignment::booleans(uint64_t bits, size_t nvars, const Ring& ring) {
  Assignment a;
  a.values.reserve(nvars);
  for (size_t i = 0; i < nvars; ++i) {
    const long bit = (bits >> i) & 1u;
    switch (ring.tag) {
      case RingTag::IntegerRing:
      case RingTag::PrimeField:
        a.values.emplace_back(mpz_class(bit));
        break;
      case RingTag::RationalField:
        a.values.emplace_back(mpq_class(bit));
        break;
      case RingTag::RationalFunctionField:
        a.values.emplace_back(RatFunc::constant(mpq_class(bit)));
        break;
    }
  }
  return a;
}

namespace {

mpz_class value_to_z(const Value& v) {
  if (const auto* z = std::get_if<mpz_class>(&v)) return *z;
  if (const auto* q = std::get_if<mpq_class>(&v)) {
    if (q->get_den() == 1) return q->get_num();
    throw RingMismatch("non-integer assignment value " + q->get_str() + " for an integer ring");
  }
  throw RingMismatch("rational-function assignment value for an integer ring");
}

mpq_class value_to_q(const Value& v) {
  if (const auto* z = std::get_if<mpz_class>(&v)) return mpq_class(*z);
  if (const auto* q = std::get_if<mpq_class>(&v)) return *q;
  const RatFunc& f = std::get<RatFunc>(v);
  if (f.is_rational()) return f.as_rational();
  throw RingMismatch("rational-function assignment value for ring Q");
}

RatFunc value_to_rat(const Value& v) {
  if (const auto* z = std::get_if<mpz_class>(&v)) return RatFunc::constant(mpq_class(*z));
  if (const auto* q = std::get_if<mpq_class>(&v)) return RatFunc::constant(*q);
  return std::get<RatFunc>(v);
}

}  // namespace

std::vector<Value> evaluate(const Circuit& c, const Assignment& a) {
  if (a.values.size() < c.num_vars()) {
    throw ArityMismatch("assignment values", c.num_vars(), a.values.size());
  }
  const auto& gates = c.gates();
  std::vector<Value> out;
  out.reserve(c.outputs().size());
  switch (c.ring().tag) {
    case RingTag::IntegerRing: {
      std::vector<mpz_class> v(gates.size());
      for (uint32_t id = 0; id < gates.size(); ++id) {
        const Gate& g = gates[id];
        switch (g.kind) {
          case GateKind::Var: v[id] = value_to_z(a.values[g.a]); break;
          case GateKind::Const: v[id] = g.cval.get_num(); break;
          case GateKind::Add: v[id] = v[g.a] + v[g.b]; break;
          case GateKind::Mul: v[id] = v[g.a] * v[g.b]; break;
          case GateKind::DivC: throw RingMismatch("divc gate in a Z circuit");
        }
      }
      for (uint32_t o : c.outputs()) out.emplace_back(v[o]);
      return out;
    }
    case RingTag::PrimeField: {
      const mpz_class& p = c.ring().modulus;
      std::vector<mpz_class> v(gates.size());
      for (uint32_t id = 0; id < gates.size(); ++id) {
        const Gate& g = gates[id];
        switch (g.kind) {
          case GateKind::Var: v[id] = mod_pos(value_to_z(a.values[g.a]), p); break;
          case GateKind::Const: v[id] = g.cval.get_num(); break;  // canonical residue from build
          case GateKind::Add: v[id] = v[g.a] + v[g.b]; if (v[id] >= p) v[id] -= p; break;
          case GateKind::Mul: v[id] = mod_pos(v[g.a] * v[g.b], p); break;
          case GateKind::DivC: throw RingMismatch("divc gate in a GF circuit");
        }
      }
      for (uint32_t o : c.outputs()) out.emplace_back(v[o]);
      return out;
    }
    case RingTag::RationalField: {
      std::vector<mpq_class> v(gates.size());
      for (uint32_t id = 0; id < gates.size(); ++id) {
        const Gate& g = gates[id];
        switch (g.kind) {
          case GateKind::Var: v[id] = value_to_q(a.values[g.a]); break;
          case GateKind::Const: v[id] = g.cval; break;
          case GateKind::Add: v[id] = v[g.a] + v[g.b]; break;
          case GateKind::Mul: v[id] = v[g.a] * v[g.b]; break;
          case GateKind::DivC: v[id] = v[g.a] / v[g.b]; break;
        }
      }
      for (uint32_t o : c.outputs()) out.emplace_back(v[o]);
      return out;
    }
    case RingTag::RationalFunctionField: {
      std::vector<RatFunc> v(gates.size());
      for (uint32_t id = 0; id < gates.size(); ++id) {
        const Gate& g = gates[id];
        switch (g.kind) {
          case GateKind::Var: v[id] = value_to_rat(a.values[g.a]); break;
          case GateKind::Const: v[id] = g.cfun ? *g.cfun : RatFunc::constant(g.cval); break;
          case GateKind::Add: v[id] = v[g.a] + v[g.b]; break;
          case GateKind::Mul: v[id] = v[g.a] * v[g.b]; break;
          case GateKind::DivC: v[id] = v[g.a] / v[g.b]; break;
        }
      }
      for (uint32_t o : c.outputs()) out.emplace_back(v[o]);
      return out;
    }
  }
  throw Error("unreachable ring tag");
}

Value evaluate_single(const Circuit& c, const Assignment& a) {
  return evaluate(c, a).front();
}

Circuit substitute(const Circuit& c, const std::map<uint32_t, const Circuit*>& all_bindings) {
  for (const auto& [idx, sub] : all_bindings) {
    if (idx >= c.num_vars()) throw Error("substitution index out of range");
    if (!(sub->ring() == c.ring())) throw RingMismatch("substituted circuit ring differs from host ring");
    if (sub->outputs().size() != 1) throw Error("substituted circuits must have a single output");
  }

  // Substituting a variable the host never reads is a no-op; skip the graft.
  std::vector<bool> used(c.num_vars(), false);
  for (const Gate& g : c.gates()) {
    if (g.kind == GateKind::Var) used[g.a] = true;
  }
  std::map<uint32_t, const Circuit*> bindings;
  for (const auto& [idx, sub] : all_bindings) {
    if (used[idx]) bindings[idx] = sub;
  }

  // Merged variable space: host names first, then new names from bindings.
  std::vector<std::string> names = c.var_names();
  std::map<std::string, uint32_t> name_idx;
  for (uint32_t i = 0; i < names.size(); ++i) name_idx[names[i]] = i;
  auto intern = [&](const std::string& n) {
    auto it = name_idx.find(n);
    if (it != name_idx.end()) return it->second;
    const uint32_t idx = static_cast<uint32_t>(names.size());
    names.push_back(n);
    name_idx[n] = idx;
    return idx;
  };

  std::vector<Gate> gates;
  std::map<uint32_t, uint32_t> bound_out;  // host var index -> grafted output id
  for (const auto& [idx, sub] : bindings) {
    const uint32_t base = static_cast<uint32_t>(gates.size());
    for (const Gate& g : sub->gates()) {
      Gate h = g;
      if (h.kind == GateKind::Var) {
        h.a = intern(sub->var_names()[h.a]);
      } else if (h.kind != GateKind::Const) {
        h.a += base;
        h.b += base;
      }
      gates.push_back(std::move(h));
    }
    bound_out[idx] = base + sub->output();
  }

  std::vector<uint32_t> remap(c.size());
  for (uint32_t id = 0; id < c.size(); ++id) {
    const Gate& g = c.gate(id);
    if (g.kind == GateKind::Var) {
      auto it = bound_out.find(g.a);
      if (it != bound_out.end()) {
        remap[id] = it->second;
        continue;
      }
    }
    Gate h = g;
    if (h.kind != GateKind::Var && h.kind != GateKind::Const) {
      h.a = remap[h.a];
      h.b = remap[h.b];
    }
    remap[id] = static_cast<uint32_t>(gates.size());
    gates.push_back(std::move(h));
  }

  std::vector<uint32_t> outs;
  outs.reserve(c.outputs().size());
  for (uint32_t o : c.outputs()) outs.push_back(remap[o]);
  return Circuit::build(c.ring(), std::move(gates), std::move(outs), std::move(names));
}

Circuit substitute_by_name(const Circuit& c, const std::map<std::string, const Circuit*>& bindings) {
  std::map<uint32_t, const Circuit*> by_index;
  for (const auto& [name, sub] : bindings) {
    if (auto idx = c.var_index(name)) by_index[*idx] = sub;
  }
  if (by_index.empty()) return c;
  return substitute(c, by_index);
}

Circuit with_var_space(const Circuit& c, std::vector<std::string> names) {
  std::map<std::string, uint32_t> idx;
  for (uint32_t i = 0; i < names.size(); ++i) idx[names[i]] = i;
  std::vector<Gate> gates = c.gates();
  for (Gate& g : gates) {
    if (g.kind != GateKind::Var) continue;
    auto it = idx.find(c.var_names()[g.a]);
    if (it == idx.end()) {
      throw VariableMismatch("variable " + c.var_names()[g.a] + " missing from the new space");
    }
    g.a = it->second;
  }
  return Circuit::build(c.ring(), std::move(gates), c.outputs(), std::move(names));
}

std::pair<Circuit, Circuit> align_vars(const Circuit& a, const Circuit& b) {
  std::vector<std::string> names = a.var_names();
  for (const std::string& n : b.var_names()) {
    if (!a.var_index(n)) names.push_back(n);
  }
  return {with_var_space(a, names), with_var_space(b, names)};
}

Circuit split_on_var(const Circuit& c, const std::string& w) {
  if (c.outputs().size() != 1) throw ArityMismatch("split input outputs", 1, c.outputs().size());
  CircuitBuilder b(c.ring());
  for (const std::string& n : c.var_names()) b.var(n);
  const uint32_t zero = b.constant_i(0);
  const uint32_t one = b.constant_i(1);
  const std::optional<uint32_t> widx = c.var_index(w);
  const size_t sz = c.size();
  // base = the gate as is, zeroed = the gate with w set to 0, deriv = the
  // cofactor of w. The product rule deriv = d_a*base_b + zeroed_a*d_b keeps
  // gate = zeroed + w*deriv an identity at every gate; deriv may read w.
  std::vector<uint32_t> base(sz), zeroed(sz), deriv(sz);
  for (uint32_t id = 0; id < sz; ++id) {
    const Gate& g = c.gate(id);
    switch (g.kind) {
      case GateKind::Var: {
        const uint32_t v = b.var(c.var_names()[g.a]);
        base[id] = v;
        if (widx && g.a == *widx) {
          zeroed[id] = zero;
          deriv[id] = one;
        } else {
          zeroed[id] = v;
          deriv[id] = zero;
        }
        break;
      }
      case GateKind::Const: {
        const uint32_t v = g.cfun ? b.const_rat(*g.cfun) : b.constant(g.cval);
        base[id] = v;
        zeroed[id] = v;
        deriv[id] = zero;
        break;
      }
      case GateKind::Add:
        base[id] = b.add(base[g.a], base[g.b]);
        zeroed[id] = b.add(zeroed[g.a], zeroed[g.b]);
        deriv[id] = b.add(deriv[g.a], deriv[g.b]);
        break;
      case GateKind::Mul:
        base[id] = b.mul(base[g.a], base[g.b]);
        zeroed[id] = b.mul(zeroed[g.a], zeroed[g.b]);
        deriv[id] = b.add(b.mul(deriv[g.a], base[g.b]), b.mul(zeroed[g.a], deriv[g.b]));
        break;
      case GateKind::DivC:
        base[id] = b.divc(base[g.a], base[g.b]);
        zeroed[id] = b.divc(zeroed[g.a], base[g.b]);
        deriv[id] = b.divc(deriv[g.a], base[g.b]);
        break;
    }
  }
  const uint32_t root = c.output();
  return b.take({zeroed[root], deriv[root]});
}

CircuitBuilder::CircuitBuilder(Ring ring, bool dedup, bool fold)
    : ring_(std::move(ring)), dedup_(dedup), fold_(fold) {}

uint32_t CircuitBuilder::push(Gate g, const std::string& key) {
  if (dedup_) {
    auto it = node_cache_.find(key);
    if (it != node_cache_.end()) return it->second;
  }
  const uint32_t id = static_cast<uint32_t>(gates_.size());
  gates_.push_back(std::move(g));
  if (dedup_) node_cache_[key] = id;
  return id;
}

uint32_t CircuitBuilder::var(const std::string& name) {
  uint32_t idx;
  auto it = var_ids_.find(name);
  if (it != var_ids_.end()) {
    idx = it->second;
  } else {
    idx = static_cast<uint32_t>(var_names_.size());
    var_names_.push_back(name);
    var_ids_[name] = idx;
  }
  return push(Gate::var(idx), "v|" + std::to_string(idx));
}

uint32_t CircuitBuilder::constant(const mpq_class& v) {
  return push(Gate::constant(v), "c|" + v.get_str());
}

uint32_t CircuitBuilder::const_y() {
  return push(Gate::constant_y(), "c|y");
}

uint32_t CircuitBuilder::const_rat(const RatFunc& f) {
  if (f.is_rational()) return constant(f.as_rational());
  if (f.is_variable()) return const_y();
  return push(Gate::constant_rat(f), "r|" + f.str());
}

bool CircuitBuilder::is_const(uint32_t id, const mpq_class& v) const {
  const Gate& g = gates_[id];
  return g.kind == GateKind::Const && !g.cfun && g.cval == v;
}

uint32_t CircuitBuilder::add(uint32_t a, uint32_t b) {
  if (fold_) {
    if (is_const(a, 0)) return b;
    if (is_const(b, 0)) return a;
  }
  return push(Gate::add(a, b), "a|" + std::to_string(a) + "|" + std::to_string(b));
}

uint32_t CircuitBuilder::mul(uint32_t a, uint32_t b) {
  if (fold_) {
    if (is_const(a, 0)) return a;
    if (is_const(b, 0)) return b;
    if (is_const(a, 1)) return b;
    if (is_const(b, 1)) return a;
  }
  return push(Gate::mul(a, b), "m|" + std::to_string(a) + "|" + std::to_string(b));
}

uint32_t CircuitBuilder::divc(uint32_t num, uint32_t den) {
  return push(Gate::divc(num, den), "d|" + std::to_string(num) + "|" + std::to_string(den));
}

uint32_t CircuitBuilder::neg(uint32_t a) { return mul(constant(mpq_class(-1)), a); }

uint32_t CircuitBuilder::sub(uint32_t a, uint32_t b) { return add(a, neg(b)); }

uint32_t CircuitBuilder::sum(std::vector<uint32_t> xs) {
  if (xs.empty()) return constant(mpq_class(0));
  while (xs.size() > 1) {
    std::vector<uint32_t> next;
    next.reserve((xs.size() + 1) / 2);
    for (size_t i = 0; i + 1 < xs.size(); i += 2) next.push_back(add(xs[i], xs[i + 1]));
    if (xs.size() % 2 == 1) next.push_back(xs.back());
    xs = std::move(next);
  }
  return xs.front();
}

uint32_t CircuitBuilder::scale(const mpq_class& k, uint32_t a) {
  if (fold_) {
    if (k == 1) return a;
    if (k == 0) return constant(mpq_class(0));
  }
  return mul(constant(k), a);
}

std::vector<uint32_t> CircuitBuilder::import_outputs(const Circuit& c) {
  if (!(c.ring() == ring_)) throw RingMismatch("imported circuit ring differs from builder ring");
  std::vector<uint32_t> map(c.size());
  for (uint32_t id = 0; id < c.size(); ++id) {
    const Gate& g = c.gate(id);
    switch (g.kind) {
      case GateKind::Var: map[id] = var(c.var_names()[g.a]); break;
      case GateKind::Const:
        map[id] = g.cfun ? const_rat(*g.cfun) : constant(g.cval);
        break;
      case GateKind::Add: map[id] = add(map[g.a], map[g.b]); break;
      case GateKind::Mul: map[id] = mul(map[g.a], map[g.b]); break;
      case GateKind::DivC: map[id] = divc(map[g.a], map[g.b]); break;
    }
  }
  std::vector<uint32_t> outs;
  outs.reserve(c.outputs().size());
  for (uint32_t o : c.outputs()) outs.push_back(map[o]);
  return outs;
}

uint32_t CircuitBuilder::import(const Circuit& c) {
  if (c.outputs().size() != 1) throw Error("import expects a single-output circuit");
  return import_outputs(c).front();
}

Circuit CircuitBuilder::take(std::vector<uint32_t> outputs, bool prune,
                             bool enforce_constant_free) const {
  if (outputs.empty()) throw Error("take requires at least one output");
  if (!prune) {
    return Circuit::build(ring_, gates_, std::move(outputs), var_names_, enforce_constant_free);
  }
  std::vector<bool> keep(gates_.size(), false);
  std::vector<uint32_t> stack = outputs;
  while (!stack.empty()) {
    const uint32_t id = stack.back();
    stack.pop_back();
    if (id >= gates_.size() || keep[id]) continue;
    keep[id] = true;
    const Gate& g = gates_[id];
    if (g.kind == GateKind::Add || g.kind == GateKind::Mul || g.kind == GateKind::DivC) {
      stack.push_back(g.a);
      stack.push_back(g.b);
    }
  }
  std::vector<uint32_t> remap(gates_.size(), 0);
  std::vector<Gate> kept;
  for (uint32_t id = 0; id < gates_.size(); ++id) {
    if (!keep[id]) continue;
    Gate g = gates_[id];
    if (g.kind == GateKind::Add || g.kind == GateKind::Mul || g.kind == GateKind::DivC) {
      g.a = remap[g.a];
      g.b = remap[g.b];
    }
    remap[id] = static_cast<uint32_t>(kept.size());
    kept.push_back(std::move(g));
  }
  for (auto& o : outputs) o = remap[o];
  return Circuit::build(ring_, std::move(kept), std::move(outputs), var_names_,
                        enforce_constant_free);
}

}  // namespace proofkit
