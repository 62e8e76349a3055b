// The algebraic-circuit IR: fan-in-2 DAGs over Z, Q, GF(p), or Q(y), with
// construction-time validation, exact evaluation, substitution, and metrics.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "proofkit/ring.hpp"

namespace proofkit {

enum class GateKind : uint8_t { Var, Const, Add, Mul, DivC };

// Operand ids are strictly smaller than the gate's own id; for Var gates `a`
// holds the variable index. Const payload: `cval` for plain rationals, `cfun`
// for Q(y) payloads that are not plain rationals (the constant y, or a
// rational-function leaf).
struct Gate {
  GateKind kind = GateKind::Const;
  uint32_t a = 0;
  uint32_t b = 0;
  mpq_class cval;
  std::shared_ptr<const RatFunc> cfun;

  static Gate var(uint32_t index) { return {GateKind::Var, index, 0, mpq_class(0), nullptr}; }
  static Gate constant(const mpq_class& v) { return {GateKind::Const, 0, 0, v, nullptr}; }
  static Gate constant_y();
  static Gate constant_rat(const RatFunc& f);
  static Gate add(uint32_t l, uint32_t r) { return {GateKind::Add, l, r, mpq_class(0), nullptr}; }
  static Gate mul(uint32_t l, uint32_t r) { return {GateKind::Mul, l, r, mpq_class(0), nullptr}; }
  static Gate divc(uint32_t num, uint32_t den) { return {GateKind::DivC, num, den, mpq_class(0), nullptr}; }

  bool same_payload(const Gate& o) const;
};

// Immutable after build(); all queries are pure.
class Circuit {
 public:
  static Circuit build(Ring ring, std::vector<Gate> gates, std::vector<uint32_t> outputs,
                       std::vector<std::string> var_names, bool enforce_constant_free = false);

  const Ring& ring() const { return ring_; }
  const std::vector<Gate>& gates() const { return gates_; }
  const Gate& gate(uint32_t id) const { return gates_[id]; }
  const std::vector<uint32_t>& outputs() const { return outputs_; }
  uint32_t output() const { return outputs_.front(); }
  const std::vector<std::string>& var_names() const { return var_names_; }
  size_t num_vars() const { return var_names_.size(); }
  bool constant_free() const { return constant_free_; }
  size_t size() const { return gates_.size(); }

  bool is_squaring(uint32_t id) const {
    const Gate& g = gates_[id];
    return g.kind == GateKind::Mul && g.a == g.b;
  }
  std::optional<uint32_t> var_index(std::string_view name) const;
  bool depends_on_vars(uint32_t id) const { return var_dep_[id]; }

  bool structurally_equal(const Circuit& o) const;

 private:
  Ring ring_;
  std::vector<Gate> gates_;
  std::vector<uint32_t> outputs_;
  std::vector<std::string> var_names_;
  std::vector<bool> var_dep_;  // per gate: depends on some variable
  bool constant_free_ = false;
};

struct Metrics {
  size_t size = 0;
  size_t depth = 0;                // edges on the longest leaf-to-output path
  mpz_class syntactic_degree;      // max over outputs
  size_t multiplicative_depth = 0; // max product gates on any output path
};

Metrics metrics(const Circuit& c);
// Per-output syntactic degrees (var -> 1, const -> 0, add -> max, mul -> sum,
// divc -> numerator degree).
std::vector<mpz_class> syntactic_degrees(const Circuit& c);

// Total map from variable index to an exact scalar of the circuit's ring.
// Z and GF(p) take mpz values (residues reduced on the fly), Q takes mpq,
// Q(y) takes RatFunc; mpz/mpq entries are widened where the ring allows it.
struct Assignment {
  std::vector<Value> values;

  static Assignment of_z(const std::vector<mpz_class>& vs);
  static Assignment of_q(const std::vector<mpq_class>& vs);
  static Assignment of_ratfunc(const std::vector<RatFunc>& vs);
  // Boolean assignment: bit i of `bits` is the value of variable i.
  static Assignment booleans(uint64_t bits, size_t nvars, const Ring& ring);
};

std::vector<Value> evaluate(const Circuit& c, const Assignment& a);
Value evaluate_single(const Circuit& c, const Assignment& a);

// Grafts `bindings` (single-output circuits over the same ring) into c at the
// given variable indices; unbound variables are untouched. Variables of the
// bound circuits are merged into the result's space by name.
Circuit substitute(const Circuit& c, const std::map<uint32_t, const Circuit*>& bindings);
Circuit substitute_by_name(const Circuit& c, const std::map<std::string, const Circuit*>& bindings);

// Re-declares the variable space as `names`; every variable the circuit reads
// must be present. Gates and outputs are otherwise unchanged.
Circuit with_var_space(const Circuit& c, std::vector<std::string> names);
// Writes the single-output c as C0 + w*D with C0 free of w (D may still read
// w); returns the two-output circuit {C0, D} over the same variable space.
Circuit split_on_var(const Circuit& c, const std::string& w);
// Rebuilds both circuits over the union of their variable spaces (a's names
// first, then b's new ones).
std::pair<Circuit, Circuit> align_vars(const Circuit& a, const Circuit& b);

// Incremental hash-consing constructor. With `fold` enabled the algebraic
// identities v+0 -> v, v*0 -> 0, v*1 -> v are applied on the fly; no other
// rewriting ever happens.
class CircuitBuilder {
 public:
  explicit CircuitBuilder(Ring ring, bool dedup = true, bool fold = true);

  uint32_t var(const std::string& name);
  uint32_t constant(const mpq_class& v);
  uint32_t constant_i(long v) { return constant(mpq_class(v)); }
  uint32_t const_y();
  uint32_t const_rat(const RatFunc& f);
  uint32_t add(uint32_t a, uint32_t b);
  uint32_t mul(uint32_t a, uint32_t b);
  uint32_t square(uint32_t a) { return mul(a, a); }
  uint32_t divc(uint32_t num, uint32_t den);
  // a - b as a + (-1)*b.
  uint32_t sub(uint32_t a, uint32_t b);
  uint32_t neg(uint32_t a);
  // Balanced binary sum; the empty sum is the constant 0.
  uint32_t sum(std::vector<uint32_t> xs);
  uint32_t scale(const mpq_class& k, uint32_t a);

  // Copies another circuit's output into this builder, merging variables by
  // name. The source must be single-output unless import_outputs is used.
  uint32_t import(const Circuit& c);
  std::vector<uint32_t> import_outputs(const Circuit& c);

  bool is_const(uint32_t id, const mpq_class& v) const;
  const Gate& gate(uint32_t id) const { return gates_[id]; }
  size_t num_nodes() const { return gates_.size(); }
  const std::vector<std::string>& var_names() const { return var_names_; }

  // Extracts a circuit computing `outputs`. With prune, gates unreachable from
  // the outputs are dropped (declared variables are always kept in the space).
  Circuit take(std::vector<uint32_t> outputs, bool prune = true,
               bool enforce_constant_free = false) const;

 private:
  Ring ring_;
  bool dedup_;
  bool fold_;
  std::vector<Gate> gates_;
  std::vector<std::string> var_names_;
  std::map<std::string, uint32_t> var_ids_;     // name -> variable index
  std::map<std::string, uint32_t> node_cache_;  // structural key -> gate id
  uint32_t push(Gate g, const std::string& key);
};

}  // namespace proofkit
