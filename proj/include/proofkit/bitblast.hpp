// Two's-complement bit-vector lowering for constant-free circuits over Z:
// arithmetized boolean connectives, carry-lookahead addition, absolute value,
// signed product, and the per-gate BIT construction with its VAL inverse.
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "proofkit/circuit.hpp"

namespace proofkit {

// Boolean formula tree, the input language of arithmetize().
struct BoolExpr;
using BoolPtr = std::shared_ptr<const BoolExpr>;

struct BoolExpr {
  enum class Kind { Var, Const, And, Or, Xor };
  Kind kind;
  std::string name;    // Var
  bool value = false;  // Const
  BoolPtr lhs, rhs;    // And / Or / Xor
};

BoolPtr bool_var(std::string name);
BoolPtr bool_const(bool v);
BoolPtr bool_and(BoolPtr a, BoolPtr b);
BoolPtr bool_or(BoolPtr a, BoolPtr b);
BoolPtr bool_xor(BoolPtr a, BoolPtr b);

// Standard arithmetization over Z: and -> u*v, or -> 1-(1-u)(1-v),
// xor -> u+v-2uv. On boolean assignments the result is boolean and agrees
// with the formula; shared subtrees stay shared.
Circuit arithmetize(const BoolPtr& b);

// Node ids of bit circuits inside a BitBlaster's builder, least significant
// first; the last entry is the sign bit.
using BitVec = std::vector<uint32_t>;

inline constexpr size_t kDefaultLengthBudget = 256;

// Builds all bit circuits inside one shared constant-free builder over Z, so
// identical bits collapse and carry chains are reused across gates.
class BitBlaster {
 public:
  explicit BitBlaster(size_t length_budget = kDefaultLengthBudget);

  CircuitBuilder& builder() { return b_; }

  // Arithmetized connectives on node ids. Constant operands fold, and xor
  // avoids the coefficient 2 by adding a shared (-1)*uv node twice, so the
  // builder stays constant-free.
  uint32_t bit_and(uint32_t u, uint32_t v);
  uint32_t bit_or(uint32_t u, uint32_t v);
  uint32_t bit_xor(uint32_t u, uint32_t v);
  uint32_t bit_not(uint32_t u);

  // Sign extension to length t (t >= v.size()).
  BitVec pad(BitVec v, size_t t) const;

  // [x, 0] for a fresh or existing variable.
  BitVec from_var(const std::string& name);
  // Exact two's-complement encoding, minimum length 2.
  BitVec from_const(const mpz_class& value);

  // Carry-lookahead sum after padding to a common length t; t+1 output bits.
  // The carry nodes are built once and reused, so the cost is O(t) gates.
  BitVec add(BitVec a, BitVec b);
  // The recursive carry chain of a+b after padding to a common length t:
  // entry 0 is the constant 0, entry i the carry into position i. These are
  // exactly the nodes add() consumes.
  std::vector<uint32_t> carries(const BitVec& a, const BitVec& b);
  // The i-th carry of a+b as a disjunction over the position r < i that
  // generates it; reference form for differential tests, O(t^2) gates.
  uint32_t carry_dnf(const BitVec& a, const BitVec& b, size_t i);

  // |value(a)| on t+1 bits: flip by the sign mask after adding it.
  BitVec abs(const BitVec& a);

  // Product of two length-t vectors with zero sign bits: shifted partial
  // products summed sequentially; 2t output bits.
  BitVec prd_nonneg(const BitVec& a, const BitVec& b);
  // Signed product via absolute values and a final sign fixup; operands are
  // padded to a common length t and the result has 2t+3 bits.
  BitVec prd(BitVec a, BitVec b);

  struct BitsResult {
    std::vector<BitVec> outputs;   // one vector per circuit output
    std::vector<size_t> lengths;   // syntactic length per source gate
  };
  // Per-gate lowering of a circuit over Z: var -> [x, 0], const -> literal
  // bits, add -> add(), mul -> prd(). Throws LengthBudgetExceeded when a
  // gate's syntactic length would exceed the budget.
  BitsResult build_bits(const Circuit& f);

  // Multi-output circuit of the bits themselves, least significant first.
  Circuit take_bits(const BitVec& v) const;
  // Valuation node sum(2^i * v_i) - 2^(k-1) * v_{k-1} (plain constants).
  uint32_t val_node(const BitVec& v);
  Circuit take_val(const BitVec& v);

 private:
  size_t budget_;
  CircuitBuilder b_;
  uint32_t zero_;
  uint32_t one_;
};

// Most significant bit of BITS(f) for a single-output circuit over Z.
Circuit sign_bit_circuit(const Circuit& f, size_t length_budget = kDefaultLengthBudget);

}  // namespace proofkit
