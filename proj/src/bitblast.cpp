// Bit-vector lowering: arithmetization, CAR/ADD, ABS, PRD, per-gate BIT, VAL.
#include "proofkit/bitblast.hpp"

#include <map>
#include <utility>

#include "proofkit/errors.hpp"

namespace proofkit {

namespace {

BoolPtr bool_node(BoolExpr e) { return std::make_shared<const BoolExpr>(std::move(e)); }

}  // namespace

BoolPtr bool_var(std::string name) {
  BoolExpr e;
  e.kind = BoolExpr::Kind::Var;
  e.name = std::move(name);
  return bool_node(std::move(e));
}

BoolPtr bool_const(bool v) {
  BoolExpr e;
  e.kind = BoolExpr::Kind::Const;
  e.value = v;
  return bool_node(std::move(e));
}

static BoolPtr bool_binary(BoolExpr::Kind k, BoolPtr a, BoolPtr b) {
  BoolExpr e;
  e.kind = k;
  e.lhs = std::move(a);
  e.rhs = std::move(b);
  return bool_node(std::move(e));
}

BoolPtr bool_and(BoolPtr a, BoolPtr b) { return bool_binary(BoolExpr::Kind::And, std::move(a), std::move(b)); }
BoolPtr bool_or(BoolPtr a, BoolPtr b) { return bool_binary(BoolExpr::Kind::Or, std::move(a), std::move(b)); }
BoolPtr bool_xor(BoolPtr a, BoolPtr b) { return bool_binary(BoolExpr::Kind::Xor, std::move(a), std::move(b)); }

static uint32_t arith_rec(BitBlaster& bb, const BoolExpr* e,
                          std::map<const BoolExpr*, uint32_t>& memo) {
  auto it = memo.find(e);
  if (it != memo.end()) return it->second;
  uint32_t id = 0;
  switch (e->kind) {
    case BoolExpr::Kind::Var:
      id = bb.builder().var(e->name);
      break;
    case BoolExpr::Kind::Const:
      id = bb.builder().constant_i(e->value ? 1 : 0);
      break;
    case BoolExpr::Kind::And:
      id = bb.bit_and(arith_rec(bb, e->lhs.get(), memo), arith_rec(bb, e->rhs.get(), memo));
      break;
    case BoolExpr::Kind::Or:
      id = bb.bit_or(arith_rec(bb, e->lhs.get(), memo), arith_rec(bb, e->rhs.get(), memo));
      break;
    case BoolExpr::Kind::Xor:
      id = bb.bit_xor(arith_rec(bb, e->lhs.get(), memo), arith_rec(bb, e->rhs.get(), memo));
      break;
  }
  memo.emplace(e, id);
  return id;
}

Circuit arithmetize(const BoolPtr& b) {
  BitBlaster bb;
  std::map<const BoolExpr*, uint32_t> memo;
  uint32_t root = arith_rec(bb, b.get(), memo);
  return bb.builder().take({root});
}

BitBlaster::BitBlaster(size_t length_budget)
    : budget_(length_budget), b_(Ring::Z()) {
  zero_ = b_.constant_i(0);
  one_ = b_.constant_i(1);
}

uint32_t BitBlaster::bit_and(uint32_t u, uint32_t v) { return b_.mul(u, v); }

uint32_t BitBlaster::bit_not(uint32_t u) {
  if (b_.is_const(u, 0)) return one_;
  if (b_.is_const(u, 1)) return zero_;
  return b_.sub(one_, u);
}

uint32_t BitBlaster::bit_or(uint32_t u, uint32_t v) {
  if (b_.is_const(u, 0)) return v;
  if (b_.is_const(v, 0)) return u;
  if (b_.is_const(u, 1) || b_.is_const(v, 1)) return one_;
  return bit_not(b_.mul(bit_not(u), bit_not(v)));
}

uint32_t BitBlaster::bit_xor(uint32_t u, uint32_t v) {
  if (b_.is_const(u, 0)) return v;
  if (b_.is_const(v, 0)) return u;
  if (b_.is_const(u, 1)) return bit_not(v);
  if (b_.is_const(v, 1)) return bit_not(u);
  uint32_t minus_uv = b_.neg(b_.mul(u, v));
  return b_.add(b_.add(u, v), b_.add(minus_uv, minus_uv));
}

BitVec BitBlaster::pad(BitVec v, size_t t) const {
  while (v.size() < t) v.push_back(v.back());
  return v;
}

BitVec BitBlaster::from_var(const std::string& name) { return {b_.var(name), zero_}; }

BitVec BitBlaster::from_const(const mpz_class& value) {
  size_t k = 2;
  auto fits = [&](size_t bits) {
    mpz_class lo = mpz_class(1) << (bits - 1);
    return value >= -lo && value < lo;
  };
  while (!fits(k)) ++k;
  mpz_class residue = value;
  if (residue < 0) residue += mpz_class(1) << k;
  BitVec out;
  for (size_t i = 0; i < k; ++i)
    out.push_back(mpz_tstbit(residue.get_mpz_t(), i) ? one_ : zero_);
  return out;
}

std::vector<uint32_t> BitBlaster::carries(const BitVec& a, const BitVec& b) {
  size_t t = std::max(a.size(), b.size());
  BitVec ap = pad(a, t);
  BitVec bp = pad(b, t);
  std::vector<uint32_t> car(t + 1);
  car[0] = zero_;
  for (size_t i = 1; i <= t; ++i) {
    uint32_t gen = bit_and(ap[i - 1], bp[i - 1]);
    uint32_t prop = bit_and(bit_or(ap[i - 1], bp[i - 1]), car[i - 1]);
    car[i] = bit_or(gen, prop);
  }
  return car;
}

BitVec BitBlaster::add(BitVec a, BitVec b) {
  size_t t = std::max(a.size(), b.size());
  std::vector<uint32_t> car = carries(a, b);
  BitVec ap = pad(std::move(a), t + 1);
  BitVec bp = pad(std::move(b), t + 1);
  BitVec out(t + 1);
  for (size_t i = 0; i <= t; ++i) out[i] = bit_xor(bit_xor(ap[i], bp[i]), car[i]);
  return out;
}

uint32_t BitBlaster::carry_dnf(const BitVec& a, const BitVec& b, size_t i) {
  size_t t = std::max(a.size(), b.size());
  BitVec ap = pad(a, t);
  BitVec bp = pad(b, t);
  uint32_t acc = zero_;
  for (size_t r = 0; r < i; ++r) {
    uint32_t term = bit_and(ap[r], bp[r]);
    for (size_t k = r + 1; k < i; ++k) term = bit_and(term, bit_or(ap[k], bp[k]));
    acc = bit_or(acc, term);
  }
  return acc;
}

BitVec BitBlaster::abs(const BitVec& a) {
  uint32_t s = a.back();
  BitVec mask(a.size(), s);
  BitVec sum = add(a, mask);
  for (uint32_t& bit : sum) bit = bit_xor(bit, s);
  return sum;
}

BitVec BitBlaster::prd_nonneg(const BitVec& a, const BitVec& b) {
  size_t t = std::max(a.size(), b.size());
  BitVec ap = pad(a, t);
  BitVec bp = pad(b, t);
  BitVec result;
  for (size_t i = 0; i < t; ++i) {
    BitVec partial(t + i);
    for (size_t j = 0; j < i; ++j) partial[j] = zero_;
    for (size_t j = i; j < t + i; ++j) partial[j] = bit_and(ap[j - i], bp[i]);
    result = i == 0 ? std::move(partial) : add(std::move(partial), std::move(result));
  }
  return pad(std::move(result), 2 * t);
}

BitVec BitBlaster::prd(BitVec a, BitVec b) {
  size_t t = std::max(a.size(), b.size());
  a = pad(std::move(a), t);
  b = pad(std::move(b), t);
  uint32_t s = bit_xor(a.back(), b.back());
  BitVec product = prd_nonneg(abs(a), abs(b));
  for (uint32_t& bit : product) bit = bit_xor(bit, s);
  return add(std::move(product), BitVec{s, zero_});
}

BitBlaster::BitsResult BitBlaster::build_bits(const Circuit& f) {
  if (f.ring().tag != RingTag::IntegerRing) throw RingMismatch("build_bits expects a circuit over Z");
  // Mirror the source variable space up front so extracted circuits align
  // with f's assignment order.
  for (const std::string& name : f.var_names()) b_.var(name);
  std::vector<BitVec> bits(f.size());
  std::vector<size_t> lengths(f.size());
  for (uint32_t id = 0; id < f.size(); ++id) {
    const Gate& g = f.gate(id);
    switch (g.kind) {
      case GateKind::Var:
        bits[id] = from_var(f.var_names()[g.a]);
        break;
      case GateKind::Const:
        bits[id] = from_const(mpz_class(g.cval.get_num()));
        break;
      case GateKind::Add: {
        size_t t = std::max(bits[g.a].size(), bits[g.b].size());
        if (t + 1 > budget_) throw LengthBudgetExceeded(t + 1, budget_);
        bits[id] = add(bits[g.a], bits[g.b]);
        break;
      }
      case GateKind::Mul: {
        size_t t = std::max(bits[g.a].size(), bits[g.b].size());
        if (2 * t + 3 > budget_) throw LengthBudgetExceeded(2 * t + 3, budget_);
        bits[id] = prd(bits[g.a], bits[g.b]);
        break;
      }
      case GateKind::DivC:
        throw RingMismatch("build_bits: division gate in a circuit over Z");
    }
    if (bits[id].size() > budget_) throw LengthBudgetExceeded(bits[id].size(), budget_);
    lengths[id] = bits[id].size();
  }
  BitsResult r;
  r.lengths = std::move(lengths);
  for (uint32_t out : f.outputs()) r.outputs.push_back(bits[out]);
  return r;
}

Circuit BitBlaster::take_bits(const BitVec& v) const { return b_.take({v.begin(), v.end()}); }

uint32_t BitBlaster::val_node(const BitVec& v) {
  std::vector<uint32_t> terms;
  mpz_class w = 1;
  for (size_t i = 0; i + 1 < v.size(); ++i, w <<= 1) terms.push_back(b_.scale(mpq_class(w), v[i]));
  terms.push_back(b_.scale(mpq_class(-w), v.back()));
  return b_.sum(std::move(terms));
}

Circuit BitBlaster::take_val(const BitVec& v) { return b_.take({val_node(v)}); }

Circuit sign_bit_circuit(const Circuit& f, size_t length_budget) {
  if (f.outputs().size() != 1) throw ArityMismatch("sign_bit outputs", 1, f.outputs().size());
  BitBlaster bb(length_budget);
  BitBlaster::BitsResult r = bb.build_bits(f);
  return bb.take_bits({r.outputs[0].back()});
}

}  // namespace proofkit
