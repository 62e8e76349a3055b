#include "proofkit/transforms.hpp"

#include <optional>
#include <vector>

#include "proofkit/errors.hpp"

namespace proofkit {

namespace {

// Exact rational value of every variable-free gate; divc denominators are
// variable-free by the circuit build invariant.
std::vector<std::optional<mpq_class>> const_values_q(const Circuit& c) {
  std::vector<std::optional<mpq_class>> val(c.size());
  for (uint32_t id = 0; id < c.size(); ++id) {
    if (c.depends_on_vars(id)) continue;
    const Gate& g = c.gate(id);
    switch (g.kind) {
      case GateKind::Var:
        break;
      case GateKind::Const:
        val[id] = g.cval;
        break;
      case GateKind::Add:
        val[id] = mpq_class(*val[g.a] + *val[g.b]);
        break;
      case GateKind::Mul:
        val[id] = mpq_class(*val[g.a] * *val[g.b]);
        break;
      case GateKind::DivC:
        if (*val[g.b] == 0) throw DenominatorZero(id);
        val[id] = mpq_class(*val[g.a] / *val[g.b]);
        break;
    }
  }
  return val;
}

}  // namespace

LiftResult q_to_z_lift(const Circuit& c) {
  const RingTag t = c.ring().tag;
  if (t != RingTag::RationalField && t != RingTag::IntegerRing) {
    throw RingMismatch("denominator clearing is defined over Q (or trivially over Z)");
  }
  if (c.outputs().size() != 1) throw Error("denominator clearing expects a single-output circuit");

  // Verbatim replay: no dedup or folding, so division-free subcircuits come
  // out structurally identical and the per-gate node budget is visible.
  CircuitBuilder b(Ring::Z(), /*dedup=*/false, /*fold=*/false);
  const uint32_t one = b.constant_i(1);

  std::vector<uint32_t> lifted(c.size());
  std::vector<uint32_t> mcirc(c.size());
  std::vector<mpz_class> mval(c.size());
  // Numeric value of the lifted gate when the original gate is variable-free.
  std::vector<std::optional<mpz_class>> lval(c.size());

  auto mul_m = [&](uint32_t m, uint32_t x) { return m == one ? x : b.mul(m, x); };

  for (uint32_t id = 0; id < c.size(); ++id) {
    const Gate& g = c.gate(id);
    switch (g.kind) {
      case GateKind::Var:
        lifted[id] = b.var(c.var_names()[g.a]);
        mcirc[id] = one;
        mval[id] = 1;
        break;
      case GateKind::Const: {
        const mpz_class num = g.cval.get_num();
        const mpz_class den = g.cval.get_den();
        lifted[id] = b.constant(mpq_class(num));
        mcirc[id] = den == 1 ? one : b.constant(mpq_class(den));
        mval[id] = den;
        lval[id] = num;
        break;
      }
      case GateKind::Add: {
        const uint32_t u = g.a, w = g.b;
        if (mval[u] == 1 && mval[w] == 1) {
          lifted[id] = b.add(lifted[u], lifted[w]);
          mcirc[id] = one;
          mval[id] = 1;
          if (lval[u] && lval[w]) lval[id] = mpz_class(*lval[u] + *lval[w]);
        } else {
          lifted[id] = b.add(mul_m(mcirc[w], lifted[u]), mul_m(mcirc[u], lifted[w]));
          mcirc[id] = mcirc[u] == one ? mcirc[w]
                     : mcirc[w] == one ? mcirc[u]
                                       : b.mul(mcirc[u], mcirc[w]);
          mval[id] = mval[u] * mval[w];
          if (lval[u] && lval[w]) lval[id] = mpz_class(mval[w] * *lval[u] + mval[u] * *lval[w]);
        }
        break;
      }
      case GateKind::Mul: {
        const uint32_t u = g.a, w = g.b;
        lifted[id] = b.mul(lifted[u], lifted[w]);
        mcirc[id] = mcirc[u] == one ? mcirc[w]
                   : mcirc[w] == one ? mcirc[u]
                                     : b.mul(mcirc[u], mcirc[w]);
        mval[id] = mval[u] * mval[w];
        if (lval[u] && lval[w]) lval[id] = mpz_class(*lval[u] * *lval[w]);
        break;
      }
      case GateKind::DivC: {
        const uint32_t u = g.a, w = g.b;
        if (!lval[w]) throw DenominatorZero(id);
        if (*lval[w] == 0) throw DenominatorZero(id);
        lifted[id] = mul_m(mcirc[w], lifted[u]);
        mcirc[id] = mcirc[u] == one ? lifted[w] : b.mul(mcirc[u], lifted[w]);
        mval[id] = mval[u] * *lval[w];
        if (lval[u]) lval[id] = mpz_class(mval[w] * *lval[u]);
        break;
      }
    }
  }

  const uint32_t root = c.output();
  return LiftResult{b.take({lifted[root]}), mval[root], b.take({mcirc[root]})};
}

SplitResult minus_normalize(const Circuit& g, SplitMode mode) {
  const RingTag t = g.ring().tag;
  if (mode == SplitMode::Halves && t != RingTag::RationalField) {
    throw RingUnsupported("the halves split needs division by 2; use the boolean-flag mode over Z");
  }
  if (mode == SplitMode::BooleanFlag && t != RingTag::RationalField && t != RingTag::IntegerRing) {
    throw RingUnsupported("splitting is defined over ordered rings only");
  }
  if (g.outputs().size() != 1) throw Error("splitting expects a single-output circuit");

  CircuitBuilder b(g.ring());
  const uint32_t zero = b.constant_i(0);
  const uint32_t one = b.constant_i(1);
  const uint32_t half = mode == SplitMode::Halves ? b.constant(mpq_class(1, 2)) : 0;

  const auto cval = const_values_q(g);
  std::vector<uint32_t> pos(g.size()), neg(g.size());

  for (uint32_t id = 0; id < g.size(); ++id) {
    const Gate& gt = g.gate(id);
    switch (gt.kind) {
      case GateKind::Var: {
        const uint32_t x = b.var(g.var_names()[gt.a]);
        if (mode == SplitMode::BooleanFlag) {
          pos[id] = x;
          neg[id] = zero;
        } else {
          pos[id] = b.mul(half, b.add(b.square(x), one));
          neg[id] = b.mul(half, b.square(b.sub(x, one)));
        }
        break;
      }
      case GateKind::Const:
        if (gt.cval >= 0) {
          pos[id] = b.constant(gt.cval);
          neg[id] = zero;
        } else {
          pos[id] = zero;
          neg[id] = b.constant(mpq_class(-gt.cval));
        }
        break;
      case GateKind::Add:
        pos[id] = b.add(pos[gt.a], pos[gt.b]);
        neg[id] = b.add(neg[gt.a], neg[gt.b]);
        break;
      case GateKind::Mul:
        pos[id] = b.add(b.mul(pos[gt.a], pos[gt.b]), b.mul(neg[gt.a], neg[gt.b]));
        neg[id] = b.add(b.mul(pos[gt.a], neg[gt.b]), b.mul(neg[gt.a], pos[gt.b]));
        break;
      case GateKind::DivC: {
        const mpq_class q = *cval[gt.b];
        const uint32_t k = b.constant(mpq_class(1 / abs(q)));
        if (q > 0) {
          pos[id] = b.mul(k, pos[gt.a]);
          neg[id] = b.mul(k, neg[gt.a]);
        } else {
          pos[id] = b.mul(k, neg[gt.a]);
          neg[id] = b.mul(k, pos[gt.a]);
        }
        break;
      }
    }
  }

  const uint32_t p = pos[g.output()];
  const uint32_t n = neg[g.output()];
  return SplitResult{b.take({p}), b.take({n}), b.take({p, n}).size()};
}

Circuit tau_int(const mpz_class& m) {
  if (m < 1) throw BadParams("integer gadget requires m >= 1");
  CircuitBuilder b(Ring::Z(), /*dedup=*/false, /*fold=*/false);
  const uint32_t one = b.constant_i(1);
  uint32_t acc = one;
  const auto nbits = mpz_sizeinbase(m.get_mpz_t(), 2);
  for (long i = static_cast<long>(nbits) - 2; i >= 0; --i) {
    acc = b.add(acc, acc);
    if (mpz_tstbit(m.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) acc = b.add(acc, one);
  }
  return b.take({acc});
}

Circuit tau_pow2(const mpz_class& n) {
  if (n < 1 || mpz_popcount(n.get_mpz_t()) != 1) {
    throw BadParams("the power-of-two gadget requires the exponent to be a power of two");
  }
  CircuitBuilder b(Ring::Z(), /*dedup=*/false, /*fold=*/false);
  const uint32_t one = b.constant_i(1);
  uint32_t acc = b.add(one, one);
  for (mpz_class k = 1; k < n; k *= 2) acc = b.square(acc);
  return b.take({acc});
}

Circuit tau_pow(const mpz_class& m, const mpz_class& e) {
  if (m < 1) throw BadParams("power gadget requires base >= 1");
  if (e < 1 || mpz_popcount(e.get_mpz_t()) != 1) {
    throw BadParams("power gadget requires the exponent to be a power of two");
  }
  CircuitBuilder b(Ring::Z(), /*dedup=*/false, /*fold=*/false);
  const uint32_t one = b.constant_i(1);
  uint32_t acc = one;
  const auto nbits = mpz_sizeinbase(m.get_mpz_t(), 2);
  for (long i = static_cast<long>(nbits) - 2; i >= 0; --i) {
    acc = b.add(acc, acc);
    if (mpz_tstbit(m.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) acc = b.add(acc, one);
  }
  for (mpz_class k = 1; k < e; k *= 2) acc = b.square(acc);
  return b.take({acc});
}

}  // namespace proofkit
