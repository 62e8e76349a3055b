// Ring-level circuit passes: denominator clearing Q -> Z, splitting a circuit
// into a difference of two negation-free halves, and integer gadget builders
// that realize small constant-free circuits for m, 2^n and m^(2^n).
#pragma once

#include <gmpxx.h>

#include "proofkit/circuit.hpp"

namespace proofkit {

struct LiftResult {
  Circuit lifted;     // over Z, division-free; computes M * original
  mpz_class M;        // nonzero integer cleared out of the denominators
  Circuit m_circuit;  // variable-free circuit over Z computing M
};

// Clears all divc gates from a single-output circuit over Q (or Z, where the
// result is structurally identical with M = 1). Division-free subcircuits are
// preserved verbatim; |lifted| <= 4 * |input| and |m_circuit| <= 4 * |input|.
// Inputs with rational constants r/s are handled by lifting the constant to r
// with a denominator contribution of s.
LiftResult q_to_z_lift(const Circuit& c);

enum class SplitMode {
  Halves,       // over Q: var x -> ((x^2+1)/2, (x-1)^2/2); both halves are conic with no protected leaves
  BooleanFlag,  // var x -> (x, 0); halves are conic once every variable is protected
};

struct SplitResult {
  Circuit pos;
  Circuit neg;
  // Node count of the two-output circuit {pos, neg} with sharing intact.
  std::size_t combined_size;
};

// Rewrites a single-output circuit as pos - neg where neither half contains a
// negative constant outside a squaring. Halves mode requires ring Q.
SplitResult minus_normalize(const Circuit& g, SplitMode mode = SplitMode::Halves);

// Constant-free circuit over Z evaluating to m (m >= 1), built from the
// binary expansion of m; size <= 2*ceil(log2 m) + 2.
Circuit tau_int(const mpz_class& m);

// Constant-free circuit over Z evaluating to 2^n for n a power of two,
// built by repeated squaring of 2 = 1 + 1.
Circuit tau_pow2(const mpz_class& n);

// Constant-free circuit over Z evaluating to m^e for e a power of two.
Circuit tau_pow(const mpz_class& m, const mpz_class& e);

}  // namespace proofkit
