// Polynomial identity testing: exact sparse expansion for small circuits and
// randomized evaluation over a large prime field for everything else. Every
// proof verifier in the toolkit reduces to these two decision procedures.
#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "proofkit/circuit.hpp"
#include "proofkit/sparse_poly.hpp"

namespace proofkit {

enum class PitMode : uint8_t { Exact, Randomized };

inline constexpr std::size_t kDefaultExpandBudget = std::size_t{1} << 20;

struct PitOptions {
  PitMode mode = PitMode::Exact;
  uint32_t trials = 1;
  // Per-call false-"equal" bound <= 2^-confidence_bits (with trials = 1).
  uint32_t confidence_bits = 64;
  uint64_t seed = 0;
  std::size_t expand_budget = kDefaultExpandBudget;
  // Refuse randomized runs that would need a sampling prime beyond this size.
  uint32_t max_field_bits = 4096;
};

struct PitVerdict {
  bool equal = false;
  bool exact = true;
  uint32_t trials = 0;             // randomized mode only
  mpz_class field_size;            // sampling prime in randomized mode, else 0
  mpq_class error_bound;           // exact rational; 0 in exact mode
  std::vector<mpz_class> witness;  // distinguishing point, when a randomized run refutes
};

// Exact formal polynomial of each output; divc gates fold into coefficients.
// Throws BudgetExceeded when any intermediate polynomial outgrows the budget.
std::vector<SparsePoly> expand_outputs(const Circuit& c,
                                       std::size_t budget = kDefaultExpandBudget);
// Single-output convenience form.
SparsePoly expand(const Circuit& c, std::size_t budget = kDefaultExpandBudget);

// Inverse direction: a circuit over the given space computing p as a sum of
// monomial products. Rational-function coefficients are not representable.
Circuit circuit_from_poly(const SparsePoly& p, const Ring& ring,
                          const std::vector<std::string>& names);

// Decides whether a and b compute identical formal polynomials. Both circuits
// must share the ring and the declared variable set (align_vars first when
// they do not). Randomized mode needs Z, Q or GF(p); the sampling prime is
// sized so the reported Schwartz-Zippel bound is sound even against
// coefficient collapse modulo the prime.
PitVerdict pit_equal(const Circuit& a, const Circuit& b, const PitOptions& opts = {});

PitVerdict is_zero(const Circuit& c, const PitOptions& opts = {});

}  // namespace proofkit
