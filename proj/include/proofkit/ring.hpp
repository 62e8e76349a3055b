// Coefficient ring tags and the exact scalar value type used by evaluation.
#pragma once

#include <string>
#include <variant>

#include <gmpxx.h>

#include "proofkit/ratfunc.hpp"

namespace proofkit {

enum class RingTag { IntegerRing, RationalField, PrimeField, RationalFunctionField };

struct Ring {
  RingTag tag = RingTag::RationalField;
  mpz_class modulus;  // engaged only for PrimeField, always prime

  static Ring Z() { return {RingTag::IntegerRing, 0}; }
  static Ring Q() { return {RingTag::RationalField, 0}; }
  static Ring GF(const mpz_class& p);
  static Ring Qy() { return {RingTag::RationalFunctionField, 0}; }

  bool operator==(const Ring& o) const { return tag == o.tag && modulus == o.modulus; }
  bool ordered() const { return tag == RingTag::IntegerRing || tag == RingTag::RationalField; }
  std::string str() const;
};

// One exact scalar: mpz for Z and GF(p) residues, mpq for Q, RatFunc for Q(y).
using Value = std::variant<mpz_class, mpq_class, RatFunc>;

std::string value_str(const Value& v);

}  // namespace proofkit
