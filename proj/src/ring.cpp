#include "proofkit/ring.hpp"

#include "proofkit/errors.hpp"

namespace proofkit {

Ring Ring::GF(const mpz_class& p) {
  if (p < 2 || mpz_probab_prime_p(p.get_mpz_t(), 32) == 0) {
    throw BadParams("GF modulus " + p.get_str() + " is not prime");
  }
  return {RingTag::PrimeField, p};
}

std::string Ring::str() const {
  switch (tag) {
    case RingTag::IntegerRing:
      return "Z";
    case RingTag::RationalField:
      return "Q";
    case RingTag::PrimeField:
      return "GF " + modulus.get_str();
    case RingTag::RationalFunctionField:
      return "Q(y)";
  }
  return "?";
}

std::string value_str(const Value& v) {
  if (const auto* z = std::get_if<mpz_class>(&v)) return z->get_str();
  if (const auto* q = std::get_if<mpq_class>(&v)) return q->get_str();
  return std::get<RatFunc>(v).str();
}

}  // namespace proofkit
