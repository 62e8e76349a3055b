// Exact rational functions in y over Q, the scalar type of the Q(y) ring.
#pragma once

#include <string>

#include <gmpxx.h>

#include "proofkit/upoly.hpp"

namespace proofkit {

// Canonical form: numerator and denominator share no common factor and the
// denominator is monic. Equality of canonical forms is structural.
class RatFunc {
 public:
  RatFunc() : num_(), den_(UPoly(mpq_class(1))) {}
  RatFunc(UPoly num, UPoly den);
  static RatFunc constant(const mpq_class& c);
  static RatFunc variable();

  const UPoly& num() const { return num_; }
  const UPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_rational() const { return den_.degree() == 0 && num_.is_constant(); }
  bool is_variable() const;
  mpq_class as_rational() const;

  bool defined_at(const mpq_class& point) const { return den_.eval(point) != 0; }
  mpq_class eval(const mpq_class& point) const;

  RatFunc operator-() const;
  friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
  RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
  RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
  RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
  bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }

  std::string str() const;

 private:
  UPoly num_;
  UPoly den_;
  void normalize();
};

}  // namespace proofkit
