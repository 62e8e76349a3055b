// Dense univariate polynomials over Q, the coefficient layer of rational functions in y.
#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>

namespace proofkit {

// Coefficients are stored degree-ascending with no trailing zeros; the zero
// polynomial is the empty vector and has degree -1.
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(const mpq_class& c);
  static UPoly variable();
  static UPoly from_coeffs(std::vector<mpq_class> coeffs);

  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const { return coeffs_.size() <= 1; }
  long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
  const std::vector<mpq_class>& coeffs() const { return coeffs_; }
  mpq_class coeff(size_t i) const;
  mpq_class lead() const;
  mpq_class eval(const mpq_class& point) const;

  UPoly operator-() const;
  UPoly& operator+=(const UPoly& o);
  UPoly& operator-=(const UPoly& o);
  friend UPoly operator+(const UPoly& a, const UPoly& b);
  friend UPoly operator-(const UPoly& a, const UPoly& b);
  friend UPoly operator*(const UPoly& a, const UPoly& b);
  bool operator==(const UPoly& o) const { return coeffs_ == o.coeffs_; }

  // Field division: a = q*b + r with deg r < deg b. b must be nonzero.
  static void divmod(const UPoly& a, const UPoly& b, UPoly& q, UPoly& r);
  // Monic greatest common divisor; gcd(0,0) = 0.
  static UPoly gcd(UPoly a, UPoly b);

  std::string str(const std::string& var = "y") const;

 private:
  std::vector<mpq_class> coeffs_;
  void trim();
};

}  // namespace proofkit
