// Sparse multivariate polynomials with exact coefficients, the exact side of
// polynomial identity testing and the value domain of PS/LS proof replay.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "proofkit/ratfunc.hpp"
#include "proofkit/ring.hpp"

namespace proofkit {

// Coefficient domain: rationals for Z, Q and GF(p) (GF coefficients are kept
// as canonical residues in [0,p)), univariate rational functions for Q(y).
using Coeff = std::variant<mpq_class, RatFunc>;

Coeff coeff_zero(const Ring& ring);
Coeff coeff_one(const Ring& ring);
Coeff coeff_canon(const Ring& ring, Coeff c);
Coeff coeff_add(const Ring& ring, const Coeff& a, const Coeff& b);
Coeff coeff_mul(const Ring& ring, const Coeff& a, const Coeff& b);
Coeff coeff_neg(const Ring& ring, const Coeff& a);
Coeff coeff_inv(const Ring& ring, const Coeff& a);
bool coeff_is_zero(const Coeff& c);
bool coeff_eq(const Coeff& a, const Coeff& b);
std::string coeff_str(const Coeff& c);

class SparsePoly {
 public:
  using Exps = std::vector<uint32_t>;

  // Graded lexicographic order, leading (largest) term first.
  struct TermOrder {
    bool operator()(const Exps& a, const Exps& b) const;
  };
  using TermMap = std::map<Exps, Coeff, TermOrder>;

  SparsePoly(Ring ring, std::vector<std::string> var_names);
  static SparsePoly constant(Ring ring, std::vector<std::string> var_names, Coeff c);
  static SparsePoly variable(Ring ring, std::vector<std::string> var_names, uint32_t index);

  const Ring& ring() const { return ring_; }
  const std::vector<std::string>& var_names() const { return var_names_; }
  uint32_t nvars() const { return static_cast<uint32_t>(var_names_.size()); }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t num_terms() const { return terms_.size(); }
  // Total degree of the leading term; 0 for the zero polynomial.
  mpz_class total_degree() const;
  Coeff coeff_at(const Exps& e) const;

  // Adds delta to the coefficient of monomial e, dropping the term if it cancels.
  void add_term(const Exps& e, const Coeff& delta);

  SparsePoly& operator+=(const SparsePoly& o);
  SparsePoly& operator-=(const SparsePoly& o);
  SparsePoly operator+(const SparsePoly& o) const;
  SparsePoly operator-(const SparsePoly& o) const;
  SparsePoly operator*(const SparsePoly& o) const;
  SparsePoly operator-() const;
  SparsePoly scaled(const Coeff& k) const;
  // Multiplies by k * prod_i x_i^{e[i]}.
  SparsePoly mul_monomial(const Exps& e, const Coeff& k) const;
  bool operator==(const SparsePoly& o) const;
  bool operator!=(const SparsePoly& o) const { return !(*this == o); }

  // Exact evaluation; point has one value per variable.
  Coeff eval(const std::vector<Coeff>& point) const;

  std::string str() const;

 private:
  Ring ring_;
  std::vector<std::string> var_names_;
  TermMap terms_;

  void check_compatible(const SparsePoly& o) const;
};

// Re-declares the variable space as `names`, permuting exponent columns by
// name; every variable carrying a nonzero exponent must be present.
SparsePoly poly_with_var_space(const SparsePoly& p, std::vector<std::string> names);

// Textual form, one term per line: "<coeff> <e1> ... <en>" with the exponent
// of every variable listed in declared order. The zero polynomial has no
// lines. Rational-function coefficients are not representable.
std::string poly_to_lines(const SparsePoly& p);
SparsePoly poly_from_lines(const std::string& text, const Ring& ring,
                           std::vector<std::string> var_names);

}  // namespace proofkit
