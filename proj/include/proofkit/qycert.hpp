// Linear certificates over Q(y): the recursive generator for weighted sum
// systems y + sum a_i x_i, specialization at rational points, the P/Q
// decomposition of Q(y) circuits into integer circuits, and the denominator
// root census behind the weighted-sum lower bound mechanism.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "proofkit/circuit.hpp"
#include "proofkit/ips.hpp"
#include "proofkit/systems.hpp"
#include "proofkit/upoly.hpp"

namespace proofkit {

// Cofactors aligned with effective_axioms(system): the leading axiom
// y + sum a_i x_i followed by the booleanity rows. sum F_i * H_i = 1 exactly.
struct QyCert {
  IpsLinCert cert;
  AxiomSystem system;
};

// Builds the certificate for y + sum a_i x_i = 0 with boolean axioms by the
// shifted-constant recursion: the base cofactor for y + t is 1/(y + t), one
// variable is mixed in per level, and the (k, i, t) family is memoized so the
// circuit size stays polynomial in sum a_i. Throws BadParams when some
// a_i < 1 and BudgetExceeded when sum a_i exceeds the budget.
QyCert gen_cert(const std::vector<mpz_class>& a, size_t budget = 65536);

// Reads the coefficients a_i back from the leading axiom y + sum a_i x_i.
// Throws BadParams when the axiom has a different shape.
std::vector<mpz_class> linear_axiom_coeffs(const AxiomSystem& system);

// Substitutes y := c in every cofactor and in the system, yielding a
// certificate over Q for c + sum a_i x_i = 0. Throws DenominatorRoot when c
// is a pole of some cofactor.
std::pair<IpsLinCert, AxiomSystem> specialize(const QyCert& cert, const mpq_class& c);

// Interprets the variable named y of a Z or Q circuit as the field constant
// y of Q(y); the remaining variables keep their order.
Circuit to_qy(const Circuit& c);

// Rewrites every rational-function constant as an explicit division of two
// integer-coefficient polynomials in the constant y. The decomposition size
// bound is stated against circuits of this form.
Circuit expand_ratfunc_leaves(const Circuit& c);

// Gate-by-gate numerator/denominator bookkeeping: returns (P, Q) over Z with
// f = P/Q exactly, P over the input variables plus y and Q over y alone.
// Each output has size < 3 times the size of expand_ratfunc_leaves(input).
std::pair<Circuit, Circuit> qy_decompose(const Circuit& c);

// Denominator product Q(y) of a certificate for the weighted system with
// a_i = 2^{i-1}, together with its verified integer roots -k, 0 <= k < 2^n.
struct RootCensus {
  UPoly denominator_product;
  std::vector<mpz_class> roots;
};

// Decomposes every cofactor, forms Q(y) = prod_j Q_j and confirms for each
// 0 <= k < 2^n that substituting the bit expansion of k turns the cleared
// certificate identity into (y + k) * P_0(bits) * prod_{j>=1} Q_j = Q(y),
// hence Q(-k) = 0. Throws MissingRoot(k) when the identity fails, which
// signals an invalid certificate.
RootCensus denominator_root_census(const QyCert& cert, uint32_t n);

}  // namespace proofkit
