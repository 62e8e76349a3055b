// Static Positivstellensatz refutations and dynamic LS-style derivations:
// exact replay verifiers over sparse polynomials and compilers into conic
// proofs.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "proofkit/cps.hpp"
#include "proofkit/sparse_poly.hpp"
#include "proofkit/systems.hpp"

namespace proofkit {

// One cone summand: the product of the inequalities listed in `subset`
// (1-based indices, deduplicated and sorted on construction from text) times
// the sum of the squares of `squares`.
struct ConeTerm {
  std::vector<size_t> subset;
  std::vector<SparsePoly> squares;
};

// Certificate of sum_i p_i f_i + sum_zeta (prod_{j in zeta} h_j)(sum_k s_k^2)
// = -1 with f_i the effective equalities and h_j the inequalities. The
// sos_restricted flag confines every subset to at most one inequality.
struct PsRefutation {
  std::vector<SparsePoly> cofactors;
  std::vector<ConeTerm> cone;
  bool sos_restricted = false;
};

// sum_i |p_i| + sum_zeta |sum_k s_k^2|, counting monomials after expansion.
size_t ps_monomial_size(const PsRefutation& r);

// Exact check that the certificate identity holds. Throws ArityMismatch on a
// cofactor count mismatch, BadSubsetIndex on an out-of-range subset entry and
// NotSoS when sos_restricted meets a subset of size two or more.
bool verify_ps(const PsRefutation& r, const AxiomSystem& equalities,
               const InequalitySystem& inequalities);

// Compiles the certificate into a conic proof over the doubled equalities
// followed by the user inequalities. Monomials multiplying an equality or
// inequality placeholder are re-rooted at the boolean x >= 0 placeholders, so
// the equality system must carry booleans whenever such a monomial is
// non-constant. Output size is linear in the monomial size.
CpsProof ps_to_cps(const PsRefutation& r, const AxiomSystem& equalities,
                   const InequalitySystem& inequalities);

enum class LsRule : uint8_t { Axiom, SquareAxiom, Sum, ScaleNonneg, Product };

std::string ls_rule_str(LsRule r);

// One derivation line: the stated polynomial plus its justification. i and j
// are 1-based axiom or premise line indices; alpha is the ScaleNonneg factor;
// root is the SquareAxiom root h with poly = h^2.
struct LsLine {
  SparsePoly poly;
  LsRule rule = LsRule::Axiom;
  size_t i = 0;
  size_t j = 0;
  mpz_class alpha;
  std::optional<SparsePoly> root;
};

struct LsDerivation {
  std::vector<LsLine> lines;
};

// Total monomial count over all stated line polynomials.
size_t ls_monomial_size(const LsDerivation& d);

// Replays every justification by exact polynomial arithmetic. Throws
// RuleMismatch(line) when a stated polynomial disagrees with its rule and
// NegativeScalar(line) on a negative scaling factor; returns true iff the
// last line is the constant -1.
bool verify_ls(const LsDerivation& d, const InequalitySystem& system);

// Compiles the derivation into a conic proof over the same system: each line
// becomes a subcircuit over the placeholders (axioms turn into placeholder
// leaves, squares into squared polynomial circuits) and lines are shared by
// reference. Output size is linear in the total monomial count.
CpsProof ls_to_cps(const LsDerivation& d, const InequalitySystem& system);

struct PsFile {
  PsRefutation refutation;
  AxiomSystem equalities;
  InequalitySystem inequalities;
};

std::string ps_to_text(const PsRefutation& r, const std::vector<std::string>& var_names,
                       const std::string& eq_ref, const std::string& iq_ref);
PsFile load_ps(const std::string& path);

std::string ls_to_text(const LsDerivation& d, const std::vector<std::string>& var_names,
                       const std::string& system_ref);
std::pair<LsDerivation, InequalitySystem> load_ls(const std::string& path);

}  // namespace proofkit
