// Conic proof system: the syntactic cone membership check, the CPS verifier,
// the binary-value-principle refutation generator, and the compiler from
// equational refutations into conic form.
#pragma once

#include <set>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "proofkit/circuit.hpp"
#include "proofkit/ips.hpp"
#include "proofkit/pit.hpp"
#include "proofkit/systems.hpp"

namespace proofkit {

// Outcome of the syntactic cone test. On rejection `path` holds gate ids of a
// squaring-free path from a bad leaf (negative constant or unprotected
// variable) to an output, leaf first.
struct ConicVerdict {
  bool conic = true;
  std::vector<uint32_t> path;
};

// Accepts iff every leaf holding a negative constant or a variable outside
// protected_vars has no path to an output that avoids squaring gates (mul
// gates whose operands coincide). One reverse-reachability sweep; rejection
// carries a concrete witness path.
ConicVerdict conic_check(const Circuit& c, const std::set<std::string>& protected_vars);

// A conic circuit over the system variables and one placeholder per
// inequality, together with the claimed target.
struct CpsProof {
  Circuit proof;
  InequalitySystem system;
  Circuit target;
  // Set when the proof never leans on boolean-range inequalities, so it is
  // valid over the reals relative to the listed system.
  bool real_mode = false;
};

struct CpsVerdict {
  bool accepted = false;
  PitVerdict matches_target;
};

// Placeholder names y1..yN, one per inequality, and the proof variable space
// (system variables first).
std::vector<std::string> cps_placeholder_names(const InequalitySystem& s);
std::vector<std::string> cps_proof_space(const InequalitySystem& s);

// True when the system carries no boolean-range entries.
bool cps_real_mode(const InequalitySystem& s);

// Checks that the proof circuit is conic with the placeholders protected and
// that substituting each inequality for its placeholder matches the target.
// A non-conic proof is malformed and throws ConicViolation; a substitution
// mismatch is an ordinary rejection.
CpsVerdict verify_cps(const CpsProof& p, const PitOptions& opt = {});

// Conic refutation of 2^0 x1 + ... + 2^(n-1) xn + M = 0 over booleans: the
// proof is (sum_i 2^(i-1) y_i + y_(n+1)) / M with doubling chains for the
// coefficients, over Z when M = 1 and Q otherwise. Constant-free, linear
// size in n plus the constant gadget for M.
CpsProof gen_bvp_cps(uint32_t n, const mpz_class& M = 1);

// Writes c (single output, vanishing when all placeholders are zero) as
// sum_i placeholders[i] * C_i; cofactor C_i may still read placeholders past
// i. Throws NotInPlaceholderIdeal when the residual after peeling every
// placeholder is not identically zero.
std::vector<Circuit> factor_placeholders(const Circuit& c,
                                         const std::vector<std::string>& placeholders);

// Compiles an equational refutation into a conic proof over the doubled
// system (f >= 0 and -f >= 0 per axiom): boolean placeholders are made
// explicit, cofactors are peeled off with factor_placeholders, each is split
// into a difference of conic halves, and the halves attach to the paired
// placeholders. Output size is quadratic in the input, and the output
// verifies whenever the input does.
CpsProof ips_to_cps(const IpsProof& p);

std::string cps_proof_to_text(const CpsProof& p, const std::string& system_ref);
CpsProof load_cps_proof(const std::string& path);
void save_cps_proof(const std::string& path, const CpsProof& p, const std::string& system_ref);

}  // namespace proofkit
