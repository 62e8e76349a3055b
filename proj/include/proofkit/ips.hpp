// IPS and IPS-LIN proof objects, verification, proof composition, and a
// degree-bounded Nullstellensatz certificate search over Q.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "proofkit/pit.hpp"
#include "proofkit/systems.hpp"

namespace proofkit {

// Proof circuit over the system variables plus placeholder variables:
// y1..ym stand for the user axioms, z1..zk for the boolean axioms when the
// system includes them.
struct IpsProof {
  Circuit proof;
  AxiomSystem system;
  Circuit target;
};

// Explicit cofactors H_i aligned with effective_axioms(system); the implicit
// target is the constant 1.
struct IpsLinCert {
  std::vector<Circuit> cofactors;
};

struct IpsVerdict {
  bool accepted = false;
  PitVerdict vanish_at_zero;  // placeholders set to 0 give the zero polynomial
  PitVerdict matches_target;  // placeholders set to the axioms give the target
  // Engaged when the accepted target is variable-free and nonzero: the
  // integer/rational the refutation proves.
  std::optional<mpq_class> refuted_constant;
};

// y1..ym then z1..zk.
std::vector<std::string> placeholder_names(const AxiomSystem& s);
// System variables followed by the placeholder names: the canonical variable
// space of a proof circuit.
std::vector<std::string> proof_space(const AxiomSystem& s);

IpsVerdict verify_ips(const IpsProof& p, const PitOptions& opt = {});

// Checks sum F_i * H_i = 1 over the effective axioms. Exact mode is forced
// for Q(y) systems.
PitVerdict verify_ips_lin(const IpsLinCert& cert, const AxiomSystem& system,
                          const PitOptions& opt = {});

struct NsOptions {
  size_t max_unknowns = 20000;
};

// Exact linear-algebra search for cofactors of total degree <= degree_bound
// over Q; sound and complete within the bound. Returned certificates are
// re-verified before they leave.
std::optional<IpsLinCert> ns_search(const AxiomSystem& system, size_t degree_bound,
                                    const NsOptions& opt = {});

// Packages a linear certificate as a refutation proof of the constant -1,
// with proof circuit sum_i y_i * (-H_i). This is the shape the conic
// compilation pipeline consumes.
IpsProof ips_refutation_from_lin(const IpsLinCert& cert, const AxiomSystem& system);

// Proof of A.target + B.target with proof circuit A.proof + B.proof.
IpsProof compose_sum(const IpsProof& a, const IpsProof& b);
// hg computes (H, G) as its two outputs; the result proves
// A.target*H + G*B.target with proof A.proof*H + G*B.proof.
IpsProof compose_product(const IpsProof& a, const IpsProof& b, const Circuit& hg);

// Combines one proof per boolean assignment of the case circuits (key bit i
// is the value assumed for case_circuits[i]) into a proof from the base
// system. Each case proof's system must extend base by the axioms H_i
// (bit 0) or 1-H_i (bit 1), appended after the base axioms in case order,
// and the base system must contain the booleanity H_i^2-H_i of every case
// circuit (as a user axiom or via include_boolean for variable cases).
IpsProof by_cases(const AxiomSystem& base, const std::vector<Circuit>& case_circuits,
                  const std::map<uint64_t, IpsProof>& proofs);

// Rewrites booleans as explicit user axioms, renaming placeholders z_i to
// y_{m+i}; identity when the system already has include_boolean off.
IpsProof explicit_booleans(const IpsProof& p);

// Substitutes system variables by circuits in the proof, the target, and
// every axiom; boolean axioms are first made explicit since their
// substitution instances are ordinary equations.
IpsProof substitute_proof(const IpsProof& p, const std::map<std::string, const Circuit*>& bindings);

// Proof files: header line `ips` or `ipslin`, a `system <path>` reference,
// then labeled circuit sections (target/proof, or one cofactor per section).
std::string ips_proof_to_text(const IpsProof& p, const std::string& system_ref);
IpsProof load_ips_proof(const std::string& path);
std::string ips_lin_to_text(const IpsLinCert& cert, const std::string& system_ref);
std::pair<IpsLinCert, AxiomSystem> load_ips_lin(const std::string& path);

}  // namespace proofkit
