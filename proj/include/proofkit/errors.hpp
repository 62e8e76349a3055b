// Exception types shared by all proofkit modules.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace proofkit {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// circuit_core

struct CycleOrForwardRef : Error {
  uint32_t gate_id;
  explicit CycleOrForwardRef(uint32_t id)
      : Error("gate " + std::to_string(id) + " references a gate at or after itself"),
        gate_id(id) {}
};

struct DivByVariable : Error {
  uint32_t gate_id;
  explicit DivByVariable(uint32_t id)
      : Error("divc gate " + std::to_string(id) + " has a denominator that depends on variables"),
        gate_id(id) {}
};

struct DivByZeroConstant : Error {
  uint32_t gate_id;
  explicit DivByZeroConstant(uint32_t id)
      : Error("divc gate " + std::to_string(id) + " divides by a subcircuit computing zero"),
        gate_id(id) {}
};

struct ConstInConstantFree : Error {
  uint32_t gate_id;
  explicit ConstInConstantFree(uint32_t id)
      : Error("gate " + std::to_string(id) + " holds a constant outside {-1,0,1} in a constant-free circuit"),
        gate_id(id) {}
};

struct RingMismatch : Error {
  using Error::Error;
};

struct SyntaxError : Error {
  size_t line;
  SyntaxError(size_t line_no, const std::string& what_happened)
      : Error("line " + std::to_string(line_no) + ": " + what_happened), line(line_no) {}
};

struct UnknownGateRef : Error {
  size_t line;
  std::string name;
  UnknownGateRef(size_t line_no, const std::string& gate_name)
      : Error("line " + std::to_string(line_no) + ": reference to undeclared gate '" + gate_name + "'"),
        line(line_no),
        name(gate_name) {}
};

// pit

struct BudgetExceeded : Error {
  size_t count;
  size_t budget;
  BudgetExceeded(const std::string& what_grew, size_t n, size_t limit)
      : Error(what_grew + " reached " + std::to_string(n) + ", budget " + std::to_string(limit)),
        count(n),
        budget(limit) {}
};

struct VariableMismatch : Error {
  using Error::Error;
};

struct DegreeBoundOverflow : Error {
  explicit DegreeBoundOverflow(const std::string& details) : Error(details) {}
};

// proof_ips

struct ArityMismatch : Error {
  size_t expected;
  size_t got;
  ArityMismatch(const std::string& what_counted, size_t want, size_t have)
      : Error(what_counted + ": expected " + std::to_string(want) + ", got " + std::to_string(have)),
        expected(want),
        got(have) {}
};

struct SystemMismatch : Error {
  using Error::Error;
};

struct MissingCase : Error {
  std::string bits;
  explicit MissingCase(const std::string& case_bits)
      : Error("no proof supplied for case " + case_bits), bits(case_bits) {}
};

struct MissingBooleanityAxiom : Error {
  explicit MissingBooleanityAxiom(const std::string& which)
      : Error("no axiom H^2-H found for case circuit " + which) {}
};

// proof_cps

struct ConicViolation : Error {
  // Gate ids of a squaring-free path from the offending leaf to an output.
  std::vector<uint32_t> path;
  ConicViolation(const std::string& details, std::vector<uint32_t> witness)
      : Error(details), path(std::move(witness)) {}
};

struct NotInPlaceholderIdeal : Error {
  using Error::Error;
};

struct BadSubsetIndex : Error {
  size_t index;
  explicit BadSubsetIndex(size_t idx)
      : Error("cone subset references inequality " + std::to_string(idx) + " which does not exist"),
        index(idx) {}
};

struct NotSoS : Error {
  explicit NotSoS(const std::string& details) : Error(details) {}
};

struct RuleMismatch : Error {
  size_t line;
  RuleMismatch(size_t line_no, const std::string& details)
      : Error("line " + std::to_string(line_no) + ": " + details), line(line_no) {}
};

struct NegativeScalar : Error {
  size_t line;
  explicit NegativeScalar(size_t line_no)
      : Error("line " + std::to_string(line_no) + ": scaling factor must be a nonnegative integer"),
        line(line_no) {}
};

// bitblast

struct LengthBudgetExceeded : Error {
  size_t needed;
  size_t budget;
  LengthBudgetExceeded(size_t bits_needed, size_t limit)
      : Error("syntactic length " + std::to_string(bits_needed) + " exceeds budget " + std::to_string(limit)),
        needed(bits_needed),
        budget(limit) {}
};

// transforms

struct DenominatorZero : Error {
  uint32_t gate_id;
  explicit DenominatorZero(uint32_t id)
      : Error("divc gate " + std::to_string(id) + " divides by zero"), gate_id(id) {}
};

struct RingUnsupported : Error {
  using Error::Error;
};

// ratfunc_cert

struct DenominatorRoot : Error {
  mpq_class point;
  size_t cofactor;
  DenominatorRoot(const mpq_class& at, size_t cofactor_index)
      : Error("point " + at.get_str() + " is a root of the denominator of cofactor " +
              std::to_string(cofactor_index)),
        point(at),
        cofactor(cofactor_index) {}
};

struct MissingRoot : Error {
  mpz_class k;
  explicit MissingRoot(const mpz_class& which)
      : Error("certificate denominator product does not vanish at y = -" + which.get_str()),
        k(which) {}
};

// frontend

struct DimacsSyntax : Error {
  size_t line;
  DimacsSyntax(size_t line_no, const std::string& details)
      : Error("DIMACS line " + std::to_string(line_no) + ": " + details), line(line_no) {}
};

struct BadParams : Error {
  using Error::Error;
};

}  // namespace proofkit
