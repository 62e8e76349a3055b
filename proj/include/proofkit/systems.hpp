// Axiom systems (polynomial equations) and inequality systems with
// provenance-tagged entries, plus their text file formats.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "proofkit/circuit.hpp"

namespace proofkit {

// Shared text-file plumbing for the fenced formats: header lines (tokenized,
// in order) followed by `begin circuit [label]` ... `end circuit` sections.
struct TextSections {
  std::vector<std::vector<std::string>> header_lines;
  std::vector<size_t> header_linenos;
  std::vector<std::pair<std::string, std::string>> circuits;
};
TextSections read_text_sections(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
// Resolves ref relative to the directory of base_file unless ref is absolute.
std::string resolve_ref(const std::string& base_file, const std::string& ref);

// Parses "ring <tok...>" starting at t[pos]; returns the ring and the index
// past its tokens.
std::pair<Ring, size_t> parse_ring_at(const std::vector<std::string>& t, size_t pos, size_t line);

// How an inequality entered the system; equality-derived and boolean entries
// come in the sign pairs the cone calculus expects.
enum class Provenance { UserIneq, EqPos, EqNeg, BoolX, Bool1mX, BoolSqPos, BoolSqNeg };

std::string provenance_str(Provenance p);

// A list of single-output circuits, each asserted = 0, over one shared
// variable space. include_boolean adds x_i^2 - x_i for every variable.
struct AxiomSystem {
  Ring ring = Ring::Q();
  std::vector<Circuit> axioms;
  bool include_boolean = false;
  std::vector<std::string> var_names;

  size_t num_effective() const {
    return axioms.size() + (include_boolean ? var_names.size() : 0);
  }
};

// Validates rings and arities and rebuilds every axiom over the union
// variable space (first-seen order).
AxiomSystem make_axiom_system(Ring ring, std::vector<Circuit> axioms, bool include_boolean);

// User axioms followed by the booleanity circuits x_i^2 - x_i in variable
// order when include_boolean is set.
std::vector<Circuit> effective_axioms(const AxiomSystem& s);

bool same_system(const AxiomSystem& a, const AxiomSystem& b);

std::string axiom_system_to_text(const AxiomSystem& s);
AxiomSystem axiom_system_from_text(const std::string& text);
AxiomSystem load_axiom_system(const std::string& path);
void save_axiom_system(const std::string& path, const AxiomSystem& s);

// A list of single-output circuits over an ordered ring, each asserted >= 0,
// tagged with their provenance, over one shared variable space.
struct InequalitySystem {
  Ring ring = Ring::Q();
  std::vector<Circuit> inequalities;
  std::vector<Provenance> tags;
  std::vector<std::string> var_names;
};

InequalitySystem make_inequality_system(Ring ring, std::vector<Circuit> inequalities,
                                        std::vector<Provenance> tags);

// The doubled system of an equality system: per axiom f the pair f >= 0,
// -f >= 0; when the equality system carries booleans, a per-variable block
// x_i >= 0, 1-x_i >= 0, x_i^2-x_i >= 0, -(x_i^2-x_i) >= 0 follows.
InequalitySystem inequalities_from_equalities(const AxiomSystem& s);

bool same_system(const InequalitySystem& a, const InequalitySystem& b);

std::string inequality_system_to_text(const InequalitySystem& s);
InequalitySystem inequality_system_from_text(const std::string& text);
InequalitySystem load_inequality_system(const std::string& path);
void save_inequality_system(const std::string& path, const InequalitySystem& s);

}  // namespace proofkit
