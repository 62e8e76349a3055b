// Line-based text format for circuits, with a bit-exact serialize/parse round trip.
#pragma once

#include <string>

#include "proofkit/circuit.hpp"

namespace proofkit {

// Grammar (one item per line, # starts a comment):
//   ring {Z | Q | GF <p> | Q(y)}
//   input <name> [<name> ...]            (zero or more lines, before any gate)
//   <gate> = var <name>
//   <gate> = const {<int> | <int>/<int> | y}
//   <gate> = ratconst [c0,c1,...]/[d0,d1,...]   (Q(y) only, degree-ascending)
//   <gate> = {add | mul | divc} <gate> <gate>
//   output <gate> [<gate> ...]
Circuit parse_circuit(const std::string& text);
std::string serialize_circuit(const Circuit& c);

Circuit load_circuit(const std::string& path);
void save_circuit(const std::string& path, const Circuit& c);

}  // namespace proofkit
