#pragma once

#include <string>
#include <vector>

#include "ubf/ast.hpp"

namespace ubf {

/// Printed text plus the position every node received. `locs[id]` is {0,0}
/// for nodes the output does not contain (e.g. detached subtrees).
struct Emitted {
  std::string text;
  std::vector<SourceLoc> locs;
};

/// Deterministic canonical form: one statement per line, two-space indent,
/// minimal parentheses. Re-parsing the output yields a structurally
/// identical tree whose locations agree with `locs`.
Emitted emit_program(const Ast& ast);

std::string print_program(const Ast& ast);

}  // namespace ubf
