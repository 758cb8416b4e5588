#pragma once

#include <string>

#include "ubf/ast.hpp"

namespace ubf {

/// Parses a translation unit of the supported C subset. The returned tree is
/// fully bound (names resolved, expressions typed). Throws ParseError on any
/// construct outside the subset; silent best-effort parsing is deliberately
/// not offered.
Ast parse_program(const std::string& source);

/// locate(ast, id): stored source position of a node.
SourceLoc locate(const Ast& ast, NodeId id);

}  // namespace ubf
