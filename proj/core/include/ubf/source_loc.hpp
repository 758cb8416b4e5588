#pragma once

#include <compare>
#include <string>

namespace ubf {

/// 1-based (line, column) of the first token of a construct. `offset` is the
/// column; the printer is the single source of truth for how columns are
/// assigned in emitted programs.
struct SourceLoc {
  int line = 0;
  int offset = 0;

  auto operator<=>(const SourceLoc&) const = default;
  bool valid() const { return line >= 1 && offset >= 1; }
  std::string str() const {
    return std::to_string(line) + ":" + std::to_string(offset);
  }
};

}  // namespace ubf
