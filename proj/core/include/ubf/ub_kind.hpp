#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ubf {

/// The nine undefined-behavior categories handled by the toolkit.
enum class UbKind : uint8_t {
  BufOverflowArray,
  BufOverflowPointer,
  UseAfterFree,
  UseAfterScope,
  NullPtrDeref,
  IntegerOverflow,
  ShiftOverflow,
  DivideByZero,
  UseOfUninitMemory,
};

inline constexpr int kNumUbKinds = 9;

constexpr std::array<UbKind, kNumUbKinds> all_ub_kinds() {
  return {UbKind::BufOverflowArray, UbKind::BufOverflowPointer,
          UbKind::UseAfterFree,     UbKind::UseAfterScope,
          UbKind::NullPtrDeref,     UbKind::IntegerOverflow,
          UbKind::ShiftOverflow,    UbKind::DivideByZero,
          UbKind::UseOfUninitMemory};
}

const char* to_string(UbKind k);

/// Accepts both the enum spelling ("UseAfterFree") and the CLI form
/// ("use-after-free").
std::optional<UbKind> ub_kind_from_string(std::string_view s);

}  // namespace ubf
