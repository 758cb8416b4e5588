#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ubf/ast.hpp"
#include "ubf/source_loc.hpp"
#include "ubf/ub_kind.hpp"

namespace ubf {

/// Result of one reference-interpreter run. `Ub` reports the first
/// dynamically encountered violation only.
struct VmOutcome {
  enum class Status { Normal, Ub, StepLimit };
  Status status = Status::Normal;
  int exit_code = 0;
  std::string stdout_text;
  UbKind ub_kind = UbKind::BufOverflowArray;
  SourceLoc ub_site{};
  std::string detail;

  bool is_normal() const { return status == Status::Normal; }
  bool is_ub() const { return status == Status::Ub; }
};

/// Receives the events produced by the __ubf_* logging intrinsics.
struct ProfileSink {
  virtual ~ProfileSink() = default;
  virtual void on_range(uint32_t site, uint64_t base, uint64_t size) = 0;
  virtual void on_value(uint32_t site, uint64_t idx, int64_t v) = 0;
  virtual void on_access(uint32_t site, uint64_t idx, uint64_t addr) = 0;
  virtual void on_free(uint32_t site, uint64_t addr) = 0;
};

/// What to do with a detected violation. The decision of the first
/// violation latches for the rest of the run: Miss keeps executing with
/// benign fallback semantics, Eliminate additionally skips the offending
/// statement entirely (as an optimizer would have removed it).
enum class UbAction : uint8_t { Report, Miss, Eliminate };

struct VmOptions {
  long long step_limit = 5'000'000;
  bool want_trace = false;
  std::function<UbAction(UbKind, SourceLoc)> on_ub;  // empty = always report
  ProfileSink* profile = nullptr;
};

struct VmResult {
  VmOutcome outcome;
  std::vector<SourceLoc> trace;  // raw executed-site sequence
  bool truncated = false;
};

/// Evaluates a bound tree, checking at every evaluation step: array index
/// bounds, pointer accesses within live objects, use after free / scope,
/// non-null dereference, signed arithmetic range, shift amounts, nonzero
/// divisors, and branches on uninitialized storage.
VmResult eval_program_ex(const Ast& ast, const VmOptions& opts);

VmOutcome eval_program(const Ast& ast, long long step_limit = 5'000'000);

/// As eval_program, additionally returning the executed-site sequence.
std::pair<VmOutcome, std::vector<SourceLoc>> eval_trace(
    const Ast& ast, long long step_limit = 5'000'000);

}  // namespace ubf
