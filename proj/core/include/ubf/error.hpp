#pragma once

#include <stdexcept>
#include <string>

#include "ubf/source_loc.hpp"

namespace ubf {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Syntactic or binding failure. Carries the position of the offending token.
struct ParseError : Error {
  SourceLoc loc;
  ParseError(SourceLoc l, const std::string& msg)
      : Error(l.str() + ": " + msg), loc(l) {}
};

struct UnknownNode : Error {
  using Error::Error;
};

// profiling
struct InstrumentError : Error {
  using Error::Error;
};
struct CompileFailed : Error {
  using Error::Error;
};
struct RunTimeout : Error {
  using Error::Error;
};
struct RunCrashed : Error {
  using Error::Error;
};
struct NotLive : Error {
  using Error::Error;
};
struct NotAPointer : Error {
  using Error::Error;
};
struct UnknownDeclaration : Error {
  using Error::Error;
};

// synthesis
struct NoEligibleTarget : Error {
  using Error::Error;
};
struct SynthesisBudgetExhausted : Error {
  using Error::Error;
};
struct AnchorNotFound : Error {
  using Error::Error;
};

// oracle
struct PreconditionViolated : Error {
  using Error::Error;
};
struct DebuggerSpawnFailure : Error {
  using Error::Error;
};
struct NoDebugInfo : Error {
  using Error::Error;
};

// toolchain
struct ToolMissing : Error {
  using Error::Error;
};
struct InvalidConfig : Error {
  using Error::Error;
};

// interpreter
struct VmError : Error {
  using Error::Error;
};

struct ReducerFailed : Error {
  using Error::Error;
};

}  // namespace ubf
