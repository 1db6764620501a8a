// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace frontlab {

enum class ErrorKind {
  OutOfWindow,
  RootFindingFailed,
  SaddleMissing,
  EscapeWithoutEvent,
  NoIntersection,
  HiddenConditionViolated,
  NotSaddle,
  BisectionBracketFailed,
  OrderViolated,
  NoSolution,
  DegenerateDenominator,
  QuadratureNotConverged,
  DegenerateGStar,
  DegenerateMStar,
  GridTooCoarse,
  NoConvergence,
  BranchJump,
  BlowUp,
  WindowTooShort,
  Nonlinear,
  NoCrossing,
  ParseError,
  ValidationError,
  InvalidArgument,
  IoError,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

// Process exit status for the command line tool.
int exit_code(ErrorKind kind);

}  // namespace frontlab
