// SPDX-License-Identifier: Apache-2.0
#include "frontlab/errors.hpp"

namespace frontlab {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::OutOfWindow: return "OutOfWindow";
    case ErrorKind::RootFindingFailed: return "RootFindingFailed";
    case ErrorKind::SaddleMissing: return "SaddleMissing";
    case ErrorKind::EscapeWithoutEvent: return "EscapeWithoutEvent";
    case ErrorKind::NoIntersection: return "NoIntersection";
    case ErrorKind::HiddenConditionViolated: return "HiddenConditionViolated";
    case ErrorKind::NotSaddle: return "NotSaddle";
    case ErrorKind::BisectionBracketFailed: return "BisectionBracketFailed";
    case ErrorKind::OrderViolated: return "OrderViolated";
    case ErrorKind::NoSolution: return "NoSolution";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorKind::DegenerateGStar: return "DegenerateGStar";
    case ErrorKind::DegenerateMStar: return "DegenerateMStar";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::BranchJump: return "BranchJump";
    case ErrorKind::BlowUp: return "BlowUp";
    case ErrorKind::WindowTooShort: return "WindowTooShort";
    case ErrorKind::Nonlinear: return "Nonlinear";
    case ErrorKind::NoCrossing: return "NoCrossing";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError: return 2;
    case ErrorKind::ValidationError: return 3;
    case ErrorKind::IoError: return 4;
    case ErrorKind::InvalidArgument: return 5;
    default: return 10 + static_cast<int>(kind);
  }
}

}  // namespace frontlab
