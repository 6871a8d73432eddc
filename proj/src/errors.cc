#include "torus/errors.h"

namespace torus {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnderResolved:
      return "under-resolved";
    case ErrorCode::kPrecondition:
      return "precondition";
    case ErrorCode::kDegenerateShape:
      return "degenerate-shape";
    case ErrorCode::kInvalidThickness:
      return "invalid-thickness";
    case ErrorCode::kSingularPoint:
      return "singular-point";
    case ErrorCode::kQuadratureAccuracy:
      return "quadrature-accuracy";
    case ErrorCode::kInvalidRegime:
      return "invalid-regime";
    case ErrorCode::kOutsideBall:
      return "outside-ball";
    case ErrorCode::kNoConvergence:
      return "no-convergence";
    case ErrorCode::kInvalidConfig:
      return "invalid-config";
    case ErrorCode::kIo:
      return "io";
  }
  return "unknown";
}

}  // namespace torus
