#ifndef TORUS_ERRORS_H_
#define TORUS_ERRORS_H_

#include <stdexcept>
#include <string>

namespace torus {

enum class ErrorCode {
  kUnderResolved,
  kPrecondition,
  kDegenerateShape,
  kInvalidThickness,
  kSingularPoint,
  kQuadratureAccuracy,
  kInvalidRegime,
  kOutsideBall,
  kNoConvergence,
  kInvalidConfig,
  kIo,
};

const char* ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// front ends can map it onto an exit status without parsing messages.
class TorusError : public std::runtime_error {
 public:
  TorusError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace torus

#endif  // TORUS_ERRORS_H_
