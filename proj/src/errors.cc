#include "swreg/errors.hpp"

namespace swreg {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput:
      return "invalid input";
    case ErrorKind::kSingularity:
      return "singularity";
    case ErrorKind::kNumerical:
      return "numerical";
    case ErrorKind::kResource:
      return "resource";
    case ErrorKind::kProtocol:
      return "protocol";
    case ErrorKind::kParse:
      return "parse";
    case ErrorKind::kConfig:
      return "config";
    case ErrorKind::kTuningFailure:
      return "tuning failure";
    case ErrorKind::kFitInvalid:
      return "fit invalid";
  }
  return "unknown";
}

}  // namespace swreg
