#pragma once

#include <stdexcept>
#include <string>

namespace swreg {

enum class ErrorKind {
  kInvalidInput,
  kSingularity,
  kNumerical,
  kResource,
  kProtocol,
  kParse,
  kConfig,
  kTuningFailure,
  kFitInvalid,
};

const char* to_string(ErrorKind kind);

/// Base class for every error raised by the library. The kind drives the CLI
/// exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error(ErrorKind::kInvalidInput, what) {}
};

class SingularityError : public Error {
 public:
  explicit SingularityError(const std::string& what) : Error(ErrorKind::kSingularity, what) {}
};

/// Inner solver failed to converge; carries the last successive-iterate distance.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double residual)
      : Error(ErrorKind::kNumerical, what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& what) : Error(ErrorKind::kResource, what) {}
};

class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string& what) : Error(ErrorKind::kProtocol, what) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(ErrorKind::kParse, "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::kConfig, what) {}
};

class TuningFailure : public Error {
 public:
  explicit TuningFailure(const std::string& what) : Error(ErrorKind::kTuningFailure, what) {}
};

class FitInvalid : public Error {
 public:
  explicit FitInvalid(const std::string& what) : Error(ErrorKind::kFitInvalid, what) {}
};

}  // namespace swreg
