#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nonspam {

/// Broad failure classes. The CLI maps each class onto a process exit code.
enum class ErrorKind {
  Validation,  // bad arguments, out-of-range values, shape mismatches
  Io,          // file system and file format problems
  Numerical,   // degenerate frames, non-convergence, insufficient precision
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

class RangeError : public Error {
 public:
  explicit RangeError(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

/// Refusal of the dense oracle paths when the problem is too large.
class ScaleGuardError : public Error {
 public:
  explicit ScaleGuardError(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

/// Malformed file contents; `offset` is the byte position where parsing failed.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t offset)
      : Error(ErrorKind::Io, what + " (at byte " + std::to_string(offset) + ")"), message_(what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }
  /// Message without the offset suffix.
  const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  std::size_t offset_;
};

class UnsupportedFormatError : public Error {
 public:
  explicit UnsupportedFormatError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

class PrecisionError : public Error {
 public:
  explicit PrecisionError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

class NotConvergedError : public Error {
 public:
  NotConvergedError(const std::string& what, double residual)
      : Error(ErrorKind::Numerical, what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class FrameDegenerateError : public Error {
 public:
  explicit FrameDegenerateError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

class FrameViolationError : public Error {
 public:
  FrameViolationError(const std::string& what, std::size_t trial)
      : Error(ErrorKind::Numerical, what + " (trial " + std::to_string(trial) + ")"), trial_(trial) {}
  std::size_t trial() const noexcept { return trial_; }

 private:
  std::size_t trial_;
};

}  // namespace nonspam
