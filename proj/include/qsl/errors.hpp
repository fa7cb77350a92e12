// Error taxonomy. Every failure carries a category used by the CLI as its
// process exit code, so scripted callers can tell usage problems from
// numerical ones.
#pragma once

#include <stdexcept>
#include <string>

namespace qsl {

enum class ErrorCategory : int {
  usage = 2,    // bad flags / bad config file
  domain = 3,   // invalid values, dimension mismatches, unsupported requests
  numeric = 4,  // non-finite input, quadrature failure, rate singularity
  io = 5,       // unreadable/unwritable files
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory cat, const std::string& msg)
      : std::runtime_error(msg), cat_(cat) {}
  ErrorCategory category() const noexcept { return cat_; }

 private:
  ErrorCategory cat_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& msg)
      : Error(ErrorCategory::domain, msg) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& msg)
      : Error(ErrorCategory::numeric, msg) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(ErrorCategory::io, msg) {}
};

// Requested dimension exceeds the configured qubit cap.
class CapacityError : public DomainError {
 public:
  explicit CapacityError(const std::string& msg) : DomainError(msg) {}
};

// Density-matrix validation failures, tagged with which invariant broke.
class ValidationError : public DomainError {
 public:
  enum class Kind { hermiticity, trace, positivity };
  ValidationError(Kind kind, const std::string& msg)
      : DomainError(msg), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

// Time-local decay rates blow up where the coherence crosses zero.
class SingularityError : public NumericError {
 public:
  explicit SingularityError(const std::string& msg) : NumericError(msg) {}
};

// Quadrature failed its refinement check.
class AccuracyError : public NumericError {
 public:
  explicit AccuracyError(const std::string& msg) : NumericError(msg) {}
};

// A population target cannot be inverted uniquely (nonmonotone model).
class AmbiguityError : public DomainError {
 public:
  explicit AmbiguityError(const std::string& msg) : DomainError(msg) {}
};

// Closed-form ratio requested for a family outside the closed-form set.
class UnsupportedFamilyError : public DomainError {
 public:
  explicit UnsupportedFamilyError(const std::string& msg) : DomainError(msg) {}
};

}  // namespace qsl
