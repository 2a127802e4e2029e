#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace freefront {

enum class ErrorKind {
  Validation,
  Domain,
  Range,
  Geometry,
  Solver,
  Construction,
  Bracket,
  Oracle,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Base of every error thrown by the library. The kind drives the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& m) : Error(ErrorKind::Validation, m) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& m) : Error(ErrorKind::Domain, m) {}
};

class RangeError : public Error {
 public:
  explicit RangeError(const std::string& m) : Error(ErrorKind::Range, m) {}
};

class GeometryError : public Error {
 public:
  explicit GeometryError(const std::string& m) : Error(ErrorKind::Geometry, m) {}
};

class SolverError : public Error {
 public:
  explicit SolverError(const std::string& m) : Error(ErrorKind::Solver, m) {}
};

class ConstructionError : public Error {
 public:
  explicit ConstructionError(const std::string& m) : Error(ErrorKind::Construction, m) {}
};

class BracketError : public Error {
 public:
  explicit BracketError(const std::string& m) : Error(ErrorKind::Bracket, m) {}
};

class OracleViolation : public Error {
 public:
  explicit OracleViolation(const std::string& m) : Error(ErrorKind::Oracle, m) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& m) : Error(ErrorKind::Io, m) {}
};

}  // namespace freefront
