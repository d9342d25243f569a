#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vg {

// Base of every error the library throws. Callers that only need to report
// failures can catch this; the CLI maps the subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value violates a type invariant (malformed term, overlapping delta, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An identifier (term id, version, branch) does not exist.
class LookupError : public Error {
 public:
  using Error::Error;
};

// Operation is not allowed in the current state (double init, duplicate branch).
class StateError : public Error {
 public:
  using Error::Error;
};

// Strict delta validation failed.
class DeltaError : public Error {
 public:
  using Error::Error;
};

// Located syntax error in N-Triples or patch input. Line is 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column = 0)
      : Error(format(what, line, column)), line_(line), column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line, std::size_t column) {
    std::string out = "line " + std::to_string(line);
    if (column != 0) out += ", column " + std::to_string(column);
    return out + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

// Repository directory is missing, inconsistent or unwritable.
class RepositoryError : public Error {
 public:
  using Error::Error;
};

// Query text is invalid (syntax, unknown prefix, misuse of version variables).
class QueryError : public Error {
 public:
  QueryError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(line == 0 ? what
                        : "line " + std::to_string(line) + ", column " + std::to_string(column) +
                              ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Benchmark harness detected diverging results between configurations.
class BenchError : public Error {
 public:
  using Error::Error;
};

}  // namespace vg
