#pragma once

#include <stdexcept>
#include <string>

namespace mpdag {

// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed graph text; carries the 1-based offending line (0 when unknown).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Input violates a structural invariant (cycle, duplicate adjacency, unknown node, ...).
class GraphError : public Error {
 public:
  using Error::Error;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A state the algorithms should never reach on valid input.
class InternalInconsistency : public Error {
 public:
  using Error::Error;
};

// Exhaustive search refused because the instance is too large.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Least-squares fit with a singular design.
class RankDeficientError : public Error {
 public:
  using Error::Error;
};

}  // namespace mpdag
