#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tcr {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed tree shape (cycle, several roots, dangling parent, duplicate leaf
// label). `vertex()` names the offending vertex, or -1 when none applies.
class StructuralError : public Error {
 public:
  StructuralError(std::int32_t vertex, const std::string& what)
      : Error(what), vertex_(vertex) {}
  std::int32_t vertex() const { return vertex_; }

 private:
  std::int32_t vertex_;
};

// A documented precondition of an operation was not met by the caller.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Well-formed but semantically invalid input (unknown species, inconsistent
// labels, partial maps).
class InputError : public Error {
 public:
  using Error::Error;
};

// Text could not be parsed. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& what)
      : Error(what), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// The operation only supports binary gene and species trees.
class UnsupportedShape : public Error {
 public:
  using Error::Error;
};

// An enumeration would exceed its configured size cap.
class SizeCapError : public Error {
 public:
  using Error::Error;
};

// Internal invariant broken; indicates a bug rather than bad input.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace tcr
