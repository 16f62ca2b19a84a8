#pragma once

#include <stdexcept>
#include <string>

namespace ganeda {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Genotype length or matrix shape does not match its owner.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// A loaded or constructed NK instance violates its invariants.
class InstanceCorruptError : public Error {
 public:
  using Error::Error;
};

// Exhaustive work refused because the search space is too large.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

// NaN or Inf appeared in a numeric pipeline.
class NumericError : public Error {
 public:
  using Error::Error;
};

// API called out of order, e.g. backward() with a stale forward record.
class UsageError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace ganeda
