#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netfrac {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (wrong graph kind, exponent
/// out of range, malformed descriptor, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data. `line()` is 1-based, or 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An algorithm failed to reach its accuracy target (non-convergence,
/// step-size underflow, overflow).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure; the message names the path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace netfrac
