#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rbgeo {

// Base for every error the library raises. The CLI maps the subclasses onto
// distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument shape or value (empty input, k too large, unknown name, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A coordinate lies outside the generator's domain or embedded range.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, std::size_t index)
      : Error(what), index_(index) {}

  // Offending coordinate index within the point (or flat buffer).
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

// Non-finite values that survive regularization.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace rbgeo
