#pragma once

#include <stdexcept>
#include <string>

namespace hcpp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: unknown vertex or edge, bad file contents.
class InputError : public Error {
 public:
  using Error::Error;
};

/// The instance has no feasible solution.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An exact oracle was asked to enumerate beyond its configured limit.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

/// Integer weight arithmetic left the representable range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

}  // namespace hcpp
