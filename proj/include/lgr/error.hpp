#pragma once

#include <stdexcept>
#include <string>

namespace lgr {

/// Base class for all diagnostics raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violates an operation's precondition (r = 0 node, mismatched z, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative or quadrature procedure failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace lgr
