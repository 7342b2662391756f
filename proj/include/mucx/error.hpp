#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mucx {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed network, malformed assignment, or arithmetic overflow during
/// evaluation. Never reported as a silent `false`.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition was violated by the caller.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// The exhaustive oracle refuses instances above its configured bound.
class BoundExceeded : public Error {
 public:
  using Error::Error;
};

/// An algorithm observed something its precondition rules out, e.g. a
/// supposedly unsatisfiable network turned out satisfiable.
class InternalContradiction : public Error {
 public:
  using Error::Error;
};

}  // namespace mucx
