#pragma once

#include <stdexcept>
#include <string>

namespace seriesdep {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter or argument lies outside its admissible domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A root search was given an interval without a sign change.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// An iterative kernel ran out of its iteration or subdivision budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// An extremum was requested on a curve that is constant over the bracket.
class FlatError : public Error {
 public:
  using Error::Error;
};

}  // namespace seriesdep
