#pragma once

#include <stdexcept>
#include <string>

namespace tmr {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A precondition on arguments or configuration was violated.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// An input file or serialized artifact could not be parsed.
class FormatError : public Error {
public:
  using Error::Error;
};

/// A numerical procedure failed (e.g. the SMO solver did not converge).
class ComputeError : public Error {
public:
  using Error::Error;
};

}  // namespace tmr
