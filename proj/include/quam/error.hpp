#pragma once

#include <stdexcept>
#include <string>

namespace quam {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A caller violated a precondition (bad index, wrong length, bad flag).
class InputError : public Error {
  public:
    using Error::Error;
};

/// Malformed or inconsistent data, e.g. a ragged pattern file.
class DataError : public Error {
  public:
    using Error::Error;
};

/// An internal structural invariant did not hold.
class InvariantError : public Error {
  public:
    using Error::Error;
};

} // namespace quam
