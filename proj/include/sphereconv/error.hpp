#pragma once

#include <stdexcept>
#include <string>

namespace sphereconv {

// Base of every error thrown by the library. The CLI maps the concrete
// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument or precondition violation (out-of-range pixel, bad grid).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed or truncated file header / payload.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Payload decoded but its integrity hash does not match.
class ChecksumError : public FormatError {
 public:
  using FormatError::FormatError;
};

// Tensor or image dimensions disagree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// NaN/Inf produced during training or evaluation.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace sphereconv
