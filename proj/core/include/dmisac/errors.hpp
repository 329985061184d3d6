#pragma once

#include <stdexcept>
#include <string>

namespace dmisac {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or operation input (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Rank-deficient or numerically singular geometry (CLI exit code 3).
class SingularGeometryError : public Error {
 public:
  using Error::Error;
};

// File system / serialization failure (CLI exit code 4).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dmisac
