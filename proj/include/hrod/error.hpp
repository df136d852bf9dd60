#pragma once

#include <stdexcept>
#include <string>

namespace hrod {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A preset or config parameter outside its admissible range.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// A theorem hypothesis (K range, branch) does not hold.
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

/// g(u) lies on the wrong side of the recorded extremum.
class ExtremumViolation : public Error {
 public:
  using Error::Error;
};

class NonFinite : public Error {
 public:
  using Error::Error;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

/// Inconsistent solver/tracker configuration or malformed input files.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace hrod
