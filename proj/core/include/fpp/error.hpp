#pragma once

#include <stdexcept>
#include <string>

namespace fpp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutOfBoxError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

class UnsupportedDimensionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DegenerateKernelError : public Error {
 public:
  using Error::Error;
};

class HypothesisViolatedError : public Error {
 public:
  using Error::Error;
};

class InsufficientBoxError : public Error {
 public:
  using Error::Error;
};

class TruncationError : public Error {
 public:
  using Error::Error;
};

class NoPathError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A coupling inclusion that must hold on every seed was violated.
class PathwiseViolationError : public Error {
 public:
  using Error::Error;
};

}  // namespace fpp
