#pragma once

#include <stdexcept>
#include <string>

namespace krpac {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point lies outside the domain box of a map.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A monotone inversion could not find a preimage.
class NoRootError : public Error {
 public:
  using Error::Error;
};

class EmptySampleError : public Error {
 public:
  using Error::Error;
};

/// A set or pair design carries no probability mass / no usable pairs.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Matrix has the wrong shape or sparsity pattern.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unreadable configuration / input file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace krpac
