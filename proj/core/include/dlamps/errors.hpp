#pragma once

#include <stdexcept>
#include <string>

namespace dlamps {

/// Base class of all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Image/field dimensions disagree where they must match.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Malformed or truncated file contents.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameter values or run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A requested frequency band exceeds what the sampling grid can represent.
class NyquistError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Input data that cannot be processed (inconsistent, empty, out of range).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Dataset carries no usable signal, e.g. all responses identical.
class DegenerateDataError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace dlamps
