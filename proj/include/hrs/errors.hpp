#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hrs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain (x outside [0,1], kappa <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Requested derivative order exceeds the profile's smoothness.
class SmoothnessError : public Error {
 public:
  using Error::Error;
};

/// A real-valued profile was required but a complex one was supplied.
class ParityError : public Error {
 public:
  using Error::Error;
};

/// Observations or statistics for different wavenumbers were combined.
class AggregationError : public Error {
 public:
  using Error::Error;
};

/// Two datasets (or a dataset and a requested band) do not share a grid.
class GridMismatchError : public Error {
 public:
  using Error::Error;
};

/// Sine-mode data are missing for some j in 1..N.
class IncompleteDataError : public Error {
 public:
  explicit IncompleteDataError(std::vector<int> missing);

  const std::vector<int>& missing_modes() const noexcept { return missing_; }

 private:
  std::vector<int> missing_;
};

/// A file does not follow the expected CSV schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration. `line` is 1-based, 0 when unknown.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& message, int line = 0);

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace hrs
