#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qbm {

// Error taxonomy mirrors the CLI exit-code contract:
//   ConfigError      -> exit 2 (bad parameters, geometry, paths, JSON)
//   NumericError     -> exit 3 (quadrature budget exhausted, degenerate trace)
//   InstabilityError -> exit 4 (time stepping blew up or would blow up)
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class InstabilityError : public Error {
 public:
  using Error::Error;
};

class ZeroFrictionError : public ConfigError {
 public:
  ZeroFrictionError() : ConfigError("friction R is zero; quantity undefined") {}
  using ConfigError::ConfigError;
};

class ZeroTemperatureError : public ConfigError {
 public:
  ZeroTemperatureError()
      : ConfigError("thermal energy is zero; correlator diverges") {}
  using ConfigError::ConfigError;
};

class NonpositiveTimeError : public ConfigError {
 public:
  NonpositiveTimeError() : ConfigError("time argument must be positive") {}
  using ConfigError::ConfigError;
};

class GridTooCoarseError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class UnstableDtError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class WindowTooEarlyError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class DegeneratePathError : public ConfigError {
 public:
  DegeneratePathError() : ConfigError("path needs at least 2 vertices") {}
  using ConfigError::ConfigError;
};

class EndpointMismatchError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class QuadratureFailureError : public NumericError {
 public:
  using NumericError::NumericError;
};

class ZeroTraceError : public NumericError {
 public:
  ZeroTraceError() : NumericError("trace magnitude below 1e-12") {}
  using NumericError::NumericError;
};

class UnstableConfigError : public InstabilityError {
 public:
  using InstabilityError::InstabilityError;
};

// Carries the step index at which a non-finite value first appeared.
class NaNDetectedError : public InstabilityError {
 public:
  NaNDetectedError(std::size_t step, const std::string& what)
      : InstabilityError(what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_ = 0;
};

}  // namespace qbm
