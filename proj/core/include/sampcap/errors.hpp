#pragma once

#include <stdexcept>
#include <string>

namespace sampcap {

// Base for numeric failures (CLI exit code 3).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Base for invalid configurations (CLI exit code 2).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DegenerateFilter : NumericError {
  using NumericError::NumericError;
};
struct NoUsableChannel : NumericError {
  using NumericError::NumericError;
};
struct NotHermitian : NumericError {
  using NumericError::NumericError;
};
struct SingularWhitening : NumericError {
  using NumericError::NumericError;
};
struct SingularK : NumericError {
  using NumericError::NumericError;
};
// |H|^2 / S_eta unbounded: noise vanishes where the channel does not.
struct UnboundedSnr : NumericError {
  using NumericError::NumericError;
};

struct IncommensurateRates : ConfigError {
  using ConfigError::ConfigError;
};
struct InvalidChannelShape : ConfigError {
  using ConfigError::ConfigError;
};
struct InvalidSpectrum : ConfigError {
  using ConfigError::ConfigError;
};

}  // namespace sampcap
