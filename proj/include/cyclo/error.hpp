#pragma once

#include <stdexcept>
#include <string>

namespace cyclo {

// Invalid parameters or inconsistent configuration. CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Calibration sample too small for the requested false-alarm rate.
class CalibrationError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// Detector kinds do not match (e.g. an energy threshold applied to a cycle metric).
class UsageError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// File read/write failure, always carries the path. CLI exit code 3.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace cyclo
