// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace graphalign {

/// Invalid parameters or malformed configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A size-biased law was requested from a distribution without the
/// required support (zero denominator).
class DegenerateLawError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// A resource guard would be exceeded: degree cap, memory guard or a
/// retry budget.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rejection sampling exhausted its retry budget.
class GenerationError : public CapacityError {
 public:
  using CapacityError::CapacityError;
};

/// Malformed or inconsistent input data (files, mismatched dimensions).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace graphalign
