// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>

namespace seqinfer {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent configuration / input files.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Degenerate data for the requested statistic (zero variance, T < 2, ...).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace seqinfer
