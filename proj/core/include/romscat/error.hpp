// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace romscat {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument: wrong length, bad option value, mismatched dimensions.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Input outside the mathematical domain of an operation (e.g. log of a
/// non-positive impedance).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Run configuration is inconsistent (CFL violation, missing keys, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or truncated file.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Dense numerical failure (indefinite spectrum, oversize oracle, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Block Cholesky pivot that is not positive definite.
class FactorizationError : public NumericalError {
 public:
  FactorizationError(const std::string& what, int block)
      : NumericalError(what), block_(block) {}
  int block() const noexcept { return block_; }

 private:
  int block_;
};

/// Singular block met while extracting Lanczos coefficients.
class ExtractionError : public FactorizationError {
 public:
  using FactorizationError::FactorizationError;
};

}  // namespace romscat
