#pragma once

#include <stdexcept>
#include <string>

namespace mosaic {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Inconsistent or out-of-range model configuration.
class ConfigError : public Error {
public:
  using Error::Error;
};

class UnsupportedError : public Error {
public:
  using Error::Error;
};

/// The model has zero variance, zero hit probability or an infinite moment
/// where a finite positive one is required.
class DegenerateError : public Error {
public:
  using Error::Error;
};

/// A computation would exceed its work budget (enumeration size, set count).
class BudgetError : public Error {
public:
  using Error::Error;
};

}  // namespace mosaic
