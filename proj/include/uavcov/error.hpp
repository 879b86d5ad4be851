#pragma once

#include <stdexcept>
#include <string>

namespace uavcov {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
  using Error::Error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

// Raised when an iterative numeric routine cannot reach its tolerance.
// Carries the best estimate so callers can decide whether to use it anyway.
class AccuracyError : public Error {
public:
  AccuracyError(const std::string& what, double estimate, double error_bound)
      : Error(what), estimate_(estimate), error_bound_(error_bound) {}

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

private:
  double estimate_;
  double error_bound_;
};

class NoUavError : public Error {
public:
  NoUavError() : Error("realization contains no UAV") {}
};

class ShapeError : public Error {
public:
  using Error::Error;
};

// Config parse/validation failure; key() names the offending entry.
class ConfigError : public Error {
public:
  ConfigError(std::string key, const std::string& message)
      : Error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

private:
  std::string key_;
};

}  // namespace uavcov
