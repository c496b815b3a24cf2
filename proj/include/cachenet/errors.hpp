#pragma once

#include <stdexcept>
#include <string>

namespace cachenet {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument or parameter set violates a documented precondition.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// e_miss < e_hit: fetching through the backhaul may not be cheaper than a hit.
class EnergyOrderError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The budget cannot buy the minimum deployment.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Iterative quadrature ran out of refinements before meeting its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double previous, double last)
      : Error(what), previous_(previous), last_(last) {}

  double previous() const { return previous_; }
  double last() const { return last_; }

 private:
  double previous_;
  double last_;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace cachenet
