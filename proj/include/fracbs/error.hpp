#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fracbs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside an operation's domain.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Evaluation at a kernel singularity (x = y, point on the boundary, ...).
class SingularityError : public Error {
public:
  using Error::Error;
};

/// Iterative method failed; carries the tail of its iterate history.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, std::vector<double> history)
      : Error(what), history_(std::move(history)) {}
  const std::vector<double>& history() const { return history_; }

private:
  std::vector<double> history_;
};

/// Configuration rejected before dispatch.
class ConfigError : public Error {
public:
  using Error::Error;
};

} // namespace fracbs
