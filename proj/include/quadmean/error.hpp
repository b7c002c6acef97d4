#pragma once

#include <stdexcept>
#include <string>

namespace quadmean {

/// Base of every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class domain_error : public error {
 public:
  using error::error;
};

/// Evaluation at a pole.
class pole_error : public domain_error {
 public:
  using domain_error::domain_error;
};

/// Request exceeds a configured size or work cap.
class resource_error : public error {
 public:
  using error::error;
};

/// Feature outside the supported range (e.g. an L-function inside the strip).
class unsupported_error : public error {
 public:
  using error::error;
};

/// A numerical method failed to reach its tolerance. Carries the best value
/// found and its error estimate so callers can still report it.
class accuracy_error : public error {
 public:
  accuracy_error(const std::string& what, double best_estimate, double error_estimate)
      : error(what), best_(best_estimate), err_(error_estimate) {}

  double best_estimate() const noexcept { return best_; }
  double error_estimate() const noexcept { return err_; }

 private:
  double best_;
  double err_;
};

}  // namespace quadmean
