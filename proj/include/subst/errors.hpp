#pragma once

// Error hierarchy shared by the library and the CLI. The exit_code mapping is
// part of the command-line contract: 2 validation, 3 numeric, 4 uncertified
// or budget exceeded.

#include <stdexcept>
#include <string>

namespace subst {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 1; }
};

class ValidationError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

class NumericError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

// A bound was exhausted before a certificate could be produced. Results are
// never silently downgraded; callers get the partial diagnosis in the message.
class UncertifiedError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

class BudgetError : public UncertifiedError {
 public:
  using UncertifiedError::UncertifiedError;
};

// Requesting a fixed point for a T-patch that is not Psi-periodic.
class NotOnCycleError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace subst
