#pragma once

#include <stdexcept>
#include <string>

namespace sepfix {

// Base for everything the library throws on a violated contract.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes or subsystem dimensions that do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A value breaks a type invariant (Hermiticity, unit trace, PSD, ranges).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Argument outside an operation's precondition (kappa range, n = 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A log-space quantity had to be exponentiated but exceeds double range.
class OverflowError : public Error {
 public:
  OverflowError(const std::string& what, double offending_log)
      : Error(what), offending_log_(offending_log) {}
  double offending_log() const noexcept { return offending_log_; }

 private:
  double offending_log_;
};

// Input file missing or unreadable.
class IoError : public Error {
 public:
  using Error::Error;
};

// Paper-mode iteration asked for with a step size that underflows.
class PaperModeRefused : public Error {
 public:
  using Error::Error;
};

}  // namespace sepfix
