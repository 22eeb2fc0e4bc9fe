#ifndef CKDV_ERROR_HPP
#define CKDV_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ckdv {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a precondition (sample-count mismatch, bad shape, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class UnsupportedOrder : public Error {
 public:
  using Error::Error;
};

class UnsupportedShape : public Error {
 public:
  using Error::Error;
};

/// Only zero-mean samples have a periodic antiderivative.
class NonIntegrableInput : public Error {
 public:
  NonIntegrableInput(double mean, double tolerance)
      : Error("non-integrable input: mean " + std::to_string(mean) +
              " exceeds tolerance " + std::to_string(tolerance)),
        mean_(mean) {}

  double mean() const noexcept { return mean_; }

 private:
  double mean_;
};

/// A field became non-finite or exceeded the blow-up threshold.
/// `last_good_time` is the time of the last accepted state.
class BlowUp : public Error {
 public:
  BlowUp(double time, double last_good_time, std::size_t field_index)
      : Error("blow-up at t=" + std::to_string(time) + " in field " +
              std::to_string(field_index) + " (last good t=" +
              std::to_string(last_good_time) + ")"),
        time_(time),
        last_good_time_(last_good_time),
        field_index_(field_index) {}

  double time() const noexcept { return time_; }
  double last_good_time() const noexcept { return last_good_time_; }
  /// 0 is u, i >= 1 is phi_i.
  std::size_t field_index() const noexcept { return field_index_; }

 private:
  double time_;
  double last_good_time_;
  std::size_t field_index_;
};

class InvalidPhasePoint : public Error {
 public:
  using Error::Error;
};

/// Two code paths that must agree did not.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class DomainTooSmall : public Error {
 public:
  using Error::Error;
};

class DegenerateParameters : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace ckdv

#endif
