#pragma once

#include <stdexcept>
#include <string>

namespace cellless {

/// Malformed input file (syntax or type mismatch).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A loaded value violates a model invariant. `field()` is a dotted path
/// into the document, e.g. "clutter.density" or "poas[3].frequency_hz".
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class PlacementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoFeasibleSolution : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnservedUser : public std::runtime_error {
 public:
  explicit UnservedUser(int user_id)
      : std::runtime_error("user " + std::to_string(user_id) + " is not served by any beam"),
        user_id_(user_id) {}
  int user_id() const noexcept { return user_id_; }

 private:
  int user_id_;
};

class UnmappedFrequency : public std::runtime_error {
 public:
  explicit UnmappedFrequency(double frequency_hz)
      : std::runtime_error("no reference frequency mapped for " +
                           std::to_string(frequency_hz) + " Hz"),
        frequency_hz_(frequency_hz) {}
  double frequency_hz() const noexcept { return frequency_hz_; }

 private:
  double frequency_hz_;
};

}  // namespace cellless
