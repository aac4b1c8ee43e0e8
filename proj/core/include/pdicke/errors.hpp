// errors.hpp - exception hierarchy shared by every pdicke module

#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace pdicke {

/// Argument outside the physical domain of an operation (point inside the
/// plate, level index off the ladder, nonpositive frequency, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Integration or extraction failed numerically. `time()` carries the
/// simulation time of the failure when one is known, otherwise NaN.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, double time = kNoTime)
      : std::runtime_error(what), time_(time) {}

  double time() const noexcept { return time_; }

 private:
  static constexpr double kNoTime = std::numeric_limits<double>::quiet_NaN();
  double time_;
};

}  // namespace pdicke
