#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace lexopt {

/// Raised when an input violates a documented range or finiteness constraint.
/// `field()` names the offending parameter so front ends can report it.
class InvalidParameter : public std::invalid_argument {
 public:
  InvalidParameter(std::string field, const std::string& what)
      : std::invalid_argument("invalid parameter '" + field + "': " + what),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Raised when a computation leaves its mathematical domain (division by a
/// zero quantity, a finite-difference stencil leaving the feasible box, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {

inline void require_finite(double v, const char* field) {
  if (!std::isfinite(v)) throw InvalidParameter(field, "must be finite");
}

inline void require_nonnegative(double v, const char* field) {
  require_finite(v, field);
  if (v < 0.0) throw InvalidParameter(field, "must be >= 0");
}

inline void require_positive(double v, const char* field) {
  require_finite(v, field);
  if (!(v > 0.0)) throw InvalidParameter(field, "must be > 0");
}

inline void require_unit_interval(double v, const char* field) {
  require_finite(v, field);
  if (v < 0.0 || v > 1.0) throw InvalidParameter(field, "must lie in [0, 1]");
}

}  // namespace detail
}  // namespace lexopt
