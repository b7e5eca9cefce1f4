#pragma once

#include <stdexcept>
#include <string>

namespace mmw {

/// Input violates an operation precondition (non-positive frequency, bad angle, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Query outside tabulated data or outside the modelled spatial domain.
class OutOfRangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Singular system, failed search, or degenerate parameter combination.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation invoked on an object of the wrong shape (e.g. no clothing layer).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Frequency or exposure class not covered by a regulatory standard.
class OutOfScopeError : public std::out_of_range {
 public:
  OutOfScopeError(const std::string& what, double band_lo_ghz, double band_hi_ghz)
      : std::out_of_range(what), band_lo_ghz_(band_lo_ghz), band_hi_ghz_(band_hi_ghz) {}

  double band_lo_ghz() const noexcept { return band_lo_ghz_; }
  double band_hi_ghz() const noexcept { return band_hi_ghz_; }

 private:
  double band_lo_ghz_;
  double band_hi_ghz_;
};

/// Power-density estimate refused because the observation point is in the near field.
class NearFieldError : public std::runtime_error {
 public:
  NearFieldError(const std::string& what, double boundary_m)
      : std::runtime_error(what), boundary_m_(boundary_m) {}

  double boundary_m() const noexcept { return boundary_m_; }

 private:
  double boundary_m_;
};

}  // namespace mmw
