#pragma once

#include <compare>

namespace mmw {

/// Frequency in hertz. Construct through the named factories to keep units explicit.
class Frequency {
 public:
  constexpr Frequency() = default;

  static constexpr Frequency hz(double value) { return Frequency(value); }
  static constexpr Frequency ghz(double value) { return Frequency(value * 1e9); }

  constexpr double in_hz() const { return hz_; }
  constexpr double in_ghz() const { return hz_ * 1e-9; }
  constexpr double in_mhz() const { return hz_ * 1e-6; }

  constexpr auto operator<=>(const Frequency&) const = default;

 private:
  constexpr explicit Frequency(double value) : hz_(value) {}
  double hz_ = 0.0;
};

}  // namespace mmw
