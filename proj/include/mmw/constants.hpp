#pragma once

#include <cmath>
#include <numbers>

namespace mmw::constants {

inline constexpr double kPi = std::numbers::pi;

// Free-space permittivity as tabulated alongside the bundled dielectric data
// (8.85e-12 F/m, three significant figures). Keeping the same value makes
// sigma <-> eps'' conversions reproduce the tables to their printed digits.
inline constexpr double kVacuumPermittivity = 8.85e-12;
inline constexpr double kVacuumPermeability = 4.0e-7 * kPi;

inline const double kSpeedOfLight = 1.0 / std::sqrt(kVacuumPermeability * kVacuumPermittivity);
inline const double kFreeSpaceImpedance = std::sqrt(kVacuumPermeability / kVacuumPermittivity);

}  // namespace mmw::constants
