// constants.hpp - physical constants (CODATA 2018, SI units)

#pragma once

#include <numbers>

namespace pdicke::constants {

inline constexpr double kPi = std::numbers::pi;

inline constexpr double kSpeedOfLight = 2.99792458e8;         // m/s, exact
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
inline constexpr double kHbar = 1.054571817e-34;              // J s
inline constexpr double kVacuumPermeability =
    1.0 / (kVacuumPermittivity * kSpeedOfLight * kSpeedOfLight);  // H/m

}  // namespace pdicke::constants
