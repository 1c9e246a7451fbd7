// units.hpp — Unit conventions and physical constants
//
// All energies and frequencies are wavenumbers (cm^-1), temperatures are
// Kelvin, physical time is picoseconds. A wavenumber E corresponds to the
// angular frequency E * rad_per_ps evolving exp(-i E rad_per_ps t) phases.

#pragma once

#include <limits>
#include <numbers>

namespace ttedopa::units {

// Boltzmann constant in cm^-1 per Kelvin (CODATA k_B / (h c)).
inline constexpr double k_boltzmann = 0.695034800;

// Speed of light in cm per ps.
inline constexpr double c_cm_per_ps = 0.0299792458;

// Phase accumulated per ps by a 1 cm^-1 mode: 2*pi*c.
inline constexpr double rad_per_ps = 2.0 * std::numbers::pi * c_cm_per_ps;

// Inverse temperature in 1/cm^-1; T = 0 maps to +infinity.
inline double inverse_temperature(double temperature_K) {
    if (temperature_K == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / (k_boltzmann * temperature_K);
}

}  // namespace ttedopa::units
