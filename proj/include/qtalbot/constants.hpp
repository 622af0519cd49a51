#pragma once

#include <numbers>

namespace qtalbot {

// CODATA 2018 values, SI units.
struct PhysicalConstants {
  double hbar = 1.054571817e-34;          // J s
  double proton_mass = 1.67262192369e-27;  // kg
  double elementary_charge = 1.602176634e-19;  // C
  double vacuum_permittivity = 8.8541878128e-12;  // F/m

  double planck() const { return 2.0 * std::numbers::pi * hbar; }
};

inline constexpr PhysicalConstants kCodata{};

// Mass and charge of the propagated particle. Defaults to a proton.
struct Particle {
  double mass = kCodata.proton_mass;
  double charge = kCodata.elementary_charge;
};

inline constexpr double kElectronVolt = 1.602176634e-19;  // J

}  // namespace qtalbot
