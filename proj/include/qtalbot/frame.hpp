#pragma once

#include <string_view>

#include "qtalbot/constants.hpp"

namespace qtalbot {

// Length, time and energy scales that turn the Schrodinger equation into
// i dpsi/dT = [-lap + phi] psi.
struct ScalingFrame {
  double gamma = 0.0;  // m
  double tau = 0.0;    // s
  double V0 = 0.0;     // J
  Particle particle{};
  PhysicalConstants constants{};
};

ScalingFrame build_frame(double V0, const Particle& particle = {});
// Same frame, specified through its length scale.
ScalingFrame build_frame_from_length(double gamma, const Particle& particle = {});

enum class QuantityKind { length, time, energy };

QuantityKind parse_quantity_kind(std::string_view name);

double to_dimensionless(double value, QuantityKind kind, const ScalingFrame& frame);
double from_dimensionless(double value, QuantityKind kind, const ScalingFrame& frame);

// Convenience wrappers that accept "length" / "time" / "energy".
double to_dimensionless(double value, std::string_view kind, const ScalingFrame& frame);
double from_dimensionless(double value, std::string_view kind, const ScalingFrame& frame);

// Dimensionless wave number of a particle with de Broglie wavelength lambda (m).
double dimensionless_wavenumber(double lambda, const ScalingFrame& frame);

}  // namespace qtalbot
