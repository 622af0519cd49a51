#include "qtalbot/frame.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qtalbot/error.hpp"

namespace qtalbot {

ScalingFrame build_frame(double V0, const Particle& particle) {
  if (!(V0 > 0.0) || !std::isfinite(V0)) {
    throw DomainError("energy scale V0 must be positive, got " + std::to_string(V0));
  }
  if (!(particle.mass > 0.0)) throw DomainError("particle mass must be positive");
  ScalingFrame f;
  f.particle = particle;
  const double hbar = f.constants.hbar;
  f.V0 = V0;
  f.gamma = std::sqrt(hbar * hbar / (2.0 * particle.mass * V0));
  f.tau = 2.0 * particle.mass * f.gamma * f.gamma / hbar;
  return f;
}

ScalingFrame build_frame_from_length(double gamma, const Particle& particle) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw DomainError("length scale gamma must be positive");
  }
  if (!(particle.mass > 0.0)) throw DomainError("particle mass must be positive");
  ScalingFrame f;
  f.particle = particle;
  const double hbar = f.constants.hbar;
  f.gamma = gamma;
  f.V0 = hbar * hbar / (2.0 * particle.mass * gamma * gamma);
  f.tau = 2.0 * particle.mass * gamma * gamma / hbar;
  return f;
}

QuantityKind parse_quantity_kind(std::string_view name) {
  if (name == "length") return QuantityKind::length;
  if (name == "time") return QuantityKind::time;
  if (name == "energy") return QuantityKind::energy;
  throw UsageError("unknown quantity kind '" + std::string(name) + "'");
}

namespace {

double scale_of(QuantityKind kind, const ScalingFrame& frame) {
  switch (kind) {
    case QuantityKind::length: return frame.gamma;
    case QuantityKind::time: return frame.tau;
    case QuantityKind::energy: return frame.V0;
  }
  throw UsageError("unknown quantity kind");
}

}  // namespace

double to_dimensionless(double value, QuantityKind kind, const ScalingFrame& frame) {
  return value / scale_of(kind, frame);
}

double from_dimensionless(double value, QuantityKind kind, const ScalingFrame& frame) {
  return value * scale_of(kind, frame);
}

double to_dimensionless(double value, std::string_view kind, const ScalingFrame& frame) {
  return to_dimensionless(value, parse_quantity_kind(kind), frame);
}

double from_dimensionless(double value, std::string_view kind, const ScalingFrame& frame) {
  return from_dimensionless(value, parse_quantity_kind(kind), frame);
}

double dimensionless_wavenumber(double lambda, const ScalingFrame& frame) {
  if (!(lambda > 0.0)) throw DomainError("wavelength must be positive");
  return 2.0 * std::numbers::pi * frame.gamma / lambda;
}

}  // namespace qtalbot
