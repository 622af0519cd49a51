#include "qtalbot/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qtalbot/error.hpp"

namespace qtalbot {

void GratingSpec::validate() const {
  if (!(period > 0.0)) throw ConfigError("grating period must be positive");
  if (!(opening_fraction > 0.0 && opening_fraction < 1.0)) {
    throw ConfigError("grating opening fraction must lie strictly between 0 and 1");
  }
  if (!(thickness > 0.0)) throw ConfigError("grating thickness must be positive");
  if (!(barrier_height > 0.0)) throw ConfigError("grating barrier height must be positive");
  if (slit_count < 0) throw ConfigError("slit count must be non-negative");
}

double GratingSpec::offset_from_opening(double Y) const {
  const double u = Y - y_offset;
  if (slit_count == 0) {
    const double m = std::round(u / period);
    return u - m * period;
  }
  const double half = 0.5 * static_cast<double>(slit_count - 1);
  const double m = std::clamp(std::round(u / period + half), 0.0, static_cast<double>(slit_count - 1));
  return u - (m - half) * period;
}

double GratingSpec::transmission(double Y) const {
  const double a = std::abs(offset_from_opening(Y));
  const double edge = 0.5 * opening_width();
  // Lattice rows often sit exactly on an edge; roundoff must not pick the side.
  const double eps = 1e-9 * period;
  if (a < edge - eps) return 1.0;
  if (a <= edge + eps) return 0.5;
  return 0.0;
}

void ImageChargeSpec::validate() const {
  if (enabled && !(cutoff > 0.0)) throw ConfigError("image-charge cutoff must be positive");
}

FieldSpec FieldSpec::uniform(double E0, double theta, double x_lo, double x_hi) {
  FieldSpec f;
  f.kind = FieldKind::uniform;
  f.E0 = E0;
  f.theta = theta;
  f.x_lo = x_lo;
  f.x_hi = x_hi;
  return f;
}

FieldSpec FieldSpec::spatial(double E0, double lambda_prime, double x_lo, double x_hi) {
  FieldSpec f;
  f.kind = FieldKind::spatial;
  f.E0 = E0;
  f.lambda_prime = lambda_prime;
  f.theta = 0.5 * std::numbers::pi;
  f.x_lo = x_lo;
  f.x_hi = x_hi;
  return f;
}

FieldSpec FieldSpec::temporal(double E0, double omega, double x_lo, double x_hi) {
  FieldSpec f;
  f.kind = FieldKind::temporal;
  f.E0 = E0;
  f.omega = omega;
  f.theta = 0.5 * std::numbers::pi;
  f.x_lo = x_lo;
  f.x_hi = x_hi;
  return f;
}

void FieldSpec::validate() const {
  if (!(E0 >= 0.0)) throw ConfigError("field amplitude E0 must be non-negative");
  if (!(x_lo < x_hi)) throw ConfigError("field region requires x_lo < x_hi");
  if (kind == FieldKind::spatial && !(lambda_prime > 0.0)) {
    throw ConfigError("spatial modulation length must be positive");
  }
  if (kind == FieldKind::temporal && !(omega >= 0.0)) {
    throw ConfigError("modulation frequency must be non-negative");
  }
}

void PotentialStack::validate() const {
  if (grating) grating->validate();
  image.validate();
  for (const auto& f : fields) f.validate();
}

double geometric_potential(double X, double Y, const GratingSpec& g) {
  if (!g.within_thickness(X)) return 0.0;
  return g.barrier_height * (1.0 - g.transmission(Y));
}

double image_potential(double X, double Y, const GratingSpec& g, const ImageChargeSpec& spec,
                       const ScalingFrame& frame) {
  if (!spec.enabled || !g.within_thickness(X)) return 0.0;
  const double w = g.opening_width();
  const double r = g.offset_from_opening(Y);
  if (!(std::abs(r) < 0.5 * w)) return 0.0;
  const double to_lower = std::max(r + 0.5 * w, spec.cutoff);
  const double to_upper = std::max(0.5 * w - r, spec.cutoff);
  const double q = frame.particle.charge;
  const double coupling = spec.induced_charge_factor * q * q /
                          (8.0 * std::numbers::pi * frame.constants.vacuum_permittivity *
                           frame.gamma * frame.V0);
  const double value = coupling * (1.0 / to_lower + 1.0 / to_upper);
  return std::max(value, -50.0 * g.barrier_height);
}

ColumnTerms field_column_shape(double X, const FieldSpec& f, const ScalingFrame& frame) {
  if (!f.inside(X)) return {};
  const double c = frame.particle.charge * f.E0 * frame.gamma / frame.V0;
  switch (f.kind) {
    case FieldKind::uniform:
      return {-c * X * std::cos(f.theta), -c * std::sin(f.theta)};
    case FieldKind::spatial: {
      const double kprime = 2.0 * std::numbers::pi * frame.gamma / f.lambda_prime;
      return {0.0, -c * std::abs(std::cos(kprime * X))};
    }
    case FieldKind::temporal:
      return {0.0, -c};
  }
  return {};
}

double field_time_factor(double T, const FieldSpec& f, const ScalingFrame& frame) {
  if (f.kind != FieldKind::temporal) return 1.0;
  return std::cos(f.omega * frame.tau * T);
}

double field_potential(double X, double Y, double T, const FieldSpec& f, const ScalingFrame& frame) {
  const ColumnTerms s = field_column_shape(X, f, frame);
  const double g = field_time_factor(T, f, frame);
  return g * s.offset + (g * s.slope) * Y;
}

double static_potential(double X, double Y, const PotentialStack& stack) {
  if (!stack.grating) return 0.0;
  return geometric_potential(X, Y, *stack.grating) +
         image_potential(X, Y, *stack.grating, stack.image, stack.frame);
}

double total_potential(double X, double Y, double T, const PotentialStack& stack) {
  double v = static_potential(X, Y, stack);
  for (const auto& f : stack.fields) v += field_potential(X, Y, T, f, stack.frame);
  return v;
}

}  // namespace qtalbot
