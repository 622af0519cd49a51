#include "qtalbot/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qtalbot/error.hpp"

namespace qtalbot {

void GridSpec::validate() const {
  if (nx < 16 || ny < 16) {
    throw ConfigError("grid must be at least 16x16, got " + std::to_string(nx) + "x" +
                      std::to_string(ny));
  }
  if (!(dx > 0.0) || !(dy > 0.0)) throw ConfigError("grid spacing must be positive");
  if (std::abs(dx - dy) > 1e-12 * dx) throw ConfigError("grid cells must be square (dX = dY)");
}

double GridSpec::points_per_wavelength(double k) const {
  return 2.0 * std::numbers::pi / k / dx;
}

void GridSpec::require_resolution(double k) const {
  const double ppw = points_per_wavelength(k);
  if (ppw < kMinPointsPerWavelength * (1.0 - 1e-12)) {
    throw ConfigError("grid resolves the de Broglie wavelength with " + std::to_string(ppw) +
                      " points; at least 8 are required");
  }
}

void Lattice::scale(double factor) {
  for (std::size_t j = 0; j < ny_; ++j) {
    double* r = row(j);
    for (std::size_t i = 0; i < nx_; ++i) r[i] *= factor;
  }
}

double Lattice::sum_of_squares() const {
  double total = 0.0;
  for (std::size_t j = 0; j < ny_; ++j) {
    const double* r = row(j);
    double acc = 0.0;
    for (std::size_t i = 0; i < nx_; ++i) acc += r[i] * r[i];
    total += acc;
  }
  return total;
}

std::vector<double> Lattice::interior() const {
  std::vector<double> out;
  out.reserve(nx_ * ny_);
  for (std::size_t j = 0; j < ny_; ++j) {
    const double* r = row(j);
    out.insert(out.end(), r, r + nx_);
  }
  return out;
}

bool Lattice::all_finite() const {
  for (std::size_t j = 0; j < ny_; ++j) {
    const double* r = row(j);
    double acc = 0.0;
    for (std::size_t i = 0; i < nx_; ++i) acc += r[i] * 0.0;
    if (acc != 0.0) return false;  // NaN or Inf turns x*0 into NaN
  }
  return true;
}

}  // namespace qtalbot
