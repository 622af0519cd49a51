#pragma once

#include <cstddef>
#include <vector>

namespace qtalbot {

// Square computational lattice in dimensionless units. Column i sits at
// X = x_origin + i*dx, row j at Y = y_origin + j*dy.
struct GridSpec {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double dx = 1.0;
  double dy = 1.0;
  double x_origin = 0.0;
  double y_origin = 0.0;

  double x(std::size_t i) const { return x_origin + dx * static_cast<double>(i); }
  double y(std::size_t j) const { return y_origin + dy * static_cast<double>(j); }
  double x_last() const { return x(nx - 1); }
  double y_last() const { return y(ny - 1); }
  std::size_t size() const { return nx * ny; }

  // Throws ConfigError when the lattice is not square-celled or too small.
  void validate() const;
  double points_per_wavelength(double k) const;
  // Refuses lattices with fewer than 8 points per de Broglie wavelength.
  void require_resolution(double k) const;

  bool operator==(const GridSpec&) const = default;
};

inline constexpr double kMinPointsPerWavelength = 8.0;

// Dense row-major lattice with a two-cell zero halo on every side, so that
// the 5-point-per-axis stencil never needs bounds checks.
class Lattice {
 public:
  static constexpr std::size_t kHalo = 2;

  Lattice() = default;
  Lattice(std::size_t nx, std::size_t ny)
      : nx_(nx), ny_(ny), stride_(nx + 2 * kHalo), data_((nx + 2 * kHalo) * (ny + 2 * kHalo), 0.0) {}

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  std::size_t stride() const { return stride_; }

  double* row(std::size_t j) { return data_.data() + (j + kHalo) * stride_ + kHalo; }
  const double* row(std::size_t j) const { return data_.data() + (j + kHalo) * stride_ + kHalo; }

  double& operator()(std::size_t i, std::size_t j) { return row(j)[i]; }
  double operator()(std::size_t i, std::size_t j) const { return row(j)[i]; }

  void scale(double factor);
  double sum_of_squares() const;
  // Interior values, row-major, without the halo.
  std::vector<double> interior() const;
  bool all_finite() const;

  bool operator==(const Lattice& other) const = default;

 private:
  std::size_t nx_ = 0;
  std::size_t ny_ = 0;
  std::size_t stride_ = 0;
  std::vector<double> data_;
};

}  // namespace qtalbot
