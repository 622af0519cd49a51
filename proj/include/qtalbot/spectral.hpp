#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qtalbot/frame.hpp"
#include "qtalbot/solver.hpp"
#include "qtalbot/wavefield.hpp"

namespace qtalbot {

// Half-open block of lattice indices [i0, i1) x [j0, j1).
struct Window {
  std::size_t i0 = 0;
  std::size_t i1 = 0;
  std::size_t j0 = 0;
  std::size_t j1 = 0;

  std::size_t nx() const { return i1 - i0; }
  std::size_t ny() const { return j1 - j0; }

  static Window full(const GridSpec& grid);
  // Largest window on which every damping factor is within `tolerance` of 1.
  static Window undamped(const GridSpec& grid, const std::vector<DampingSpec>& damping,
                         double tolerance = 1e-4);
};

// psi_k(kx, ky) = (1/2pi) sum psi e^{-i(kx x + ky y)} dX dY over the window,
// phases referenced to the window corner. Stored with k ascending: index
// m maps to kx = (m - nkx/2) dKx.
struct KSpectrum {
  std::size_t nkx = 0;
  std::size_t nky = 0;
  double dkx = 0.0;
  double dky = 0.0;
  Window window;
  double x0 = 0.0;  // position of the window corner
  double y0 = 0.0;
  double dx = 0.0;
  double dy = 0.0;
  std::vector<std::complex<double>> amplitude;  // row-major, index ky*nkx + kx

  double kx(std::size_t m) const { return (static_cast<double>(m) - static_cast<double>(nkx / 2)) * dkx; }
  double ky(std::size_t m) const { return (static_cast<double>(m) - static_cast<double>(nky / 2)) * dky; }
  double magnitude(std::size_t mx, std::size_t my) const { return std::abs(amplitude[my * nkx + mx]); }
  double power(std::size_t mx, std::size_t my) const { return std::norm(amplitude[my * nkx + mx]); }

  // sum |psi_k|^2 dKx dKy
  double norm() const;
  bool same_grid(const KSpectrum& other) const;
};

// Window checked against the damping layers; pass an empty list to skip the check.
KSpectrum k_spectrum(const WaveField& field, const Window& window,
                     const std::vector<DampingSpec>& damping = {});
// Same transform for an arbitrary complex lattice (row-major, grid-sized).
KSpectrum k_spectrum(const std::vector<std::complex<double>>& psi, const GridSpec& grid,
                     const Window& window);
// psi on the window, row-major; inverse of k_spectrum.
std::vector<std::complex<double>> inverse(const KSpectrum& spectrum);

// |psi_k|^2-weighted mean k_y (dimensionless).
double mean_ky(const KSpectrum& spectrum);
// Difference of mean k_y, converted to m^-1.
double delta_ky(const KSpectrum& spectrum, const KSpectrum& reference, const ScalingFrame& frame);

}  // namespace qtalbot
