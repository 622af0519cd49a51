#pragma once

#include <complex>
#include <vector>

#include "qtalbot/grid.hpp"

namespace qtalbot {

// Staggered leapfrog state. `real` holds psi_real at T = step_index * dT;
// `imag` holds psi_imag at T + dT/2 and `imag_prev` at T - dT/2. Keeping
// both imaginary layers gives the second-order norm without re-deriving the
// previous half step.
struct WaveField {
  GridSpec grid;
  Lattice real;
  Lattice imag;
  Lattice imag_prev;
  long long step_index = 0;
  double dT = 0.0;

  WaveField() = default;
  WaveField(const GridSpec& g, double dt)
      : grid(g), real(g.nx, g.ny), imag(g.nx, g.ny), imag_prev(g.nx, g.ny), dT(dt) {}

  double time() const { return static_cast<double>(step_index) * dT; }

  // psi at integer time T, imaginary part averaged across the stagger.
  std::complex<double> at(std::size_t i, std::size_t j) const {
    return {real(i, j), 0.5 * (imag(i, j) + imag_prev(i, j))};
  }
  double density(std::size_t i, std::size_t j) const { return std::norm(at(i, j)); }

  void scale(double factor);
};

// Discrete norm sum(R^2 + I(T-dT/2) I(T+dT/2)) dX dY; conserved exactly by
// the undamped leapfrog.
double norm(const WaveField& field);
// sum(R^2 + I^2) dX dY with the half-step imaginary layer. Diagnostics only.
double naive_norm(const WaveField& field);

// psi(T) for the whole lattice, row-major (index j*nx + i).
std::vector<std::complex<double>> synchronized_psi(const WaveField& field);

// Probability-weighted mean X over columns with X >= x_floor.
double centroid_x(const WaveField& field, double x_floor = -1e300);

// Gaussian wave packet moving along +X (dimensionless inputs).
struct PacketSpec {
  double sigma_x = 1.0;
  double sigma_y = 1.0;
  double x0 = 0.0;
  double y0 = 0.0;
  double k = 1.0;

  void validate() const;
};

// Required distance from packet centre to every lattice edge, in widths.
// exp(-4.3^2) < 1e-8: density at the edge relative to the peak.
inline constexpr double kPacketClearance = 4.3;

// Normalized packet on `grid`. The imaginary layers are placed at +-dT/2:
// imag from the analytic free packet evaluated at T = dT/2, imag_prev from one
// backward leapfrog half step with the free lattice Hamiltonian, so the
// initial discrete norm is the scheme's own conserved quantity.
WaveField init_packet(const PacketSpec& spec, const GridSpec& grid, double dT,
                      int spatial_order = 4);

}  // namespace qtalbot
