#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "qtalbot/potentials.hpp"
#include "qtalbot/wavefield.hpp"

namespace qtalbot {

namespace detail {
class Fft2d;
}

using ComplexField = std::vector<std::complex<double>>;  // row-major, j*nx + i

// Closed-form spreading of the free Gaussian packet, widths in the amplitude
// convention exp(-(x-x0)^2 / (2 sigma^2)).
struct FreeGaussian {
  double sigma_x = 0.0;
  double sigma_y = 0.0;
  double x = 0.0;
  double y = 0.0;
};

FreeGaussian analytic_free_gaussian(const PacketSpec& spec, double T);

// Centroid and widths of |psi|^2, widths converted to the amplitude convention.
struct PacketMoments {
  double x = 0.0;
  double y = 0.0;
  double sigma_x = 0.0;
  double sigma_y = 0.0;
  double norm = 0.0;
};

PacketMoments packet_moments(const ComplexField& psi, const GridSpec& grid);
PacketMoments packet_moments(const WaveField& field);

// Continuous Gaussian packet sampled on the lattice and normalized.
ComplexField gaussian_packet(const PacketSpec& spec, const GridSpec& grid);

// sqrt(sum |a - b|^2 dX dY)
double l2_distance(const ComplexField& a, const ComplexField& b, const GridSpec& grid);

struct OracleConfig {
  double dT = 0.0;
  GridSpec grid;
  double alias_tolerance = 1e-6;  // allowed power fraction in the outer third of k space
  long long alias_check_interval = 10;
};

inline constexpr std::size_t kOracleMaxSide = 256;

// Strang split-operator propagator on a periodic lattice: potential half
// phase, exact kinetic phase exp(-i k^2 dT) in Fourier space, potential half phase.
class SpectralPropagator {
 public:
  // Potential from a stack; it must match across the periodic seam.
  SpectralPropagator(const OracleConfig& cfg, const PotentialStack& stack);
  // Fixed potential sampled on the lattice (row-major).
  SpectralPropagator(const OracleConfig& cfg, std::vector<double> potential);
  ~SpectralPropagator();

  // Advances psi from time T to T + dT.
  void step(ComplexField& psi, double T);
  void advance(ComplexField& psi, double T0, long long steps);
  // Fraction of |psi_k|^2 with |k_x| or |k_y| beyond 2/3 of Nyquist.
  double outer_band_fraction(const ComplexField& psi);

 private:
  void init();
  void fill_potential(double T);
  void update_phases();

  OracleConfig cfg_;
  std::unique_ptr<PotentialStack> stack_;
  std::vector<double> v_;
  std::vector<double> kinetic_;
  std::vector<bool> outer_;
  std::vector<std::complex<double>> vphase_;
  std::vector<std::complex<double>> kphase_;
  std::unique_ptr<detail::Fft2d> fft_;
  long long steps_taken_ = 0;
};

void spectral_step(ComplexField& psi, double T, const PotentialStack& stack, const OracleConfig& cfg);

}  // namespace qtalbot
