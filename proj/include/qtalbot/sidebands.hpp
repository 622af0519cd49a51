#pragma once

#include <string>
#include <vector>

#include "qtalbot/frame.hpp"
#include "qtalbot/spectral.hpp"

namespace qtalbot {

struct SidebandPrediction {
  int eta = 0;
  double k = 0.0;  // m^-1
};

struct SidebandPredictions {
  double n = 0.0;
  std::vector<SidebandPrediction> allowed;
  std::vector<int> excluded;  // eta with a negative radicand
};

// k = sqrt(2m(E_k0 + eta n hbar omega0))/hbar for eta in [eta_min, eta_max].
// E_k0 in J, omega0 in rad/s.
SidebandPredictions sideband_predict(double E_k0, double omega0, double n, int eta_min,
                                     int eta_max, const Particle& particle = {},
                                     const PhysicalConstants& constants = kCodata);

// Angular sum of |psi_k|^2 over k_x >= 0, binned in |k| (dimensionless).
struct RadialProfile {
  double dk = 0.0;
  std::vector<double> power;

  double k(std::size_t b) const { return dk * static_cast<double>(b); }
};

RadialProfile radial_profile(const KSpectrum& spectrum);

struct SidebandRow {
  int eta = 0;
  double n = 0.0;
  double k_theory = 0.0;    // m^-1
  double k_measured = 0.0;  // m^-1
  double amplitude = 0.0;   // peak power relative to the strongest peak
};

struct SidebandTable {
  std::vector<SidebandRow> rows;
};

// Peaks of the radial profile whose prominence exceeds max(3 x median,
// 1e-2 x max). Each is matched to the nearest prediction (eta and k_theory
// are left at 0 when `predictions` is empty).
SidebandTable sideband_detect(const KSpectrum& spectrum, const ScalingFrame& frame,
                              const SidebandPredictions& predictions = {});

}  // namespace qtalbot
