#include "qtalbot/sidebands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qtalbot/error.hpp"

namespace qtalbot {

SidebandPredictions sideband_predict(double E_k0, double omega0, double n, int eta_min,
                                     int eta_max, const Particle& particle,
                                     const PhysicalConstants& constants) {
  if (!(E_k0 > 0.0)) throw DomainError("kinetic energy must be positive");
  if (!(omega0 > 0.0) || !(n > 0.0)) throw DomainError("modulation frequency must be positive");
  if (eta_min > eta_max) throw UsageError("eta range is empty");
  SidebandPredictions out;
  out.n = n;
  const double quantum = n * constants.hbar * omega0;
  for (int eta = eta_min; eta <= eta_max; ++eta) {
    const double radicand = 2.0 * particle.mass * (E_k0 + eta * quantum);
    if (radicand < 0.0) {
      out.excluded.push_back(eta);
      continue;
    }
    out.allowed.push_back({eta, std::sqrt(radicand) / constants.hbar});
  }
  return out;
}

RadialProfile radial_profile(const KSpectrum& s) {
  RadialProfile p;
  p.dk = std::min(s.dkx, s.dky);
  double kmax = 0.0;
  for (std::size_t my : {std::size_t{0}, s.nky - 1}) {
    for (std::size_t mx : {std::size_t{0}, s.nkx - 1}) kmax = std::max(kmax, std::hypot(s.kx(mx), s.ky(my)));
  }
  p.power.assign(static_cast<std::size_t>(kmax / p.dk) + 2, 0.0);
  const double cell = s.dkx * s.dky;
  for (std::size_t my = 0; my < s.nky; ++my) {
    const double ky = s.ky(my);
    for (std::size_t mx = 0; mx < s.nkx; ++mx) {
      const double kx = s.kx(mx);
      if (kx < 0.0) continue;
      // Cloud-in-cell: split each sample between the two nearest bins.
      const double r = std::hypot(kx, ky) / p.dk;
      const auto b = static_cast<std::size_t>(r);
      const double t = r - static_cast<double>(b);
      const double w = s.power(mx, my) * cell;
      p.power[b] += (1.0 - t) * w;
      p.power[b + 1] += t * w;
    }
  }
  return p;
}

SidebandTable sideband_detect(const KSpectrum& spectrum, const ScalingFrame& frame,
                              const SidebandPredictions& predictions) {
  const RadialProfile p = radial_profile(spectrum);
  const auto& P = p.power;
  SidebandTable table;
  if (P.size() < 3) return table;

  std::vector<double> sorted(P);
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(sorted.size() / 2), sorted.end());
  const double median = sorted[sorted.size() / 2];
  const double peak = *std::max_element(P.begin(), P.end());
  const double threshold = std::max(3.0 * median, 1e-2 * peak);
  if (!(peak > 0.0)) return table;

  const double to_si = 1.0 / frame.gamma;
  for (std::size_t b = 1; b + 1 < P.size(); ++b) {
    if (!(P[b] > P[b - 1] && P[b] >= P[b + 1])) continue;
    // Prominence: drop to the higher of the two bases before a taller peak.
    double left_base = P[b];
    for (std::size_t q = b; q-- > 0;) {
      if (P[q] > P[b]) break;
      left_base = std::min(left_base, P[q]);
    }
    double right_base = P[b];
    for (std::size_t q = b + 1; q < P.size(); ++q) {
      if (P[q] > P[b]) break;
      right_base = std::min(right_base, P[q]);
    }
    const double prominence = P[b] - std::max(left_base, right_base);
    if (prominence < threshold) continue;

    const double den = P[b - 1] - 2.0 * P[b] + P[b + 1];
    const double off = den != 0.0 ? std::clamp(0.5 * (P[b - 1] - P[b + 1]) / den, -0.5, 0.5) : 0.0;
    SidebandRow row;
    row.n = predictions.n;
    row.k_measured = (static_cast<double>(b) + off) * p.dk * to_si;
    row.amplitude = P[b] / peak;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& pred : predictions.allowed) {
      const double dist = std::abs(pred.k - row.k_measured);
      if (dist < best) {
        best = dist;
        row.eta = pred.eta;
        row.k_theory = pred.k;
      }
    }
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace qtalbot
