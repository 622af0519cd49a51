#include "qtalbot/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "qtalbot/error.hpp"

namespace qtalbot {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Source index of the FFT bin that lands at shifted position m.
std::size_t unshift(std::size_t m, std::size_t n) { return (m + n - n / 2) % n; }

}  // namespace

Window Window::full(const GridSpec& grid) { return {0, grid.nx, 0, grid.ny}; }

Window Window::undamped(const GridSpec& grid, const std::vector<DampingSpec>& damping,
                        double tolerance) {
  Window w = full(grid);
  for (const auto& d : damping) {
    const bool along_x = d.edge == Edge::left || d.edge == Edge::right;
    const std::size_t n = along_x ? grid.nx : grid.ny;
    auto coord = [&](std::size_t k) { return along_x ? grid.x(k) : grid.y(k); };
    std::size_t lo = 0;
    std::size_t hi = n;
    if (d.lambda > 0.0) {
      while (lo < n && 1.0 - d.factor(coord(lo)) > tolerance) ++lo;
    } else {
      while (hi > 0 && 1.0 - d.factor(coord(hi - 1)) > tolerance) --hi;
    }
    if (along_x) {
      w.i0 = std::max(w.i0, lo);
      w.i1 = std::min(w.i1, hi);
    } else {
      w.j0 = std::max(w.j0, lo);
      w.j1 = std::min(w.j1, hi);
    }
  }
  if (w.i1 <= w.i0 || w.j1 <= w.j0) throw ConfigError("damping layers leave no undamped window");
  return w;
}

double KSpectrum::norm() const {
  double total = 0.0;
  for (const auto& a : amplitude) total += std::norm(a);
  return total * dkx * dky;
}

bool KSpectrum::same_grid(const KSpectrum& o) const {
  return nkx == o.nkx && nky == o.nky && dkx == o.dkx && dky == o.dky;
}

KSpectrum k_spectrum(const std::vector<std::complex<double>>& psi, const GridSpec& grid,
                     const Window& window) {
  if (window.i1 > grid.nx || window.j1 > grid.ny || window.i0 >= window.i1 ||
      window.j0 >= window.j1) {
    throw RangeError("spectral window lies outside the lattice");
  }
  if (psi.size() != grid.size()) throw UsageError("wave function size does not match the grid");
  const std::size_t nx = window.nx();
  const std::size_t ny = window.ny();
  detail::Fft2d fft(nx, ny);
  auto* buf = fft.data();
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      buf[j * nx + i] = psi[(window.j0 + j) * grid.nx + window.i0 + i];
    }
  }
  fft.forward();

  KSpectrum s;
  s.nkx = nx;
  s.nky = ny;
  s.dkx = kTwoPi / (static_cast<double>(nx) * grid.dx);
  s.dky = kTwoPi / (static_cast<double>(ny) * grid.dy);
  s.window = window;
  s.x0 = grid.x(window.i0);
  s.y0 = grid.y(window.j0);
  s.dx = grid.dx;
  s.dy = grid.dy;
  s.amplitude.resize(nx * ny);
  const double c = grid.dx * grid.dy / kTwoPi;
  for (std::size_t my = 0; my < ny; ++my) {
    const std::size_t sy = unshift(my, ny);
    for (std::size_t mx = 0; mx < nx; ++mx) {
      s.amplitude[my * nx + mx] = c * buf[sy * nx + unshift(mx, nx)];
    }
  }
  return s;
}

KSpectrum k_spectrum(const WaveField& field, const Window& window,
                     const std::vector<DampingSpec>& damping) {
  if (!damping.empty()) {
    const Window safe = Window::undamped(field.grid, damping);
    if (window.i0 < safe.i0 || window.i1 > safe.i1 || window.j0 < safe.j0 ||
        window.j1 > safe.j1) {
      throw ConfigError("spectral window overlaps a damping layer");
    }
  }
  return k_spectrum(synchronized_psi(field), field.grid, window);
}

std::vector<std::complex<double>> inverse(const KSpectrum& s) {
  const std::size_t nx = s.nkx;
  const std::size_t ny = s.nky;
  detail::Fft2d fft(nx, ny);
  auto* buf = fft.data();
  for (std::size_t my = 0; my < ny; ++my) {
    const std::size_t sy = unshift(my, ny);
    for (std::size_t mx = 0; mx < nx; ++mx) buf[sy * nx + unshift(mx, nx)] = s.amplitude[my * nx + mx];
  }
  fft.backward();
  const double c = s.dkx * s.dky / kTwoPi;
  std::vector<std::complex<double>> out(buf, buf + fft.size());
  for (auto& v : out) v *= c;
  return out;
}

double mean_ky(const KSpectrum& s) {
  double mass = 0.0;
  double moment = 0.0;
  for (std::size_t my = 0; my < s.nky; ++my) {
    double row = 0.0;
    for (std::size_t mx = 0; mx < s.nkx; ++mx) row += s.power(mx, my);
    mass += row;
    moment += row * s.ky(my);
  }
  return mass > 0.0 ? moment / mass : 0.0;
}

double delta_ky(const KSpectrum& spectrum, const KSpectrum& reference, const ScalingFrame& frame) {
  if (!spectrum.same_grid(reference)) throw UsageError("spectra are on different k grids");
  return (mean_ky(spectrum) - mean_ky(reference)) / frame.gamma;
}

}  // namespace qtalbot
