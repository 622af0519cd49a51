#include "qtalbot/wavefield.hpp"

#include <cmath>
#include <complex>
#include <vector>
#include <string>

#include "qtalbot/error.hpp"
#include "qtalbot/stencil.hpp"

namespace qtalbot {

void WaveField::scale(double factor) {
  real.scale(factor);
  imag.scale(factor);
  imag_prev.scale(factor);
}

double norm(const WaveField& field) {
  double total = 0.0;
  for (std::size_t j = 0; j < field.grid.ny; ++j) {
    const double* r = field.real.row(j);
    const double* a = field.imag.row(j);
    const double* b = field.imag_prev.row(j);
    double acc = 0.0;
    for (std::size_t i = 0; i < field.grid.nx; ++i) acc += r[i] * r[i] + a[i] * b[i];
    total += acc;
  }
  return total * field.grid.dx * field.grid.dy;
}

double naive_norm(const WaveField& field) {
  return (field.real.sum_of_squares() + field.imag.sum_of_squares()) * field.grid.dx *
         field.grid.dy;
}

std::vector<std::complex<double>> synchronized_psi(const WaveField& field) {
  std::vector<std::complex<double>> out;
  out.reserve(field.grid.size());
  for (std::size_t j = 0; j < field.grid.ny; ++j) {
    for (std::size_t i = 0; i < field.grid.nx; ++i) out.push_back(field.at(i, j));
  }
  return out;
}

double centroid_x(const WaveField& field, double x_floor) {
  const GridSpec& g = field.grid;
  std::size_t i0 = 0;
  if (x_floor > g.x_origin) {
    i0 = static_cast<std::size_t>(std::ceil((x_floor - g.x_origin) / g.dx));
  }
  if (i0 >= g.nx) return x_floor;
  std::vector<double> column(g.nx, 0.0);
  for (std::size_t j = 0; j < g.ny; ++j) {
    const double* r = field.real.row(j);
    const double* a = field.imag.row(j);
    for (std::size_t i = i0; i < g.nx; ++i) column[i] += r[i] * r[i] + a[i] * a[i];
  }
  double mass = 0.0;
  double moment = 0.0;
  for (std::size_t i = i0; i < g.nx; ++i) {
    mass += column[i];
    moment += column[i] * g.x(i);
  }
  if (!(mass > 0.0)) return x_floor;
  return moment / mass;
}

void PacketSpec::validate() const {
  if (!(sigma_x > 0.0) || !(sigma_y > 0.0)) throw ConfigError("packet widths must be positive");
  if (!(k > 0.0)) throw ConfigError("packet wave number must be positive");
}

WaveField init_packet(const PacketSpec& spec, const GridSpec& grid, double dT,
                      int spatial_order) {
  spec.validate();
  grid.validate();
  grid.require_resolution(spec.k);
  if (!(dT > 0.0)) throw ConfigError("time step must be positive");

  const double margin_x = kPacketClearance * spec.sigma_x;
  const double margin_y = kPacketClearance * spec.sigma_y;
  if (spec.x0 - grid.x_origin < margin_x || grid.x_last() - spec.x0 < margin_x ||
      spec.y0 - grid.y_origin < margin_y || grid.y_last() - spec.y0 < margin_y) {
    throw ConfigError("wave packet overlaps the lattice boundary margin (needs 4.3 sigma to every edge)");
  }

  WaveField field(grid, dT);
  // Closed-form free Gaussian at T = dT/2 for the imaginary layer: width
  // parameter a = sigma^2 + 2iT, envelope carried along by 2kT.
  using C = std::complex<double>;
  const double th = 0.5 * dT;
  const C ax(spec.sigma_x * spec.sigma_x, 2.0 * th);
  const C ay(spec.sigma_y * spec.sigma_y, 2.0 * th);
  const C pre = std::sqrt(C(spec.sigma_x * spec.sigma_x) / ax) * std::sqrt(C(spec.sigma_y * spec.sigma_y) / ay);
  std::vector<C> half_x(grid.nx);
  for (std::size_t i = 0; i < grid.nx; ++i) {
    const double xi = grid.x(i) - spec.x0;
    const double s = xi - 2.0 * spec.k * th;
    half_x[i] = std::exp(-s * s / (2.0 * ax) + C(0.0, spec.k * xi - spec.k * spec.k * th));
  }
  for (std::size_t j = 0; j < grid.ny; ++j) {
    const double yj = grid.y(j) - spec.y0;
    const double v = yj / spec.sigma_y;
    const C half_y = pre * std::exp(-yj * yj / (2.0 * ay));
    double* re = field.real.row(j);
    double* im = field.imag.row(j);
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const double xi = grid.x(i) - spec.x0;
      const double u = xi / spec.sigma_x;
      re[i] = std::exp(-0.5 * (u * u + v * v)) * std::cos(spec.k * xi);
      im[i] = (half_y * half_x[i]).imag();
    }
  }
  free_hamiltonian_update(field.imag_prev, field.imag, field.real, spatial_order, grid.dx, grid.dy,
                          dT);

  const double n = norm(field);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw NumericalError("packet initialization produced norm " + std::to_string(n), 0);
  }
  field.scale(1.0 / std::sqrt(n));
  return field;
}

}  // namespace qtalbot
