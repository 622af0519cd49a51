#pragma once

#include <cstddef>

#include "qtalbot/grid.hpp"

namespace qtalbot {

// Centered second-derivative weights: f'' ~ (c2 (f[-2]+f[2]) + c1 (f[-1]+f[1]) + c0 f[0]) / h^2.
struct SecondDerivative {
  double c0;
  double c1;
  double c2;
};

SecondDerivative second_derivative_weights(int order);

// Coefficients of scale * (-lap + v) on a 2D lattice with spacings dx, dy.
struct HamiltonianWeights {
  double center;  // scale * (-c0/dx^2 - c0/dy^2)
  double x1;
  double x2;
  double y1;
  double y2;
  double scale;   // multiplies the potential

  static HamiltonianWeights make(int order, double dx, double dy, double scale);
};

// out[i] = base[i] + scale * ((-lap + v) in)[i] along one lattice row.
// `v` holds the potential for the row. Rows above and below `in` must be
// reachable through the lattice stride (the halo guarantees it).
inline void hamiltonian_row_update(double* out, const double* base, const double* in,
                                   std::size_t stride, const double* v, std::size_t n,
                                   const HamiltonianWeights& w) {
  const double* up1 = in - stride;
  const double* up2 = in - 2 * stride;
  const double* dn1 = in + stride;
  const double* dn2 = in + 2 * stride;
  for (std::size_t i = 0; i < n; ++i) {
    const double h = (w.center + w.scale * v[i]) * in[i] + w.x1 * (in[i - 1] + in[i + 1]) +
                     w.x2 * (in[i - 2] + in[i + 2]) + w.y1 * (up1[i] + dn1[i]) +
                     w.y2 * (up2[i] + dn2[i]);
    out[i] = base[i] + h;
  }
}

// Apply -lap (no potential) to a whole lattice: out = in + scale * (-lap in).
void free_hamiltonian_update(Lattice& out, const Lattice& base, const Lattice& in, int order,
                             double dx, double dy, double scale);

}  // namespace qtalbot
