#include "qtalbot/stencil.hpp"

#include <string>

#include "qtalbot/error.hpp"

namespace qtalbot {

SecondDerivative second_derivative_weights(int order) {
  switch (order) {
    case 2: return {-2.0, 1.0, 0.0};
    case 4: return {-30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0};
    default: throw ConfigError("spatial order must be 2 or 4, got " + std::to_string(order));
  }
}

HamiltonianWeights HamiltonianWeights::make(int order, double dx, double dy, double scale) {
  const SecondDerivative d = second_derivative_weights(order);
  const double ax = 1.0 / (dx * dx);
  const double ay = 1.0 / (dy * dy);
  return {-scale * d.c0 * (ax + ay), -scale * d.c1 * ax, -scale * d.c2 * ax,
          -scale * d.c1 * ay,        -scale * d.c2 * ay, scale};
}

void free_hamiltonian_update(Lattice& out, const Lattice& base, const Lattice& in, int order,
                             double dx, double dy, double scale) {
  const HamiltonianWeights w = HamiltonianWeights::make(order, dx, dy, scale);
  std::vector<double> zero(in.nx(), 0.0);
  for (std::size_t j = 0; j < in.ny(); ++j) {
    hamiltonian_row_update(out.row(j), base.row(j), in.row(j), in.stride(), zero.data(), in.nx(),
                           w);
  }
}

}  // namespace qtalbot
