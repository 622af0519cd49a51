#include "qtalbot/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "qtalbot/error.hpp"

namespace qtalbot {

void DampingSpec::validate() const {
  if (lambda == 0.0 || !std::isfinite(lambda)) throw ConfigError("damping sharpness must be nonzero");
}

double DampingSpec::factor(double s) const {
  return 1.0 / (1.0 + std::exp(-(s - position) / lambda));
}

std::vector<DampingSpec> default_damping(const GridSpec& grid, double lambda, double offset) {
  return {
      {Edge::left, lambda, grid.x_origin + offset},
      {Edge::right, -lambda, grid.x_last() - offset},
      {Edge::bottom, lambda, grid.y_origin + offset},
      {Edge::top, -lambda, grid.y_last() - offset},
  };
}

void SolverConfig::validate() const {
  if (!(dT > 0.0) || !std::isfinite(dT)) throw ConfigError("time step must be positive");
  second_derivative_weights(spatial_order);
  for (const auto& d : damping) d.validate();
  if (norm_check_interval <= 0) throw ConfigError("norm check interval must be positive");
  if (!(norm_drift_abort > 0.0)) throw ConfigError("norm drift threshold must be positive");
  if (max_steps <= 0) throw ConfigError("max steps must be positive");
}

double max_stable_dt(const GridSpec& grid, int spatial_order, double v_max) {
  const double c = spatial_order == 4 ? 4.0 / 3.0 : 1.0;
  second_derivative_weights(spatial_order);
  if (!std::isfinite(v_max)) throw ConfigError("potential is unbounded; no stable time step exists");
  return 0.5 / (c * (1.0 / (grid.dx * grid.dx) + 1.0 / (grid.dy * grid.dy)) + 0.5 * std::abs(v_max));
}

double stability_check(const SolverConfig& cfg, const LatticePotential& potential) {
  const double dt_max = max_stable_dt(potential.grid(), cfg.spatial_order, potential.max_abs());
  if (cfg.dT > dt_max) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "time step dT = " << cfg.dT << " exceeds the stability bound dT_max = " << dt_max;
    throw ConfigError(msg.str());
  }
  return dt_max;
}

double stability_check(const GridSpec& grid, const SolverConfig& cfg, const PotentialStack& stack) {
  return stability_check(cfg, LatticePotential(grid, stack));
}

DampingProfile::DampingProfile(const GridSpec& grid, const std::vector<DampingSpec>& specs)
    : fx_(grid.nx, 1.0), fy_(grid.ny, 1.0), empty_(specs.empty()) {
  for (const auto& d : specs) {
    d.validate();
    const bool along_x = d.edge == Edge::left || d.edge == Edge::right;
    auto& f = along_x ? fx_ : fy_;
    for (std::size_t n = 0; n < f.size(); ++n) {
      f[n] *= d.factor(along_x ? grid.x(n) : grid.y(n));
    }
  }
  // Factors this close to one change nothing measurable; skip them.
  for (auto* f : {&fx_, &fy_}) {
    for (double& v : *f) {
      if (1.0 - v < 1e-13) v = 1.0;
    }
  }
  for (std::size_t i = 0; i < fx_.size(); ++i) {
    if (fx_[i] != 1.0) damped_columns_.push_back(i);
  }
}

void DampingProfile::apply(WaveField& field) const {
  if (empty_) return;
  for (Lattice* lat : {&field.real, &field.imag, &field.imag_prev}) {
    for (std::size_t j = 0; j < fy_.size(); ++j) {
      double* r = lat->row(j);
      const double fy = fy_[j];
      if (fy != 1.0) {
        for (std::size_t i = 0; i < fx_.size(); ++i) r[i] *= fx_[i] * fy;
      } else {
        for (std::size_t i : damped_columns_) r[i] *= fx_[i];
      }
    }
  }
}

Trigger Trigger::at_time(double T, std::string label) {
  Trigger t;
  t.kind = Kind::stop_time;
  t.value = T;
  t.label = std::move(label);
  return t;
}

Trigger Trigger::at_plane(double X, double x_floor, std::string label) {
  Trigger t;
  t.kind = Kind::plane_crossing;
  t.value = X;
  t.x_floor = x_floor;
  t.label = std::move(label);
  return t;
}

Solver::Solver(const GridSpec& grid, const PotentialStack& stack, const SolverConfig& cfg)
    : grid_(grid), cfg_(cfg), potential_(grid, stack), damping_(grid, cfg.damping),
      w_real_(HamiltonianWeights::make(cfg.spatial_order, grid.dx, grid.dy, cfg.dT)),
      w_imag_(HamiltonianWeights::make(cfg.spatial_order, grid.dx, grid.dy, -cfg.dT)),
      vrow_(grid.nx) {
  grid_.validate();
  cfg_.validate();
  dt_max_ = stability_check(cfg_, potential_);
}

void Solver::half_update(Lattice& out, const Lattice& base, const Lattice& in, double T,
                         const HamiltonianWeights& w) {
  potential_.prepare(T, columns_);
  for (std::size_t j = 0; j < grid_.ny; ++j) {
    potential_.fill_row(j, columns_, vrow_);
    hamiltonian_row_update(out.row(j), base.row(j), in.row(j), in.stride(), vrow_.data(), grid_.nx,
                           w);
  }
}

void Solver::step(WaveField& field) {
  const double dT = cfg_.dT;
  const double n = static_cast<double>(field.step_index);
  // R(n+1) = R(n) + dT H(n+1/2) I(n+1/2)
  half_update(field.real, field.real, field.imag, (n + 0.5) * dT, w_real_);
  // I(n+3/2) = I(n+1/2) - dT H(n+1) R(n+1)
  std::swap(field.imag, field.imag_prev);
  half_update(field.imag, field.imag_prev, field.real, (n + 1.0) * dT, w_imag_);
  damping_.apply(field);
  ++field.step_index;
}

void Solver::check_finite(const WaveField& field) const {
  if (!field.real.all_finite() || !field.imag.all_finite()) {
    throw NumericalError("non-finite value in wave field", field.step_index);
  }
}

void Solver::advance(WaveField& field, long long steps) {
  for (long long s = 0; s < steps; ++s) {
    step(field);
    if (field.step_index % cfg_.norm_check_interval == 0) check_finite(field);
  }
}

std::vector<Snapshot> Solver::run_until(WaveField& field, const std::vector<Trigger>& schedule) {
  if (std::abs(field.dT - cfg_.dT) > 1e-15 * cfg_.dT) {
    throw UsageError("wave field and solver disagree on the time step");
  }
  std::vector<Snapshot> out;
  const double norm0 = norm(field);
  const long long start = field.step_index;
  long long last_norm_check = field.step_index;

  auto monitor = [&] {
    if (field.step_index - last_norm_check < cfg_.norm_check_interval) return;
    last_norm_check = field.step_index;
    check_finite(field);
    const double n = norm(field);
    if (!std::isfinite(n) || n - norm0 > cfg_.norm_drift_abort * norm0) {
      std::ostringstream msg;
      msg << "norm grew from " << norm0 << " to " << n;
      throw NumericalError(msg.str(), field.step_index);
    }
  };
  auto budget_left = [&] { return cfg_.max_steps - (field.step_index - start); };

  for (const Trigger& t : schedule) {
    if (t.kind == Trigger::Kind::stop_time) {
      while (field.time() < t.value - 0.5 * cfg_.dT) {
        if (budget_left() <= 0) throw TimeoutError("step budget exhausted before T = " + std::to_string(t.value));
        step(field);
        monitor();
      }
      out.push_back({t.label, field, centroid_x(field, t.x_floor)});
      continue;
    }

    double c = centroid_x(field, t.x_floor);
    double prev_c = c;
    long long prev_step = field.step_index;
    long long stride = 8;
    while (c < t.value) {
      if (budget_left() <= 0) {
        throw TimeoutError("centroid stalled at X = " + std::to_string(c) + " before reaching " +
                           std::to_string(t.value));
      }
      const long long n = std::min(stride, budget_left());
      for (long long s = 0; s < n; ++s) {
        step(field);
        monitor();
      }
      c = centroid_x(field, t.x_floor);
      // Aim for half the remaining distance at the measured speed.
      const double speed = (c - prev_c) / static_cast<double>(field.step_index - prev_step);
      prev_c = c;
      prev_step = field.step_index;
      if (speed > 0.0) {
        stride = std::clamp(static_cast<long long>(0.5 * (t.value - c) / speed), 1LL, 400LL);
      } else {
        stride = 50;
      }
    }
    out.push_back({t.label, field, c});
  }
  check_finite(field);
  return out;
}

void step(WaveField& field, const PotentialStack& stack, const SolverConfig& cfg) {
  Solver solver(field.grid, stack, cfg);
  solver.step(field);
  solver.check_finite(field);
}

void apply_damping(WaveField& field, const std::vector<DampingSpec>& specs) {
  DampingProfile(field.grid, specs).apply(field);
}

}  // namespace qtalbot
