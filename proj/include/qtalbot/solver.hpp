#pragma once

#include <limits>
#include <string>
#include <vector>

#include "qtalbot/potentials.hpp"
#include "qtalbot/stencil.hpp"
#include "qtalbot/wavefield.hpp"

namespace qtalbot {

enum class Edge { left, right, top, bottom };

// Logistic amplitude mask zeta(s) = 1/(1 + exp(-(s - position)/lambda)),
// s being X for left/right edges and Y for top/bottom. Positive lambda
// damps toward decreasing s.
struct DampingSpec {
  Edge edge = Edge::left;
  double lambda = 5.0;
  double position = 0.0;

  void validate() const;
  double factor(double s) const;
};

// Logistic layers on all four edges, midpoints `offset` cells inside the lattice.
std::vector<DampingSpec> default_damping(const GridSpec& grid, double lambda = 5.0,
                                         double offset = 30.0);

struct SolverConfig {
  double dT = 0.0;
  int spatial_order = 4;
  std::vector<DampingSpec> damping;
  long long norm_check_interval = 200;
  double norm_drift_abort = 1e-3;  // relative growth
  long long max_steps = 2'000'000;

  void validate() const;
};

// Largest dT the leapfrog accepts for this lattice and potential bound
// (safety factor 0.5 included).
double max_stable_dt(const GridSpec& grid, int spatial_order, double v_max);
// Same bound for a potential stack; throws ConfigError if cfg.dT exceeds it
// or the potential is unbounded.
double stability_check(const GridSpec& grid, const SolverConfig& cfg, const PotentialStack& stack);
double stability_check(const SolverConfig& cfg, const LatticePotential& potential);

// Per-column and per-row damping factors; products of all edges.
class DampingProfile {
 public:
  DampingProfile() = default;
  DampingProfile(const GridSpec& grid, const std::vector<DampingSpec>& specs);

  void apply(WaveField& field) const;
  double factor(std::size_t i, std::size_t j) const { return fx_[i] * fy_[j]; }
  bool empty() const { return empty_; }

 private:
  std::vector<double> fx_;
  std::vector<double> fy_;
  std::vector<std::size_t> damped_columns_;
  bool empty_ = true;
};

struct Trigger {
  enum class Kind { stop_time, plane_crossing };
  Kind kind = Kind::stop_time;
  double value = 0.0;  // T for stop_time, X* for plane_crossing
  // Columns below this X are ignored by the centroid (reflected probability).
  double x_floor = -std::numeric_limits<double>::infinity();
  std::string label;

  static Trigger at_time(double T, std::string label = {});
  static Trigger at_plane(double X, double x_floor = -std::numeric_limits<double>::infinity(),
                          std::string label = {});
};

struct Snapshot {
  std::string label;
  WaveField field;
  double centroid = 0.0;
};

class Solver {
 public:
  Solver(const GridSpec& grid, const PotentialStack& stack, const SolverConfig& cfg);

  void step(WaveField& field);
  void advance(WaveField& field, long long steps);
  // Integrates through the schedule (in order) and returns one snapshot per trigger.
  std::vector<Snapshot> run_until(WaveField& field, const std::vector<Trigger>& schedule);

  const LatticePotential& potential() const { return potential_; }
  const SolverConfig& config() const { return cfg_; }
  double max_stable_dt() const { return dt_max_; }
  void check_finite(const WaveField& field) const;

 private:
  void half_update(Lattice& out, const Lattice& base, const Lattice& in, double T,
                   const HamiltonianWeights& w);

  GridSpec grid_;
  SolverConfig cfg_;
  LatticePotential potential_;
  DampingProfile damping_;
  HamiltonianWeights w_real_;
  HamiltonianWeights w_imag_;
  double dt_max_ = 0.0;
  std::vector<double> vrow_;
  std::vector<ColumnTerms> columns_;
};

// One-off conveniences that build a Solver internally.
void step(WaveField& field, const PotentialStack& stack, const SolverConfig& cfg);
void apply_damping(WaveField& field, const std::vector<DampingSpec>& specs);

}  // namespace qtalbot
