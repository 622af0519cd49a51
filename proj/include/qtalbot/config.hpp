#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qtalbot/frame.hpp"
#include "qtalbot/grid.hpp"
#include "qtalbot/potentials.hpp"
#include "qtalbot/solver.hpp"
#include "qtalbot/wavefield.hpp"

namespace qtalbot {

struct SolverSettings {
  int spatial_order = 4;
  double dt_fraction = 0.5;  // of the stability bound; ignored when dt_seconds > 0
  double dt_seconds = 0.0;
  double damping_sharpness = 5.0;  // dimensionless
  double damping_offset = 0.0;     // dimensionless, inward from each edge
  long long norm_check_interval = 200;
  double norm_drift_abort = 1e-3;
  long long max_steps = 1'000'000;
};

struct MaskSettings {
  GratingSpec grating;  // role = mask; x_position is the mask plane
  double offset_step = 0.0;
  double offset_max = 0.0;

  std::vector<double> offsets() const;
};

// Field parameters in SI units: E0 V/m, theta rad, lambda_prime m, omega rad/s.
struct FieldPoint {
  FieldKind kind = FieldKind::uniform;
  double E0 = 0.0;
  double theta = 0.0;
  double lambda_prime = 0.0;
  double omega = 0.0;
  std::string role = "sweep";  // sweep | reference | companion | sensitivity

  bool field_free() const { return E0 == 0.0; }
};

struct FieldSweep {
  std::optional<FieldKind> kind;  // empty: field-free scenario
  double x_lo = 0.0;              // dimensionless
  double x_hi = 0.0;
  std::vector<double> E0;
  std::vector<double> theta;
  std::vector<double> lambda_prime;
  std::vector<double> omega;
  bool reference = true;
  bool companion_uniform = false;
};

// Extra points for sensitivity factors: E0 deltas at theta_e0 around
// e0_baseline, theta deltas at e0_for_theta around theta_baseline.
struct SensitivitySettings {
  double e0_baseline = 0.0;
  double theta_e0 = 0.0;
  std::vector<double> e0_deltas;
  double theta_baseline = 0.0;
  double e0_for_theta = 0.0;
  std::vector<double> theta_deltas;
};

struct AnalysisSettings {
  double window_half_width = 0.0;  // dimensionless; 0 means 3 grating periods
  bool spectrum = true;
  bool sidebands = false;
  int eta_max = 3;
  bool distortion = false;
};

struct OutputSettings {
  std::string directory;
  std::size_t parallelism = 1;
  bool write_snapshots = false;
};

struct ScenarioConfig {
  std::string name;
  std::string description;
  std::string source_text;

  ScalingFrame frame;
  double lambda_dB = 0.0;  // m
  double k = 0.0;          // dimensionless
  double E_k0 = 0.0;       // J

  PacketSpec packet;
  GridSpec grid;
  SolverSettings solver;
  GratingSpec grating;
  ImageChargeSpec image;
  std::optional<MaskSettings> mask;
  FieldSweep field;
  std::optional<SensitivitySettings> sensitivity;
  std::vector<double> planes;  // dimensionless X
  AnalysisSettings analysis;
  OutputSettings output;

  double talbot_length() const;  // dimensionless
  // Particle speed in m/s and the transit frequency 2 pi v / (field region length) in rad/s.
  double velocity() const;
  double omega0() const;
};

// Parses and validates; throws ConfigError with a line reference.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::string& path);

// Sweep points in deterministic order: sweep product, then sensitivity
// extras, then the field-free reference and uniform companions.
std::vector<FieldPoint> sweep_points(const ScenarioConfig& cfg);

PotentialStack make_stack(const ScenarioConfig& cfg, const FieldPoint& point);
FieldSpec make_field(const ScenarioConfig& cfg, const FieldPoint& point);
// Solver settings shared by every point of the scenario (dT from the
// largest potential bound across points).
SolverConfig make_solver_config(const ScenarioConfig& cfg);

}  // namespace qtalbot
