#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qtalbot/config.hpp"
#include "qtalbot/observables.hpp"
#include "qtalbot/sidebands.hpp"
#include "qtalbot/solver.hpp"

namespace qtalbot {

// Observables of one snapshot plane.
struct PlaneResult {
  std::string label;
  double plane_x = 0.0;  // dimensionless
  double time = 0.0;     // dimensionless
  long long step = 0;
  double centroid = 0.0;
  ScreenProfile profile;
  double pattern_center = 0.0;
  double phase = 0.0;   // offset from the grating openings, dimensionless
  double period = 0.0;  // dimensionless
  std::optional<double> visibility;
  std::string visibility_note;
  double mean_ky = 0.0;  // dimensionless
  RadialProfile radial;
  SidebandTable sidebands;
  std::optional<IntensityCurve> collected;
  std::string snapshot_file;  // relative to the output directory
};

struct PointResult {
  std::size_t index = 0;
  FieldPoint point;
  bool ok = false;
  std::string error;
  std::vector<PlaneResult> planes;
  long long steps = 0;
  double final_norm = 0.0;
  double wall_seconds = 0.0;
};

struct ScenarioResult {
  SolverConfig solver;
  std::vector<PointResult> points;

  bool all_ok() const;
  const PointResult* reference() const;
  // First successful point with these field parameters.
  const PointResult* find(FieldKind kind, double E0, double theta, double lambda_prime = 0.0,
                          double omega = 0.0) const;
};

struct RunOptions {
  std::size_t parallelism = 0;  // 0: take it from the config
  std::string snapshot_dir;     // empty: no snapshot files
  std::function<void(const std::string&)> log;
};

// Integrates one sweep point and analyses its snapshots.
PointResult run_point(const ScenarioConfig& cfg, const SolverConfig& solver, const FieldPoint& point,
                      std::size_t index, const RunOptions& options = {});
// All sweep points (no files besides optional snapshots).
ScenarioResult run_points(const ScenarioConfig& cfg, const RunOptions& options = {});

// Cross-point observables.
double fringe_shift_between(const PlaneResult& a, const PlaneResult& reference);
// Relative L2 distance between two profiles after removing their mean lateral shift.
double profile_distortion(const ScreenProfile& a, const ScreenProfile& reference);

struct SensitivityRow {
  std::string parameter;  // "E0" or "theta"
  double delta = 0.0;     // V/m or deg
  double sf = 0.0;        // percent per unit
};
std::vector<SensitivityRow> sensitivity_table(const ScenarioConfig& cfg, const ScenarioResult& result);

struct ManifestArtifact {
  std::string path;
  std::string sha256;
  std::size_t bytes = 0;
};

struct RunManifest {
  std::string config_hash;
  std::string software_version;
  std::vector<ManifestArtifact> artifacts;
  std::string json;  // full manifest text as written
  bool all_ok = false;
};

// Writes CSV tables (and snapshots when requested) plus manifest.json into `directory`.
RunManifest export_observables(const ScenarioConfig& cfg, const ScenarioResult& result,
                               const std::string& directory);
// Checks the directory, runs every point, exports, writes the manifest.
RunManifest run_scenario(const ScenarioConfig& cfg, const std::string& directory,
                         const RunOptions& options = {});

struct ManifestDiff {
  bool identical = true;
  std::vector<std::string> differences;
};
// Compares two manifest files ignoring wall-clock fields.
ManifestDiff diff_manifests(const std::string& a_path, const std::string& b_path);

inline constexpr const char* kSoftwareVersion = "0.1.0";

}  // namespace qtalbot
