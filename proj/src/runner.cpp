#include "qtalbot/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "qtalbot/checksum.hpp"
#include "qtalbot/csv.hpp"
#include "qtalbot/error.hpp"
#include "qtalbot/snapshot_io.hpp"
#include "qtalbot/spectral.hpp"
#include "qtalbot/sweep.hpp"

namespace qtalbot {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr double kDeg = 180.0 / std::numbers::pi;

const char* kind_name(FieldKind k) {
  switch (k) {
    case FieldKind::uniform: return "uniform";
    case FieldKind::spatial: return "spatial";
    case FieldKind::temporal: return "temporal";
  }
  return "?";
}

double role_code(const std::string& role) {
  if (role == "sweep") return 0;
  if (role == "sensitivity") return 1;
  if (role == "companion") return 2;
  return 3;
}

std::string plane_label(std::size_t k) { return "plane" + std::to_string(k + 1); }

std::string point_tag(std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "p%03zu", index);
  return buf;
}

PlaneResult analyse_plane(const ScenarioConfig& cfg, const FieldPoint& point, const SolverConfig& solver,
                          const Snapshot& snap, double plane_x) {
  PlaneResult pr;
  pr.label = snap.label;
  pr.plane_x = plane_x;
  pr.time = snap.field.time();
  pr.step = snap.field.step_index;
  pr.centroid = snap.centroid;
  pr.profile = screen_profile(snap.field, plane_x);
  pr.pattern_center = pr.profile.centroid();
  const double d = cfg.grating.period;
  const double w = cfg.analysis.window_half_width;
  const double lo = pr.pattern_center - w;
  const double hi = pr.pattern_center + w;
  pr.phase = grating_phase(pr.profile, cfg.grating, lo, hi);
  pr.period = fringe_period(pr.profile, lo, hi, 0.6 * d, 1.6 * d);
  try {
    pr.visibility = visibility(pr.profile, lo, hi);
  } catch (const InsufficientFringeError& e) {
    pr.visibility_note = e.what();
  }
  if (cfg.analysis.spectrum) {
    const KSpectrum spec = k_spectrum(snap.field, Window::undamped(cfg.grid, solver.damping), solver.damping);
    pr.mean_ky = mean_ky(spec);
    pr.radial = radial_profile(spec);
    if (cfg.analysis.sidebands) {
      SidebandPredictions pred;
      if (point.kind == FieldKind::temporal && point.omega > 0.0 && point.E0 > 0.0) {
        const double omega0 = cfg.omega0();
        pred = sideband_predict(cfg.E_k0, omega0, point.omega / omega0, -cfg.analysis.eta_max,
                                cfg.analysis.eta_max, cfg.frame.particle, cfg.frame.constants);
      } else {
        pred.allowed.push_back({0, cfg.k / cfg.frame.gamma});
      }
      pr.sidebands = sideband_detect(spec, cfg.frame, pred);
    }
  }
  if (cfg.mask && std::abs(cfg.mask->grating.x_position - plane_x) <= cfg.grid.dx) {
    pr.collected = collected_intensity_curve(snap.field, cfg.mask->grating, cfg.mask->offsets());
  }
  return pr;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void ensure_writable(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  const fs::path probe = dir / ".write_probe";
  {
    std::ofstream out(probe, std::ios::binary | std::ios::trunc);
    if (!out || !(out << "ok")) throw IoError("output directory '" + dir.string() + "' is not writable");
  }
  fs::remove(probe, ec);
}

}  // namespace

bool ScenarioResult::all_ok() const {
  return std::all_of(points.begin(), points.end(), [](const PointResult& p) { return p.ok; });
}

const PointResult* ScenarioResult::reference() const {
  for (const auto& p : points) {
    if (p.ok && p.point.role == "reference") return &p;
  }
  for (const auto& p : points) {
    if (p.ok && p.point.E0 == 0.0) return &p;
  }
  return nullptr;
}

const PointResult* ScenarioResult::find(FieldKind kind, double E0, double theta, double lambda_prime,
                                        double omega) const {
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * (1.0 + std::abs(a) + std::abs(b)); };
  for (const auto& p : points) {
    if (!p.ok) continue;
    const auto& q = p.point;
    if (E0 == 0.0 && q.E0 == 0.0) return &p;
    if (q.kind == kind && close(q.E0, E0) && close(q.theta, theta) && close(q.lambda_prime, lambda_prime) &&
        close(q.omega, omega)) {
      return &p;
    }
  }
  return nullptr;
}

PointResult run_point(const ScenarioConfig& cfg, const SolverConfig& solver, const FieldPoint& point,
                      std::size_t index, const RunOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  PointResult res;
  res.index = index;
  res.point = point;

  const PotentialStack stack = make_stack(cfg, point);
  Solver s(cfg.grid, stack, solver);
  WaveField field = init_packet(cfg.packet, cfg.grid, solver.dT, solver.spatial_order);

  const double floor = cfg.grating.x_position + cfg.grating.thickness;
  std::vector<Trigger> schedule;
  for (std::size_t k = 0; k < cfg.planes.size(); ++k) {
    schedule.push_back(Trigger::at_plane(cfg.planes[k], floor, plane_label(k)));
  }
  const auto snaps = s.run_until(field, schedule);
  for (std::size_t k = 0; k < snaps.size(); ++k) {
    res.planes.push_back(analyse_plane(cfg, point, solver, snaps[k], cfg.planes[k]));
    if (!options.snapshot_dir.empty()) {
      const std::string name = point_tag(index) + "_" + snaps[k].label + ".qsnap";
      write_snapshot((fs::path(options.snapshot_dir) / name).string(), make_snapshot(snaps[k].field, cfg.frame));
      res.planes.back().snapshot_file = "snapshots/" + name;
    }
  }
  res.steps = field.step_index;
  res.final_norm = norm(field);
  res.ok = true;
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

ScenarioResult run_points(const ScenarioConfig& cfg, const RunOptions& options) {
  ScenarioResult result;
  result.solver = make_solver_config(cfg);
  const auto points = sweep_points(cfg);
  const std::size_t par = options.parallelism ? options.parallelism : cfg.output.parallelism;
  std::mutex log_mutex;
  auto log = [&](const std::string& msg) {
    if (!options.log) return;
    std::lock_guard lock(log_mutex);
    options.log(msg);
  };
  // Field-free points are physically identical: integrate the first, copy it to the rest.
  std::vector<std::size_t> jobs;
  std::vector<std::size_t> source(points.size());
  std::optional<std::size_t> free_job;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].field_free() && free_job) {
      source[i] = *free_job;
      continue;
    }
    if (points[i].field_free()) free_job = jobs.size();
    source[i] = jobs.size();
    jobs.push_back(i);
  }
  auto outcomes = sweep<PointResult>(jobs.size(), par, [&](std::size_t n) {
    const std::size_t i = jobs[n];
    log("point " + std::to_string(i + 1) + "/" + std::to_string(points.size()) + " started");
    PointResult r = run_point(cfg, result.solver, points[i], i, options);
    std::ostringstream msg;
    msg << "point " << i + 1 << "/" << points.size() << " done in " << r.steps << " steps";
    log(msg.str());
    return r;
  });
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& out = outcomes[source[i]];
    if (out.ok()) {
      PointResult r = *out.value;
      r.index = i;
      r.point = points[i];
      result.points.push_back(std::move(r));
    } else {
      PointResult failed;
      failed.index = i;
      failed.point = points[i];
      failed.error = out.error;
      log("point " + std::to_string(i + 1) + " failed: " + failed.error);
      result.points.push_back(std::move(failed));
    }
  }
  return result;
}

double fringe_shift_between(const PlaneResult& a, const PlaneResult& reference) {
  return fringe_shift(a.profile, reference.profile).shift;
}

double profile_distortion(const ScreenProfile& a, const ScreenProfile& reference) {
  if (a.size() != reference.size()) throw UsageError("profiles differ in length");
  auto normalized = [](const ScreenProfile& p) {
    ScreenProfile q = p;
    double sum = 0.0;
    for (double v : q.intensity) sum += v;
    if (sum > 0.0) for (double& v : q.intensity) v /= sum;
    return q;
  };
  const ScreenProfile na = normalized(a);
  const ScreenProfile nr = normalized(reference);
  const double s = fringe_shift(na, nr).shift / a.dy;
  double num = 0.0;
  double den = 0.0;
  const auto n = static_cast<long long>(na.size());
  for (long long j = 0; j < n; ++j) {
    // a evaluated at y + s, linear interpolation, zero outside.
    const double src = static_cast<double>(j) + s;
    const auto j0 = static_cast<long long>(std::floor(src));
    const double t = src - static_cast<double>(j0);
    auto at = [&](long long k) { return k >= 0 && k < n ? na.intensity[static_cast<std::size_t>(k)] : 0.0; };
    const double va = (1.0 - t) * at(j0) + t * at(j0 + 1);
    const double vr = nr.intensity[static_cast<std::size_t>(j)];
    num += (va - vr) * (va - vr);
    den += vr * vr;
  }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

std::vector<SensitivityRow> sensitivity_table(const ScenarioConfig& cfg, const ScenarioResult& result) {
  std::vector<SensitivityRow> rows;
  if (!cfg.sensitivity || !cfg.mask) return rows;
  const auto& s = *cfg.sensitivity;
  const double at = 0.5 * cfg.grating.period;
  auto curve = [&](double E0, double theta) -> const IntensityCurve* {
    const PointResult* p = result.find(FieldKind::uniform, E0, theta);
    if (!p) return nullptr;
    for (const auto& pl : p->planes) {
      if (pl.collected) return &*pl.collected;
    }
    return nullptr;
  };
  if (const IntensityCurve* base = curve(s.e0_baseline, s.theta_e0)) {
    for (double d : s.e0_deltas) {
      if (const IntensityCurve* c = curve(s.e0_baseline + d, s.theta_e0)) {
        rows.push_back({"E0", d, sensitivity_factor(*base, *c, d, at)});
      }
    }
  }
  if (const IntensityCurve* base = curve(s.e0_for_theta, s.theta_baseline)) {
    for (double d : s.theta_deltas) {
      if (const IntensityCurve* c = curve(s.e0_for_theta, s.theta_baseline + d)) {
        rows.push_back({"theta", d * kDeg, sensitivity_factor(*base, *c, d * kDeg, at)});
      }
    }
  }
  return rows;
}

RunManifest export_observables(const ScenarioConfig& cfg, const ScenarioResult& result,
                               const std::string& directory) {
  const fs::path dir(directory);
  ensure_writable(dir);
  const double g = cfg.frame.gamma;
  const double d = cfg.grating.period;
  std::vector<std::string> files;
  auto emit = [&](const std::string& rel, const std::vector<CsvColumn>& cols,
                  const std::vector<std::vector<double>>& rows) {
    const fs::path p = dir / rel;
    fs::create_directories(p.parent_path());
    write_csv(p.string(), cols, rows);
    files.push_back(rel);
  };

  const PointResult* ref = result.reference();
  const std::size_t nplanes = cfg.planes.size();

  // Per-point summary.
  {
    std::vector<CsvColumn> cols = {{"index", "1"},        {"role", "0 sweep 1 sensitivity 2 companion 3 reference"},
                                   {"kind", "0 uniform 1 spatial 2 temporal"},
                                   {"E0", "V/m"},         {"theta", "deg"},
                                   {"lambda_prime", "m"}, {"omega", "rad/s"},
                                   {"ok", "bool"},        {"steps", "1"}};
    for (std::size_t k = 0; k < nplanes; ++k) {
      const std::string l = plane_label(k);
      cols.push_back({l + "_time", "s"});
      cols.push_back({l + "_fringe_shift", "d"});
      cols.push_back({l + "_grating_phase", "d"});
      cols.push_back({l + "_fringe_period", "d"});
      cols.push_back({l + "_visibility", "1"});
      cols.push_back({l + "_delta_ky", "m^-1"});
    }
    std::vector<std::vector<double>> rows;
    for (const auto& p : result.points) {
      std::vector<double> row = {static_cast<double>(p.index), role_code(p.point.role),
                                 static_cast<double>(p.point.kind), p.point.E0, p.point.theta * kDeg,
                                 p.point.lambda_prime, p.point.omega, p.ok ? 1.0 : 0.0,
                                 static_cast<double>(p.steps)};
      for (std::size_t k = 0; k < nplanes; ++k) {
        if (!p.ok || k >= p.planes.size()) {
          row.insert(row.end(), 6, std::nan(""));
          continue;
        }
        const auto& pl = p.planes[k];
        const bool has_ref = ref && k < ref->planes.size();
        row.push_back(pl.time * cfg.frame.tau);
        row.push_back(has_ref ? fringe_shift_between(pl, ref->planes[k]) / d : std::nan(""));
        row.push_back(pl.phase / d);
        row.push_back(pl.period / d);
        row.push_back(pl.visibility ? *pl.visibility : std::nan(""));
        row.push_back(has_ref && cfg.analysis.spectrum ? (pl.mean_ky - ref->planes[k].mean_ky) / g : std::nan(""));
      }
      rows.push_back(std::move(row));
    }
    emit("points.csv", cols, rows);
  }

  for (const auto& p : result.points) {
    if (!p.ok) continue;
    const std::string tag = point_tag(p.index);
    for (const auto& pl : p.planes) {
      std::vector<std::vector<double>> rows;
      for (std::size_t j = 0; j < pl.profile.size(); ++j) {
        rows.push_back({pl.profile.y(j) * g, pl.profile.y(j) / d, pl.profile.intensity[j] / (g * g)});
      }
      emit("profiles/" + tag + "_" + pl.label + ".csv", {{"y", "m"}, {"y", "d"}, {"intensity", "m^-2"}}, rows);
      if (cfg.analysis.spectrum) {
        rows.clear();
        for (std::size_t b = 0; b < pl.radial.power.size(); ++b) rows.push_back({pl.radial.k(b) / g, pl.radial.power[b]});
        emit("spectra/" + tag + "_" + pl.label + "_radial.csv", {{"k_r", "m^-1"}, {"power", "1"}}, rows);
      }
      if (cfg.analysis.sidebands) {
        rows.clear();
        for (const auto& r : pl.sidebands.rows) {
          rows.push_back({static_cast<double>(r.eta), r.n, r.k_theory, r.k_measured, r.amplitude});
        }
        emit("sidebands/" + tag + "_" + pl.label + ".csv",
             {{"eta", "1"}, {"n", "omega0"}, {"k_theory", "m^-1"}, {"k_measured", "m^-1"}, {"amplitude", "1"}}, rows);
      }
      if (pl.collected) {
        rows.clear();
        for (std::size_t k = 0; k < pl.collected->offsets.size(); ++k) {
          rows.push_back({pl.collected->offsets[k] / d, pl.collected->values[k] * 100.0});
        }
        emit("collected/" + tag + "_" + pl.label + ".csv", {{"s_d", "d"}, {"I_c", "%"}}, rows);
      }
      if (!pl.snapshot_file.empty()) files.push_back(pl.snapshot_file);
    }
  }

  // Maps over the uniform sweep, last plane.
  if (cfg.field.kind == FieldKind::uniform && ref && nplanes > 0) {
    const std::size_t k = nplanes - 1;
    std::vector<CsvColumn> cols = {{"E0", "V/m"}};
    for (double th : cfg.field.theta) cols.push_back({"theta=" + format_number(th * kDeg), "d"});
    std::vector<std::vector<double>> shift_rows;
    std::vector<std::vector<double>> vis_rows;
    for (double e0 : cfg.field.E0) {
      std::vector<double> srow = {e0};
      std::vector<double> vrow = {e0};
      for (double th : cfg.field.theta) {
        const PointResult* p = result.find(FieldKind::uniform, e0, th);
        if (p && k < p->planes.size()) {
          srow.push_back(fringe_shift_between(p->planes[k], ref->planes[k]) / d);
          const auto& v = p->planes[k].visibility;
          vrow.push_back(v ? *v : std::nan(""));
        } else {
          srow.push_back(std::nan(""));
          vrow.push_back(std::nan(""));
        }
      }
      shift_rows.push_back(std::move(srow));
      vis_rows.push_back(std::move(vrow));
    }
    emit("fringe_shift_map.csv", cols, shift_rows);
    for (std::size_t c = 1; c < cols.size(); ++c) cols[c].unit = "1";
    emit("visibility_map.csv", cols, vis_rows);
  }

  if (cfg.field.kind && ref && cfg.analysis.spectrum && nplanes > 0) {
    const std::size_t k = nplanes - 1;
    std::vector<std::vector<double>> rows;
    for (const auto& p : result.points) {
      if (!p.ok || k >= p.planes.size()) continue;
      rows.push_back({p.point.E0, p.point.theta * kDeg, p.point.E0 * std::sin(p.point.theta),
                      (p.planes[k].mean_ky - ref->planes[k].mean_ky) / g});
    }
    emit("delta_ky.csv", {{"E0", "V/m"}, {"theta", "deg"}, {"E0_sin_theta", "V/m"}, {"delta_ky", "m^-1"}}, rows);
  }

  if (cfg.sensitivity) {
    std::vector<std::vector<double>> rows;
    for (const auto& r : sensitivity_table(cfg, result)) {
      rows.push_back({r.parameter == "E0" ? 0.0 : 1.0, r.delta, r.sf});
    }
    emit("sensitivity.csv", {{"parameter", "0 E0 1 theta"}, {"delta", "V/m or deg"}, {"SF", "% per unit"}}, rows);
  }

  if (cfg.analysis.distortion && nplanes > 0) {
    const std::size_t k = nplanes - 1;
    std::vector<std::vector<double>> rows;
    for (const auto& p : result.points) {
      if (!p.ok || p.point.kind != FieldKind::spatial) continue;
      const PointResult* u = result.find(FieldKind::uniform, p.point.E0, 0.5 * std::numbers::pi);
      if (!u || k >= u->planes.size() || k >= p.planes.size()) continue;
      rows.push_back({p.point.lambda_prime / cfg.lambda_dB, p.point.E0,
                      profile_distortion(p.planes[k].profile, u->planes[k].profile)});
    }
    emit("distortion.csv", {{"lambda_prime", "lambda_dB"}, {"E0", "V/m"}, {"distortion", "1"}}, rows);
  }

  // Manifest last.
  RunManifest m;
  m.config_hash = sha256_hex(cfg.source_text);
  m.software_version = kSoftwareVersion;
  m.all_ok = result.all_ok();
  std::sort(files.begin(), files.end());
  for (const auto& rel : files) {
    const fs::path p = dir / rel;
    m.artifacts.push_back({rel, sha256_file(p.string()), static_cast<std::size_t>(fs::file_size(p))});
  }

  json j;
  j["software"] = "qtalbot";
  j["software_version"] = m.software_version;
  j["config_name"] = cfg.name;
  j["config_hash"] = m.config_hash;
  const auto& c = cfg.frame.constants;
  j["constants"] = {{"hbar", c.hbar}, {"proton_mass", c.proton_mass}, {"elementary_charge", c.elementary_charge},
                    {"vacuum_permittivity", c.vacuum_permittivity}};
  j["frame"] = {{"gamma_m", cfg.frame.gamma}, {"tau_s", cfg.frame.tau}, {"V0_J", cfg.frame.V0}};
  json damping = json::array();
  for (const auto& dsp : result.solver.damping) {
    damping.push_back({{"edge", static_cast<int>(dsp.edge)}, {"lambda", dsp.lambda}, {"position", dsp.position}});
  }
  j["solver"] = {{"dT", result.solver.dT},
                 {"spatial_order", result.solver.spatial_order},
                 {"norm_check_interval", result.solver.norm_check_interval},
                 {"norm_drift_abort", result.solver.norm_drift_abort},
                 {"damping", damping}};
  j["grid"] = {{"nx", cfg.grid.nx}, {"ny", cfg.grid.ny}, {"dx", cfg.grid.dx}, {"x_origin", cfg.grid.x_origin},
               {"y_origin", cfg.grid.y_origin}};
  json pts = json::array();
  for (const auto& p : result.points) {
    pts.push_back({{"index", p.index},
                   {"role", p.point.role},
                   {"kind", kind_name(p.point.kind)},
                   {"E0_V_per_m", p.point.E0},
                   {"theta_deg", p.point.theta * kDeg},
                   {"lambda_prime_m", p.point.lambda_prime},
                   {"omega_rad_per_s", p.point.omega},
                   {"ok", p.ok},
                   {"error", p.error},
                   {"steps", p.steps},
                   {"wall_seconds", p.wall_seconds}});
  }
  j["points"] = pts;
  json arts = json::array();
  for (const auto& a : m.artifacts) arts.push_back({{"path", a.path}, {"sha256", a.sha256}, {"bytes", a.bytes}});
  j["artifacts"] = arts;
  j["all_ok"] = m.all_ok;
  m.json = j.dump(2) + "\n";
  write_text(dir / "manifest.json", m.json);
  return m;
}

RunManifest run_scenario(const ScenarioConfig& cfg, const std::string& directory, const RunOptions& options) {
  ensure_writable(directory);
  RunOptions opts = options;
  if (cfg.output.write_snapshots) {
    const fs::path snaps = fs::path(directory) / "snapshots";
    ensure_writable(snaps);
    opts.snapshot_dir = snaps.string();
  }
  const ScenarioResult result = run_points(cfg, opts);
  return export_observables(cfg, result, directory);
}

ManifestDiff diff_manifests(const std::string& a_path, const std::string& b_path) {
  auto load = [](const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read manifest '" + path + "'");
    try {
      return json::parse(in);
    } catch (const json::exception& e) {
      throw IoError("manifest '" + path + "' is not valid JSON: " + e.what());
    }
  };
  json a = load(a_path);
  json b = load(b_path);
  for (json* m : {&a, &b}) {
    if (m->contains("points")) {
      for (auto& p : (*m)["points"]) p.erase("wall_seconds");
    }
  }
  ManifestDiff diff;
  for (const char* key : {"software_version", "config_hash", "constants", "frame", "solver", "grid", "points", "all_ok"}) {
    if (a.value(key, json()) != b.value(key, json())) diff.differences.push_back(std::string("field '") + key + "' differs");
  }
  std::map<std::string, std::string> sa, sb;
  for (const auto& x : a.value("artifacts", json::array())) sa[x.value("path", "")] = x.value("sha256", "");
  for (const auto& x : b.value("artifacts", json::array())) sb[x.value("path", "")] = x.value("sha256", "");
  for (const auto& [path, sum] : sa) {
    auto it = sb.find(path);
    if (it == sb.end()) diff.differences.push_back("only in first: " + path);
    else if (it->second != sum) diff.differences.push_back("checksum differs: " + path);
  }
  for (const auto& [path, sum] : sb) {
    if (!sa.count(path)) diff.differences.push_back("only in second: " + path);
  }
  diff.identical = diff.differences.empty();
  return diff;
}

}  // namespace qtalbot
