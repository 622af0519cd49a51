// qtalbot command line: run / validate / inspect / diff.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>

#include "qtalbot/config.hpp"
#include "qtalbot/error.hpp"
#include "qtalbot/runner.hpp"
#include "qtalbot/snapshot_io.hpp"

using namespace qtalbot;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPointsFailed = 1;
constexpr int kExitInvalid = 2;

int cmd_validate(const std::string& path) {
  const ScenarioConfig cfg = load_config(path);
  const SolverConfig sc = make_solver_config(cfg);
  const auto points = sweep_points(cfg);
  std::printf("config      %s (%s)\n", path.c_str(), cfg.name.c_str());
  std::printf("frame       gamma = %.6e m, tau = %.6e s, V0 = %.6e J\n", cfg.frame.gamma, cfg.frame.tau, cfg.frame.V0);
  std::printf("particle    lambda_dB = %.6e m, E_k0 = %.6e J (%.4f meV), k = %.6f\n", cfg.lambda_dB, cfg.E_k0,
              cfg.E_k0 / kElectronVolt * 1e3, cfg.k);
  std::printf("grating     d = %.6e m, f = %.3f, l = %.6e m, Vg0 = %.6e J (%.4f meV)\n",
              cfg.grating.period * cfg.frame.gamma, cfg.grating.opening_fraction,
              cfg.grating.thickness * cfg.frame.gamma, cfg.grating.barrier_height * cfg.frame.V0,
              cfg.grating.barrier_height * cfg.frame.V0 / kElectronVolt * 1e3);
  std::printf("talbot      L_T = %.6e m\n", cfg.talbot_length() * cfg.frame.gamma);
  std::printf("grid        %zu x %zu, dX = %.6f (%.2f points per wavelength)\n", cfg.grid.nx, cfg.grid.ny, cfg.grid.dx,
              cfg.grid.points_per_wavelength(cfg.k));
  std::printf("solver      order %d, dT = %.6e (%.6e s)\n", sc.spatial_order, sc.dT, sc.dT * cfg.frame.tau);
  if (cfg.field.kind) {
    std::printf("field       region [%.6e, %.6e] m, omega0 = %.6e rad/s\n", cfg.field.x_lo * cfg.frame.gamma,
                cfg.field.x_hi * cfg.frame.gamma, cfg.omega0());
  }
  std::printf("points      %zu\n", points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    std::printf("  %3zu %-11s E0 = %-10g V/m  theta = %-8g deg  lambda' = %-10g m  omega = %g rad/s\n", i,
                p.role.c_str(), p.E0, p.theta * 180.0 / std::numbers::pi, p.lambda_prime, p.omega);
  }
  return kExitOk;
}

int cmd_run(const std::string& path, const std::string& out, std::size_t parallelism, bool quiet) {
  const ScenarioConfig cfg = load_config(path);
  RunOptions opts;
  opts.parallelism = parallelism;
  if (!quiet) opts.log = [](const std::string& m) { std::cerr << m << std::endl; };
  const std::string dir = out.empty() ? cfg.output.directory : out;
  const RunManifest m = run_scenario(cfg, dir, opts);
  std::printf("wrote %zu artifacts and manifest.json to %s\n", m.artifacts.size(), dir.c_str());
  return m.all_ok ? kExitOk : kExitPointsFailed;
}

int cmd_inspect(const std::string& path) {
  const SnapshotData s = read_snapshot(path);
  const auto& h = s.header;
  double total = 0.0;
  double mx = 0.0;
  for (std::size_t j = 0; j < h.ny; ++j) {
    for (std::size_t i = 0; i < h.nx; ++i) {
      const std::size_t k = j * h.nx + i;
      const double p = s.real[k] * s.real[k] + s.imag[k] * s.imag[k];
      total += p;
      mx += p * static_cast<double>(i);
    }
  }
  std::printf("format      QTALBOT1 v%u\n", h.version);
  std::printf("lattice     %llu x %llu, dX = %.6g, dY = %.6g\n", static_cast<unsigned long long>(h.nx),
              static_cast<unsigned long long>(h.ny), h.dx, h.dy);
  std::printf("time        T = %.6g (%.6e s), step %llu\n", h.time, h.time * h.tau,
              static_cast<unsigned long long>(h.step));
  std::printf("frame       gamma = %.6e m, tau = %.6e s, V0 = %.6e J\n", h.gamma, h.tau, h.V0);
  std::printf("norm        %.12f\n", total * h.dx * h.dy);
  if (total > 0.0) std::printf("centroid    column %.3f\n", mx / total);
  return kExitOk;
}

int cmd_diff(const std::string& a, const std::string& b) {
  const ManifestDiff d = diff_manifests(a, b);
  if (d.identical) {
    std::printf("identical\n");
    return kExitOk;
  }
  for (const auto& line : d.differences) std::printf("%s\n", line.c_str());
  return kExitPointsFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Talbot-interferometer wave packet simulations"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::size_t parallelism = 0;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "integrate every sweep point of a config and export observables");
  run->add_option("config", config_path, "scenario config file")->required();
  run->add_option("-o,--out", out_dir, "output directory (defaults to the config's)");
  run->add_option("-j,--parallelism", parallelism, "concurrent sweep points (defaults to the config's)");
  run->add_flag("-q,--quiet", quiet, "no progress messages");

  auto* validate = app.add_subcommand("validate", "parse a config and print the resolved scenario");
  validate->add_option("config", config_path, "scenario config file")->required();

  std::string snapshot_path;
  auto* inspect = app.add_subcommand("inspect", "print a snapshot file's header and norm");
  inspect->add_option("snapshot", snapshot_path, "snapshot file")->required();

  std::string manifest_a;
  std::string manifest_b;
  auto* diff = app.add_subcommand("diff", "compare two run manifests, ignoring wall time");
  diff->add_option("first", manifest_a, "manifest.json")->required();
  diff->add_option("second", manifest_b, "manifest.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*run) return cmd_run(config_path, out_dir, parallelism, quiet);
    if (*validate) return cmd_validate(config_path);
    if (*inspect) return cmd_inspect(snapshot_path);
    if (*diff) return cmd_diff(manifest_a, manifest_b);
  } catch (const ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << std::endl;
    return kExitInvalid;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitPointsFailed;
  }
  return kExitOk;
}
