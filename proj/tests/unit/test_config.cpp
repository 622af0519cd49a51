#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <string>

#include "qtalbot/config.hpp"
#include "qtalbot/error.hpp"

using namespace qtalbot;

namespace {

constexpr double kMeV = 1e-3 * kElectronVolt;

std::string config_path(const char* name) {
  return std::string(QTALBOT_SOURCE_DIR) + "/configs/" + name;
}

// Minimal valid desk-scale text; `extra` is appended.
std::string minimal(const std::string& spacing = "0.125 nm", const std::string& extra = "") {
  return "[frame]\nV0 = 0.332 meV\n"
         "[particle]\nlambda_dB = 1 nm\n"
         "[packet]\nsigma_x = 4 nm\nsigma_y = 10 nm\nx0 = -20 nm\n"
         "[grid]\nspacing = " + spacing + "\nx_min = -40 nm\nx_max = 60 nm\ny_min = -45 nm\ny_max = 45 nm\n"
         "[grating]\nperiod = 10 nm\nopening_fraction = 50 %\nthickness = 2 nm\nbarrier_height = 1.5 E_k0\n"
         "[snapshots]\nplanes = 0.5 L_T\n" + extra;
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("table1 config echoes the full-scale parameters") {
  const ScenarioConfig c = load_config(config_path("table1.cfg"));
  const double g = c.frame.gamma;
  CHECK(g == doctest::Approx(2.5e-10).epsilon(1e-4));
  CHECK(c.frame.tau == doctest::Approx(1.982e-12).epsilon(5e-4));
  CHECK(c.lambda_dB == doctest::Approx(1e-9));
  CHECK(c.grating.period * g == doctest::Approx(100e-9).epsilon(1e-12));
  CHECK(c.grating.opening_fraction == doctest::Approx(0.5));
  CHECK(c.grating.thickness * g == doctest::Approx(50e-9).epsilon(1e-12));
  CHECK(c.grating.barrier_height * c.frame.V0 == doctest::Approx(24.390 * kMeV).epsilon(1e-12));
  CHECK(c.packet.sigma_x * g == doctest::Approx(50e-9).epsilon(1e-12));
  CHECK(c.packet.sigma_y * g == doctest::Approx(250e-9).epsilon(1e-12));
  CHECK(c.packet.x0 * g == doctest::Approx(-5e-6).epsilon(1e-12));
  CHECK(c.talbot_length() * g == doctest::Approx(10e-6).epsilon(1e-12));
  CHECK(c.velocity() == doctest::Approx(396.0).epsilon(3e-3));
  REQUIRE(c.field.kind);
  CHECK(*c.field.kind == FieldKind::uniform);
  CHECK(c.field.E0.front() == 0.0);
  CHECK(c.field.E0.back() == doctest::Approx(100.0));
  CHECK(c.field.theta.front() == 0.0);
  CHECK(c.field.theta.back() == doctest::Approx(std::numbers::pi / 2));
  CHECK(c.field.x_lo * g == doctest::Approx(5e-6).epsilon(1e-12));
  CHECK(c.field.x_hi * g == doctest::Approx(15e-6).epsilon(1e-12));
  REQUIRE(c.mask);
  CHECK(c.mask->grating.x_position * g == doctest::Approx(20e-6).epsilon(1e-12));
  CHECK(c.mask->offset_step * g == doctest::Approx(5e-9).epsilon(1e-9));
  CHECK(c.image.enabled);

  const auto pts = sweep_points(c);
  std::size_t sweep = 0;
  for (const auto& p : pts) sweep += p.role == "sweep";
  CHECK(sweep == 110);  // 11 E0 x 10 theta
}

TEST_CASE("every shipped config parses") {
  std::size_t n = 0;
  for (const auto& e : std::filesystem::directory_iterator(std::string(QTALBOT_SOURCE_DIR) + "/configs")) {
    if (e.path().extension() != ".cfg") continue;
    CAPTURE(e.path().string());
    CHECK_NOTHROW(load_config(e.path().string()));
    ++n;
  }
  CHECK(n >= 6);
}

TEST_CASE("empty file lists the required keys") {
  const std::string what = error_of("");
  CHECK(what.find("missing required keys") != std::string::npos);
  for (const char* key : {"V0 or gamma", "lambda_dB or energy", "sigma_x", "spacing", "period", "barrier_height", "planes"}) {
    CAPTURE(key);
    CHECK(what.find(key) != std::string::npos);
  }
}

TEST_CASE("under-resolved lattice is rejected") {
  // 0.25 nm spacing = 4 points per 1 nm wavelength.
  const std::string what = error_of(minimal("0.25 nm"));
  CHECK(what.find("points; at least 8") != std::string::npos);
  CHECK_NOTHROW(parse_config(minimal("0.125 nm")));
}

TEST_CASE("malformed entries carry a line number") {
  SUBCASE("unknown key") {
    const std::string what = error_of(minimal("0.125 nm", "[output]\ncolour = blue\n"));
    CHECK(what.find("unknown key 'colour'") != std::string::npos);
    CHECK(what.find("line 23") != std::string::npos);
  }
  SUBCASE("unknown section") { CHECK(error_of(minimal("0.125 nm", "[extras]\n")).find("unknown section") != std::string::npos); }
  SUBCASE("missing unit") {
    const std::string what = error_of(minimal("0.125"));
    CHECK(what.find("missing unit") != std::string::npos);
    CHECK(what.find("line 10") != std::string::npos);
  }
  SUBCASE("wrong unit dimension") { CHECK(error_of(minimal("0.125 meV")).find("unit") != std::string::npos); }
  SUBCASE("duplicate key") {
    CHECK(error_of(minimal("0.125 nm", "[output]\nparallelism = 2\nparallelism = 3\n")).find("duplicate") != std::string::npos);
  }
  SUBCASE("time step above the bound") {
    CHECK(error_of(minimal("0.125 nm", "[solver]\ntime_step = 120 %\n")).find("time step") != std::string::npos);
  }
}

TEST_CASE("units convert to dimensionless internals") {
  const ScenarioConfig a = parse_config(minimal("1.25 angstrom"));
  CHECK(a.grid.dx * a.frame.gamma == doctest::Approx(0.125e-9).epsilon(1e-12));
  const double g = a.frame.gamma;
  CHECK(a.grating.barrier_height * a.frame.V0 == doctest::Approx(1.5 * a.E_k0).epsilon(1e-12));
  CHECK(a.planes.front() * g == doctest::Approx(50e-9).epsilon(1e-12));
  CHECK(a.k == doctest::Approx(2.0 * std::numbers::pi * g / 1e-9).epsilon(1e-12));

  const ScenarioConfig c = parse_config(minimal("0.125 nm",
      "[field]\nkind = temporal\nx_lo = 0.1 L_T\nx_hi = 0.3 L_T\nE0 = 2 kV/m\nomega = 1, 4 omega0, 1 GHz\n"));
  REQUIRE(c.field.omega.size() == 3);
  CHECK(c.field.E0.front() == doctest::Approx(2000.0));
  CHECK(c.field.omega[0] == doctest::Approx(c.omega0()));
  CHECK(c.field.omega[1] == doctest::Approx(4.0 * c.omega0()));
  CHECK(c.field.omega[2] == doctest::Approx(2.0 * std::numbers::pi * 1e9));
  // omega0 = 2 pi v / (region length)
  CHECK(c.omega0() == doctest::Approx(2.0 * std::numbers::pi * c.velocity() / (20e-9)).epsilon(1e-9));
}

TEST_CASE("packet placement is validated") {
  CHECK(error_of(minimal("0.125 nm").replace(minimal().find("x0 = -20 nm"), 11, "x0 = -38 nm")).find("clearance") != std::string::npos);
  CHECK(error_of(minimal("0.125 nm").replace(minimal().find("x0 = -20 nm"), 11, "x0 = -5 nm")).find("grating") != std::string::npos);
}

TEST_CASE("sweep points: product, sensitivity extras, reference") {
  const ScenarioConfig c = parse_config(minimal("0.125 nm",
      "[field]\nkind = uniform\nx_lo = 0.1 L_T\nx_hi = 0.3 L_T\nE0 = 10, 20 V/m\ntheta = 0, 90 deg\n"
      "[sensitivity]\ne0_baseline = 10 V/m\ntheta_e0 = 90 deg\ne0_deltas = 1, 2 V/m\n"));
  const auto pts = sweep_points(c);
  REQUIRE(pts.size() == 4 + 2 + 1);
  CHECK(pts[0].E0 == 10.0);
  CHECK(pts[0].theta == 0.0);
  CHECK(pts[1].theta == doctest::Approx(std::numbers::pi / 2));
  CHECK(pts[3].E0 == 20.0);
  CHECK(pts[4].role == "sensitivity");
  CHECK(pts[4].E0 == doctest::Approx(11.0));
  CHECK(pts[5].E0 == doctest::Approx(12.0));
  CHECK(pts[6].role == "reference");
  CHECK(pts[6].field_free());

  const SolverConfig sc = make_solver_config(c);
  CHECK(sc.dT == doctest::Approx(0.5 * max_stable_dt(c.grid, 4, LatticePotential(c.grid, make_stack(c, pts[3])).max_abs())).epsilon(1e-3));
  CHECK(sc.damping.size() == 4);
}
