#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "qtalbot/error.hpp"
#include "qtalbot/frame.hpp"
#include "qtalbot/potentials.hpp"

using namespace qtalbot;

namespace {

constexpr double kMeV = 1e-3 * kElectronVolt;

ScalingFrame table_frame() { return build_frame(0.332 * kMeV); }

// Full-scale grating in dimensionless units.
GratingSpec table_grating(const ScalingFrame& f) {
  GratingSpec g;
  g.period = 100e-9 / f.gamma;
  g.opening_fraction = 0.5;
  g.thickness = 50e-9 / f.gamma;
  g.barrier_height = 24.390 * kMeV / f.V0;
  g.x_position = 0.0;
  return g;
}

}  // namespace

TEST_CASE("geometric potential: bar, upstream, edge") {
  GratingSpec g;
  g.period = 40.0;
  g.opening_fraction = 0.5;
  g.thickness = 10.0;
  g.barrier_height = 73.5;
  // Openings centred at m*d, bars centred at d/2 + m*d.
  CHECK(geometric_potential(5.0, 20.0, g) == doctest::Approx(73.5));
  CHECK(geometric_potential(5.0, -60.0, g) == doctest::Approx(73.5));
  CHECK(geometric_potential(5.0, 0.0, g) == 0.0);
  CHECK(geometric_potential(5.0, 40.0, g) == 0.0);
  CHECK(geometric_potential(-1.0, 20.0, g) == 0.0);
  CHECK(geometric_potential(10.5, 20.0, g) == 0.0);
  // Opening edges at +-f d/2 = +-10.
  CHECK(geometric_potential(5.0, 10.0, g) == doctest::Approx(73.5 / 2));
  CHECK(geometric_potential(5.0, -10.0, g) == doctest::Approx(73.5 / 2));
  CHECK(geometric_potential(5.0, 30.0, g) == doctest::Approx(73.5 / 2));
}

TEST_CASE("edges hit through inexact arithmetic stay half open") {
  const ScalingFrame f = table_frame();
  GratingSpec g;
  g.period = 10e-9 / f.gamma;
  g.opening_fraction = 0.5;
  g.y_offset = 0.5 * g.period;
  const double dy = 0.125e-9 / f.gamma;
  // Rows 20 + 80 m are edges; shifting by whole periods keeps them edges.
  for (int m = -3; m <= 3; ++m) {
    for (int k = 0; k <= 40; ++k) {
      const double s = k * (0.05 * g.period);
      const double y = static_cast<double>(20 + 80 * m) * dy + s;
      CAPTURE(m);
      CAPTURE(k);
      CHECK(g.transmission(y - s) == 0.5);
    }
  }
}

TEST_CASE("full-scale barrier in V0 units") {
  const ScalingFrame f = table_frame();
  const GratingSpec g = table_grating(f);
  CHECK(g.barrier_height == doctest::Approx(24.390 / 0.332).epsilon(1e-12));
  CHECK(g.barrier_height == doctest::Approx(73.5).epsilon(1e-3));
  const double mid_bar = 0.5 * g.period;
  CHECK(geometric_potential(0.5 * g.thickness, mid_bar, g) == doctest::Approx(g.barrier_height));
}

TEST_CASE("finite slit count: openings centred on y_offset, opaque beyond") {
  GratingSpec g;
  g.period = 36.0;
  g.opening_fraction = 1.0 / 3.0;
  g.thickness = 6.0;
  g.barrier_height = 1.0;
  g.slit_count = 2;
  CHECK(g.transmission(18.0) == 1.0);
  CHECK(g.transmission(-18.0) == 1.0);
  CHECK(g.transmission(0.0) == 0.0);
  CHECK(g.transmission(54.0) == 0.0);
  CHECK(g.transmission(-90.0) == 0.0);
  CHECK(g.transmission(24.0) == doctest::Approx(0.5));
  g.slit_count = 3;
  CHECK(g.transmission(0.0) == 1.0);
  CHECK(g.transmission(36.0) == 1.0);
  CHECK(g.transmission(72.0) == 0.0);
}

TEST_CASE("grating validation") {
  GratingSpec g;
  g.opening_fraction = 1.0;
  CHECK_THROWS_AS(g.validate(), ConfigError);
  g.opening_fraction = 0.5;
  g.barrier_height = 0.0;
  CHECK_THROWS_AS(g.validate(), ConfigError);
  g.barrier_height = 1.0;
  g.thickness = -1.0;
  CHECK_THROWS_AS(g.validate(), ConfigError);
}

TEST_CASE("image charge at the centre of a 50 nm slit") {
  const ScalingFrame f = table_frame();
  const GratingSpec g = table_grating(f);
  ImageChargeSpec ic;
  ic.enabled = true;
  ic.cutoff = 0.1;
  // Independent: -e^2 / (pi eps0 d), d = 100 nm.
  const double e = 1.602176634e-19;
  const double eps0 = 8.8541878128e-12;
  const double expected_J = -e * e / (std::numbers::pi * eps0 * 100e-9);
  CHECK(expected_J / kMeV == doctest::Approx(-57.6).epsilon(1e-3));
  const double v = image_potential(0.5 * g.thickness, 0.0, g, ic, f);
  CHECK(v == doctest::Approx(expected_J / f.V0).epsilon(1e-10));

  SUBCASE("symmetric under wall swap") {
    const double w = 0.25 * g.period;
    for (double y : {0.1 * w, 0.37 * w, 0.8 * w}) {
      CHECK(image_potential(1.0, y, g, ic, f) == doctest::Approx(image_potential(1.0, -y, g, ic, f)).epsilon(1e-14));
    }
  }
  SUBCASE("disabled -> zero") {
    ic.enabled = false;
    CHECK(image_potential(1.0, 0.0, g, ic, f) == 0.0);
  }
  SUBCASE("outside the slab and on bars -> zero") {
    CHECK(image_potential(-1.0, 0.0, g, ic, f) == 0.0);
    CHECK(image_potential(1.0, 0.5 * g.period, g, ic, f) == 0.0);
  }
  SUBCASE("clamped near walls") {
    const double edge = 0.25 * g.period;
    const double near = image_potential(1.0, edge - 1e-9, g, ic, f);
    CHECK(std::isfinite(near));
    CHECK(near >= -50.0 * g.barrier_height);
  }
}

TEST_CASE("uniform field potential") {
  const ScalingFrame f = table_frame();
  const double x_lo = 0.0;
  const double x_hi = 1e-5 / f.gamma;
  SUBCASE("E0 = 0 vanishes") {
    const FieldSpec s = FieldSpec::uniform(0.0, 0.3, x_lo, x_hi);
    for (double X : {-5.0, 10.0, 1000.0}) {
      for (double Y : {-400.0, 0.0, 4000.0}) CHECK(field_potential(X, Y, 0.0, s, f) == 0.0);
    }
  }
  SUBCASE("theta = 90 deg, y = 1 um, 100 V/m") {
    const FieldSpec s = FieldSpec::uniform(100.0, std::numbers::pi / 2, x_lo, x_hi);
    const double Y = 1e-6 / f.gamma;
    const double expected = -1.602176634e-19 * 100.0 * 1e-6 / f.V0;
    CHECK(expected == doctest::Approx(-0.301).epsilon(2e-3));
    CHECK(field_potential(100.0, Y, 0.0, s, f) == doctest::Approx(expected).epsilon(1e-10));
  }
  SUBCASE("theta = 0 depends on x only, zero outside the region") {
    const FieldSpec s = FieldSpec::uniform(100.0, 0.0, x_lo, x_hi);
    const double X = 0.5 * x_hi;
    const double expected = -1.602176634e-19 * 100.0 * (X * f.gamma) / f.V0;
    CHECK(field_potential(X, 0.0, 0.0, s, f) == doctest::Approx(expected).epsilon(1e-10));
    CHECK(field_potential(X, 123.0, 0.0, s, f) == doctest::Approx(expected).epsilon(1e-10));
    CHECK(field_potential(-1.0, 123.0, 0.0, s, f) == 0.0);
    CHECK(field_potential(x_hi + 1.0, 123.0, 0.0, s, f) == 0.0);
  }
  SUBCASE("pure function") {
    const FieldSpec s = FieldSpec::uniform(37.0, 0.7, x_lo, x_hi);
    CHECK(field_potential(33.3, -7.0, 2.0, s, f) == field_potential(33.3, -7.0, 2.0, s, f));
  }
}

TEST_CASE("modulated fields") {
  const ScalingFrame f = table_frame();
  SUBCASE("temporal field vanishes at t = pi/(2 omega)") {
    const double omega = 2.0 * std::numbers::pi * 39.5e6;
    const FieldSpec s = FieldSpec::temporal(100.0, omega, 0.0, 1e4);
    const double T = std::numbers::pi / (2.0 * omega) / f.tau;
    for (double Y : {-300.0, 5.0, 900.0}) CHECK(std::abs(field_potential(10.0, Y, T, s, f)) < 1e-14);
    CHECK(field_potential(10.0, 100.0, 0.0, s, f) ==
          doctest::Approx(-1.602176634e-19 * 100.0 * 100.0 * f.gamma / f.V0).epsilon(1e-10));
  }
  SUBCASE("spatial field follows |cos(2 pi x / lambda')|") {
    const double lp = 1e-9;
    const FieldSpec s = FieldSpec::spatial(100.0, lp, 0.0, 1e4);
    const double c = 1.602176634e-19 * 100.0 * f.gamma / f.V0;
    for (double X : {0.0, 1.0, 1.7, 2.0, 3.3}) {
      const double expected = -c * std::abs(std::cos(2.0 * std::numbers::pi * X * f.gamma / lp)) * 50.0;
      CHECK(field_potential(X, 50.0, 0.0, s, f) == doctest::Approx(expected).epsilon(1e-10));
    }
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(FieldSpec::spatial(1.0, 0.0, 0.0, 1.0).validate(), ConfigError);
    CHECK_THROWS_AS(FieldSpec::uniform(-1.0, 0.0, 0.0, 1.0).validate(), ConfigError);
    CHECK_THROWS_AS(FieldSpec::uniform(1.0, 0.0, 2.0, 1.0).validate(), ConfigError);
  }
}

TEST_CASE("total potential composes the terms") {
  const ScalingFrame f = table_frame();
  PotentialStack st;
  st.frame = f;
  CHECK(total_potential(3.0, 4.0, 0.0, st) == 0.0);

  GratingSpec g = table_grating(f);
  st.grating = g;
  const FieldSpec fs = FieldSpec::uniform(100.0, std::numbers::pi / 2, -10.0, 1e4);
  st.fields.push_back(fs);
  const double X = 0.5 * g.thickness;
  const double Y = 0.5 * g.period;
  CHECK(total_potential(X, Y, 0.0, st) ==
        doctest::Approx(g.barrier_height + field_potential(X, Y, 0.0, fs, f)).epsilon(1e-13));

  st.fields.clear();
  st.image.enabled = true;
  st.image.cutoff = 0.1;
  const double in_slit = total_potential(X, 0.0, 0.0, st);
  CHECK(in_slit < 0.0);
  CHECK(in_slit == doctest::Approx(image_potential(X, 0.0, g, st.image, f)));
}

TEST_CASE("lattice potential matches the pointwise potential") {
  const ScalingFrame f = table_frame();
  GridSpec grid{64, 48, 0.5, 0.5, -8.0, -12.0};
  PotentialStack st;
  st.frame = f;
  GratingSpec g;
  g.period = 6.0;
  g.opening_fraction = 0.5;
  g.thickness = 2.0;
  g.barrier_height = 5.0;
  g.x_position = 1.0;
  st.grating = g;
  st.image.enabled = true;
  st.image.cutoff = 0.5;
  st.fields.push_back(FieldSpec::uniform(2e4, 0.6, 4.0, 12.0));
  st.fields.push_back(FieldSpec::temporal(1e4, 3e11, 0.0, 20.0));
  const LatticePotential lp(grid, st);
  std::vector<double> row(grid.nx);
  double vmax = 0.0;
  for (double T : {0.0, 0.7, 13.1}) {
    for (std::size_t j = 0; j < grid.ny; ++j) {
      lp.fill_row(j, T, row);
      for (std::size_t i = 0; i < grid.nx; ++i) {
        const double v = total_potential(grid.x(i), grid.y(j), T, st);
        CHECK(row[i] == doctest::Approx(v).epsilon(1e-12).scale(1.0));
        vmax = std::max(vmax, std::abs(v));
      }
    }
  }
  CHECK(lp.max_abs() >= vmax);
  CHECK(lp.has_fields());
}
