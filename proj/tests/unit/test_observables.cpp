#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "qtalbot/error.hpp"
#include "qtalbot/observables.hpp"
#include "qtalbot/wavefield.hpp"

using namespace qtalbot;

namespace {

constexpr double kPi = std::numbers::pi;

ScreenProfile make_profile(std::size_t n, double dy, double y0, auto&& fn) {
  ScreenProfile p;
  p.y0 = y0;
  p.dy = dy;
  p.intensity.resize(n);
  for (std::size_t j = 0; j < n; ++j) p.intensity[j] = fn(p.y(j));
  return p;
}

// Fringes with period d under a Gaussian envelope, peaks at y = shift + m d.
ScreenProfile fringes(double d, double shift, double contrast = 1.0, double dy = 0.25) {
  return make_profile(801, dy, -100.0, [&](double y) {
    const double env = std::exp(-y * y / (2.0 * 40.0 * 40.0));
    return env * (1.0 + contrast * std::cos(2.0 * kPi * (y - shift) / d));
  });
}

// A field whose density at and beyond `plane` is 1 + cos(2 pi y / d) and 0 before.
WaveField fringe_field(double d, double plane) {
  GridSpec g{40, 160, 1.0, 1.0, 0.0, -80.0};
  WaveField f(g, 0.1);
  for (std::size_t j = 0; j < g.ny; ++j) {
    const double a = std::sqrt(1.0 + std::cos(2.0 * kPi * g.y(j) / d));
    for (std::size_t i = 0; i < g.nx; ++i) {
      const double v = g.x(i) >= plane ? a : 0.0;
      f.real(i, j) = v;
    }
  }
  return f;
}

}  // namespace

TEST_CASE("screen profile") {
  SUBCASE("plane wave gives a flat profile") {
    GridSpec g{32, 40, 1.0, 1.0, 0.0, -20.0};
    WaveField f(g, 0.1);
    for (std::size_t j = 0; j < g.ny; ++j) {
      for (std::size_t i = 0; i < g.nx; ++i) {
        f.real(i, j) = std::cos(0.7 * g.x(i));
        f.imag(i, j) = std::sin(0.7 * g.x(i));
        f.imag_prev(i, j) = std::sin(0.7 * g.x(i));
      }
    }
    const ScreenProfile p = screen_profile(f, 10.0);
    for (double v : p.intensity) CHECK(v == doctest::Approx(p.intensity.front()).epsilon(1e-14));
    CHECK(visibility(p, -10.0, 10.0) == 0.0);
  }
  SUBCASE("interpolates between columns, never negative") {
    GridSpec g{10, 4, 1.0, 1.0, 0.0, 0.0};
    WaveField f(g, 0.1);
    for (std::size_t j = 0; j < g.ny; ++j) {
      f.real(3, j) = 1.0;
      f.real(4, j) = 2.0;
    }
    const ScreenProfile p = screen_profile(f, 3.25);
    CHECK(p.intensity[1] == doctest::Approx(0.75 * 1.0 + 0.25 * 4.0));
    CHECK(std::all_of(p.intensity.begin(), p.intensity.end(), [](double v) { return v >= 0.0; }));
    CHECK_THROWS_AS(screen_profile(f, 12.0), RangeError);
  }
}

TEST_CASE("fringe shift") {
  const ScreenProfile ref = fringes(10.0, 0.0);
  SUBCASE("identical profiles") { CHECK(fringe_shift(ref, ref).shift == 0.0); }
  SUBCASE("exact three-sample shift") {
    ScreenProfile moved = ref;
    std::fill(moved.intensity.begin(), moved.intensity.end(), 0.0);
    for (std::size_t j = 3; j < ref.size(); ++j) moved.intensity[j] = ref.intensity[j - 3];
    CHECK(fringe_shift(moved, ref).shift == doctest::Approx(3.0 * ref.dy).epsilon(1e-3 / 3.0));
  }
  SUBCASE("antisymmetric and sub-sample") {
    for (double s : {0.1, 1.3, -2.7, 4.4}) {
      const ScreenProfile p = make_profile(801, 0.25, -100.0, [&](double y) {
        const double u = y - s;
        return std::exp(-u * u / (2.0 * 40.0 * 40.0)) * (1.0 + std::cos(2.0 * kPi * u / 10.0));
      });
      const double a = fringe_shift(p, ref).shift;
      CHECK(a == doctest::Approx(s).epsilon(0.02).scale(1.0));
      CHECK(fringe_shift(ref, p).shift == -a);
    }
  }
  SUBCASE("sampling mismatch") {
    ScreenProfile other = ref;
    other.dy = 0.5;
    CHECK_THROWS_AS(fringe_shift(other, ref), UsageError);
  }
}

TEST_CASE("grating phase and fringe period") {
  GratingSpec g;
  g.period = 10.0;
  g.opening_fraction = 0.5;
  CHECK(std::abs(grating_phase(fringes(10.0, 0.0), g, -30.0, 30.0)) < 1e-2);
  CHECK(std::abs(grating_phase(fringes(10.0, 5.0), g, -30.0, 30.0)) == doctest::Approx(5.0).epsilon(2e-3));
  CHECK(grating_phase(fringes(10.0, 2.0), g, -30.0, 30.0) == doctest::Approx(2.0).epsilon(1e-2));
  CHECK(grating_phase(fringes(10.0, -3.0), g, -30.0, 30.0) == doctest::Approx(-3.0).epsilon(1e-2));
  for (double d : {8.0, 10.0, 11.5}) {
    CHECK(fringe_period(fringes(d, 1.0), -30.0, 30.0, 6.0, 16.0) == doctest::Approx(d).epsilon(5e-3));
  }
}

TEST_CASE("visibility") {
  SUBCASE("zero minimum gives 1") {
    CHECK(visibility(fringes(10.0, 0.0, 1.0), -20.0, 20.0) == doctest::Approx(1.0).epsilon(1e-3));
  }
  SUBCASE("flat profile gives 0") {
    const ScreenProfile flat = make_profile(100, 1.0, 0.0, [](double) { return 2.0; });
    CHECK(visibility(flat, 10.0, 90.0) == 0.0);
  }
  SUBCASE("contrast of a cosine") {
    for (double c : {0.2, 0.5, 0.8}) {
      const ScreenProfile p = make_profile(400, 0.1, -20.0, [&](double y) { return 1.0 + c * std::cos(2.0 * kPi * y / 5.0); });
      const double v = visibility(p, -8.0, 8.0);
      CHECK(v == doctest::Approx(c).epsilon(1e-3));
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
  SUBCASE("single hump is insufficient") {
    const ScreenProfile p = make_profile(200, 0.1, -10.0, [](double y) { return std::exp(-y * y); });
    CHECK_THROWS_AS(visibility(p, -5.0, 5.0), InsufficientFringeError);
  }
}

TEST_CASE("collected intensity behind a mask") {
  const double d = 16.0;
  const double plane = 20.0;
  const WaveField f = fringe_field(d, plane);
  GratingSpec mask;
  mask.period = d;
  mask.opening_fraction = 0.5;
  mask.x_position = plane;
  mask.y_offset = 0.5 * d;  // anti-phase with the fringes at s_d = 0
  mask.role = GratingRole::mask;

  std::vector<double> offsets;
  for (int k = 0; k <= 32; ++k) offsets.push_back(0.0625 * d * k);
  const IntensityCurve c = collected_intensity_curve(f, mask, offsets);
  const auto mn = std::min_element(c.values.begin(), c.values.end()) - c.values.begin();
  const auto mx = std::max_element(c.values.begin(), c.values.end()) - c.values.begin();
  CHECK((offsets[static_cast<std::size_t>(mn)] == 0.0 || offsets[static_cast<std::size_t>(mn)] == 2.0 * d));
  CHECK(offsets[static_cast<std::size_t>(mx)] == doctest::Approx(0.5 * d));
  // d-periodic.
  for (std::size_t k = 0; k + 16 < offsets.size(); ++k) {
    CHECK(c.values[k] == doctest::Approx(c.values[k + 16]).epsilon(1e-12));
  }
  // A nearly open mask collects the fraction beyond the plane (all of it here).
  GratingSpec open = mask;
  open.opening_fraction = 1.0 - 1e-9;
  CHECK(collected_intensity(f, open, 0.3) == doctest::Approx(1.0).epsilon(1e-6));
  // Half the lattice behind the plane.
  WaveField half = f;
  for (std::size_t j = 0; j < f.grid.ny; ++j) {
    for (std::size_t i = 0; i < 20; ++i) half.real(i, j) = f.real(30, j);
  }
  CHECK(collected_intensity(half, open, 0.3) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("sensitivity factor") {
  IntensityCurve a{{0.0, 0.5, 1.0}, {0.20, 0.30, 0.20}};
  IntensityCurve b{{0.0, 0.5, 1.0}, {0.22, 0.27, 0.21}};
  CHECK(sensitivity_factor(a, a, 0.1, 0.5) == 0.0);
  CHECK(sensitivity_factor(a, b, 0.1, 0.5) == doctest::Approx(30.0));
  CHECK(sensitivity_factor(a, b, 2.0, 0.25) == doctest::Approx(std::abs(0.245 - 0.25) / 2.0 * 100.0));
  IntensityCurve c{{0.0, 0.4, 1.0}, {0.2, 0.3, 0.2}};
  CHECK_THROWS_AS(sensitivity_factor(a, c, 0.1, 0.5), UsageError);
  CHECK_THROWS_AS(sensitivity_factor(a, b, 0.0, 0.5), UsageError);
  CHECK_THROWS_AS(sensitivity_factor(a, b, 0.1, 2.0), RangeError);
}
