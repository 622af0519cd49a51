#include <doctest.h>

#include <cmath>

#include "qtalbot/error.hpp"
#include "qtalbot/frame.hpp"

using namespace qtalbot;

namespace {
constexpr double kMeV = 1e-3 * kElectronVolt;
}

TEST_CASE("frame scales for V0 = 0.332 meV") {
  const ScalingFrame f = build_frame(0.332 * kMeV);
  // Independent evaluation of gamma = hbar / sqrt(2 m V0), tau = hbar / V0.
  const double hbar = 1.054571817e-34;
  const double m = 1.67262192369e-27;
  const double V0 = 0.332e-3 * 1.602176634e-19;
  CHECK(f.gamma == doctest::Approx(hbar / std::sqrt(2.0 * m * V0)).epsilon(1e-12));
  CHECK(f.tau == doctest::Approx(hbar / V0).epsilon(1e-12));
  CHECK(f.gamma == doctest::Approx(2.500e-10).epsilon(5e-4));
  CHECK(f.tau == doctest::Approx(1.982e-12).epsilon(5e-4));
}

TEST_CASE("tau equals 2 m gamma^2 / hbar") {
  for (double v : {0.01, 0.332, 7.0, 300.0}) {
    const ScalingFrame f = build_frame(v * kMeV);
    CHECK(f.tau == doctest::Approx(2.0 * f.particle.mass * f.gamma * f.gamma / f.constants.hbar).epsilon(1e-12));
  }
}

TEST_CASE("length-specified frame inverts the energy frame") {
  const ScalingFrame a = build_frame(0.332 * kMeV);
  const ScalingFrame b = build_frame_from_length(a.gamma);
  CHECK(b.V0 == doctest::Approx(a.V0).epsilon(1e-12));
  CHECK(b.tau == doctest::Approx(a.tau).epsilon(1e-12));
}

TEST_CASE("non-positive V0 is a domain error") {
  CHECK_THROWS_AS(build_frame(0.0), DomainError);
  CHECK_THROWS_AS(build_frame(-1.0), DomainError);
}

TEST_CASE("dimensionless conversions round-trip") {
  const ScalingFrame f = build_frame(0.332 * kMeV);
  CHECK(to_dimensionless(2.5e-10, "length", f) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(to_dimensionless(f.tau, QuantityKind::time, f) == doctest::Approx(1.0));
  CHECK(to_dimensionless(f.V0, QuantityKind::energy, f) == doctest::Approx(1.0));
  for (auto kind : {QuantityKind::length, QuantityKind::time, QuantityKind::energy}) {
    for (double v : {1e-12, 3.7e-9, 42.0}) {
      CHECK(from_dimensionless(to_dimensionless(v, kind, f), kind, f) == doctest::Approx(v).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(to_dimensionless(1.0, "mass", f), UsageError);
}

TEST_CASE("1 nm de Broglie wavelength in the 0.332 meV frame") {
  const ScalingFrame f = build_frame(0.332 * kMeV);
  const double k = dimensionless_wavenumber(1e-9, f);
  CHECK(k == doctest::Approx(2.0 * 3.141592653589793 * f.gamma / 1e-9));
  // Kinetic energy k^2 in units of V0 equals h^2/(2 m lambda^2) / V0.
  const double h = f.constants.planck();
  CHECK(k * k == doctest::Approx(h * h / (2.0 * f.particle.mass * 1e-18) / f.V0).epsilon(1e-12));
}
