#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qtalbot/error.hpp"
#include "qtalbot/frame.hpp"
#include "qtalbot/sidebands.hpp"
#include "qtalbot/spectral.hpp"

using namespace qtalbot;

namespace {

constexpr double kPi = std::numbers::pi;
const double kHbar = 1.054571817e-34;
const double kMass = 1.67262192369e-27;

// Kinetic energy of a proton with de Broglie wavelength lambda.
double energy_for(double lambda) {
  const double p = 2.0 * kPi * kHbar / lambda;
  return p * p / (2.0 * kMass);
}

// Synthetic spectrum: Gaussian rings of radii `radii` (dimensionless) and given weights.
KSpectrum rings(const std::vector<double>& radii, const std::vector<double>& weights, double width) {
  KSpectrum s;
  s.nkx = s.nky = 256;
  s.dkx = s.dky = 0.02;
  s.amplitude.assign(s.nkx * s.nky, 0.0);
  for (std::size_t my = 0; my < s.nky; ++my) {
    for (std::size_t mx = 0; mx < s.nkx; ++mx) {
      const double r = std::hypot(s.kx(mx), s.ky(my));
      double a = 0.0;
      for (std::size_t q = 0; q < radii.size(); ++q) {
        const double u = (r - radii[q]) / width;
        a += std::sqrt(weights[q]) * std::exp(-0.5 * u * u);
      }
      s.amplitude[my * s.nkx + mx] = a;
    }
  }
  return s;
}

}  // namespace

TEST_CASE("central band is k0 for every n") {
  const double E = energy_for(1e-9);
  for (double n : {0.01, 1.0, 4.0, 100.0}) {
    const auto p = sideband_predict(E, 2.5e10, n, 0, 0);
    REQUIRE(p.allowed.size() == 1);
    CHECK(p.allowed[0].eta == 0);
    CHECK(p.allowed[0].k == doctest::Approx(2.0 * kPi / 1e-9).epsilon(1e-9));
  }
}

TEST_CASE("sideband radii follow k^2 = k0^2 + 2 m eta n hbar omega0 / hbar^2") {
  const double E = energy_for(1e-9);
  const double omega0 = 2.5e10;
  const auto p = sideband_predict(E, omega0, 4.0, -3, 3);
  for (const auto& row : p.allowed) {
    const double expected = std::sqrt(2.0 * kMass * (E + row.eta * 4.0 * kHbar * omega0)) / kHbar;
    CHECK(row.k == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK(p.excluded.empty());
  CHECK_THROWS_AS(sideband_predict(E, omega0, 4.0, 2, 1), UsageError);
  CHECK_THROWS_AS(sideband_predict(-E, omega0, 4.0, 0, 1), DomainError);
}

TEST_CASE("tabulated sideband radii from their own implied omega0") {
  // The tabulated k(n=8, eta=+1) = 8.02e9 m^-1 fixes n hbar omega0 / E_k0; the
  // remaining entries then follow. Rounding in the table limits agreement to ~2.5%.
  const double k0 = 2.0 * kPi / 1e-9;
  const double E = energy_for(1e-9);
  const double q = (std::pow(8.02e9 / k0, 2) - 1.0) / 8.0;  // hbar omega0 / E_k0
  const double omega0 = q * E / kHbar;
  const auto p8 = sideband_predict(E, omega0, 8.0, -2, 2);
  const auto up = std::find_if(p8.allowed.begin(), p8.allowed.end(), [](const auto& r) { return r.eta == 1; });
  REQUIRE(up != p8.allowed.end());
  CHECK(up->k == doctest::Approx(8.02e9).epsilon(1e-9));
  // eta = -2 at n = 8 has a negative radicand.
  REQUIRE(p8.excluded.size() == 1);
  CHECK(p8.excluded[0] == -2);
  const auto p4 = sideband_predict(E, omega0, 4.0, -2, 2);
  CHECK(p4.allowed.front().eta == -2);
  CHECK(p4.allowed.front().k == doctest::Approx(3.74e9).epsilon(0.025));
  // Radicand stays non-negative for all allowed rows.
  for (const auto& row : p4.allowed) CHECK(row.eta >= -E / (4.0 * kHbar * omega0));
}

TEST_CASE("radial profile keeps the k_x >= 0 power") {
  const KSpectrum s = rings({1.0}, {1.0}, 0.05);
  const RadialProfile p = radial_profile(s);
  double half = 0.0;
  for (std::size_t my = 0; my < s.nky; ++my) {
    for (std::size_t mx = 0; mx < s.nkx; ++mx) {
      if (s.kx(mx) >= 0.0) half += s.power(mx, my) * s.dkx * s.dky;
    }
  }
  double total = 0.0;
  for (double v : p.power) total += v;
  CHECK(total == doctest::Approx(half).epsilon(1e-12));
  const auto peak = std::max_element(p.power.begin(), p.power.end()) - p.power.begin();
  CHECK(p.k(static_cast<std::size_t>(peak)) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("sideband detection") {
  const ScalingFrame frame = build_frame(0.332e-3 * kElectronVolt);
  SUBCASE("single ring gives only the central band") {
    const KSpectrum s = rings({1.2}, {1.0}, 0.04);
    SidebandPredictions pred;
    pred.n = 1.0;
    pred.allowed = {{-1, 1.0 / frame.gamma}, {0, 1.2 / frame.gamma}, {1, 1.4 / frame.gamma}};
    const SidebandTable t = sideband_detect(s, frame, pred);
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0].eta == 0);
    CHECK(t.rows[0].k_measured == doctest::Approx(1.2 / frame.gamma).epsilon(2e-3));
    CHECK(t.rows[0].amplitude == doctest::Approx(1.0));
  }
  SUBCASE("weak side rings are found and matched") {
    const KSpectrum s = rings({1.0, 1.2, 1.4}, {0.05, 1.0, 0.05}, 0.03);
    SidebandPredictions pred;
    pred.n = 4.0;
    pred.allowed = {{-1, 1.0 / frame.gamma}, {0, 1.2 / frame.gamma}, {1, 1.4 / frame.gamma}};
    const SidebandTable t = sideband_detect(s, frame, pred);
    REQUIRE(t.rows.size() == 3);
    for (const auto& r : t.rows) {
      CHECK(r.k_measured == doctest::Approx(r.k_theory).epsilon(0.01));
      CHECK(r.n == 4.0);
    }
    CHECK(t.rows[0].eta == -1);
    CHECK(t.rows[1].eta == 0);
    CHECK(t.rows[2].eta == 1);
  }
  SUBCASE("rings below one percent of the peak are ignored") {
    const KSpectrum s = rings({1.0, 1.2}, {1e-3, 1.0}, 0.03);
    CHECK(sideband_detect(s, frame).rows.size() == 1);
  }
}
