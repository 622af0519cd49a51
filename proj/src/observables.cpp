#include "qtalbot/observables.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "qtalbot/error.hpp"

namespace qtalbot {

namespace {

// Vertex offset of the parabola through (-1, a), (0, b), (1, c).
double parabolic_offset(double a, double b, double c) {
  const double den = a - 2.0 * b + c;
  if (den == 0.0) return 0.0;
  const double off = 0.5 * (a - c) / den;
  return std::clamp(off, -0.5, 0.5);
}

std::pair<std::size_t, std::size_t> index_range(const ScreenProfile& p, double y_lo, double y_hi) {
  if (!(y_lo < y_hi)) throw UsageError("analysis window must satisfy y_lo < y_hi");
  const double a = std::ceil((y_lo - p.y0) / p.dy);
  const double b = std::floor((y_hi - p.y0) / p.dy);
  const auto lo = static_cast<std::size_t>(std::max(a, 0.0));
  const auto hi = static_cast<std::size_t>(std::clamp(b + 1.0, 0.0, static_cast<double>(p.size())));
  if (hi <= lo) throw RangeError("analysis window does not overlap the profile");
  return {lo, hi};
}

}  // namespace

double ScreenProfile::centroid() const {
  double mass = 0.0;
  double moment = 0.0;
  for (std::size_t j = 0; j < intensity.size(); ++j) {
    mass += intensity[j];
    moment += intensity[j] * y(j);
  }
  return mass > 0.0 ? moment / mass : 0.0;
}

ScreenProfile screen_profile(const WaveField& field, double plane_x) {
  const GridSpec& g = field.grid;
  if (!(plane_x >= g.x_origin && plane_x <= g.x_last())) {
    throw RangeError("screen plane X = " + std::to_string(plane_x) + " lies outside the lattice");
  }
  const double s = (plane_x - g.x_origin) / g.dx;
  auto i = static_cast<std::size_t>(std::floor(s));
  if (i >= g.nx - 1) i = g.nx - 2;
  const double t = s - static_cast<double>(i);

  ScreenProfile p;
  p.plane_x = plane_x;
  p.y0 = g.y_origin;
  p.dy = g.dy;
  p.intensity.resize(g.ny);
  for (std::size_t j = 0; j < g.ny; ++j) {
    p.intensity[j] = (1.0 - t) * field.density(i, j) + t * field.density(i + 1, j);
  }
  return p;
}

FringeShift fringe_shift(const ScreenProfile& profile, const ScreenProfile& reference,
                         double max_lag) {
  if (profile.size() != reference.size() || profile.dy != reference.dy ||
      profile.y0 != reference.y0) {
    throw UsageError("fringe_shift needs profiles with identical sampling");
  }
  const auto n = static_cast<long long>(profile.size());
  long long lmax = n - 1;
  if (max_lag > 0.0) lmax = std::min(lmax, static_cast<long long>(std::ceil(max_lag / profile.dy)));
  const auto& A = profile.intensity;
  const auto& B = reference.intensity;

  std::vector<double> c(static_cast<std::size_t>(2 * lmax + 1));
  for (long long L = -lmax; L <= lmax; ++L) {
    double acc = 0.0;
    for (long long j = std::max(0LL, L); j < std::min(n, n + L); ++j) {
      acc += A[static_cast<std::size_t>(j)] * B[static_cast<std::size_t>(j - L)];
    }
    c[static_cast<std::size_t>(L + lmax)] = acc;
  }

  const std::size_t best = static_cast<std::size_t>(std::max_element(c.begin(), c.end()) - c.begin());
  double second = 0.0;
  for (std::size_t k = 1; k + 1 < c.size(); ++k) {
    if (k == best) continue;
    if (c[k] > c[k - 1] && c[k] >= c[k + 1]) second = std::max(second, c[k]);
  }
  double offset = 0.0;
  if (best > 0 && best + 1 < c.size()) offset = parabolic_offset(c[best - 1], c[best], c[best + 1]);

  FringeShift r;
  r.shift = (static_cast<double>(best) - static_cast<double>(lmax) + offset) * profile.dy;
  r.peak_ratio = second > 0.0 ? c[best] / second : std::numeric_limits<double>::infinity();
  r.ambiguous = r.peak_ratio < 1.05;
  return r;
}

double grating_phase(const ScreenProfile& profile, const GratingSpec& grating, double y_lo,
                     double y_hi) {
  const auto [lo, hi] = index_range(profile, y_lo, y_hi);
  GratingSpec open = grating;
  open.slit_count = 0;
  const double d = grating.period;
  const auto half = static_cast<long long>(std::ceil(0.5 * d / profile.dy)) + 1;

  std::vector<double> c(static_cast<std::size_t>(2 * half + 1));
  for (long long m = -half; m <= half; ++m) {
    const double L = static_cast<double>(m) * profile.dy;
    double acc = 0.0;
    for (std::size_t j = lo; j < hi; ++j) acc += profile.intensity[j] * open.transmission(profile.y(j) - L);
    c[static_cast<std::size_t>(m + half)] = acc;
  }
  const std::size_t best = static_cast<std::size_t>(std::max_element(c.begin(), c.end()) - c.begin());
  double offset = 0.0;
  if (best > 0 && best + 1 < c.size()) offset = parabolic_offset(c[best - 1], c[best], c[best + 1]);
  double L = (static_cast<double>(best) - static_cast<double>(half) + offset) * profile.dy;
  L -= d * std::round(L / d);
  if (L <= -0.5 * d) L += d;
  return L;
}

double fringe_period(const ScreenProfile& profile, double y_lo, double y_hi, double p_min,
                     double p_max) {
  if (!(p_min > 0.0 && p_min < p_max)) throw UsageError("period search needs 0 < p_min < p_max");
  const auto [lo, hi] = index_range(profile, y_lo, y_hi);
  const std::size_t n = hi - lo;
  if (n < 8) throw InsufficientFringeError("analysis window holds too few samples");

  std::vector<double> w(n);
  double wsum = 0.0;
  double mean = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    w[k] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (static_cast<double>(k) + 0.5) / static_cast<double>(n));
    wsum += w[k];
    mean += w[k] * profile.intensity[lo + k];
  }
  mean /= wsum;

  auto power = [&](double f) {
    std::complex<double> acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double ph = -2.0 * std::numbers::pi * f * profile.y(lo + k);
      acc += w[k] * (profile.intensity[lo + k] - mean) * std::complex<double>(std::cos(ph), std::sin(ph));
    }
    return std::norm(acc);
  };

  const double f_lo = 1.0 / p_max;
  const double f_hi = 1.0 / p_min;
  constexpr int kSamples = 800;
  const double df = (f_hi - f_lo) / kSamples;
  std::vector<double> p(kSamples + 1);
  for (int s = 0; s <= kSamples; ++s) p[static_cast<std::size_t>(s)] = power(f_lo + df * s);
  const std::size_t best = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
  double offset = 0.0;
  if (best > 0 && best + 1 < p.size()) offset = parabolic_offset(p[best - 1], p[best], p[best + 1]);
  return 1.0 / (f_lo + df * (static_cast<double>(best) + offset));
}

double visibility(const ScreenProfile& profile, double y_lo, double y_hi) {
  const auto [lo, hi] = index_range(profile, y_lo, y_hi);
  const auto& I = profile.intensity;
  const auto [mn, mx] = std::minmax_element(I.begin() + static_cast<long>(lo), I.begin() + static_cast<long>(hi));
  if (*mx <= 0.0 || *mx - *mn <= 1e-12 * *mx) return 0.0;

  std::vector<std::size_t> maxima;
  for (std::size_t j = lo + 1; j + 1 < hi; ++j) {
    if (I[j] > I[j - 1] && I[j] >= I[j + 1]) maxima.push_back(j);
  }
  if (maxima.size() < 2) {
    throw InsufficientFringeError("visibility needs at least two local maxima in the window");
  }
  std::partial_sort(maxima.begin(), maxima.begin() + 2, maxima.end(),
                    [&](std::size_t a, std::size_t b) { return I[a] > I[b]; });
  const double i_max = I[maxima[0]];
  const std::size_t a = std::min(maxima[0], maxima[1]);
  const std::size_t b = std::max(maxima[0], maxima[1]);
  double i_min = std::numeric_limits<double>::infinity();
  for (std::size_t j = a + 1; j < b; ++j) {
    if (I[j] < I[j - 1] && I[j] <= I[j + 1]) i_min = std::min(i_min, I[j]);
  }
  if (!std::isfinite(i_min)) i_min = *std::min_element(I.begin() + static_cast<long>(a), I.begin() + static_cast<long>(b) + 1);
  const double v = (i_max - i_min) / (i_max + i_min);
  return std::clamp(v, 0.0, 1.0);
}

IntensityCurve collected_intensity_curve(const WaveField& field, const GratingSpec& mask,
                                         const std::vector<double>& offsets) {
  const GridSpec& g = field.grid;
  std::vector<double> beyond(g.ny, 0.0);
  double total = 0.0;
  for (std::size_t j = 0; j < g.ny; ++j) {
    double all = 0.0;
    double past = 0.0;
    for (std::size_t i = 0; i < g.nx; ++i) {
      const double p = field.density(i, j);
      all += p;
      if (g.x(i) >= mask.x_position) past += p;
    }
    beyond[j] = past;
    total += all;
  }
  IntensityCurve curve;
  curve.offsets = offsets;
  curve.values.reserve(offsets.size());
  for (double s : offsets) {
    double acc = 0.0;
    for (std::size_t j = 0; j < g.ny; ++j) acc += beyond[j] * mask.transmission(g.y(j) - s);
    curve.values.push_back(total > 0.0 ? acc / total : 0.0);
  }
  return curve;
}

double collected_intensity(const WaveField& field, const GratingSpec& mask, double s_d) {
  return collected_intensity_curve(field, mask, {s_d}).values.front();
}

double sensitivity_factor(const IntensityCurve& a, const IntensityCurve& b, double delta,
                          double at_offset) {
  if (a.offsets.size() != b.offsets.size() || a.values.size() != a.offsets.size() ||
      b.values.size() != b.offsets.size()) {
    throw UsageError("sensitivity factor needs curves on the same offset grid");
  }
  for (std::size_t k = 0; k < a.offsets.size(); ++k) {
    if (std::abs(a.offsets[k] - b.offsets[k]) > 1e-9 * (1.0 + std::abs(a.offsets[k]))) {
      throw UsageError("sensitivity factor needs curves on the same offset grid");
    }
  }
  if (!(delta != 0.0)) throw UsageError("sensitivity factor needs a nonzero parameter change");
  const auto& s = a.offsets;
  auto it = std::lower_bound(s.begin(), s.end(), at_offset - 1e-12 * (1.0 + std::abs(at_offset)));
  if (it == s.end()) throw RangeError("offset grid does not reach the evaluation point");
  const auto k = static_cast<std::size_t>(it - s.begin());
  double ia = a.values[k];
  double ib = b.values[k];
  if (std::abs(s[k] - at_offset) > 1e-9 * (1.0 + std::abs(at_offset))) {
    if (k == 0) throw RangeError("offset grid does not reach the evaluation point");
    const double t = (at_offset - s[k - 1]) / (s[k] - s[k - 1]);
    ia = a.values[k - 1] + t * (a.values[k] - a.values[k - 1]);
    ib = b.values[k - 1] + t * (b.values[k] - b.values[k - 1]);
  }
  return std::abs(ib - ia) / std::abs(delta) * 100.0;
}

}  // namespace qtalbot
