#pragma once

#include <string>
#include <vector>

#include "qtalbot/potentials.hpp"
#include "qtalbot/wavefield.hpp"

namespace qtalbot {

// |psi|^2 along Y at a fixed X plane.
struct ScreenProfile {
  std::vector<double> intensity;
  double plane_x = 0.0;
  double y0 = 0.0;
  double dy = 1.0;

  double y(std::size_t j) const { return y0 + dy * static_cast<double>(j); }
  std::size_t size() const { return intensity.size(); }
  // Probability-weighted mean Y.
  double centroid() const;
};

// Linear interpolation between the two lattice columns around plane_x.
ScreenProfile screen_profile(const WaveField& field, double plane_x);

struct FringeShift {
  double shift = 0.0;       // +Y positive, same units as Y
  double peak_ratio = 0.0;  // main / second correlation peak
  bool ambiguous = false;   // peak_ratio < 1.05
};

// Displacement of `profile` relative to `reference` from the cross-correlation
// maximum with parabolic sub-sample refinement. max_lag <= 0 searches all lags.
FringeShift fringe_shift(const ScreenProfile& profile, const ScreenProfile& reference,
                         double max_lag = 0.0);

// Lateral offset in (-d/2, d/2] that best aligns the profile with the
// grating's opening function: ~0 in phase, ~d/2 anti-phase.
double grating_phase(const ScreenProfile& profile, const GratingSpec& grating, double y_lo,
                     double y_hi);

// Dominant spatial period from a periodogram scan of [p_min, p_max].
double fringe_period(const ScreenProfile& profile, double y_lo, double y_hi, double p_min,
                     double p_max);

// Contrast (I_max - I_min)/(I_max + I_min) inside [y_lo, y_hi] using the
// two tallest local maxima and the deepest minimum between them.
double visibility(const ScreenProfile& profile, double y_lo, double y_hi);

// Fraction of |psi|^2 beyond the mask plane that passes the mask shifted by s_d.
double collected_intensity(const WaveField& field, const GratingSpec& mask, double s_d);

struct IntensityCurve {
  std::vector<double> offsets;  // s_d
  std::vector<double> values;   // I_c as a fraction of the norm
};

IntensityCurve collected_intensity_curve(const WaveField& field, const GratingSpec& mask,
                                         const std::vector<double>& offsets);

// |I_c,b - I_c,a| at s_d = at_offset, divided by delta, in percent.
double sensitivity_factor(const IntensityCurve& a, const IntensityCurve& b, double delta,
                          double at_offset);

}  // namespace qtalbot
