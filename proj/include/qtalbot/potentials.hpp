#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qtalbot/frame.hpp"
#include "qtalbot/grid.hpp"

namespace qtalbot {

enum class GratingRole { diffraction, mask };

// Periodic bar grating, dimensionless. Openings of width f*d are centered at
// Y = y_offset + m*d; bars fill the rest of the slab x_position <= X <= x_position + thickness.
// With slit_count > 0 only that many openings exist, centered on y_offset,
// and the slab is opaque beyond them.
struct GratingSpec {
  double period = 1.0;
  double opening_fraction = 0.5;
  double thickness = 1.0;
  double barrier_height = 1.0;
  double x_position = 0.0;
  double y_offset = 0.0;
  int slit_count = 0;
  GratingRole role = GratingRole::diffraction;

  void validate() const;

  double opening_width() const { return opening_fraction * period; }
  bool within_thickness(double X) const {
    return X >= x_position && X <= x_position + thickness;
  }
  // Signed position of Y relative to the nearest opening center.
  double offset_from_opening(double Y) const;
  // Opening indicator: 1 inside an opening, 1/2 exactly on an edge, 0 on a bar.
  double transmission(double Y) const;
};

// Image-charge attraction to the walls of each slit channel.
struct ImageChargeSpec {
  bool enabled = false;
  double cutoff = 1.0;                  // dimensionless, > 0
  double induced_charge_factor = -1.0;  // -1 for a perfect conductor

  void validate() const;
};

enum class FieldKind { uniform, spatial, temporal };

// External electric field applied in x_lo <= X <= x_hi. E0 in V/m, theta in
// rad, lambda_prime in m, omega in rad/s.
struct FieldSpec {
  FieldKind kind = FieldKind::uniform;
  double E0 = 0.0;
  double theta = 0.0;
  double lambda_prime = 0.0;
  double omega = 0.0;
  double x_lo = 0.0;
  double x_hi = 0.0;

  static FieldSpec uniform(double E0, double theta, double x_lo, double x_hi);
  static FieldSpec spatial(double E0, double lambda_prime, double x_lo, double x_hi);
  static FieldSpec temporal(double E0, double omega, double x_lo, double x_hi);

  void validate() const;
  bool inside(double X) const { return X >= x_lo && X <= x_hi; }
};

struct PotentialStack {
  std::optional<GratingSpec> grating;
  ImageChargeSpec image;
  std::vector<FieldSpec> fields;
  ScalingFrame frame;

  void validate() const;
};

double geometric_potential(double X, double Y, const GratingSpec& g);
double image_potential(double X, double Y, const GratingSpec& g, const ImageChargeSpec& spec,
                       const ScalingFrame& frame);

// A field potential restricted to one lattice column is affine in Y:
// phi = offset + slope * Y. Zero outside the field region.
struct ColumnTerms {
  double offset = 0.0;
  double slope = 0.0;
};

// Time-independent column shape and the time factor that multiplies it.
ColumnTerms field_column_shape(double X, const FieldSpec& f, const ScalingFrame& frame);
double field_time_factor(double T, const FieldSpec& f, const ScalingFrame& frame);

double field_potential(double X, double Y, double T, const FieldSpec& f, const ScalingFrame& frame);
double static_potential(double X, double Y, const PotentialStack& stack);
double total_potential(double X, double Y, double T, const PotentialStack& stack);

// Potential sampled on a lattice. Static terms (grating and image charge)
// are cached for the columns the grating occupies; field terms are kept as
// per-column affine shapes and scaled by their time factor on demand.
class LatticePotential {
 public:
  LatticePotential(const GridSpec& grid, const PotentialStack& stack);

  // Per-step column coefficients; call once per time level.
  void prepare(double T, std::vector<ColumnTerms>& columns) const;
  // out[i] = total potential at (X_i, Y_j) for the prepared time level.
  void fill_row(std::size_t j, std::span<const ColumnTerms> columns, std::span<double> out) const;
  // Convenience: prepare + fill_row.
  void fill_row(std::size_t j, double T, std::span<double> out) const;

  // Upper bound of |phi| over the lattice and all times.
  double max_abs() const { return max_abs_; }
  bool has_fields() const { return !shapes_.empty(); }
  const GridSpec& grid() const { return grid_; }

 private:
  GridSpec grid_;
  PotentialStack stack_;
  std::size_t band_begin_ = 0;
  std::size_t band_end_ = 0;
  std::vector<double> band_;  // ny x (band_end_ - band_begin_)
  std::vector<std::vector<ColumnTerms>> shapes_;  // one per field
  double max_abs_ = 0.0;
};

}  // namespace qtalbot
