#include "qtalbot/potentials.hpp"

#include <algorithm>
#include <cmath>

namespace qtalbot {

LatticePotential::LatticePotential(const GridSpec& grid, const PotentialStack& stack)
    : grid_(grid), stack_(stack) {
  stack_.validate();
  if (stack_.grating) {
    bool found = false;
    for (std::size_t i = 0; i < grid_.nx; ++i) {
      if (stack_.grating->within_thickness(grid_.x(i))) {
        if (!found) band_begin_ = i;
        band_end_ = i + 1;
        found = true;
      }
    }
  }
  const std::size_t width = band_end_ - band_begin_;
  band_.assign(width * grid_.ny, 0.0);
  double static_max = 0.0;
  for (std::size_t j = 0; j < grid_.ny; ++j) {
    for (std::size_t b = 0; b < width; ++b) {
      const double v = static_potential(grid_.x(band_begin_ + b), grid_.y(j), stack_);
      band_[j * width + b] = v;
      static_max = std::max(static_max, std::abs(v));
    }
  }

  const double y_extent = std::max(std::abs(grid_.y_origin), std::abs(grid_.y_last()));
  double field_max = 0.0;
  for (const auto& f : stack_.fields) {
    std::vector<ColumnTerms> shape(grid_.nx);
    double a_max = 0.0;
    double b_max = 0.0;
    for (std::size_t i = 0; i < grid_.nx; ++i) {
      shape[i] = field_column_shape(grid_.x(i), f, stack_.frame);
      a_max = std::max(a_max, std::abs(shape[i].offset));
      b_max = std::max(b_max, std::abs(shape[i].slope));
    }
    field_max += a_max + b_max * y_extent;
    shapes_.push_back(std::move(shape));
  }
  max_abs_ = static_max + field_max;
}

void LatticePotential::prepare(double T, std::vector<ColumnTerms>& columns) const {
  columns.resize(shapes_.size() * grid_.nx);
  for (std::size_t f = 0; f < shapes_.size(); ++f) {
    const double g = field_time_factor(T, stack_.fields[f], stack_.frame);
    const auto& shape = shapes_[f];
    ColumnTerms* out = columns.data() + f * grid_.nx;
    for (std::size_t i = 0; i < grid_.nx; ++i) {
      out[i] = {g * shape[i].offset, g * shape[i].slope};
    }
  }
}

void LatticePotential::fill_row(std::size_t j, std::span<const ColumnTerms> columns,
                                std::span<double> out) const {
  const std::size_t nx = grid_.nx;
  std::fill(out.begin(), out.begin() + nx, 0.0);
  const std::size_t width = band_end_ - band_begin_;
  if (width > 0) {
    std::copy_n(band_.data() + j * width, width, out.begin() + band_begin_);
  }
  const double y = grid_.y(j);
  for (std::size_t f = 0; f < shapes_.size(); ++f) {
    const ColumnTerms* c = columns.data() + f * nx;
    for (std::size_t i = 0; i < nx; ++i) out[i] += c[i].offset + c[i].slope * y;
  }
}

void LatticePotential::fill_row(std::size_t j, double T, std::span<double> out) const {
  std::vector<ColumnTerms> columns;
  prepare(T, columns);
  fill_row(j, columns, out);
}

}  // namespace qtalbot
