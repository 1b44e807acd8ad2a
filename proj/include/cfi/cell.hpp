#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cfi {

// One superellipse bar of the matrix cell. The level-set value is
// 1 - (u/a)^p - (v/b)^p in the bar's local frame; positive inside.
struct ComponentParams {
  Eigen::Vector2d center{0.5, 0.5};  // in unit-cell coordinates
  double half_length = 0.25;         // a > 0, along the bar axis
  double half_width = 0.05;          // b > 0, across the bar
  double angle = 0.0;                // radians, counterclockwise from the Y1 axis
  int exponent = 6;                  // even, >= 2

  void validate() const;  // throws std::invalid_argument
};

// The matrix cell: a max-aggregated set of bars plus the target solid
// fraction the rasterized cell is calibrated to.
struct MatrixCellSpec {
  std::vector<ComponentParams> components;
  double target_fraction = 0.3;

  void validate() const;

  // Thinnest member of the cell in unit-cell units (2 * min half_width).
  double min_member_size() const;
};

// Pixel raster of a cell on an n x n grid with periodic semantics.
// Entries are either 1 (solid) or rho_min (ersatz void).
struct CellRaster {
  int n = 0;
  double rho_min = 1e-6;
  std::vector<double> values;  // row-major, values[j*n + i], pixel centers

  double& at(int i, int j) { return values[static_cast<size_t>(j) * n + i]; }
  double at(int i, int j) const { return values[static_cast<size_t>(j) * n + i]; }
  bool solid(int i, int j) const { return at(i, j) == 1.0; }
};

// Level-set value of one component at a point of the unit cell, taking the
// max over the 3x3 torus images of the component center so bars crossing a
// cell face tile seamlessly.
double tdf_component(const ComponentParams& c, const Eigen::Vector2d& y);

// Max-aggregated cell level set. Throws on an empty component list.
double cell_tdf(const MatrixCellSpec& cell, const Eigen::Vector2d& y);

// Pixel-center rasterization; solid where cell_tdf >= 0. Requires n >= 16.
CellRaster rasterize(const MatrixCellSpec& cell, int n, double rho_min = 1e-6);

// Fraction of solid pixels.
double volume_fraction(const CellRaster& r);

// The "X" matrix cell: two diagonal bars spanning corner to corner, with the
// bar half-width to be calibrated against target_fraction.
MatrixCellSpec make_x_cell(double target_fraction = 0.3, double half_width_guess = 0.054);

// Solves for the half-width of every component (scaled uniformly) by
// bisection so that volume_fraction(rasterize(cell, n)) hits
// cell.target_fraction within tol. Returns the calibrated spec.
MatrixCellSpec calibrate_half_width(MatrixCellSpec cell, int n = 200, double tol = 0.005);

}  // namespace cfi
