#include "cfi/cell.hpp"

#include <cmath>
#include <stdexcept>

namespace cfi {

namespace {

// t^p for even p, by squaring. Keeps (-t)^p bit-identical to t^p, which the
// raster symmetry of symmetric cells relies on.
double pow_even(double t, int p) {
  double s = t * t;
  double r = 1.0;
  for (int k = p / 2; k > 0; k >>= 1) {
    if (k & 1) r *= s;
    s *= s;
  }
  return r;
}

}  // namespace

void ComponentParams::validate() const {
  if (!(half_length > 0.0)) throw std::invalid_argument("component: half_length must be positive");
  if (!(half_width > 0.0)) throw std::invalid_argument("component: half_width must be positive");
  if (exponent < 2 || exponent % 2 != 0) throw std::invalid_argument("component: exponent must be even and >= 2");
  if (center.x() < 0.0 || center.x() > 1.0 || center.y() < 0.0 || center.y() > 1.0)
    throw std::invalid_argument("component: center must lie in the unit cell");
}

void MatrixCellSpec::validate() const {
  if (components.empty()) throw std::invalid_argument("cell: component list is empty");
  if (!(target_fraction > 0.0 && target_fraction <= 1.0))
    throw std::invalid_argument("cell: target_fraction must lie in (0, 1]");
  for (const auto& c : components) c.validate();
}

double MatrixCellSpec::min_member_size() const {
  double b = components.front().half_width;
  for (const auto& c : components) b = std::min(b, c.half_width);
  return 2.0 * b;
}

double tdf_component(const ComponentParams& c, const Eigen::Vector2d& y) {
  const double ca = std::cos(c.angle), sa = std::sin(c.angle);
  double best = -std::numeric_limits<double>::infinity();
  for (int sx = -1; sx <= 1; ++sx) {
    for (int sy = -1; sy <= 1; ++sy) {
      const double dx = y.x() - (c.center.x() + sx);
      const double dy = y.y() - (c.center.y() + sy);
      const double u = ca * dx + sa * dy;
      const double v = ca * dy - sa * dx;
      const double val = 1.0 - pow_even(u / c.half_length, c.exponent) - pow_even(v / c.half_width, c.exponent);
      if (val > best) best = val;
    }
  }
  return best;
}

double cell_tdf(const MatrixCellSpec& cell, const Eigen::Vector2d& y) {
  if (cell.components.empty()) throw std::invalid_argument("cell_tdf: component list is empty");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& c : cell.components) best = std::max(best, tdf_component(c, y));
  return best;
}

CellRaster rasterize(const MatrixCellSpec& cell, int n, double rho_min) {
  cell.validate();
  if (n < 16) throw std::invalid_argument("rasterize: resolution must be at least 16");
  if (!(rho_min > 0.0 && rho_min < 1.0)) throw std::invalid_argument("rasterize: rho_min must lie in (0, 1)");
  CellRaster r;
  r.n = n;
  r.rho_min = rho_min;
  r.values.resize(static_cast<size_t>(n) * n);
#ifdef CFI_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Eigen::Vector2d y((i + 0.5) / n, (j + 0.5) / n);
      r.at(i, j) = cell_tdf(cell, y) >= 0.0 ? 1.0 : rho_min;
    }
  }
  return r;
}

double volume_fraction(const CellRaster& r) {
  size_t solid = 0;
  for (double v : r.values) solid += (v == 1.0);
  return static_cast<double>(solid) / static_cast<double>(r.values.size());
}

MatrixCellSpec make_x_cell(double target_fraction, double half_width_guess) {
  MatrixCellSpec cell;
  cell.target_fraction = target_fraction;
  ComponentParams bar;
  bar.center = {0.5, 0.5};
  bar.half_length = std::sqrt(2.0) / 2.0;  // corner to corner
  bar.half_width = half_width_guess;
  bar.exponent = 6;
  bar.angle = M_PI / 4.0;
  cell.components.push_back(bar);
  bar.angle = -M_PI / 4.0;
  cell.components.push_back(bar);
  return cell;
}

MatrixCellSpec calibrate_half_width(MatrixCellSpec cell, int n, double tol) {
  cell.validate();
  const double b0 = cell.components.front().half_width;
  auto fraction_at = [&](double scale) {
    MatrixCellSpec c = cell;
    for (auto& comp : c.components) comp.half_width *= scale;
    return volume_fraction(rasterize(c, n, 1e-6));
  };
  // Bracket the target with a monotone-in-width fraction.
  double lo = 0.05, hi = 1.0;
  while (fraction_at(hi) < cell.target_fraction) {
    hi *= 1.5;
    if (hi * b0 > 0.5) throw std::runtime_error("calibrate_half_width: target fraction unreachable");
  }
  double mid = hi;
  for (int it = 0; it < 60; ++it) {
    mid = 0.5 * (lo + hi);
    const double f = fraction_at(mid);
    if (std::abs(f - cell.target_fraction) <= tol && it >= 8) break;
    (f < cell.target_fraction ? lo : hi) = mid;
  }
  for (auto& comp : cell.components) comp.half_width *= mid;
  const double achieved = volume_fraction(rasterize(cell, n, 1e-6));
  if (std::abs(achieved - cell.target_fraction) > 2.0 * tol)
    throw std::runtime_error("calibrate_half_width: bisection failed to reach the target fraction");
  return cell;
}

}  // namespace cfi
