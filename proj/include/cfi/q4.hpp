#pragma once

#include <array>

#include <Eigen/Dense>

#include "cfi/voigt.hpp"

namespace cfi::q4 {

// Bilinear quadrilateral on an axis-aligned square of side h. Local node
// order is counterclockwise from the lower-left corner; dofs are interleaved
// (ux0, uy0, ux1, uy1, ...). Strains use the engineering-shear Voigt order.

using BMatrix = Eigen::Matrix<double, 3, 8>;
using ElementMatrix = Eigen::Matrix<double, 8, 8>;

// Strain-displacement matrix at reference coordinates (xi, eta) in [-1,1]^2.
inline BMatrix b_matrix(double xi, double eta, double h) {
  const double dx[4] = {-(1 - eta), (1 - eta), (1 + eta), -(1 + eta)};
  const double dy[4] = {-(1 - xi), -(1 + xi), (1 + xi), (1 - xi)};
  BMatrix B = BMatrix::Zero();
  const double s = 2.0 / (4.0 * h);  // d(xi)/dx = 2/h, shape factor 1/4
  for (int a = 0; a < 4; ++a) {
    const double nx = s * dx[a], ny = s * dy[a];
    B(0, 2 * a) = nx;
    B(1, 2 * a + 1) = ny;
    B(2, 2 * a) = ny;
    B(2, 2 * a + 1) = nx;
  }
  return B;
}

// 2x2 Gauss points of the reference square.
inline constexpr double kGauss = 0.57735026918962576451;  // 1/sqrt(3)
inline const std::array<Eigen::Vector2d, 4>& gauss_points() {
  static const std::array<Eigen::Vector2d, 4> pts = {
      Eigen::Vector2d{-kGauss, -kGauss}, Eigen::Vector2d{kGauss, -kGauss},
      Eigen::Vector2d{kGauss, kGauss}, Eigen::Vector2d{-kGauss, kGauss}};
  return pts;
}

// Element stiffness for constant C over the element (2x2 Gauss, exact here).
inline ElementMatrix stiffness(const ElasticityVoigt& C, double h) {
  ElementMatrix K = ElementMatrix::Zero();
  const double detJw = h * h / 4.0;
  for (const auto& g : gauss_points()) {
    const BMatrix B = b_matrix(g.x(), g.y(), h);
    K += detJw * B.transpose() * C * B;
  }
  return K;
}

// Integral of B over the element; B entries are linear in position, so the
// centroid value times the area is exact.
inline BMatrix b_integrated(double h) { return (h * h) * b_matrix(0.0, 0.0, h); }

}  // namespace cfi::q4
