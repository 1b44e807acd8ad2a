#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace cfi {

using BoundaryFn = std::function<double(double)>;

// Separated-variables solution of the harmonic pair on the rectangle
// [0,L] x [0,H]: ln(lambda) takes Dirichlet data psi0/psi1 on the bottom/top
// edges and phi0/phi1 on the left/right edges; theta is the conjugate field
// with mean theta_bar. Hyperbolic ratios are evaluated in exponential form,
// so the expansion stays stable for large mode numbers.
class RectSeries {
 public:
  double ln_lambda(double x1, double x2) const;
  double theta(double x1, double x2) const;

  int modes() const { return K_; }
  // Appendix-style coefficient quadruple (a_k, b_k, c_k, d_k) of mode k >= 1.
  Eigen::Vector4d coefficients(int k) const;

 private:
  friend RectSeries rect_series_solution(const BoundaryFn&, const BoundaryFn&, const BoundaryFn&,
                                         const BoundaryFn&, double, double, double, int, int);
  double L_ = 0, H_ = 0, theta_bar_ = 0;
  int K_ = 0;
  double r1_ = 0, r2_ = 0, r3_ = 0, r4_ = 0, theta_const_ = 0;
  // Sine transforms of the corner-free boundary parts, per mode (0-based
  // storage for modes 1..K). Modes below the truncation threshold are zeroed.
  std::vector<double> s_psi0_, s_psi1_, s_phi0_, s_phi1_;
};

// Builds the series from the four side functions. Throws when the corner
// compatibility conditions fail. quad_panels is the (even) panel count of
// the composite Simpson rule for the transform integrals.
RectSeries rect_series_solution(const BoundaryFn& psi0, const BoundaryFn& psi1,
                                const BoundaryFn& phi0, const BoundaryFn& phi1, double theta_bar,
                                double L, double H, int K = 50, int quad_panels = 1024);

// Coefficient quadruple (a_k, b_k, c_k, d_k) for hat boundary functions
// (corner-free parts, vanishing at the segment endpoints).
Eigen::Vector4d fourier_coefficients(const BoundaryFn& psi0_hat, const BoundaryFn& psi1_hat,
                                     const BoundaryFn& phi0_hat, const BoundaryFn& phi1_hat,
                                     double L, double H, int k, int quad_panels = 1024);

}  // namespace cfi
