#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cfi/cell.hpp"
#include "cfi/voigt.hpp"

namespace cfi {

// First-order corrector of the periodic cell problem: one displacement field
// per unit macro strain (11, 22, 12), sampled at the n x n reduced periodic
// nodes (pixel corners; index arithmetic wraps). Every field has zero mean
// per component.
struct CorrectorField {
  int n = 0;
  std::array<Eigen::VectorXd, 3> cases;  // each of size 2*n*n, interleaved (ux, uy)

  double value(int strain_case, int i, int j, int comp) const {
    const int ii = ((i % n) + n) % n, jj = ((j % n) + n) % n;
    return cases[strain_case][2 * (jj * n + ii) + comp];
  }
};

struct HomogenizedCell {
  ElasticityVoigt C_H = ElasticityVoigt::Zero();
  CorrectorField corrector;
  CellRaster raster;
};

// Periodic corrector solve on the raster with ersatz-scaled base material.
// One factorization serves the three unit-strain right-hand sides; the
// translation nullspace is removed so each solution has exactly zero mean.
// Throws std::runtime_error (with the residual) if the factorization fails.
CorrectorField solve_cell_problem(const CellRaster& r, const ElasticityVoigt& base);

// Same solve for a general per-pixel density field in (0, 1]; used by the
// differentiable material interpolation of the sensitivity path.
CorrectorField solve_cell_problem_density(int n, const std::vector<double>& rho,
                                          const ElasticityVoigt& base);

// Homogenized tensor of the raster: volume term minus the corrector-gradient
// term, assembled consistently with the corrector solve.
HomogenizedCell homogenize(const CellRaster& r, const ElasticityVoigt& base);

// Tensor-only variant for a density field (no HomogenizedCell wrapper).
ElasticityVoigt homogenize_density(int n, const std::vector<double>& rho,
                                   const ElasticityVoigt& base, const CorrectorField& xi);

// Corrector of the rescaled/rotated cell obtained from the matrix-cell
// corrector: xi^{uv}_w = lambda R_us R_vt R_wk xihat_k^{st}, applied nodewise.
CorrectorField transform_corrector(const CorrectorField& xi_hat, double lambda, double theta);

}  // namespace cfi
