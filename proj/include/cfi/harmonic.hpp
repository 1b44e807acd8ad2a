#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "cfi/grid.hpp"

namespace cfi {

// Design data on one boundary loop: values of ln(lambda_b) at node_count
// equidistant arc-length positions, interpolated periodically and piecewise
// linearly in between. geometry_index refers to MacroGrid::loops().
struct BoundaryLoop {
  int geometry_index = 0;
  double perimeter = 0.0;
  Eigen::VectorXd values;

  int node_count() const { return static_cast<int>(values.size()); }
  double spacing() const { return perimeter / node_count(); }
};

// The macroscopic design vector: boundary values of ln(lambda_b) on every
// loop plus the mean rotation angle.
struct BoundaryDesign {
  std::vector<BoundaryLoop> loops;
  double theta_bar = 0.0;

  int boundary_value_count() const;
  // Flat layout [loop0 values..., loop1 values..., theta_bar].
  Eigen::VectorXd flatten() const;
  void unflatten(const Eigen::VectorXd& x);
};

// Uniform design (all values zero) with the given node count per loop.
BoundaryDesign make_design(const MacroGrid& grid, const std::vector<int>& nodes_per_loop,
                           double theta_bar = 0.0);

// Periodic piecewise-linear interpolation of the loop values at arc length s.
double interp_boundary(const BoundaryLoop& loop, double s);

// Piecewise-constant d/ds of the interpolation; the sign follows the loop's
// stored orientation (counterclockwise outer, clockwise holes), which is the
// tangent direction of the boundary-condition bookkeeping.
double tangential_derivative(const BoundaryLoop& loop, double s);

// theta responses to the individual boundary values; theta is their linear
// combination plus theta_bar.
struct InfluenceMap {
  const MacroGrid* grid = nullptr;
  std::vector<ScalarField> response;

  ScalarField reconstruct(const BoundaryDesign& design) const;
};

// Area-weighted mean over the domain (trapezoid weights; exact on bilinears).
double domain_mean(const MacroGrid& grid, const ScalarField& f);

// Shared discrete operators for one grid: a P1 (five-point) Laplacian with
// cached factorizations for repeated Dirichlet and Neumann solves.
class HarmonicSolver {
 public:
  explicit HarmonicSolver(const MacroGrid& grid);
  ~HarmonicSolver();

  HarmonicSolver(const HarmonicSolver&) = delete;
  HarmonicSolver& operator=(const HarmonicSolver&) = delete;

  const MacroGrid& grid() const { return *grid_; }

  // Dirichlet problem for ln(lambda); boundary values from the design.
  ScalarField solve_dirichlet(const BoundaryDesign& design) const;

  // Neumann problem for theta with flux -d(ln lambda_b)/ds and the domain
  // mean pinned to design.theta_bar through a bordered constraint row.
  ScalarField solve_neumann_theta(const BoundaryDesign& design) const;

  // Unit-response precompute: one Neumann solve per boundary design value,
  // reusing a single factorization. Reconstruction by superposition matches
  // solve_neumann_theta to solver precision.
  InfluenceMap precompute_theta_influence(const BoundaryDesign& prototype) const;

 private:
  struct Impl;
  const MacroGrid* grid_;
  std::unique_ptr<Impl> impl_;
};

// One-shot convenience wrappers.
ScalarField solve_dirichlet(const MacroGrid& grid, const BoundaryDesign& design);
ScalarField solve_neumann_theta(const MacroGrid& grid, const BoundaryDesign& design);
InfluenceMap precompute_theta_influence(const MacroGrid& grid, const BoundaryDesign& prototype);

struct FeatureSize {
  double d_min = 0.0;
  bool feasible = false;
};

// Minimal printed member size d_min = h_cell * d_min_cell * min(lambda_b),
// and feasibility against the minimal printable size p_min.
FeatureSize min_feature_size(const BoundaryDesign& design, double h_cell, double d_min_cell,
                             double p_min);

}  // namespace cfi
