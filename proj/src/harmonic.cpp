#include "cfi/harmonic.hpp"

#include <cmath>
#include <stdexcept>

namespace cfi {

int BoundaryDesign::boundary_value_count() const {
  int n = 0;
  for (const auto& l : loops) n += l.node_count();
  return n;
}

Eigen::VectorXd BoundaryDesign::flatten() const {
  Eigen::VectorXd x(boundary_value_count() + 1);
  int k = 0;
  for (const auto& l : loops) {
    x.segment(k, l.node_count()) = l.values;
    k += l.node_count();
  }
  x[k] = theta_bar;
  return x;
}

void BoundaryDesign::unflatten(const Eigen::VectorXd& x) {
  if (x.size() != boundary_value_count() + 1)
    throw std::invalid_argument("BoundaryDesign::unflatten: size mismatch");
  int k = 0;
  for (auto& l : loops) {
    l.values = x.segment(k, l.node_count());
    k += l.node_count();
  }
  theta_bar = x[k];
}

BoundaryDesign make_design(const MacroGrid& grid, const std::vector<int>& nodes_per_loop,
                           double theta_bar) {
  if (nodes_per_loop.size() != grid.loops().size())
    throw std::invalid_argument("make_design: one node count per boundary loop required");
  BoundaryDesign d;
  d.theta_bar = theta_bar;
  for (size_t i = 0; i < nodes_per_loop.size(); ++i) {
    if (nodes_per_loop[i] < 4)
      throw std::invalid_argument("make_design: at least 4 nodes per loop required");
    BoundaryLoop loop;
    loop.geometry_index = static_cast<int>(i);
    loop.perimeter = grid.loops()[i].perimeter;
    loop.values = Eigen::VectorXd::Zero(nodes_per_loop[i]);
    d.loops.push_back(std::move(loop));
  }
  return d;
}

double interp_boundary(const BoundaryLoop& loop, double s) {
  const double l = loop.perimeter;
  if (s < -1e-12 || s > l + 1e-12) throw std::out_of_range("interp_boundary: arc length out of range");
  const int n = loop.node_count();
  const double ds = l / n;
  double t = s / ds;
  int j = static_cast<int>(std::floor(t));
  if (j >= n) j = n - 1;  // s == l wraps onto the last segment endpoint
  if (j < 0) j = 0;
  const double w = t - j;
  return (1.0 - w) * loop.values[j % n] + w * loop.values[(j + 1) % n];
}

double tangential_derivative(const BoundaryLoop& loop, double s) {
  const double l = loop.perimeter;
  if (s < -1e-12 || s > l + 1e-12)
    throw std::out_of_range("tangential_derivative: arc length out of range");
  const int n = loop.node_count();
  const double ds = l / n;
  int j = static_cast<int>(std::floor(s / ds));
  if (j >= n) j = n - 1;
  if (j < 0) j = 0;
  return (loop.values[(j + 1) % n] - loop.values[j % n]) / ds;
}

double domain_mean(const MacroGrid& grid, const ScalarField& f) {
  const auto w = grid.node_weights();
  double num = 0.0, den = 0.0;
  for (int id = 0; id < grid.node_count(); ++id) {
    num += w[id] * f[id];
    den += w[id];
  }
  return num / den;
}

namespace {

// P1 stiffness of the triangulated grid (each cell split along its
// lower-left / upper-right diagonal); interior rows reduce to the classic
// five-point stencil.
void add_cell_stiffness(std::vector<Eigen::Triplet<double>>& trips, const std::vector<int>& index,
                        int ll, int lr, int ur, int ul) {
  // Triangle (ll, lr, ur): K = [[.5,-.5,0],[-.5,1,-.5],[0,-.5,.5]]
  // Triangle (ll, ur, ul): K = [[.5,0,-.5],[0,.5,-.5],[-.5,-.5,1]]
  const int t1[3] = {index[ll], index[lr], index[ur]};
  const int t2[3] = {index[ll], index[ur], index[ul]};
  static const double K1[3][3] = {{0.5, -0.5, 0.0}, {-0.5, 1.0, -0.5}, {0.0, -0.5, 0.5}};
  static const double K2[3][3] = {{0.5, 0.0, -0.5}, {0.0, 0.5, -0.5}, {-0.5, -0.5, 1.0}};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      if (K1[a][b] != 0.0) trips.emplace_back(t1[a], t1[b], K1[a][b]);
      if (K2[a][b] != 0.0) trips.emplace_back(t2[a], t2[b], K2[a][b]);
    }
}

}  // namespace

struct HarmonicSolver::Impl {
  std::vector<int> index;        // node id -> active index (-1 inactive)
  std::vector<int> nodes;       // active index -> node id
  std::vector<int> interior;    // node id -> interior index (-1 otherwise)
  std::vector<int> interior_nodes;
  // Boundary node -> (loop index, position along the loop polyline).
  std::vector<int> bnode_loop;
  std::vector<int> bnode_pos;

  Eigen::SparseMatrix<double> K;  // full singular Neumann operator, active numbering
  Eigen::SparseMatrix<double> K_ii;
  Eigen::SparseMatrix<double> K_ib;  // interior x boundary couplings (boundary in active numbering)
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> dirichlet;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> neumann;  // bordered [K w; w^T 0]
  std::vector<double> weights;                           // nodal quadrature weights
  double area = 0.0;
};

HarmonicSolver::HarmonicSolver(const MacroGrid& grid) : grid_(&grid), impl_(new Impl) {
  auto& im = *impl_;
  const int nn = grid.node_count();
  im.index.assign(nn, -1);
  im.interior.assign(nn, -1);
  for (int id = 0; id < nn; ++id)
    if (grid.node_active(id)) {
      im.index[id] = static_cast<int>(im.nodes.size());
      im.nodes.push_back(id);
    }
  for (int id = 0; id < nn; ++id)
    if (grid.node_interior(id)) {
      im.interior[id] = static_cast<int>(im.interior_nodes.size());
      im.interior_nodes.push_back(id);
    }

  im.bnode_loop.assign(nn, -1);
  im.bnode_pos.assign(nn, -1);
  for (size_t li = 0; li < grid.loops().size(); ++li) {
    const auto& loop = grid.loops()[li];
    for (int k = 0; k < loop.edge_count(); ++k) {
      im.bnode_loop[loop.nodes[k]] = static_cast<int>(li);
      im.bnode_pos[loop.nodes[k]] = k;
    }
  }
  for (int id = 0; id < nn; ++id)
    if (grid.node_active(id) && !grid.node_interior(id) && im.bnode_loop[id] < 0)
      throw std::logic_error("HarmonicSolver: boundary node missing from every loop");

  // Full Neumann operator.
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(grid.active_cell_count()) * 18);
  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i) {
      if (!grid.cell_active(i, j)) continue;
      add_cell_stiffness(trips, im.index, grid.node_id(i, j), grid.node_id(i + 1, j),
                         grid.node_id(i + 1, j + 1), grid.node_id(i, j + 1));
    }
  const int na = static_cast<int>(im.nodes.size());
  im.K.resize(na, na);
  im.K.setFromTriplets(trips.begin(), trips.end());

  // Dirichlet block splitting: interior rows of K.
  std::vector<Eigen::Triplet<double>> t_ii, t_ib;
  for (int col = 0; col < im.K.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(im.K, col); it; ++it) {
      const int rnode = im.nodes[it.row()], cnode = im.nodes[col];
      if (im.interior[rnode] < 0) continue;
      if (im.interior[cnode] >= 0)
        t_ii.emplace_back(im.interior[rnode], im.interior[cnode], it.value());
      else
        t_ib.emplace_back(im.interior[rnode], col, it.value());
    }
  const int ni = static_cast<int>(im.interior_nodes.size());
  im.K_ii.resize(ni, ni);
  im.K_ii.setFromTriplets(t_ii.begin(), t_ii.end());
  im.K_ib.resize(ni, na);
  im.K_ib.setFromTriplets(t_ib.begin(), t_ib.end());
  im.dirichlet.compute(im.K_ii);
  if (im.dirichlet.info() != Eigen::Success)
    throw std::runtime_error("HarmonicSolver: Dirichlet factorization failed (disconnected domain?)");

  // Bordered Neumann system [K w; w^T 0].
  const auto w_all = grid.node_weights();
  im.weights.resize(na);
  im.area = 0.0;
  for (int a = 0; a < na; ++a) {
    im.weights[a] = w_all[im.nodes[a]];
    im.area += im.weights[a];
  }
  std::vector<Eigen::Triplet<double>> t_b = trips;
  for (int a = 0; a < na; ++a) {
    t_b.emplace_back(a, na, im.weights[a]);
    t_b.emplace_back(na, a, im.weights[a]);
  }
  Eigen::SparseMatrix<double> Kb(na + 1, na + 1);
  Kb.setFromTriplets(t_b.begin(), t_b.end());
  im.neumann.compute(Kb);
  if (im.neumann.info() != Eigen::Success)
    throw std::runtime_error("HarmonicSolver: Neumann factorization failed");
}

HarmonicSolver::~HarmonicSolver() = default;

ScalarField HarmonicSolver::solve_dirichlet(const BoundaryDesign& design) const {
  const auto& im = *impl_;
  const auto& grid = *grid_;
  if (design.loops.size() != grid.loops().size())
    throw std::invalid_argument("solve_dirichlet: design loop count mismatch");

  // Boundary data at the grid boundary nodes, in active numbering.
  Eigen::VectorXd g = Eigen::VectorXd::Zero(im.nodes.size());
  for (size_t a = 0; a < im.nodes.size(); ++a) {
    const int id = im.nodes[a];
    if (grid.node_interior(id)) continue;
    const int li = im.bnode_loop[id];
    g[a] = interp_boundary(design.loops[li], grid.h() * im.bnode_pos[id]);
  }
  Eigen::VectorXd rhs = -(im.K_ib * g);
  Eigen::VectorXd u = im.dirichlet.solve(rhs);
  if (im.dirichlet.info() != Eigen::Success)
    throw std::runtime_error("solve_dirichlet: solve failed");

  ScalarField f(grid);
  for (size_t a = 0; a < im.nodes.size(); ++a) f[im.nodes[a]] = g[a];
  for (size_t k = 0; k < im.interior_nodes.size(); ++k) f[im.interior_nodes[k]] = u[k];
  return f;
}

namespace {

// Accumulates int g(s) v ds over one grid edge [s0, s0+h] of a loop, where g
// is the piecewise-constant tangential derivative of the design values (its
// breakpoints are the design nodes and may fall inside the edge).
void accumulate_edge_flux(const BoundaryLoop& loop, double s0, double h, double& into_a,
                          double& into_b) {
  const double ds = loop.spacing();
  const double s1 = s0 + h;
  int j = static_cast<int>(std::floor(s0 / ds + 1e-12)) + 1;
  double p = s0;
  while (p < s1 - 1e-14) {
    const double q = std::min(s1, j * ds);
    const double mid = 0.5 * (p + q);
    const double g = tangential_derivative(loop, std::min(mid, loop.perimeter));
    const double len = q - p;
    const double wb = (mid - s0) / h;  // hat of the end node at the midpoint
    into_a += g * len * (1.0 - wb);
    into_b += g * len * wb;
    p = q;
    ++j;
  }
}

}  // namespace

ScalarField HarmonicSolver::solve_neumann_theta(const BoundaryDesign& design) const {
  const auto& im = *impl_;
  const auto& grid = *grid_;
  if (design.loops.size() != grid.loops().size())
    throw std::invalid_argument("solve_neumann_theta: design loop count mismatch");

  const int na = static_cast<int>(im.nodes.size());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(na + 1);
  for (size_t li = 0; li < grid.loops().size(); ++li) {
    const auto& geo = grid.loops()[li];
    const auto& loop = design.loops[li];
    // Compatibility: the tangential derivative of closed periodic data
    // telescopes to zero around every loop.
    double total = 0.0;
    for (int jj = 0; jj < loop.node_count(); ++jj)
      total += loop.values[(jj + 1) % loop.node_count()] - loop.values[jj];
    if (std::abs(total) > 1e-9 * (1.0 + loop.values.cwiseAbs().maxCoeff()))
      throw std::runtime_error("solve_neumann_theta: incompatible flux on loop " +
                               std::to_string(li));
    double flux_sum = 0.0;
    for (int k = 0; k < geo.edge_count(); ++k) {
      const int a = geo.nodes[k];
      const int b = geo.nodes[(k + 1) % geo.edge_count()];
      double fa = 0.0, fb = 0.0;
      accumulate_edge_flux(loop, grid.h() * k, grid.h(), fa, fb);
      // Flux data enters with the sign of -d(ln lambda_b)/ds.
      rhs[im.index[a]] -= fa;
      rhs[im.index[b]] -= fb;
      flux_sum += fa + fb;
    }
    if (std::abs(flux_sum) > 1e-9 * (1.0 + loop.values.cwiseAbs().maxCoeff()))
      throw std::runtime_error("solve_neumann_theta: incompatible assembled flux on loop " +
                               std::to_string(li));
  }
  rhs[na] = design.theta_bar * im.area;

  Eigen::VectorXd sol = im.neumann.solve(rhs);
  if (im.neumann.info() != Eigen::Success)
    throw std::runtime_error("solve_neumann_theta: solve failed");

  ScalarField f(grid);
  for (int a = 0; a < na; ++a) f[im.nodes[a]] = sol[a];
  return f;
}

InfluenceMap HarmonicSolver::precompute_theta_influence(const BoundaryDesign& prototype) const {
  InfluenceMap map;
  map.grid = grid_;
  BoundaryDesign unit = prototype;
  unit.theta_bar = 0.0;
  for (auto& l : unit.loops) l.values.setZero();
  for (size_t li = 0; li < unit.loops.size(); ++li) {
    for (int j = 0; j < unit.loops[li].node_count(); ++j) {
      unit.loops[li].values[j] = 1.0;
      map.response.push_back(solve_neumann_theta(unit));
      unit.loops[li].values[j] = 0.0;
    }
  }
  return map;
}

ScalarField InfluenceMap::reconstruct(const BoundaryDesign& design) const {
  ScalarField f(*grid);
  int v = 0;
  for (const auto& loop : design.loops)
    for (int j = 0; j < loop.node_count(); ++j, ++v) {
      const double fv = loop.values[j];
      if (fv != 0.0)
        for (int id = 0; id < grid->node_count(); ++id) f[id] += fv * response[v][id];
    }
  for (int id = 0; id < grid->node_count(); ++id)
    if (grid->node_active(id)) f[id] += design.theta_bar;
  return f;
}

ScalarField solve_dirichlet(const MacroGrid& grid, const BoundaryDesign& design) {
  return HarmonicSolver(grid).solve_dirichlet(design);
}

ScalarField solve_neumann_theta(const MacroGrid& grid, const BoundaryDesign& design) {
  return HarmonicSolver(grid).solve_neumann_theta(design);
}

InfluenceMap precompute_theta_influence(const MacroGrid& grid, const BoundaryDesign& prototype) {
  return HarmonicSolver(grid).precompute_theta_influence(prototype);
}

FeatureSize min_feature_size(const BoundaryDesign& design, double h_cell, double d_min_cell,
                             double p_min) {
  if (!(d_min_cell > 0.0 && d_min_cell <= 1.0))
    throw std::invalid_argument("min_feature_size: cell member size must lie in (0, 1]");
  double min_f = design.loops.front().values[0];
  for (const auto& l : design.loops) min_f = std::min(min_f, l.values.minCoeff());
  const double lambda_min = std::exp(min_f);
  FeatureSize out;
  out.d_min = h_cell * d_min_cell * lambda_min;
  out.feasible = lambda_min >= p_min / (h_cell * d_min_cell);
  return out;
}

}  // namespace cfi
