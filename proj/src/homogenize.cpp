#include "cfi/homogenize.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "cfi/q4.hpp"

namespace cfi {

namespace {

// Unit Voigt strains driving the three cell problems. The shear case uses
// engineering shear g12 = 1 (e12 = 1/2), matching the Voigt column read-out.
const Eigen::Vector3d kUnitStrains[3] = {
    {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};

struct CellSystem {
  int n;
  double h;
  std::vector<double> rho;
  q4::ElementMatrix K_ref;
  q4::BMatrix G_ref;  // integral of B over one element
};

// Reduced periodic node id of grid corner (i, j); opposite faces identify.
inline int pnode(int n, int i, int j) { return (j % n) * n + (i % n); }

CorrectorField solve_cell(const CellSystem& sys, const ElasticityVoigt& base) {
  const int n = sys.n;
  const int nn = n * n;
  const int ndof = 2 * nn;

  // Element -> reduced dof map shared by assembly and recovery.
  auto elem_dofs = [&](int ei, int ej, int* dofs) {
    const int nd[4] = {pnode(n, ei, ej), pnode(n, ei + 1, ej), pnode(n, ei + 1, ej + 1),
                       pnode(n, ei, ej + 1)};
    for (int a = 0; a < 4; ++a) {
      dofs[2 * a] = 2 * nd[a];
      dofs[2 * a + 1] = 2 * nd[a] + 1;
    }
  };

  // Stiffness with the two dofs of reduced node 0 pinned; the pinned system
  // is SPD and its solution is shifted to zero mean afterwards, which lands
  // on the same corrector as a hard mean constraint would.
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(nn) * 40);
  int dofs[8];
  for (int ej = 0; ej < n; ++ej)
    for (int ei = 0; ei < n; ++ei) {
      const double rho = sys.rho[static_cast<size_t>(ej) * n + ei];
      elem_dofs(ei, ej, dofs);
      for (int a = 0; a < 8; ++a) {
        if (dofs[a] < 2) continue;
        for (int b = 0; b < 8; ++b) {
          if (dofs[b] < 2) continue;
          trips.emplace_back(dofs[a] - 2, dofs[b] - 2, rho * sys.K_ref(a, b));
        }
      }
    }
  Eigen::SparseMatrix<double> K(ndof - 2, ndof - 2);
  K.setFromTriplets(trips.begin(), trips.end());
  trips.clear();
  trips.shrink_to_fit();

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  solver.compute(K);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("solve_cell_problem: factorization of the periodic stiffness failed");

  CorrectorField out;
  out.n = n;
  for (int c = 0; c < 3; ++c) {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(ndof - 2);
    for (int ej = 0; ej < n; ++ej)
      for (int ei = 0; ei < n; ++ei) {
        const double rho = sys.rho[static_cast<size_t>(ej) * n + ei];
        const Eigen::Vector3d sigma = rho * (base * kUnitStrains[c]);
        const Eigen::Matrix<double, 8, 1> fe = sys.G_ref.transpose() * sigma;
        elem_dofs(ei, ej, dofs);
        for (int a = 0; a < 8; ++a)
          if (dofs[a] >= 2) f[dofs[a] - 2] += fe[a];
      }
    const Eigen::VectorXd u = solver.solve(f);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("solve_cell_problem: back substitution failed");
    const double residual = (K * u - f).norm() / std::max(1.0, f.norm());
    if (residual > 1e-8)
      throw std::runtime_error("solve_cell_problem: solver residual " + std::to_string(residual));

    Eigen::VectorXd full(ndof);
    full[0] = full[1] = 0.0;
    full.tail(ndof - 2) = u;
    // Remove the translation component exactly (all reduced nodes carry the
    // same periodic cell area).
    double mx = 0.0, my = 0.0;
    for (int k = 0; k < nn; ++k) {
      mx += full[2 * k];
      my += full[2 * k + 1];
    }
    mx /= nn;
    my /= nn;
    for (int k = 0; k < nn; ++k) {
      full[2 * k] -= mx;
      full[2 * k + 1] -= my;
    }
    out.cases[c] = std::move(full);
  }
  return out;
}

CellSystem make_system(int n, std::vector<double> rho) {
  CellSystem sys;
  sys.n = n;
  sys.h = 1.0 / n;
  sys.rho = std::move(rho);
  return sys;
}

ElasticityVoigt assemble_tensor(const CellSystem& sys, const ElasticityVoigt& base,
                                const CorrectorField& xi) {
  const int n = sys.n;
  const double area = sys.h * sys.h;
  const q4::BMatrix Bc = q4::b_matrix(0.0, 0.0, sys.h);  // centroid B, exact for the mean strain
  ElasticityVoigt C_H = ElasticityVoigt::Zero();
  for (int c = 0; c < 3; ++c) {
    Eigen::Vector3d col = Eigen::Vector3d::Zero();
    for (int ej = 0; ej < n; ++ej)
      for (int ei = 0; ei < n; ++ei) {
        const double rho = sys.rho[static_cast<size_t>(ej) * n + ei];
        Eigen::Matrix<double, 8, 1> ue;
        const int nd[4] = {pnode(n, ei, ej), pnode(n, ei + 1, ej), pnode(n, ei + 1, ej + 1),
                           pnode(n, ei, ej + 1)};
        for (int a = 0; a < 4; ++a) {
          ue[2 * a] = xi.cases[c][2 * nd[a]];
          ue[2 * a + 1] = xi.cases[c][2 * nd[a] + 1];
        }
        col += rho * (area * (base * kUnitStrains[c]) - base * (area * (Bc * ue)));
      }
    C_H.col(c) = col;
  }
  // The exact tensor is symmetric; symmetrize away quadrature round-off.
  return 0.5 * (C_H + C_H.transpose());
}

}  // namespace

CorrectorField solve_cell_problem(const CellRaster& r, const ElasticityVoigt& base) {
  if (r.n < 2 || r.values.size() != static_cast<size_t>(r.n) * r.n)
    throw std::invalid_argument("solve_cell_problem: invalid raster");
  CellSystem sys = make_system(r.n, r.values);
  sys.K_ref = q4::stiffness(base, sys.h);
  sys.G_ref = q4::b_integrated(sys.h);
  return solve_cell(sys, base);
}

CorrectorField solve_cell_problem_density(int n, const std::vector<double>& rho,
                                          const ElasticityVoigt& base) {
  if (n < 2 || rho.size() != static_cast<size_t>(n) * n)
    throw std::invalid_argument("solve_cell_problem_density: invalid density field");
  CellSystem sys = make_system(n, rho);
  sys.K_ref = q4::stiffness(base, sys.h);
  sys.G_ref = q4::b_integrated(sys.h);
  return solve_cell(sys, base);
}

HomogenizedCell homogenize(const CellRaster& r, const ElasticityVoigt& base) {
  HomogenizedCell out;
  out.raster = r;
  out.corrector = solve_cell_problem(r, base);
  CellSystem sys = make_system(r.n, r.values);
  out.C_H = assemble_tensor(sys, base, out.corrector);
  return out;
}

ElasticityVoigt homogenize_density(int n, const std::vector<double>& rho,
                                   const ElasticityVoigt& base, const CorrectorField& xi) {
  CellSystem sys = make_system(n, rho);
  return assemble_tensor(sys, base, xi);
}

CorrectorField transform_corrector(const CorrectorField& xi_hat, double lambda, double theta) {
  if (!(lambda > 0.0)) throw std::invalid_argument("transform_corrector: lambda must be positive");
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::Matrix2d R;
  R << c, -s, s, c;
  const int n = xi_hat.n;
  CorrectorField out;
  out.n = n;
  for (auto& v : out.cases) v.resize(2 * n * n);
  // Voigt slot -> (s, t) index pair of the driving strain.
  const int su[3] = {0, 1, 0}, tv[3] = {0, 1, 1};
  for (int node = 0; node < n * n; ++node) {
    // xihat_k^{st} with symmetric extension in (s, t)
    double xh[2][2][2];
    for (int k = 0; k < 2; ++k) {
      xh[k][0][0] = xi_hat.cases[0][2 * node + k];
      xh[k][1][1] = xi_hat.cases[1][2 * node + k];
      xh[k][0][1] = xh[k][1][0] = xi_hat.cases[2][2 * node + k];
    }
    for (int cse = 0; cse < 3; ++cse) {
      const int u = su[cse], v = tv[cse];
      for (int w = 0; w < 2; ++w) {
        double acc = 0.0;
        for (int ss = 0; ss < 2; ++ss)
          for (int tt = 0; tt < 2; ++tt)
            for (int k = 0; k < 2; ++k) acc += R(u, ss) * R(v, tt) * R(w, k) * xh[k][ss][tt];
        out.cases[cse][2 * node + w] = lambda * acc;
      }
    }
  }
  return out;
}

}  // namespace cfi
