#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace cfi {

// Axis-aligned rectangle, used for cutouts, masks and boundary patches.
struct Rect {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  bool contains(double x, double y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
};

// Closed boundary polyline of the domain, traversed with the material on the
// left: counterclockwise for the outer loop, clockwise for holes. Vertices
// are grid node ids; consecutive vertices are one grid edge (length h) apart.
struct LoopGeometry {
  std::vector<int> nodes;  // closed: nodes.front() is not repeated at the back
  bool outer = false;
  double perimeter = 0.0;

  int edge_count() const { return static_cast<int>(nodes.size()); }
};

// Structured macro grid over a rectangle-union domain. Cells are square
// (spacing h); the domain is the set of active cells (rectangle minus
// cutouts). Nodes are active when they touch an active cell.
class MacroGrid {
 public:
  MacroGrid() = default;
  MacroGrid(double length, double height, int nx, int ny, const std::vector<Rect>& cutouts = {});

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double h() const { return h_; }
  double length() const { return length_; }
  double height() const { return height_; }

  int node_count() const { return (nx_ + 1) * (ny_ + 1); }
  int cell_count() const { return nx_ * ny_; }
  int node_id(int i, int j) const { return j * (nx_ + 1) + i; }
  int cell_id(int i, int j) const { return j * nx_ + i; }
  Eigen::Vector2d node_pos(int id) const {
    return {h_ * (id % (nx_ + 1)), h_ * (id / (nx_ + 1))};
  }
  Eigen::Vector2d cell_center(int c) const {
    return {h_ * (c % nx_ + 0.5), h_ * (c / nx_ + 0.5)};
  }

  bool cell_active(int i, int j) const {
    return i >= 0 && i < nx_ && j >= 0 && j < ny_ && cell_mask_[cell_id(i, j)];
  }
  bool node_active(int id) const { return node_mask_[id]; }
  bool node_boundary(int id) const { return node_boundary_[id]; }
  bool node_interior(int id) const { return node_mask_[id] && !node_boundary_[id]; }

  const std::vector<uint8_t>& cell_mask() const { return cell_mask_; }
  const std::vector<LoopGeometry>& loops() const { return loops_; }

  // Active area of the domain.
  double area() const { return active_cells_ * h_ * h_; }
  int active_cell_count() const { return active_cells_; }

  // List of active cell ids in row-major order.
  std::vector<int> active_cells() const;

  // Lumped nodal weights of the trapezoid rule (h^2/4 per active incident
  // cell); integrates bilinear functions over the domain exactly.
  std::vector<double> node_weights() const;

 private:
  void classify();
  void trace_loops();

  double length_ = 0, height_ = 0, h_ = 0;
  int nx_ = 0, ny_ = 0, active_cells_ = 0;
  std::vector<uint8_t> cell_mask_;
  std::vector<uint8_t> node_mask_;
  std::vector<uint8_t> node_boundary_;
  std::vector<LoopGeometry> loops_;
};

// Node-valued scalar field on a macro grid. Values of inactive nodes are 0
// and ignored by all consumers.
struct ScalarField {
  const MacroGrid* grid = nullptr;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(const MacroGrid& g) : grid(&g), values(g.node_count(), 0.0) {}

  double& operator[](int id) { return values[id]; }
  double operator[](int id) const { return values[id]; }
};

}  // namespace cfi
