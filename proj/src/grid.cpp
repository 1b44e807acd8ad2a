#include "cfi/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace cfi {

MacroGrid::MacroGrid(double length, double height, int nx, int ny, const std::vector<Rect>& cutouts)
    : length_(length), height_(height), nx_(nx), ny_(ny) {
  if (length <= 0 || height <= 0 || nx < 2 || ny < 2)
    throw std::invalid_argument("MacroGrid: domain sizes and cell counts must be positive");
  const double hx = length / nx, hy = height / ny;
  if (std::abs(hx - hy) > 1e-9 * std::max(hx, hy))
    throw std::invalid_argument("MacroGrid: cells must be square (length/nx == height/ny)");
  h_ = hx;

  cell_mask_.assign(static_cast<size_t>(nx_) * ny_, 1);
  for (const auto& r : cutouts) {
    for (int j = 0; j < ny_; ++j)
      for (int i = 0; i < nx_; ++i) {
        const auto c = cell_center(cell_id(i, j));
        if (r.contains(c.x(), c.y())) cell_mask_[cell_id(i, j)] = 0;
      }
  }
  classify();
  trace_loops();
}

void MacroGrid::classify() {
  node_mask_.assign(node_count(), 0);
  node_boundary_.assign(node_count(), 0);
  active_cells_ = 0;
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i)
      if (cell_mask_[cell_id(i, j)]) {
        ++active_cells_;
        for (int dj = 0; dj <= 1; ++dj)
          for (int di = 0; di <= 1; ++di) node_mask_[node_id(i + di, j + dj)] = 1;
      }
  if (active_cells_ == 0) throw std::invalid_argument("MacroGrid: empty domain");
  // A node is interior iff all four incident cells are active.
  for (int j = 0; j <= ny_; ++j)
    for (int i = 0; i <= nx_; ++i) {
      const int id = node_id(i, j);
      if (!node_mask_[id]) continue;
      const bool all4 = cell_active(i - 1, j - 1) && cell_active(i, j - 1) &&
                        cell_active(i - 1, j) && cell_active(i, j);
      node_boundary_[id] = all4 ? 0 : 1;
    }
}

void MacroGrid::trace_loops() {
  // Directed boundary edges with the material on the left. Each start node
  // must have exactly one outgoing edge, otherwise two parts of the domain
  // touch at a corner, which the solvers cannot handle.
  std::map<int, int> next;  // start node id -> end node id
  auto add_edge = [&](int a, int b) {
    if (!next.emplace(a, b).second)
      throw std::invalid_argument("MacroGrid: domain boundary touches itself at a corner");
  };
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i) {
      if (!cell_mask_[cell_id(i, j)]) continue;
      if (!cell_active(i, j - 1)) add_edge(node_id(i, j), node_id(i + 1, j));          // bottom, ->
      if (!cell_active(i + 1, j)) add_edge(node_id(i + 1, j), node_id(i + 1, j + 1));  // right, ^
      if (!cell_active(i, j + 1)) add_edge(node_id(i + 1, j + 1), node_id(i, j + 1));  // top, <-
      if (!cell_active(i - 1, j)) add_edge(node_id(i, j + 1), node_id(i, j));          // left, v
    }

  loops_.clear();
  std::map<int, int> remaining = next;
  while (!remaining.empty()) {
    // Deterministic start: the smallest node id still unused (bottom-most,
    // then left-most).
    int start = remaining.begin()->first;
    LoopGeometry loop;
    int cur = start;
    do {
      loop.nodes.push_back(cur);
      auto it = remaining.find(cur);
      if (it == remaining.end()) throw std::logic_error("MacroGrid: open boundary chain");
      cur = it->second;
      remaining.erase(it);
    } while (cur != start);
    loop.perimeter = h_ * loop.edge_count();
    // Signed area distinguishes the outer loop (positive, counterclockwise)
    // from holes (negative, clockwise).
    double area2 = 0.0;
    for (size_t k = 0; k < loop.nodes.size(); ++k) {
      const auto a = node_pos(loop.nodes[k]);
      const auto b = node_pos(loop.nodes[(k + 1) % loop.nodes.size()]);
      area2 += a.x() * b.y() - b.x() * a.y();
    }
    loop.outer = area2 > 0.0;
    loops_.push_back(std::move(loop));
  }
  // Outer loop first, then holes in deterministic (start node) order.
  std::stable_sort(loops_.begin(), loops_.end(),
                   [](const LoopGeometry& a, const LoopGeometry& b) { return a.outer > b.outer; });
  int outers = 0;
  for (const auto& l : loops_) outers += l.outer ? 1 : 0;
  if (outers != 1) throw std::invalid_argument("MacroGrid: domain must be a single connected component");
}

std::vector<int> MacroGrid::active_cells() const {
  std::vector<int> out;
  out.reserve(active_cells_);
  for (int c = 0; c < cell_count(); ++c)
    if (cell_mask_[c]) out.push_back(c);
  return out;
}

std::vector<double> MacroGrid::node_weights() const {
  std::vector<double> w(node_count(), 0.0);
  const double quarter = h_ * h_ / 4.0;
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i)
      if (cell_mask_[cell_id(i, j)])
        for (int dj = 0; dj <= 1; ++dj)
          for (int di = 0; di <= 1; ++di) w[node_id(i + di, j + dj)] += quarter;
  return w;
}

}  // namespace cfi
