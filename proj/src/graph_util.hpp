#pragma once

// Traversal helpers shared by the module implementations.

#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "latflow/lattice.hpp"

namespace latflow::detail {

inline std::vector<std::uint8_t> region_mask(const Grid& grid, const Region& region) {
  std::vector<std::uint8_t> mask(grid.vertex_count(), 0);
  for (VertexId v : region_vertices(grid, region)) mask[v] = 1;
  return mask;
}

/// BFS from `seeds` (only seeds passing vertex_ok are used) across edges with
/// edge_ok(e) into vertices with vertex_ok(v).
template <class EdgeOk, class VertexOk>
std::vector<std::uint8_t> reach(const Grid& grid, std::span<const VertexId> seeds, EdgeOk&& edge_ok,
                                VertexOk&& vertex_ok) {
  std::vector<std::uint8_t> seen(grid.vertex_count(), 0);
  std::vector<VertexId> queue;
  for (VertexId s : seeds) {
    if (!seen[s] && vertex_ok(s)) {
      seen[s] = 1;
      queue.push_back(s);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    grid.for_each_neighbor(queue[head], [&](EdgeId e, VertexId w, int) {
      if (!seen[w] && vertex_ok(w) && edge_ok(e)) {
        seen[w] = 1;
        queue.push_back(w);
      }
    });
  }
  return seen;
}

/// Offsets of the 3^d - 1 L-infinity neighbours.
inline std::vector<Point> ld_offsets(int d) {
  std::vector<Point> out;
  Point p{};
  for (int a = 0; a < d; ++a) p[a] = -1;
  while (true) {
    bool zero = true;
    for (int a = 0; a < d; ++a) zero = zero && p[a] == 0;
    if (!zero) out.push_back(p);
    int a = d - 1;
    while (a >= 0 && p[a] == 1) {
      p[a] = -1;
      --a;
    }
    if (a < 0) break;
    ++p[a];
  }
  return out;
}

/// Calls f(w) for each L-infinity neighbour of v inside the grid.
template <class F>
void for_each_ld_neighbor(const Grid& grid, const std::vector<Point>& offsets, VertexId v, F&& f) {
  const Point p = grid.point(v);
  const int d = grid.dim();
  for (const Point& off : offsets) {
    Point q = p;
    for (int a = 0; a < d; ++a) q[a] += off[a];
    if (grid.contains(q)) f(grid.vertex_id(q));
  }
}

/// True when the marked vertices form a single L-infinity component (or none).
inline bool ld_connected(const Grid& grid, std::span<const VertexId> vertices) {
  if (vertices.empty()) return true;
  std::vector<std::uint8_t> in(grid.vertex_count(), 0);
  for (VertexId v : vertices) in[v] = 1;
  const auto offsets = ld_offsets(grid.dim());
  std::vector<std::uint8_t> seen(grid.vertex_count(), 0);
  std::vector<VertexId> queue{vertices[0]};
  seen[vertices[0]] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for_each_ld_neighbor(grid, offsets, queue[head], [&](VertexId w) {
      if (in[w] && !seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    });
  }
  std::size_t distinct = 0;
  for (VertexId v : vertices) {
    if (in[v]) {
      ++distinct;
      in[v] = 0;
    }
  }
  return queue.size() == distinct;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::uint8_t> rank_;
};

}  // namespace latflow::detail
