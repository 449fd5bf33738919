#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace latflow {

inline constexpr int kMaxDim = 6;

/// Integer lattice point; only the first `d` coordinates are meaningful.
using Point = std::array<int, kMaxDim>;
using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

enum class Adjacency {
  kZd,  // L1 distance 1 (nearest neighbours)
  kLd,  // L-infinity distance 1 (includes diagonals)
};

/// Closed axis-aligned integer box [lo_1,hi_1] x ... x [lo_d,hi_d].
struct Region {
  int d = 0;
  Point lo{};
  Point hi{};

  bool contains(const Point& p) const;
  bool contains(const Region& other) const;
  int extent(int axis) const { return hi[axis] - lo[axis]; }
  std::uint64_t vertex_count() const;
  Region expanded(int r) const;
  Region shifted(int axis, int delta) const;
  std::string to_string() const;

  friend bool operator==(const Region&, const Region&) = default;
};

/// The slab B(k,m) = [0,k_1] x ... x [0,k_{d-1}] x [0,m]. The last axis is
/// the height axis; F_0 sits at height 0 and F_m at height m.
struct BoxSpec {
  int d = 2;
  std::vector<int> k;
  int m = 0;

  /// ||k||_v = k_1 * ... * k_{d-1}, exact.
  std::uint64_t volume() const;
  /// Same box with k sorted ascending.
  BoxSpec canonical() const;
  std::uint64_t vertex_count() const;
  std::uint64_t edge_count() const;
  Region region() const;
  std::string k_string(char sep = ';') const;
};

/// Throws SpecError on dimension/length mismatch or negative sizes.
BoxSpec build_box(int d, std::vector<int> k, int m);

/// The box surrounded by a margin of R cells; its boundary stands in for
/// "infinity" in the cut-to-infinity problems.
struct AmbientWindow {
  BoxSpec box;
  int margin = 0;

  Region region() const { return box.region().expanded(margin); }
};

struct EdgeEnds {
  VertexId lower;
  VertexId upper;
  int axis;
};

/// Dense, geometry-only indexing of the vertices and nearest-neighbour edges
/// of a Region. Vertices are row-major (axis 0 slowest). Edges come in one
/// block per axis; inside a block they are ordered row-major by their lower
/// endpoint.
class Grid {
 public:
  Grid() = default;
  explicit Grid(const Region& region);

  int dim() const { return region_.d; }
  const Region& region() const { return region_; }
  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t edge_count() const { return edge_count_; }

  bool contains(const Point& p) const { return region_.contains(p); }
  VertexId vertex_id(const Point& p) const;
  Point point(VertexId v) const;
  EdgeId edge_id(const Point& lower, int axis) const;
  EdgeEnds edge(EdgeId e) const;
  /// True when the vertex lies on the outer boundary of the region.
  bool on_boundary(VertexId v) const;
  bool on_boundary(const Point& p) const;

  /// Calls f(EdgeId, VertexId neighbour, int axis) for every incident edge in
  /// ascending EdgeId order.
  template <class F>
  void for_each_neighbor(VertexId v, F&& f) const {
    const Point p = point(v);
    for (int a = 0; a < region_.d; ++a) {
      if (p[a] > region_.lo[a]) {
        Point q = p;
        --q[a];
        f(edge_id(q, a), v - vertex_stride_[a], a);
      }
      if (p[a] < region_.hi[a]) {
        f(edge_id(p, a), v + vertex_stride_[a], a);
      }
    }
  }

  std::size_t vertex_stride(int axis) const { return vertex_stride_[axis]; }

 private:
  Region region_{};
  std::array<std::size_t, kMaxDim> vertex_stride_{};
  std::array<std::size_t, kMaxDim + 1> edge_offset_{};
  std::array<std::array<std::size_t, kMaxDim>, kMaxDim> edge_stride_{};
  std::size_t vertex_count_ = 0;
  std::size_t edge_count_ = 0;
};

struct Faces {
  std::vector<VertexId> bottom;  // F_0
  std::vector<VertexId> top;     // F_m
};

/// Bottom and top faces of `box`, as ids of `grid`. Throws RangeError when the
/// box is not inside the grid.
Faces faces(const Grid& grid, const Region& box);
Faces faces(const BoxSpec& box);

bool adjacent(const Point& u, const Point& v, int d, Adjacency mode);

/// Vertices of the grid with coordinate `axis` (0-based) equal to `coord`.
std::vector<VertexId> hyperplane(const Grid& grid, int axis, int coord);
/// Same, restricted to a sub-region.
std::vector<VertexId> hyperplane(const Grid& grid, const Region& within, int axis, int coord);
/// Edges with both endpoints on the plane x_axis = coord inside `within`.
std::vector<EdgeId> hyperplane_edges(const Grid& grid, const Region& within, int axis, int coord);

std::vector<VertexId> region_vertices(const Grid& grid, const Region& region);
std::vector<EdgeId> region_edges(const Grid& grid, const Region& region);
bool edge_in_region(const Grid& grid, EdgeId e, const Region& region);

/// Membership mask over the grid's vertices.
std::vector<std::uint8_t> vertex_mask(const Grid& grid, std::span<const VertexId> vertices);

}  // namespace latflow
