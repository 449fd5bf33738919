#include "latflow/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>

#include "latflow/errors.hpp"

namespace latflow {

bool Region::contains(const Point& p) const {
  for (int a = 0; a < d; ++a) {
    if (p[a] < lo[a] || p[a] > hi[a]) return false;
  }
  return true;
}

bool Region::contains(const Region& other) const {
  if (other.d != d) return false;
  for (int a = 0; a < d; ++a) {
    if (other.lo[a] < lo[a] || other.hi[a] > hi[a]) return false;
  }
  return true;
}

std::uint64_t Region::vertex_count() const {
  std::uint64_t n = 1;
  for (int a = 0; a < d; ++a) n *= static_cast<std::uint64_t>(hi[a] - lo[a] + 1);
  return n;
}

Region Region::expanded(int r) const {
  Region out = *this;
  for (int a = 0; a < d; ++a) {
    out.lo[a] -= r;
    out.hi[a] += r;
  }
  return out;
}

Region Region::shifted(int axis, int delta) const {
  Region out = *this;
  out.lo[axis] += delta;
  out.hi[axis] += delta;
  return out;
}

std::string Region::to_string() const {
  std::string s;
  for (int a = 0; a < d; ++a) {
    if (a) s += "x";
    s += "[" + std::to_string(lo[a]) + "," + std::to_string(hi[a]) + "]";
  }
  return s;
}

std::uint64_t BoxSpec::volume() const {
  std::uint64_t v = 1;
  for (int ki : k) v *= static_cast<std::uint64_t>(ki);
  return v;
}

BoxSpec BoxSpec::canonical() const {
  BoxSpec out = *this;
  std::sort(out.k.begin(), out.k.end());
  return out;
}

std::uint64_t BoxSpec::vertex_count() const { return region().vertex_count(); }

std::uint64_t BoxSpec::edge_count() const {
  const Region r = region();
  std::uint64_t total = 0;
  for (int a = 0; a < d; ++a) {
    std::uint64_t n = static_cast<std::uint64_t>(r.extent(a));
    for (int b = 0; b < d; ++b) {
      if (b != a) n *= static_cast<std::uint64_t>(r.extent(b) + 1);
    }
    total += n;
  }
  return total;
}

Region BoxSpec::region() const {
  Region r;
  r.d = d;
  for (int a = 0; a + 1 < d; ++a) r.hi[a] = k[a];
  r.hi[d - 1] = m;
  return r;
}

std::string BoxSpec::k_string(char sep) const {
  std::string s;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(k[i]);
  }
  return s;
}

BoxSpec build_box(int d, std::vector<int> k, int m) {
  if (d < 2 || d > kMaxDim) {
    throw SpecError("dimension must be in [2," + std::to_string(kMaxDim) + "], got " +
                    std::to_string(d));
  }
  if (static_cast<int>(k.size()) != d - 1) {
    throw SpecError("expected " + std::to_string(d - 1) + " side lengths, got " +
                    std::to_string(k.size()));
  }
  for (int ki : k) {
    if (ki < 0) throw SpecError("side lengths must be non-negative");
  }
  if (m < 0) throw SpecError("height must be non-negative");
  return BoxSpec{d, std::move(k), m};
}

Grid::Grid(const Region& region) : region_(region) {
  const int d = region.d;
  if (d < 1 || d > kMaxDim) throw SpecError("grid dimension out of range");
  std::array<std::size_t, kMaxDim> n{};
  for (int a = 0; a < d; ++a) {
    if (region.hi[a] < region.lo[a]) throw SpecError("empty region " + region.to_string());
    n[a] = static_cast<std::size_t>(region.hi[a] - region.lo[a] + 1);
  }
  std::size_t stride = 1;
  for (int a = d - 1; a >= 0; --a) {
    vertex_stride_[a] = stride;
    stride *= n[a];
  }
  vertex_count_ = stride;
  if (vertex_count_ > std::numeric_limits<VertexId>::max() / 2) {
    throw ResourceError("grid too large: " + std::to_string(vertex_count_) + " vertices");
  }

  std::size_t offset = 0;
  for (int a = 0; a < d; ++a) {
    edge_offset_[a] = offset;
    std::size_t s = 1;
    std::size_t block = 1;
    for (int b = d - 1; b >= 0; --b) {
      const std::size_t nb = (b == a) ? n[b] - 1 : n[b];
      edge_stride_[a][b] = s;
      s *= nb;
    }
    block = s;
    offset += block;
  }
  edge_offset_[d] = offset;
  edge_count_ = offset;
}

VertexId Grid::vertex_id(const Point& p) const {
  std::size_t id = 0;
  for (int a = 0; a < region_.d; ++a) {
    id += static_cast<std::size_t>(p[a] - region_.lo[a]) * vertex_stride_[a];
  }
  return static_cast<VertexId>(id);
}

Point Grid::point(VertexId v) const {
  Point p{};
  std::size_t rest = v;
  for (int a = 0; a < region_.d; ++a) {
    p[a] = region_.lo[a] + static_cast<int>(rest / vertex_stride_[a]);
    rest %= vertex_stride_[a];
  }
  return p;
}

EdgeId Grid::edge_id(const Point& lower, int axis) const {
  std::size_t id = edge_offset_[axis];
  for (int b = 0; b < region_.d; ++b) {
    id += static_cast<std::size_t>(lower[b] - region_.lo[b]) * edge_stride_[axis][b];
  }
  return static_cast<EdgeId>(id);
}

EdgeEnds Grid::edge(EdgeId e) const {
  int axis = 0;
  while (axis + 1 < region_.d && e >= edge_offset_[axis + 1]) ++axis;
  std::size_t rest = e - edge_offset_[axis];
  Point p{};
  for (int b = 0; b < region_.d; ++b) {
    p[b] = region_.lo[b] + static_cast<int>(rest / edge_stride_[axis][b]);
    rest %= edge_stride_[axis][b];
  }
  const VertexId lower = vertex_id(p);
  return EdgeEnds{lower, static_cast<VertexId>(lower + vertex_stride_[axis]), axis};
}

bool Grid::on_boundary(const Point& p) const {
  for (int a = 0; a < region_.d; ++a) {
    if (p[a] == region_.lo[a] || p[a] == region_.hi[a]) return true;
  }
  return false;
}

bool Grid::on_boundary(VertexId v) const { return on_boundary(point(v)); }

Faces faces(const Grid& grid, const Region& box) {
  if (!grid.region().contains(box)) {
    throw RangeError("box " + box.to_string() + " outside grid " + grid.region().to_string());
  }
  const int h = box.d - 1;
  return Faces{hyperplane(grid, box, h, box.lo[h]), hyperplane(grid, box, h, box.hi[h])};
}

Faces faces(const BoxSpec& box) {
  const Region r = box.region();
  return faces(Grid(r), r);
}

bool adjacent(const Point& u, const Point& v, int d, Adjacency mode) {
  int l1 = 0;
  int linf = 0;
  for (int a = 0; a < d; ++a) {
    const int diff = std::abs(u[a] - v[a]);
    l1 += diff;
    linf = std::max(linf, diff);
  }
  return mode == Adjacency::kZd ? l1 == 1 : linf == 1;
}

std::vector<VertexId> hyperplane(const Grid& grid, int axis, int coord) {
  return hyperplane(grid, grid.region(), axis, coord);
}

std::vector<VertexId> hyperplane(const Grid& grid, const Region& within, int axis, int coord) {
  if (axis < 0 || axis >= grid.dim()) throw RangeError("axis out of range");
  if (coord < within.lo[axis] || coord > within.hi[axis]) {
    throw RangeError("plane x_" + std::to_string(axis + 1) + "=" + std::to_string(coord) +
                     " outside " + within.to_string());
  }
  Region plane = within;
  plane.lo[axis] = plane.hi[axis] = coord;
  return region_vertices(grid, plane);
}

std::vector<EdgeId> hyperplane_edges(const Grid& grid, const Region& within, int axis, int coord) {
  if (coord < within.lo[axis] || coord > within.hi[axis]) {
    throw RangeError("plane outside region");
  }
  Region plane = within;
  plane.lo[axis] = plane.hi[axis] = coord;
  return region_edges(grid, plane);
}

std::vector<VertexId> region_vertices(const Grid& grid, const Region& region) {
  if (!grid.region().contains(region)) {
    throw RangeError("region " + region.to_string() + " outside grid " +
                     grid.region().to_string());
  }
  std::vector<VertexId> out;
  out.reserve(region.vertex_count());
  const int d = region.d;
  Point p = region.lo;
  while (true) {
    out.push_back(grid.vertex_id(p));
    int a = d - 1;
    while (a >= 0 && p[a] == region.hi[a]) {
      p[a] = region.lo[a];
      --a;
    }
    if (a < 0) break;
    ++p[a];
  }
  return out;
}

std::vector<EdgeId> region_edges(const Grid& grid, const Region& region) {
  std::vector<EdgeId> out;
  for (VertexId v : region_vertices(grid, region)) {
    const Point p = grid.point(v);
    for (int a = 0; a < region.d; ++a) {
      if (p[a] < region.hi[a]) out.push_back(grid.edge_id(p, a));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool edge_in_region(const Grid& grid, EdgeId e, const Region& region) {
  const EdgeEnds ends = grid.edge(e);
  return region.contains(grid.point(ends.lower)) && region.contains(grid.point(ends.upper));
}

std::vector<std::uint8_t> vertex_mask(const Grid& grid, std::span<const VertexId> vertices) {
  std::vector<std::uint8_t> mask(grid.vertex_count(), 0);
  for (VertexId v : vertices) mask[v] = 1;
  return mask;
}

}  // namespace latflow
