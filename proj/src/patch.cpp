#include "latflow/patch.hpp"

#include <algorithm>
#include <map>

#include "graph_util.hpp"
#include "latflow/errors.hpp"
#include "latflow/flow.hpp"

namespace latflow {
namespace {

std::string point_string(const Point& p, int d) {
  std::string s = "(";
  for (int a = 0; a < d; ++a) {
    if (a) s += ",";
    s += std::to_string(p[a]);
  }
  return s + ")";
}

std::vector<PlaneCluster> shifted(const std::vector<PlaneCluster>& clusters, int axis, int delta) {
  std::vector<PlaneCluster> out = clusters;
  for (auto& c : out) {
    for (auto& p : c) p[axis] += delta;
  }
  std::sort(out.begin(), out.end());
  return out;
}

// First cluster of `a` with no equal cluster in `b`, if any.
const PlaneCluster* first_unmatched(const std::vector<PlaneCluster>& a, const std::vector<PlaneCluster>& b) {
  for (const auto& c : a) {
    if (!std::binary_search(b.begin(), b.end(), c)) return &c;
  }
  return nullptr;
}

EdgeId map_edge(const Grid& grid, EdgeId e, const ReflectionMap& map) {
  const EdgeEnds ends = grid.edge(e);
  Point lo = map.apply(grid.point(ends.lower));
  const Point hi = map.apply(grid.point(ends.upper));
  if (ends.axis == map.axis) lo = hi;  // the reflection swaps the endpoints
  if (!grid.contains(lo) || !grid.contains(hi)) {
    throw RangeError("reflected edge at " + point_string(lo, grid.dim()) + " leaves the window");
  }
  return grid.edge_id(lo, ends.axis);
}

}  // namespace

TunnelExits tunnel_exits(const Cutset& cut, const Grid& grid, int axis, int coord) {
  const Region& box = cut.host;
  if (axis < 0 || axis >= box.d || coord < box.lo[axis] || coord > box.hi[axis]) {
    throw RangeError("plane x_" + std::to_string(axis + 1) + "=" + std::to_string(coord) + " misses " +
                     box.to_string());
  }
  TunnelExits out;
  out.axis = axis;
  out.coord = coord;
  std::vector<std::uint8_t> in_cut(grid.edge_count(), 0);
  for (EdgeId e : cut.edges) in_cut[e] = 1;
  for (EdgeId e : hyperplane_edges(grid, box, axis, coord)) {
    if (in_cut[e]) out.trace_edges.push_back(e);
  }

  auto host_free = [&](EdgeId e) { return !in_cut[e] && edge_in_region(grid, e, box); };
  auto in_box = [&](VertexId v) { return box.contains(grid.point(v)); };
  const auto up = detail::reach(grid, cut.sink, host_free, in_box);
  const auto down = detail::reach(grid, cut.source, host_free, in_box);

  Region plane = box;
  plane.lo[axis] = plane.hi[axis] = coord;
  const auto plane_vertices = hyperplane(grid, box, axis, coord);
  auto on_plane = [&](VertexId v) { return plane.contains(grid.point(v)); };
  std::vector<int> label(grid.vertex_count(), -1);
  std::vector<std::vector<VertexId>> clusters;
  for (VertexId v : plane_vertices) {
    if (label[v] >= 0) continue;
    const int id = static_cast<int>(clusters.size());
    std::vector<VertexId> c{v};
    label[v] = id;
    for (std::size_t h = 0; h < c.size(); ++h) {
      grid.for_each_neighbor(c[h], [&](EdgeId e, VertexId w, int) {
        if (label[w] < 0 && !in_cut[e] && on_plane(w)) {
          label[w] = id;
          c.push_back(w);
        }
      });
    }
    clusters.push_back(std::move(c));
  }

  out.boundary_in_cutset = true;
  std::vector<std::uint8_t> in_exit(grid.vertex_count(), 0);
  std::vector<VertexId> exit_vertices;
  for (const auto& c : clusters) {
    const bool is_up = std::any_of(c.begin(), c.end(), [&](VertexId v) { return up[v] != 0; });
    const bool is_down = std::any_of(c.begin(), c.end(), [&](VertexId v) { return down[v] != 0; });
    PlaneCluster pts;
    for (VertexId v : c) pts.push_back(grid.point(v));
    std::sort(pts.begin(), pts.end());
    if (is_up) out.upper.push_back(pts);
    if (is_down) out.lower.push_back(pts);
    if (!is_up && !is_down) {
      ++out.unlabeled;
      continue;
    }
    for (VertexId v : c) {
      in_exit[v] = 1;
      exit_vertices.push_back(v);
      grid.for_each_neighbor(v, [&](EdgeId e, VertexId w, int) {
        if (on_plane(w) && label[w] != label[v] && !in_cut[e]) out.boundary_in_cutset = false;
      });
    }
  }
  std::sort(out.upper.begin(), out.upper.end());
  std::sort(out.lower.begin(), out.lower.end());

  // Plane vertices reachable from the exits inside the box, off the cutset,
  // must be exit vertices themselves.
  const auto from_exits = detail::reach(grid, exit_vertices, host_free, in_box);
  out.closed_under_paths = std::none_of(plane_vertices.begin(), plane_vertices.end(),
                                        [&](VertexId v) { return from_exits[v] && !in_exit[v]; });
  return out;
}

bool verify_exit_disjoint(const TunnelExits& exits) {
  std::vector<Point> up;
  for (const auto& c : exits.upper) up.insert(up.end(), c.begin(), c.end());
  std::sort(up.begin(), up.end());
  for (const auto& c : exits.lower) {
    for (const auto& p : c) {
      if (std::binary_search(up.begin(), up.end(), p)) return false;
    }
  }
  return true;
}

Region ReflectionMap::apply(const Region& r) const {
  Region out = r;
  out.lo[axis] = 2 * h + 1 - r.hi[axis] + shift;
  out.hi[axis] = 2 * h + 1 - r.lo[axis] + shift;
  return out;
}

ReflectionMap self_reflection(const Region& box, int axis) {
  // Needs 2h + 1 + shift = lo + hi; take shift in {0, 1}.
  const int s = box.lo[axis] + box.hi[axis] - 1;
  ReflectionMap m;
  m.axis = axis;
  m.h = s >= 0 ? s / 2 : -((-s + 1) / 2);
  m.shift = s - 2 * m.h;
  return m;
}

CapacityField mirror_field(const CapacityField& field, const ReflectionMap& map, const Region& region) {
  const Grid& grid = field.grid();
  if (map.axis < 0 || map.axis >= grid.dim()) throw SpecError("reflection axis out of range");
  if (!grid.region().contains(region) || !grid.region().contains(map.apply(region))) {
    throw RangeError("reflection of " + region.to_string() + " leaves the window " + grid.region().to_string());
  }
  CapacityField out = field;
  for (EdgeId e : region_edges(grid, region)) out.set(map_edge(grid, e, map), field.capacity(e));
  return out;
}

Cutset reflect_cutset(const Cutset& cut, const Grid& grid, const ReflectionMap& map) {
  if (!grid.region().contains(map.apply(cut.host))) {
    throw RangeError("reflected host " + map.apply(cut.host).to_string() + " leaves the window");
  }
  Cutset out = cut;
  out.host = map.apply(cut.host);
  auto map_vertices = [&](const std::vector<VertexId>& vs) {
    std::vector<VertexId> r;
    for (VertexId v : vs) r.push_back(grid.vertex_id(map.apply(grid.point(v))));
    std::sort(r.begin(), r.end());
    return r;
  };
  out.source = map_vertices(cut.source);
  out.sink = map_vertices(cut.sink);
  out.edges.clear();
  for (EdgeId e : cut.edges) out.edges.push_back(map_edge(grid, e, map));
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

Cutset patch_cutsets(const Cutset& w, const Cutset& w_prime, const TunnelExits& exits,
                     const TunnelExits& exits_prime, const Region& joined, const Grid& grid) {
  if (exits.axis != exits_prime.axis || exits_prime.coord != exits.coord + 1) {
    throw ExitMismatch("exit planes are not adjacent: x_" + std::to_string(exits.axis + 1) + "=" +
                       std::to_string(exits.coord) + " and x_" + std::to_string(exits_prime.axis + 1) + "=" +
                       std::to_string(exits_prime.coord));
  }
  const int d = grid.dim();
  auto check = [&](const std::vector<PlaneCluster>& mine, const std::vector<PlaneCluster>& theirs,
                   const char* kind) {
    const auto moved = shifted(mine, exits.axis, 1);
    const PlaneCluster* miss = first_unmatched(moved, theirs);
    const char* side = "left";
    if (miss == nullptr) {
      miss = first_unmatched(theirs, moved);
      side = "right";
    }
    if (miss != nullptr) {
      throw ExitMismatch(std::string(kind) + " exit on the " + side + " plane starting at " +
                         point_string(miss->front(), d) + " (" + std::to_string(miss->size()) +
                         " vertices) has no partner");
    }
  };
  check(exits.upper, exits_prime.upper, "upper");
  check(exits.lower, exits_prime.lower, "lower");

  Cutset out;
  out.host = joined;
  const Faces f = faces(grid, joined);
  out.source = f.bottom;
  out.sink = f.top;
  std::set_union(w.edges.begin(), w.edges.end(), w_prime.edges.begin(), w_prime.edges.end(),
                 std::back_inserter(out.edges));
  out.passage_time = w.passage_time + w_prime.passage_time;
  if (!is_cutset(grid, out)) {
    throw PropertyViolation("matched exits but the union does not cut " + joined.to_string());
  }
  return out;
}

NestedBoxReport check_nested_boxes(const CapacityField& field, const BoxSpec& outer,
                                   const std::vector<int>& k_inner) {
  if (k_inner.size() != outer.k.size()) throw SpecError("inner k has the wrong length");
  for (std::size_t i = 0; i < k_inner.size(); ++i) {
    if (k_inner[i] < 0 || k_inner[i] > outer.k[i]) throw SpecError("inner box must satisfy 0 <= k' <= k");
  }
  const Grid& grid = field.grid();
  const Region big = outer.region();
  const Region small = build_box(outer.d, k_inner, outer.m).region();
  const Cutset w = canonical_min_cut(field, big);
  const Cutset w_in = canonical_min_cut(field, small);

  NestedBoxReport r;
  r.outer_time = w.passage_time;
  r.inner_time = w_in.passage_time;
  std::vector<EdgeId> restricted;
  for (EdgeId e : w.edges) {
    if (edge_in_region(grid, e, small)) restricted.push_back(e);
  }
  const Faces f = faces(grid, small);
  r.restriction_is_cutset = is_cutset(grid, restricted, small, f.bottom, f.top);
  r.inner_le_outer = r.inner_time <= r.outer_time;
  for (EdgeId e : region_edges(grid, big)) {
    if (!edge_in_region(grid, e, small)) r.shell_capacity += field.capacity(e);
  }
  r.outer_le_inner_plus_shell = r.outer_time <= r.inner_time + r.shell_capacity;
  return r;
}

}  // namespace latflow
