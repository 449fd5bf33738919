#include "latflow/cluster.hpp"

#include <algorithm>

#include "graph_util.hpp"
#include "latflow/errors.hpp"

namespace latflow {

OpenCluster open_cluster(const CapacityField& field, std::span<const VertexId> seed,
                         bool inside_open) {
  const Grid& grid = field.grid();
  OpenCluster c;
  c.seed.assign(seed.begin(), seed.end());
  std::vector<std::uint8_t> in_seed;
  if (inside_open) in_seed = vertex_mask(grid, seed);
  auto open = [&](EdgeId e) {
    if (field.capacity(e) > 0) return true;
    if (!inside_open) return false;
    const EdgeEnds ends = grid.edge(e);
    return in_seed[ends.lower] && in_seed[ends.upper];
  };
  c.member = detail::reach(grid, seed, open, [](VertexId) { return true; });
  for (VertexId v = 0; v < grid.vertex_count(); ++v) {
    if (!c.member[v]) continue;
    c.vertices.push_back(v);
    if (grid.on_boundary(v)) c.touches_window_boundary = true;
  }
  return c;
}

OpenCluster open_cluster(const CapacityField& field, const Region& box, bool inside_open) {
  return open_cluster(field, region_vertices(field.grid(), box), inside_open);
}

BoundarySets exterior_boundary(const OpenCluster& cluster, const Grid& grid) {
  if (cluster.touches_window_boundary) {
    throw PreconditionError("cluster reaches the window boundary; no finite exterior boundary");
  }
  const auto& in = cluster.member;
  const auto offsets = detail::ld_offsets(grid.dim());
  BoundarySets b;
  std::vector<std::uint8_t> is_partial(grid.vertex_count(), 0);
  for (VertexId v : cluster.vertices) {
    detail::for_each_ld_neighbor(grid, offsets, v, [&](VertexId w) {
      if (!in[w]) is_partial[w] = 1;
    });
  }
  std::vector<VertexId> boundary;
  for (VertexId v = 0; v < grid.vertex_count(); ++v) {
    if (grid.on_boundary(v)) boundary.push_back(v);
  }
  const auto outside = detail::reach(grid, boundary, [](EdgeId) { return true; },
                                     [&](VertexId v) { return !in[v]; });
  for (VertexId v = 0; v < grid.vertex_count(); ++v) {
    if (!is_partial[v]) continue;
    b.partial.push_back(v);
    if (outside[v]) b.partial_e.push_back(v);
  }
  for (VertexId v : cluster.vertices) {
    bool inner = false;
    detail::for_each_ld_neighbor(grid, offsets, v, [&](VertexId w) { inner = inner || is_partial[w]; });
    if (inner) b.partial_i.push_back(v);
    grid.for_each_neighbor(v, [&](EdgeId e, VertexId w, int) {
      if (in[w]) return;
      b.delta.push_back(e);
      if (outside[w]) b.delta_e.push_back(e);
    });
  }
  std::sort(b.delta.begin(), b.delta.end());
  std::sort(b.delta_e.begin(), b.delta_e.end());
  return b;
}

bool zero_cutset_exists(const CapacityField& field, const Region& box) {
  return !open_cluster(field, box, true).touches_window_boundary;
}

BoundaryTail boundary_tail(const DistributionSpec& dist, int d, std::size_t n_samples,
                           int margin, int max_margin, std::uint64_t seed,
                           std::size_t min_finite) {
  if (margin < 1 || max_margin < margin) throw SpecError("need 1 <= margin <= max_margin");
  BoundaryTail out;
  Region origin;
  origin.d = d;
  for (std::size_t s = 0; s < n_samples; ++s) {
    bool done = false;
    for (int r = margin; !done; r *= 2) {
      const int radius = std::min(r, max_margin);
      const auto field = sample_field(origin.expanded(radius), dist, seed, static_cast<std::uint32_t>(s));
      const VertexId o = field.grid().vertex_id(Point{});
      const auto c = open_cluster(field, std::span<const VertexId>(&o, 1), false);
      if (!c.touches_window_boundary) {
        out.sizes.push_back(static_cast<std::int64_t>(exterior_boundary(c, field.grid()).delta_e.size()));
        done = true;
      } else if (radius == max_margin) {
        ++out.discarded;
        done = true;
      }
    }
  }
  out.finite = out.sizes.size();
  out.insufficient = out.finite < std::max<std::size_t>(min_finite, 1);
  if (!out.sizes.empty()) out.tail = tail_histogram(out.sizes, 1, 0.0);
  return out;
}

}  // namespace latflow
