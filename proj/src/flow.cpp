#include "latflow/flow.hpp"

#include <algorithm>
#include <limits>

#include "graph_util.hpp"
#include "latflow/errors.hpp"

namespace latflow {
namespace {

// Layered blocking-flow solver. Arcs come in pairs (a, a^1); an undirected
// edge of capacity c is the pair (c, c), a directed arc is (c, 0).
class Dinic {
 public:
  explicit Dinic(std::size_t n) : adj_(n), level_(n), it_(n) {}

  std::size_t add_edge(std::size_t u, std::size_t v, Capacity cap, Capacity back) {
    const std::size_t a = to_.size();
    to_.push_back(v);
    cap_.push_back(cap);
    orig_.push_back(cap);
    adj_[u].push_back(a);
    to_.push_back(u);
    cap_.push_back(back);
    orig_.push_back(back);
    adj_[v].push_back(a + 1);
    return a;
  }

  Capacity run(std::size_t s, std::size_t t) {
    Capacity total = 0;
    while (layer(s, t)) {
      std::fill(it_.begin(), it_.end(), 0);
      while (Capacity f = augment(s, t)) total += f;
    }
    return total;
  }

  /// Net flow along arc a in its own direction.
  Capacity net(std::size_t a) const { return orig_[a] - cap_[a]; }

  std::vector<std::uint8_t> residual_reach(std::size_t s) const {
    std::vector<std::uint8_t> seen(adj_.size(), 0);
    std::vector<std::size_t> queue{s};
    seen[s] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (std::size_t a : adj_[queue[head]]) {
        if (cap_[a] > 0 && !seen[to_[a]]) {
          seen[to_[a]] = 1;
          queue.push_back(to_[a]);
        }
      }
    }
    return seen;
  }

 private:
  bool layer(std::size_t s, std::size_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::vector<std::size_t> queue{s};
    level_[s] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::size_t v = queue[head];
      for (std::size_t a : adj_[v]) {
        if (cap_[a] > 0 && level_[to_[a]] < 0) {
          level_[to_[a]] = level_[v] + 1;
          queue.push_back(to_[a]);
        }
      }
    }
    return level_[t] >= 0;
  }

  // One augmenting path through the level graph, found iteratively.
  Capacity augment(std::size_t s, std::size_t t) {
    path_.clear();
    std::size_t v = s;
    while (v != t) {
      auto& i = it_[v];
      const auto& arcs = adj_[v];
      while (i < arcs.size()) {
        const std::size_t a = arcs[i];
        if (cap_[a] > 0 && level_[to_[a]] == level_[v] + 1) break;
        ++i;
      }
      if (i == arcs.size()) {
        if (path_.empty()) return 0;
        level_[v] = -1;
        const std::size_t back = path_.back();
        path_.pop_back();
        v = to_[back ^ 1];
        ++it_[v];
        continue;
      }
      path_.push_back(arcs[i]);
      v = to_[arcs[i]];
    }
    Capacity f = std::numeric_limits<Capacity>::max();
    for (std::size_t a : path_) f = std::min(f, cap_[a]);
    for (std::size_t a : path_) {
      cap_[a] -= f;
      cap_[a ^ 1] += f;
    }
    return f;
  }

  std::vector<std::size_t> to_;
  std::vector<Capacity> cap_;
  std::vector<Capacity> orig_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<int> level_;
  std::vector<std::size_t> it_;
  std::vector<std::size_t> path_;
};

std::vector<VertexId> marked(const std::vector<std::uint8_t>& mask) {
  std::vector<VertexId> out;
  for (std::size_t v = 0; v < mask.size(); ++v) {
    if (mask[v]) out.push_back(static_cast<VertexId>(v));
  }
  return out;
}

}  // namespace

std::vector<VertexId> FlowResult::sources() const { return marked(is_source); }
std::vector<VertexId> FlowResult::sinks() const { return marked(is_sink); }

FlowResult max_flow(const CapacityField& field, const Region& host,
                    const std::vector<VertexId>& sources, const std::vector<VertexId>& sinks) {
  const Grid& grid = field.grid();
  if (!grid.region().contains(host)) {
    throw RangeError("host " + host.to_string() + " outside window " + grid.region().to_string());
  }
  FlowResult out;
  out.host = host;
  out.flow.assign(grid.edge_count(), 0);
  out.is_source.assign(grid.vertex_count(), 0);
  out.is_sink.assign(grid.vertex_count(), 0);
  for (VertexId v : sources) out.is_source[v] = 1;
  for (VertexId v : sinks) {
    if (out.is_source[v]) throw ContractError("source and sink sets intersect");
    out.is_sink[v] = 1;
  }

  const std::vector<VertexId> verts = region_vertices(grid, host);
  std::vector<std::uint32_t> local(grid.vertex_count(), UINT32_MAX);
  for (std::size_t i = 0; i < verts.size(); ++i) local[verts[i]] = static_cast<std::uint32_t>(i);
  for (VertexId v : sources) {
    if (local[v] == UINT32_MAX) throw ContractError("source outside host");
  }
  for (VertexId v : sinks) {
    if (local[v] == UINT32_MAX) throw ContractError("sink outside host");
  }

  const std::size_t n = verts.size();
  const std::size_t s = n;
  const std::size_t t = n + 1;
  Dinic solver(n + 2);
  const std::vector<EdgeId> edges = region_edges(grid, host);
  std::vector<std::size_t> arc(edges.size());
  Capacity total = 0;
  // Edges go in by ascending EdgeId, so every adjacency list is scanned in
  // canonical order.
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const EdgeEnds ends = grid.edge(edges[i]);
    const Capacity c = field.capacity(edges[i]);
    total += c;
    arc[i] = solver.add_edge(local[ends.lower], local[ends.upper], c, c);
  }
  const Capacity inf = total + 1;
  for (VertexId v : sources) solver.add_edge(s, local[v], inf, 0);
  for (VertexId v : sinks) solver.add_edge(local[v], t, inf, 0);

  out.value = sources.empty() || sinks.empty() ? 0 : solver.run(s, t);
  for (std::size_t i = 0; i < edges.size(); ++i) out.flow[edges[i]] = solver.net(arc[i]);
  const auto reach = solver.residual_reach(s);
  out.source_side.assign(grid.vertex_count(), 0);
  for (std::size_t i = 0; i < n; ++i) out.source_side[verts[i]] = reach[i];
  return out;
}

FlowResult max_flow_box(const CapacityField& field, const Region& box) {
  const int h = box.d - 1;
  if (box.extent(h) < 1) throw SpecError("degenerate box: height 0 makes source and sink coincide");
  const Faces f = faces(field.grid(), box);
  return max_flow(field, box, f.bottom, f.top);
}

FlowResult max_flow_box(const CapacityField& field, const BoxSpec& box) {
  return max_flow_box(field, box.region());
}

FlowResult max_flow_to_boundary(const CapacityField& field, const Region& box, int margin,
                                std::uint64_t max_vertices) {
  if (margin < 1) throw SpecError("margin must be at least 1");
  const Region host = box.expanded(margin);
  if (host.vertex_count() > max_vertices) {
    throw ResourceError("window of " + std::to_string(host.vertex_count()) +
                        " vertices exceeds the limit of " + std::to_string(max_vertices));
  }
  const Grid& grid = field.grid();
  if (!grid.region().contains(host)) {
    throw RangeError("window " + host.to_string() + " outside field window " +
                     grid.region().to_string());
  }
  std::vector<VertexId> sinks;
  for (VertexId v : region_vertices(grid, host)) {
    const Point p = grid.point(v);
    for (int a = 0; a < host.d; ++a) {
      if (p[a] == host.lo[a] || p[a] == host.hi[a]) {
        sinks.push_back(v);
        break;
      }
    }
  }
  return max_flow(field, host, region_vertices(grid, box), sinks);
}

FlowCheck verify_flow(const FlowResult& result, const CapacityField& field) {
  const Grid& grid = field.grid();
  FlowCheck check;
  auto fail = [&](std::string why, std::optional<VertexId> v, std::optional<EdgeId> e) {
    check.ok = false;
    check.violation = std::move(why);
    check.vertex = v;
    check.edge = e;
    return check;
  };
  if (result.flow.size() != grid.edge_count() || result.is_source.size() != grid.vertex_count() ||
      result.is_sink.size() != grid.vertex_count()) {
    return fail("result does not match the field's window", std::nullopt, std::nullopt);
  }
  const auto in_host = detail::region_mask(grid, result.host);
  for (EdgeId e = 0; e < grid.edge_count(); ++e) {
    const Capacity f = result.flow[e];
    if (f == 0) continue;
    if (!edge_in_region(grid, e, result.host)) return fail("flow on edge outside host", std::nullopt, e);
    const Capacity mag = f < 0 ? -f : f;
    if (mag > field.capacity(e)) {
      return fail("flow " + std::to_string(mag) + " exceeds capacity " +
                      std::to_string(field.capacity(e)),
                  grid.edge(e).lower, e);
    }
  }
  Capacity out_of_sources = 0;
  Capacity into_sinks = 0;
  for (VertexId v = 0; v < grid.vertex_count(); ++v) {
    if (!in_host[v]) continue;
    Capacity net_out = 0;
    grid.for_each_neighbor(v, [&](EdgeId e, VertexId w, int) {
      if (!in_host[w]) return;
      net_out += (w > v) ? result.flow[e] : -result.flow[e];
    });
    if (result.is_source[v]) {
      out_of_sources += net_out;
    } else if (result.is_sink[v]) {
      into_sinks -= net_out;
    } else if (net_out != 0) {
      return fail("conservation fails at vertex " + std::to_string(v) + " (net outflow " +
                      std::to_string(net_out) + ")",
                  v, std::nullopt);
    }
  }
  if (out_of_sources != result.value || into_sinks != result.value) {
    return fail("value " + std::to_string(result.value) + " but sources emit " +
                    std::to_string(out_of_sources) + " and sinks absorb " +
                    std::to_string(into_sinks),
                std::nullopt, std::nullopt);
  }
  return check;
}

Cutset min_cut_from_flow(const FlowResult& result, const CapacityField& field) {
  const Grid& grid = field.grid();
  Cutset cut;
  cut.host = result.host;
  cut.source = result.sources();
  cut.sink = result.sinks();
  for (VertexId v : cut.sink) {
    if (result.source_side[v]) throw ContractError("flow is not maximal: a sink is residual-reachable");
  }
  for (EdgeId e : region_edges(grid, result.host)) {
    const EdgeEnds ends = grid.edge(e);
    const bool a = result.source_side[ends.lower];
    const bool b = result.source_side[ends.upper];
    if (a == b) continue;
    const Capacity outward = a ? result.flow[e] : -result.flow[e];
    if (outward != field.capacity(e)) {
      throw ContractError("flow is not maximal: crossing edge " + std::to_string(e) +
                          " is not saturated");
    }
    cut.edges.push_back(e);
    cut.passage_time += field.capacity(e);
  }
  if (cut.passage_time != result.value) {
    throw ContractError("cut capacity " + std::to_string(cut.passage_time) +
                        " differs from flow value " + std::to_string(result.value));
  }
  return cut;
}

Cutset canonical_min_cut(const CapacityField& field, const Region& box) {
  return make_self_avoiding(min_cut_from_flow(max_flow_box(field, box), field), field);
}

}  // namespace latflow
