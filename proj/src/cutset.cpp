#include "latflow/cutset.hpp"

#include <algorithm>
#include <cmath>

#include "graph_util.hpp"
#include "json.hpp"
#include "latflow/errors.hpp"

namespace latflow {
namespace {

std::vector<std::uint8_t> edge_mask(const Grid& grid, std::span<const EdgeId> edges) {
  std::vector<std::uint8_t> mask(grid.edge_count(), 0);
  for (EdgeId e : edges) mask[e] = 1;
  return mask;
}

// Extends `seen` from `start` across unblocked edges inside the host.
void grow(const Grid& grid, const std::vector<std::uint8_t>& in_host,
          const std::vector<std::uint8_t>& blocked, std::vector<std::uint8_t>& seen,
          VertexId start) {
  if (seen[start] || !in_host[start]) return;
  seen[start] = 1;
  std::vector<VertexId> queue{start};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    grid.for_each_neighbor(queue[head], [&](EdgeId e, VertexId w, int) {
      if (!seen[w] && in_host[w] && !blocked[e]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    });
  }
}

}  // namespace

std::size_t Cutset::vertex_count(const Grid& grid) const {
  std::vector<VertexId> vs;
  vs.reserve(edges.size() * 2);
  for (EdgeId e : edges) {
    const EdgeEnds ends = grid.edge(e);
    vs.push_back(ends.lower);
    vs.push_back(ends.upper);
  }
  std::sort(vs.begin(), vs.end());
  return static_cast<std::size_t>(std::unique(vs.begin(), vs.end()) - vs.begin());
}

bool is_cutset(const Grid& grid, std::span<const EdgeId> edges, const Region& host,
               std::span<const VertexId> source, std::span<const VertexId> sink) {
  const auto in_host = detail::region_mask(grid, host);
  const auto blocked = edge_mask(grid, edges);
  const auto seen = detail::reach(
      grid, source, [&](EdgeId e) { return !blocked[e]; }, [&](VertexId v) { return in_host[v] != 0; });
  for (VertexId t : sink) {
    if (seen[t]) return false;
  }
  return true;
}

bool is_cutset(const Grid& grid, const Cutset& cut) {
  return is_cutset(grid, cut.edges, cut.host, cut.source, cut.sink);
}

Capacity passage_time(const CapacityField& field, std::span<const EdgeId> edges) {
  Capacity total = 0;
  for (EdgeId e : edges) total += field.capacity(e);
  return total;
}

Cutset make_self_avoiding(const Cutset& cut, const CapacityField& field) {
  const Grid& grid = field.grid();
  const auto in_host = detail::region_mask(grid, cut.host);
  auto blocked = edge_mask(grid, cut.edges);
  std::vector<std::uint8_t> from_s(grid.vertex_count(), 0);
  std::vector<std::uint8_t> from_t(grid.vertex_count(), 0);
  for (VertexId s : cut.source) grow(grid, in_host, blocked, from_s, s);
  for (VertexId t : cut.sink) {
    if (from_s[t]) throw ContractError("input edge set does not separate source from sink");
    grow(grid, in_host, blocked, from_t, t);
  }

  std::vector<EdgeId> order = cut.edges;
  std::sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
    const Capacity ca = field.capacity(a);
    const Capacity cb = field.capacity(b);
    return ca != cb ? ca > cb : a > b;
  });
  // An edge is essential iff it joins the source component to the sink
  // component. Removing a redundant edge only enlarges the two components,
  // so an edge found essential stays essential and one pass suffices.
  std::vector<EdgeId> kept;
  for (EdgeId e : order) {
    const EdgeEnds ends = grid.edge(e);
    const VertexId x = ends.lower;
    const VertexId y = ends.upper;
    if ((from_s[x] && from_t[y]) || (from_s[y] && from_t[x])) {
      kept.push_back(e);
      continue;
    }
    blocked[e] = 0;
    if (from_s[x] || from_s[y]) {
      grow(grid, in_host, blocked, from_s, from_s[x] ? y : x);
    }
    if (from_t[x] || from_t[y]) {
      grow(grid, in_host, blocked, from_t, from_t[x] ? y : x);
    }
  }
  Cutset out = cut;
  std::sort(kept.begin(), kept.end());
  out.edges = std::move(kept);
  out.passage_time = passage_time(field, out.edges);
  out.self_avoiding = true;
  return out;
}

ConnectivityReport connectivity_structure(const Cutset& cut, const Grid& grid) {
  const int d = grid.dim();
  const auto in_host = detail::region_mask(grid, cut.host);
  const auto blocked = edge_mask(grid, cut.edges);
  auto host_ok = [&](VertexId v) { return in_host[v] != 0; };
  const auto v_hat = detail::reach(grid, cut.source, [&](EdgeId e) { return !blocked[e]; }, host_ok);
  const auto from_t = detail::reach(grid, cut.sink, [&](EdgeId e) { return !blocked[e]; }, host_ok);
  for (EdgeId e : cut.edges) {
    const EdgeEnds ends = grid.edge(e);
    const bool ok = (v_hat[ends.lower] && from_t[ends.upper]) || (v_hat[ends.upper] && from_t[ends.lower]);
    if (!ok) throw ContractError("cutset is not self-avoiding: edge " + std::to_string(e) + " is redundant");
  }

  ConnectivityReport report;
  for (std::size_t v = 0; v < v_hat.size(); ++v) report.reachable_vertices += v_hat[v];

  // Vertices outside V^ joined to the sink through vertices outside V^.
  const auto outside = detail::reach(
      grid, cut.sink, [](EdgeId) { return true; },
      [&](VertexId v) { return in_host[v] && !v_hat[v]; });
  const auto offsets = detail::ld_offsets(d);
  for (VertexId v = 0; v < grid.vertex_count(); ++v) {
    if (!outside[v]) continue;
    bool touches = false;
    detail::for_each_ld_neighbor(grid, offsets, v, [&](VertexId w) { touches = touches || v_hat[w]; });
    if (touches) report.exterior_boundary.push_back(v);
  }

  std::vector<EdgeId> delta_e;
  for (EdgeId e : region_edges(grid, cut.host)) {
    const EdgeEnds ends = grid.edge(e);
    if ((v_hat[ends.lower] && outside[ends.upper]) || (v_hat[ends.upper] && outside[ends.lower])) {
      delta_e.push_back(e);
    }
  }
  report.delta_e_size = delta_e.size();
  std::vector<EdgeId> sorted = cut.edges;
  std::sort(sorted.begin(), sorted.end());
  report.identity_holds = delta_e == sorted;
  report.boundary_connected = detail::ld_connected(grid, report.exterior_boundary);
  std::uint64_t scale = 1;
  for (int i = 0; i <= d; ++i) scale *= 3;
  report.count_bound_holds = cut.edges.size() * scale >= report.exterior_boundary.size();
  return report;
}

SizeStats size_stats(const Cutset& cut, const CapacityField& field, Capacity epsilon) {
  SizeStats s;
  s.n_bar = cut.edges.size();
  Capacity tau = 0;
  for (EdgeId e : cut.edges) {
    const Capacity c = field.capacity(e);
    tau += c;
    switch (classify_capacity(c, epsilon)) {
      case EdgeClass::kClosed:
        break;
      case EdgeClass::kEpsMinus:
        ++s.n_minus;
        break;
      case EdgeClass::kEpsPlus:
        ++s.n_plus;
        break;
    }
  }
  s.j = s.n_plus + s.n_minus;
  s.eps_bound_holds = static_cast<long double>(epsilon) * static_cast<long double>(s.n_plus) <=
                      static_cast<long double>(tau);
  return s;
}

RegularityReport regularity(const Cutset& cut, const Grid& grid, const Region& box,
                            double beta_bar) {
  RegularityReport r;
  double volume = 1.0;
  for (int a = 0; a + 1 < box.d; ++a) volume *= box.extent(a);
  r.vertex_count = cut.vertex_count(grid);
  r.bound = beta_bar * volume;
  r.is_regular = static_cast<double>(r.vertex_count) <= r.bound;
  return r;
}

RegularityReport balanced_plane_search(const Cutset& cut, const Grid& grid, const Region& box,
                                       double beta_bar, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw SpecError("delta must lie in (0,1]");
  RegularityReport r = regularity(cut, grid, box, beta_bar);
  if (!r.is_regular) {
    throw ContractError("cutset is not regular: " + std::to_string(r.vertex_count) +
                        " vertices exceed " + std::to_string(r.bound));
  }
  const int k1 = box.extent(0);
  double rest = 1.0;
  for (int a = 1; a + 1 < box.d; ++a) rest *= box.extent(a);
  r.trace_bound = beta_bar * std::pow(static_cast<double>(k1), delta / 2.0) * rest;

  // Cutset vertices counted per x_1 offset from the low side.
  std::vector<std::vector<VertexId>> on_plane(static_cast<std::size_t>(k1) + 1);
  for (EdgeId e : cut.edges) {
    const EdgeEnds ends = grid.edge(e);
    for (VertexId v : {ends.lower, ends.upper}) {
      const int off = grid.point(v)[0] - box.lo[0];
      if (off >= 0 && off <= k1) on_plane[off].push_back(v);
    }
  }
  for (auto& vs : on_plane) {
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  }
  for (int l = 0; 2 * l <= k1; ++l) {
    std::size_t trace = on_plane[l].size();
    if (k1 - l != l) trace += on_plane[k1 - l].size();
    if (static_cast<double>(trace) <= r.trace_bound) {
      r.plane = l;
      r.plane_trace_size = trace;
      r.pigeonhole_ok = l <= std::pow(static_cast<double>(k1), 1.0 - delta / 2.0) + 1e-9;
      return r;
    }
  }
  throw PropertyViolation("no plane pair meets the trace bound " + std::to_string(r.trace_bound));
}

TailReport tail_histogram(std::span<const std::int64_t> samples, std::int64_t bin_width,
                          double fit_from) {
  if (samples.empty()) throw SpecError("tail_histogram needs at least one sample");
  if (bin_width < 1) throw SpecError("bin width must be positive");
  std::vector<std::int64_t> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto lo = sorted.front();
  const auto hi = sorted.back();
  std::int64_t start = lo >= 0 ? (lo / bin_width) * bin_width : -((-lo + bin_width - 1) / bin_width) * bin_width;

  TailReport rep;
  rep.fit_from = fit_from;
  const double total = static_cast<double>(sorted.size());
  for (std::int64_t n = start; n <= hi + bin_width; n += bin_width) {
    const auto first = std::lower_bound(sorted.begin(), sorted.end(), n);
    rep.n.push_back(n);
    rep.tail.push_back(static_cast<double>(sorted.end() - first) / total);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < rep.n.size(); ++i) {
    if (static_cast<double>(rep.n[i]) < fit_from || rep.tail[i] <= 0.0) continue;
    const double x = static_cast<double>(rep.n[i]);
    const double y = std::log(rep.tail[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  rep.fit_points = count;
  if (count >= 2) {
    const double denom = count * sxx - sx * sx;
    rep.slope = denom != 0.0 ? (count * sxy - sx * sy) / denom : 0.0;
  } else {
    rep.slope = std::nan("");
  }
  return rep;
}

std::string cutset_to_json(const Cutset& cut, int quant_bits) {
  nlohmann::json j;
  j["host"] = {{"d", cut.host.d},
               {"lo", std::vector<int>(cut.host.lo.begin(), cut.host.lo.begin() + cut.host.d)},
               {"hi", std::vector<int>(cut.host.hi.begin(), cut.host.hi.begin() + cut.host.d)}};
  j["source"] = cut.source;
  j["sink"] = cut.sink;
  j["edges"] = cut.edges;
  j["passage_time"] = cut.passage_time;
  j["quant_bits"] = quant_bits;
  j["self_avoiding"] = cut.self_avoiding;
  return j.dump();
}

Cutset cutset_from_json(const std::string& text) {
  Cutset cut;
  try {
    const auto j = nlohmann::json::parse(text);
    cut.host.d = j.at("host").at("d").get<int>();
    const auto lo = j.at("host").at("lo").get<std::vector<int>>();
    const auto hi = j.at("host").at("hi").get<std::vector<int>>();
    if (cut.host.d < 1 || cut.host.d > kMaxDim || static_cast<int>(lo.size()) != cut.host.d ||
        static_cast<int>(hi.size()) != cut.host.d) {
      throw SpecError("cutset record has a malformed host");
    }
    std::copy(lo.begin(), lo.end(), cut.host.lo.begin());
    std::copy(hi.begin(), hi.end(), cut.host.hi.begin());
    cut.source = j.at("source").get<std::vector<VertexId>>();
    cut.sink = j.at("sink").get<std::vector<VertexId>>();
    cut.edges = j.at("edges").get<std::vector<EdgeId>>();
    cut.passage_time = j.at("passage_time").get<Capacity>();
    cut.self_avoiding = j.at("self_avoiding").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("bad cutset record: ") + e.what());
  }
  return cut;
}

}  // namespace latflow
