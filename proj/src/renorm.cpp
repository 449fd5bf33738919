#include "latflow/renorm.hpp"

#include <algorithm>
#include <set>

#include "graph_util.hpp"
#include "json.hpp"
#include "latflow/cluster.hpp"
#include "latflow/errors.hpp"
#include "latflow/flow.hpp"

namespace latflow {
namespace {

int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

bool aligned(const Region& r, int t) {
  for (int a = 0; a < r.d; ++a) {
    if (r.lo[a] % t != 0 || r.hi[a] % t != 0) return false;
  }
  return true;
}

// Calls f(cube id) for every cube of `cubes` containing the vertex at p.
template <class F>
void for_each_cube_containing(const Grid& cubes, const Point& p, int t, F&& f) {
  const int d = cubes.dim();
  std::array<int, kMaxDim> base{};
  std::array<int, kMaxDim> count{};
  for (int a = 0; a < d; ++a) {
    base[a] = floor_div(p[a], t);
    count[a] = (p[a] % t == 0) ? 2 : 1;
  }
  const int combos = 1 << d;
  for (int mask = 0; mask < combos; ++mask) {
    Point u{};
    bool ok = true;
    for (int a = 0; a < d && ok; ++a) {
      const int bit = (mask >> a) & 1;
      if (bit >= count[a]) ok = false;
      u[a] = base[a] - bit;
    }
    if (ok && cubes.contains(u)) f(cubes.vertex_id(u));
  }
}

// Effective openness with the box's own edges forced open.
struct Openness {
  const CapacityField& field;
  const Region* box;
  bool operator()(EdgeId e) const {
    if (field.capacity(e) > 0) return true;
    if (box == nullptr) return false;
    const Grid& g = field.grid();
    const EdgeEnds ends = g.edge(e);
    return box->contains(g.point(ends.lower)) && box->contains(g.point(ends.upper));
  }
};

std::vector<CubeIndex> to_points(const Grid& cubes, const std::vector<std::uint8_t>& mask) {
  std::vector<CubeIndex> out;
  for (std::size_t c = 0; c < mask.size(); ++c) {
    if (mask[c]) out.push_back(cubes.point(static_cast<VertexId>(c)));
  }
  return out;
}

std::vector<VertexId> border_cubes(const Grid& cubes) {
  std::vector<VertexId> out;
  for (VertexId c = 0; c < cubes.vertex_count(); ++c) {
    if (cubes.on_boundary(c)) out.push_back(c);
  }
  return out;
}

}  // namespace

Region cube_region(const CubeIndex& u, int d, int t) {
  Region r;
  r.d = d;
  for (int a = 0; a < d; ++a) {
    r.lo[a] = t * u[a];
    r.hi[a] = t * u[a] + t;
  }
  return r;
}

Region cube3_region(const CubeIndex& u, int d, int t) {
  Region r;
  r.d = d;
  for (int a = 0; a < d; ++a) {
    r.lo[a] = t * (u[a] - 1);
    r.hi[a] = t * (u[a] + 2);
  }
  return r;
}

Region renorm_window(const Region& box, int t, int margin) {
  if (t < 1) throw SpecError("cube scale must be positive");
  return box.expanded(((margin + t - 1) / t) * t);
}

std::size_t RenormDecomposition::live_ponds() const {
  return static_cast<std::size_t>(std::count_if(ponds.begin(), ponds.end(), [](const Pond& p) { return p.live; }));
}

std::size_t RenormDecomposition::dead_ponds() const { return ponds.size() - live_ponds(); }

bool RenormDecomposition::in_gamma(const CubeIndex& u) const {
  return std::binary_search(gamma.begin(), gamma.end(), u);
}

std::string RenormDecomposition::summary_json() const {
  std::size_t counts[5] = {0, 0, 0, 0, 0};
  for (CubeClass c : cube_class) ++counts[static_cast<int>(c)];
  nlohmann::json j;
  j["t"] = t;
  j["cubes"] = {{"other", counts[0]},     {"cluster", counts[1]}, {"boundary", counts[2]},
                {"exterior", counts[3]},  {"pond", counts[4]}};
  j["ponds"] = ponds.size();
  j["live_ponds"] = live_ponds();
  j["dead_ponds"] = dead_ponds();
  j["s_cubes"] = s_cubes.size();
  j["gamma"] = gamma.size();
  j["cluster_size"] = cluster_size;
  j["checks"] = {{"gamma_in_boundary", gamma_in_boundary},
                 {"gamma_connected", gamma_connected},
                 {"ponds_avoid_cluster", ponds_avoid_cluster},
                 {"s_avoids_cluster", s_avoids_cluster},
                 {"cubic_exterior_contained", cubic_exterior_contained}};
  return j.dump();
}

RenormDecomposition decompose(const CapacityField& field, const Region& box, int t,
                              const RenormOptions& options) {
  const Grid& g = field.grid();
  const int d = g.dim();
  if (t < 1) throw SpecError("cube scale must be positive");
  if (!aligned(box, t)) throw SpecError("box " + box.to_string() + " is not aligned to scale " + std::to_string(t));
  if (!aligned(g.region(), t)) {
    throw SpecError("window " + g.region().to_string() + " is not aligned to scale " + std::to_string(t));
  }

  RenormDecomposition out;
  out.t = t;
  out.box = box;
  out.cube_range.d = d;
  for (int a = 0; a < d; ++a) {
    out.cube_range.lo[a] = g.region().lo[a] / t;
    out.cube_range.hi[a] = g.region().hi[a] / t - 1;
  }
  const Grid cg(out.cube_range);
  const std::size_t nc = cg.vertex_count();
  const auto offsets = detail::ld_offsets(d);
  const Openness open{field, &box};

  // The cluster C and its vertex boundaries.
  const OpenCluster cluster = open_cluster(field, box, true);
  if (cluster.touches_window_boundary) {
    throw PreconditionError("the box's open cluster reaches the window boundary");
  }
  const auto& in_c = cluster.member;
  out.cluster_size = cluster.vertices.size();
  std::vector<std::uint8_t> in_dc(g.vertex_count(), 0);   // dC
  std::vector<std::uint8_t> in_dci(g.vertex_count(), 0);  // d_i C
  for (VertexId v : cluster.vertices) {
    detail::for_each_ld_neighbor(g, offsets, v, [&](VertexId w) {
      if (!in_c[w]) {
        in_dc[w] = 1;
        in_dci[v] = 1;
      }
    });
  }

  // Cube-level marks.
  std::vector<std::uint8_t> has_c(nc, 0), has_bnd(nc, 0), has_c_or_dc(nc, 0);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (!in_c[v] && !in_dc[v]) continue;
    for_each_cube_containing(cg, g.point(v), t, [&](VertexId c) {
      has_c_or_dc[c] = 1;
      if (in_c[v]) has_c[c] = 1;
      if (in_dc[v] || in_dci[v]) has_bnd[c] = 1;
    });
  }
  const std::vector<VertexId> border = border_cubes(cg);
  for (VertexId c : border) {
    if (has_c_or_dc[c]) {
      throw PreconditionError("cluster boundary reaches the outer cube layer; enlarge the window");
    }
  }
  const auto& dct = has_bnd;

  // Exterior cube boundary: cubes holding a vertex of the exterior vertex
  // boundary of C. Every edge between two such vertices lies in a cube that
  // holds both, so the cube set is Z^d-connected.
  std::vector<VertexId> window_border;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (g.on_boundary(v)) window_border.push_back(v);
  }
  const auto off_cluster = detail::reach(g, window_border, [](EdgeId) { return true; },
                                         [&](VertexId v) { return !in_c[v]; });
  std::vector<std::uint8_t> ext(nc, 0);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (in_dc[v] && off_cluster[v]) for_each_cube_containing(cg, g.point(v), t, [&](VertexId c) { ext[c] = 1; });
  }
  // The cubic form: dC_t cubes next to the cubes reachable from the border
  // without entering dC_t. Recorded for comparison only.
  const auto outside = detail::reach(cg, border, [](EdgeId) { return true; },
                                     [&](VertexId c) { return !dct[c]; });
  out.cubic_exterior_contained = true;
  for (VertexId c = 0; c < nc; ++c) {
    if (!dct[c] || ext[c]) continue;
    cg.for_each_neighbor(c, [&](EdgeId, VertexId w, int) {
      if (outside[w]) out.cubic_exterior_contained = false;
    });
  }
  const auto escapes = detail::reach(cg, border, [](EdgeId) { return true; },
                                     [&](VertexId c) { return !ext[c]; });
  std::vector<std::uint8_t> inside(nc, 0);  // L_t
  for (VertexId c = 0; c < nc; ++c) inside[c] = !escapes[c] && !ext[c];

  // Ponds: L^d-clusters of inside cubes meeting neither C nor dC.
  std::vector<std::uint8_t> q(nc, 0);
  for (VertexId c = 0; c < nc; ++c) q[c] = inside[c] && !has_c_or_dc[c];
  std::vector<int> pond_of(nc, -1);
  std::vector<std::vector<VertexId>> pond_cubes;
  for (VertexId c = 0; c < nc; ++c) {
    if (!q[c] || pond_of[c] >= 0) continue;
    const int id = static_cast<int>(pond_cubes.size());
    pond_cubes.emplace_back();
    std::vector<VertexId> queue{c};
    pond_of[c] = id;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      pond_cubes[id].push_back(queue[h]);
      detail::for_each_ld_neighbor(cg, offsets, queue[h], [&](VertexId w) {
        if (q[w] && pond_of[w] < 0) {
          pond_of[w] = id;
          queue.push_back(w);
        }
      });
    }
  }
  const int np = static_cast<int>(pond_cubes.size());
  std::vector<std::vector<std::uint8_t>> pond_ext(np);
  for (int i = 0; i < np; ++i) {
    const auto free = detail::reach(cg, border, [](EdgeId) { return true; },
                                    [&](VertexId c) { return pond_of[c] != i; });
    pond_ext[i].assign(nc, 0);
    // A pond can touch the unbounded region at a corner; those cubes are
    // left out so the boundary stays inside L_t and its exterior ring.
    for (VertexId c : pond_cubes[i]) {
      detail::for_each_ld_neighbor(cg, offsets, c, [&](VertexId w) {
        if (pond_of[w] != i && free[w] && (inside[w] || ext[w])) pond_ext[i][w] = 1;
      });
    }
  }

  // Vertex sets of ponds, their inside boundaries and interiors.
  std::vector<int> pond_v(g.vertex_count(), -1);
  for (int i = 0; i < np; ++i) {
    for (VertexId c : pond_cubes[i]) {
      for (VertexId v : region_vertices(g, cube_region(cg.point(c), d, t))) pond_v[v] = i;
    }
  }
  std::vector<std::uint8_t> pond_edge(g.vertex_count(), 0);  // inside boundary of its pond
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (pond_v[v] < 0) continue;
    detail::for_each_ld_neighbor(g, offsets, v, [&](VertexId w) {
      if (pond_v[w] != pond_v[v]) pond_edge[v] = 1;
    });
  }

  // Surface U of the exterior cube boundary.
  std::vector<std::uint8_t> in_e(g.vertex_count(), 0);
  std::vector<std::uint8_t> in_lbar(g.vertex_count(), 0);
  for (VertexId c = 0; c < nc; ++c) {
    if (!ext[c] && !inside[c]) continue;
    for (VertexId v : region_vertices(g, cube_region(cg.point(c), d, t))) {
      in_lbar[v] = 1;
      if (ext[c]) in_e[v] = 1;
    }
  }
  const auto far = detail::reach(g, window_border, [](EdgeId) { return true; },
                                 [&](VertexId v) { return !in_e[v]; });
  std::vector<std::uint8_t> in_u(g.vertex_count(), 0);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (!in_e[v]) continue;
    g.for_each_neighbor(v, [&](EdgeId, VertexId w, int) {
      if (far[w]) in_u[v] = 1;
    });
  }

  // Open clusters D of L-bar minus pond interiors.
  std::vector<std::uint8_t> in_vd(g.vertex_count(), 0);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    in_vd[v] = in_lbar[v] && (pond_v[v] < 0 || pond_edge[v]);
  }
  std::vector<int> label(g.vertex_count(), -1);
  std::vector<std::vector<VertexId>> clusters;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (!in_vd[v] || label[v] >= 0) continue;
    const int id = static_cast<int>(clusters.size());
    clusters.emplace_back();
    std::vector<VertexId> queue{v};
    label[v] = id;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      clusters[id].push_back(queue[h]);
      g.for_each_neighbor(queue[h], [&](EdgeId e, VertexId w, int) {
        if (in_vd[w] && label[w] < 0 && open(e)) {
          label[w] = id;
          queue.push_back(w);
        }
      });
    }
  }
  const std::size_t nd = clusters.size();
  std::vector<std::uint8_t> d_touches_u(nd, 0), kept(nd, 0);
  std::vector<std::vector<int>> d_ponds(nd);
  for (std::size_t i = 0; i < nd; ++i) {
    std::set<int> ps;
    for (VertexId v : clusters[i]) {
      if (in_u[v]) d_touches_u[i] = 1;
      if (pond_v[v] >= 0 && pond_edge[v]) ps.insert(pond_v[v]);
    }
    d_ponds[i].assign(ps.begin(), ps.end());
    kept[i] = d_touches_u[i] || !ps.empty();
  }

  // Components of ponds joined through shared clusters; good ones touch U.
  detail::UnionFind uf(static_cast<std::size_t>(np));
  for (std::size_t i = 0; i < nd; ++i) {
    for (std::size_t j = 1; j < d_ponds[i].size(); ++j) uf.unite(d_ponds[i][0], d_ponds[i][j]);
  }
  std::vector<std::uint8_t> good(static_cast<std::size_t>(np), 0);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (pond_v[v] >= 0 && in_u[v]) good[uf.find(pond_v[v])] = 1;
  }
  for (std::size_t i = 0; i < nd; ++i) {
    if (d_touches_u[i] && !d_ponds[i].empty()) good[uf.find(d_ponds[i][0])] = 1;
  }
  std::vector<std::uint8_t> live(static_cast<std::size_t>(np), 0);
  for (int i = 0; i < np; ++i) live[i] = good[uf.find(i)];

  // S' and S (S drops clusters whose ponds all sit in bad components).
  std::vector<std::uint8_t> in_s1(g.vertex_count(), 0), in_s(g.vertex_count(), 0);
  for (std::size_t i = 0; i < nd; ++i) {
    if (!kept[i]) continue;
    const bool bad = !d_ponds[i].empty() && !live[d_ponds[i][0]];
    for (VertexId v : clusters[i]) {
      in_s1[v] = 1;
      if (!bad) {
        in_s[v] = 1;
        ++out.s_vertices;
      }
    }
  }

  std::vector<std::uint8_t> excluded = ext;
  for (int i = 0; i < np; ++i) {
    if (options.s_rule == SCubeRule::kLivePonds && !live[i]) continue;
    for (VertexId c = 0; c < nc; ++c) excluded[c] |= pond_ext[i][c];
  }
  std::vector<std::uint8_t> s_cube(nc, 0);
  for (VertexId c = 0; c < nc; ++c) {
    if (!inside[c] || q[c] || excluded[c]) continue;
    bool s1 = false;
    bool s = false;
    for (VertexId v : region_vertices(g, cube_region(cg.point(c), d, t))) {
      s1 = s1 || in_s1[v];
      s = s || in_s[v];
    }
    s_cube[c] = s1 && s;
  }

  std::vector<std::uint8_t> gamma = ext;
  for (VertexId c = 0; c < nc; ++c) gamma[c] |= s_cube[c];
  for (int i = 0; i < np; ++i) {
    if (!live[i]) continue;
    for (VertexId c = 0; c < nc; ++c) gamma[c] |= pond_ext[i][c];
  }

  // Assemble the result.
  out.cube_class.assign(nc, CubeClass::kOther);
  for (VertexId c = 0; c < nc; ++c) {
    if (q[c]) out.cube_class[c] = CubeClass::kPond;
    else if (ext[c]) out.cube_class[c] = CubeClass::kExterior;
    else if (dct[c]) out.cube_class[c] = CubeClass::kBoundary;
    else if (has_c[c]) out.cube_class[c] = CubeClass::kCluster;
  }
  for (int i = 0; i < np; ++i) {
    Pond p;
    for (VertexId c : pond_cubes[i]) p.cubes.push_back(cg.point(c));
    std::sort(p.cubes.begin(), p.cubes.end());
    p.exterior = to_points(cg, pond_ext[i]);
    p.live = live[i];
    out.ponds.push_back(std::move(p));
  }
  out.boundary_cubes = to_points(cg, dct);
  out.exterior_cubes = to_points(cg, ext);
  out.s_cubes = to_points(cg, s_cube);
  out.gamma = to_points(cg, gamma);
  std::sort(out.gamma.begin(), out.gamma.end());

  out.gamma_in_boundary = true;
  std::vector<VertexId> gamma_ids;
  for (VertexId c = 0; c < nc; ++c) {
    if (!gamma[c]) continue;
    gamma_ids.push_back(c);
    if (!dct[c]) out.gamma_in_boundary = false;
  }
  if (gamma_ids.empty()) {
    out.gamma_connected = true;
  } else {
    const VertexId first = gamma_ids.front();
    const auto joined = detail::reach(cg, std::span<const VertexId>(&first, 1), [](EdgeId) { return true; },
                                      [&](VertexId c) { return gamma[c] != 0; });
    out.gamma_connected = std::all_of(gamma_ids.begin(), gamma_ids.end(), [&](VertexId c) { return joined[c]; });
  }
  out.ponds_avoid_cluster = true;
  out.s_avoids_cluster = true;
  for (int i = 0; i < np; ++i) {
    for (VertexId c : pond_cubes[i]) {
      for (VertexId v : region_vertices(g, cube_region(cg.point(c), d, t))) {
        if (in_c[v] || in_dc[v]) out.ponds_avoid_cluster = false;
        if (live[i] && in_c[v]) out.s_avoids_cluster = false;
      }
    }
  }
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (in_s[v] && in_c[v]) out.s_avoids_cluster = false;
  }
  return out;
}

bool verify_gamma_zero_cutset(const RenormDecomposition& decomp, const CapacityField& field) {
  const Grid& g = field.grid();
  const int d = g.dim();
  const Openness open{field, &decomp.box};
  std::vector<std::uint8_t> blocked(g.edge_count(), 0);
  for (const CubeIndex& u : decomp.gamma) {
    for (EdgeId e : region_edges(g, cube_region(u, d, decomp.t))) {
      if (!open(e)) blocked[e] = 1;
    }
  }
  const auto seen = detail::reach(g, region_vertices(g, decomp.box), [&](EdgeId e) { return !blocked[e]; },
                                  [](VertexId) { return true; });
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (seen[v] && g.on_boundary(v)) return false;
  }
  return true;
}

CubePropertyDetail cube_property_detail(const CapacityField& field, const CubeIndex& u, int t,
                                        const Region* open_box) {
  const Grid& g = field.grid();
  const int d = g.dim();
  const Region big = cube3_region(u, d, t);
  if (!g.region().contains(big)) {
    throw RangeError("3t-cube " + big.to_string() + " leaves the window " + g.region().to_string());
  }
  const Openness open{field, open_box};
  const Grid lg(big);
  auto strictly_inside = [&](const Point& p) {
    for (int a = 0; a < d; ++a) {
      if (p[a] == big.lo[a] || p[a] == big.hi[a]) return false;
    }
    return true;
  };
  // Open edges of the 3t-cube with an endpoint strictly inside it, in local ids.
  auto local_field = CapacityField::constant(big, 0, 0);
  detail::UnionFind uf(lg.vertex_count());
  for (EdgeId le = 0; le < lg.edge_count(); ++le) {
    const EdgeEnds ends = lg.edge(le);
    const Point p = lg.point(ends.lower);
    const Point q = lg.point(ends.upper);
    if (!strictly_inside(p) && !strictly_inside(q)) continue;
    if (!open(g.edge_id(p, ends.axis))) continue;
    local_field.set(le, 1);
    uf.unite(ends.lower, ends.upper);
  }

  // Surfaces of the 3^d sub-cubes: for each axis, 4 positions times 3^(d-1) cells.
  struct Surface {
    std::vector<std::size_t> roots;
    bool central = false;
    bool outer = false;
  };
  std::vector<Surface> surfaces;
  int cells = 1;
  for (int a = 1; a < d; ++a) cells *= 3;
  for (int axis = 0; axis < d; ++axis) {
    for (int pos = 0; pos < 4; ++pos) {
      for (int cell = 0; cell < cells; ++cell) {
        Region face;
        face.d = d;
        int rest = cell;
        bool centred = true;
        for (int a = 0; a < d; ++a) {
          if (a == axis) {
            face.lo[a] = face.hi[a] = big.lo[a] + pos * t;
            continue;
          }
          const int c = rest % 3;
          rest /= 3;
          centred = centred && c == 1;
          face.lo[a] = big.lo[a] + c * t;
          face.hi[a] = face.lo[a] + t;
        }
        Surface s;
        s.central = centred && (pos == 1 || pos == 2);
        s.outer = pos == 0 || pos == 3;
        for (VertexId v : region_vertices(lg, face)) s.roots.push_back(uf.find(v));
        std::sort(s.roots.begin(), s.roots.end());
        s.roots.erase(std::unique(s.roots.begin(), s.roots.end()), s.roots.end());
        surfaces.push_back(std::move(s));
      }
    }
  }

  CubePropertyDetail out;
  for (std::size_t i = 0; i < surfaces.size() && !out.blocked_pair; ++i) {
    for (std::size_t j = i + 1; j < surfaces.size(); ++j) {
      std::vector<std::size_t> common;
      std::set_intersection(surfaces[i].roots.begin(), surfaces[i].roots.end(), surfaces[j].roots.begin(),
                            surfaces[j].roots.end(), std::back_inserter(common));
      if (common.empty()) {
        out.blocked_pair = true;
        break;
      }
    }
  }
  // Clusters running from a central surface to the outer boundary.
  std::set<std::size_t> central_roots, outer_roots;
  for (const Surface& s : surfaces) {
    if (s.central) central_roots.insert(s.roots.begin(), s.roots.end());
    if (s.outer) outer_roots.insert(s.roots.begin(), s.roots.end());
  }
  for (std::size_t r : central_roots) {
    if (!outer_roots.count(r)) continue;
    for (const Surface& s : surfaces) {
      if (!std::binary_search(s.roots.begin(), s.roots.end(), r)) {
        out.blocked_escape = true;
        break;
      }
    }
    if (out.blocked_escape) break;
  }
  out.blocked = out.blocked_pair || out.blocked_escape;

  std::vector<VertexId> sources = region_vertices(lg, cube_region(u, d, t));
  std::vector<VertexId> sinks;
  for (VertexId v = 0; v < lg.vertex_count(); ++v) {
    if (lg.on_boundary(v)) sinks.push_back(v);
  }
  out.disjoint = max_flow(local_field, big, sources, sinks).value >= 2;
  out.verdict = out.blocked ? CubeVerdict::kBlocked : (out.disjoint ? CubeVerdict::kDisjoint : CubeVerdict::kNeither);
  return out;
}

CubeVerdict cube_property(const CapacityField& field, const CubeIndex& u, int t, const Region* open_box) {
  return cube_property_detail(field, u, t, open_box).verdict;
}

CubePropertyReport verify_blocked_or_disjoint(const RenormDecomposition& decomp, const CapacityField& field) {
  CubePropertyReport r;
  for (const CubeIndex& u : decomp.gamma) {
    const auto detail = cube_property_detail(field, u, decomp.t, &decomp.box);
    if (detail.blocked) ++r.blocked;
    if (detail.disjoint) ++r.disjoint;
    if (!detail.blocked && !detail.disjoint) {
      r.ok = false;
      r.failures.push_back(u);
    }
  }
  return r;
}

std::vector<CubeIndex> disjoint_3t_packing(const std::vector<CubeIndex>& cubes, int d) {
  std::vector<CubeIndex> sorted = cubes;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  auto residue = [&](const CubeIndex& u) {
    int r = 0;
    for (int a = 0; a < d; ++a) r = r * 3 + ((u[a] % 3) + 3) % 3;
    return r;
  };
  int classes = 1;
  for (int a = 0; a < d; ++a) classes *= 3;
  std::vector<std::size_t> size(static_cast<std::size_t>(classes), 0);
  for (const CubeIndex& u : sorted) ++size[residue(u)];
  const int best = static_cast<int>(std::max_element(size.begin(), size.end()) - size.begin());
  std::vector<CubeIndex> packed;
  for (const CubeIndex& u : sorted) {
    if (residue(u) == best) packed.push_back(u);
  }
  auto far_apart = [&](const CubeIndex& a, const CubeIndex& b) {
    for (int i = 0; i < d; ++i) {
      if (std::abs(a[i] - b[i]) >= 3) return true;
    }
    return false;
  };
  for (const CubeIndex& u : sorted) {
    if (residue(u) == best) continue;
    if (std::all_of(packed.begin(), packed.end(), [&](const CubeIndex& p) { return far_apart(u, p); })) {
      packed.push_back(u);
    }
  }
  std::sort(packed.begin(), packed.end());
  return packed;
}

}  // namespace latflow
