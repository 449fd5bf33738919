#include <cmath>

#include "doctest.h"
#include "latflow/errors.hpp"
#include "latflow/flow.hpp"

using namespace latflow;

namespace {

Region box2(int k, int m) { return build_box(2, {k}, m).region(); }

Cutset flat_cut(const Grid& g, const Region& b, int height) {
  Cutset c;
  c.host = b;
  const Faces f = faces(g, b);
  c.source = f.bottom;
  c.sink = f.top;
  for (int x = b.lo[0]; x <= b.hi[0]; ++x) c.edges.push_back(g.edge_id(Point{x, height}, 1));
  std::sort(c.edges.begin(), c.edges.end());
  return c;
}

bool drop_one_minimal(const Grid& g, const Cutset& c) {
  for (std::size_t i = 0; i < c.edges.size(); ++i) {
    std::vector<EdgeId> rest = c.edges;
    rest.erase(rest.begin() + static_cast<long>(i));
    if (is_cutset(g, rest, c.host, c.source, c.sink)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("is_cutset basics") {
  const Region b = box2(3, 3);
  const Grid g(b);
  const Faces f = faces(g, b);
  CHECK_FALSE(is_cutset(g, std::vector<EdgeId>{}, b, f.bottom, f.top));
  CHECK(is_cutset(g, region_edges(g, b), b, f.bottom, f.top));
  CHECK(is_cutset(g, flat_cut(g, b, 1)));
}

TEST_CASE("self-avoiding reduction") {
  const Region b = box2(3, 3);
  const auto field = sample_field(b, DistributionSpec::dirac(1), 1, 0);
  const Grid& g = field.grid();
  const Cutset flat = flat_cut(g, b, 1);
  const Cutset same = make_self_avoiding(flat, field);
  CHECK(same.edges == flat.edges);
  CHECK(same.self_avoiding);

  Cutset extra = flat;
  extra.edges.push_back(g.edge_id(Point{0, 2}, 0));
  std::sort(extra.edges.begin(), extra.edges.end());
  const Cutset reduced = make_self_avoiding(extra, field);
  CHECK(reduced.edges == flat.edges);
  CHECK(reduced.passage_time == 4 * field.quantum_one());

  Cutset broken = flat;
  broken.edges.pop_back();
  CHECK_THROWS_AS(make_self_avoiding(broken, field), ContractError);
}

TEST_CASE("reduction of random residual cuts is drop-one minimal") {
  for (std::uint32_t rep = 0; rep < 50; ++rep) {
    const Region b = rep % 2 ? box2(6, 5) : build_box(3, {3, 3}, 3).region();
    const auto field = sample_field(b, DistributionSpec::bernoulli(0.5, 1), 31, rep);
    const Cutset residual = min_cut_from_flow(max_flow_box(field, b), field);
    const Cutset w = make_self_avoiding(residual, field);
    CHECK(is_cutset(field.grid(), w));
    CHECK(drop_one_minimal(field.grid(), w));
    CHECK(w.passage_time <= residual.passage_time);
    CHECK(w.passage_time == passage_time(field, w.edges));
  }
}

TEST_CASE("connectivity of flat and staircase cuts") {
  const Region b = box2(6, 6);
  const auto field = sample_field(b, DistributionSpec::dirac(1), 1, 0);
  const Grid& g = field.grid();
  const auto flat = connectivity_structure(make_self_avoiding(flat_cut(g, b, 2), field), g);
  CHECK(flat.ok());
  CHECK(flat.exterior_boundary.size() == 7);
  for (VertexId v : flat.exterior_boundary) CHECK(g.point(v)[1] == 3);

  // Staircase: the source side climbs one step per column.
  Cutset stair;
  stair.host = b;
  const Faces f = faces(g, b);
  stair.source = f.bottom;
  stair.sink = f.top;
  for (int x = 0; x <= 6; ++x) {
    const int h = x < 5 ? x : 4;
    stair.edges.push_back(g.edge_id(Point{x, h}, 1));
    // Riser between column x and the taller column x+1.
    if (x < 4) stair.edges.push_back(g.edge_id(Point{x, x + 1}, 0));
  }
  std::sort(stair.edges.begin(), stair.edges.end());
  REQUIRE(is_cutset(g, stair));
  const Cutset w = make_self_avoiding(stair, field);
  const auto rep = connectivity_structure(w, g);
  CHECK(rep.ok());
  CHECK(w.edges.size() * 27 > rep.exterior_boundary.size() * 2);
}

TEST_CASE("connectivity rejects redundant cuts") {
  const Region b = box2(3, 3);
  const auto field = sample_field(b, DistributionSpec::dirac(1), 1, 0);
  Cutset c = flat_cut(field.grid(), b, 1);
  c.edges.push_back(field.grid().edge_id(Point{0, 2}, 0));
  std::sort(c.edges.begin(), c.edges.end());
  CHECK_THROWS_AS(connectivity_structure(c, field.grid()), ContractError);
}

TEST_CASE("connectivity structure on random minimal cuts") {
  for (std::uint32_t rep = 0; rep < 100; ++rep) {
    const Region b = rep % 2 ? box2(8, 8) : build_box(3, {4, 4}, 4).region();
    const auto field = sample_field(b, DistributionSpec::parse("mixture(0.45,uniform(0,1))"), 41, rep);
    const Cutset w = canonical_min_cut(field, b);
    const auto r = connectivity_structure(w, field.grid());
    CHECK(r.identity_holds);
    CHECK(r.boundary_connected);
    CHECK(r.count_bound_holds);
  }
}

TEST_CASE("size statistics") {
  const Region b = box2(2, 2);
  const auto ones = sample_field(b, DistributionSpec::dirac(1), 1, 0);
  const Cutset flat = canonical_min_cut(ones, b);
  const SizeStats s = size_stats(flat, ones, to_fixed(0.5));
  CHECK(s.n_bar == 3);
  CHECK(s.n_plus == 3);
  CHECK(s.n_minus == 0);
  CHECK(s.j == 3);

  const auto closed = sample_field(b, DistributionSpec::bernoulli(0, 1), 1, 0);
  const SizeStats z = size_stats(canonical_min_cut(closed, b), closed, to_fixed(0.5));
  CHECK(z.n_plus == 0);
  CHECK(z.n_minus == 0);
  CHECK(z.j == 0);

  for (std::uint32_t rep = 0; rep < 50; ++rep) {
    const Region r = box2(10, 10);
    const auto field = sample_field(r, DistributionSpec::parse("mixture(0.3,exponential(1))"), 2, rep);
    const Cutset w = canonical_min_cut(field, r);
    const SizeStats st = size_stats(w, field, to_fixed(1.0 / 16));
    CHECK(st.eps_bound_holds);
    CHECK(st.n_plus + st.n_minus == st.j);
    CHECK(st.j <= st.n_bar);
  }
}

TEST_CASE("balanced plane search") {
  const Region b = box2(8, 8);
  const auto ones = sample_field(b, DistributionSpec::dirac(1), 1, 0);
  const Cutset flat = canonical_min_cut(ones, b);
  const auto r = balanced_plane_search(flat, ones.grid(), b, 4.0, 1.0);
  CHECK(r.is_regular);
  REQUIRE(r.plane.has_value());
  CHECK(*r.plane == 0);
  CHECK(r.plane_trace_size == 4);
  CHECK(r.pigeonhole_ok);
}

TEST_CASE("plane search skips a congested side") {
  const Region b = box2(16, 16);
  const auto ones = sample_field(b, DistributionSpec::dirac(1), 1, 0);
  const Grid& g = ones.grid();
  Cutset c;
  c.host = b;
  const Faces f = faces(g, b);
  c.source = f.bottom;
  c.sink = f.top;
  // Column x=0 joins the source side up to height 14; elsewhere only the
  // bottom row does.
  c.edges.push_back(g.edge_id(Point{0, 14}, 1));
  for (int y = 1; y <= 14; ++y) c.edges.push_back(g.edge_id(Point{0, y}, 0));
  for (int x = 1; x <= 16; ++x) c.edges.push_back(g.edge_id(Point{x, 0}, 1));
  std::sort(c.edges.begin(), c.edges.end());
  REQUIRE(is_cutset(g, c));
  const Cutset w = make_self_avoiding(c, ones);
  REQUIRE(w.edges.size() == c.edges.size());
  const auto r = balanced_plane_search(w, g, b, 4.0, 1.0);
  REQUIRE(r.plane.has_value());
  CHECK(*r.plane == 2);
  CHECK(r.pigeonhole_ok);
  CHECK_THROWS_AS(balanced_plane_search(w, g, b, 2.0, 1.0), ContractError);
}

TEST_CASE("plane search on random minimal cuts") {
  for (std::uint32_t rep = 0; rep < 100; ++rep) {
    const Region b = box2(16, 16);
    const auto field = sample_field(b, DistributionSpec::bernoulli(0.6, 1), 52, rep);
    const Cutset w = canonical_min_cut(field, b);
    const auto reg = regularity(w, field.grid(), b, 8.0);
    if (!reg.is_regular) continue;
    const auto r = balanced_plane_search(w, field.grid(), b, 8.0, 1.0);
    CHECK(r.pigeonhole_ok);
  }
}

TEST_CASE("tail histogram") {
  const std::vector<std::int64_t> two{3, 5};
  const auto t = tail_histogram(two, 1, 0);
  for (std::size_t i = 0; i < t.n.size(); ++i) {
    if (t.n[i] == 4) CHECK(t.tail[i] == 0.5);
    if (t.n[i] <= 3) CHECK(t.tail[i] == 1.0);
    if (t.n[i] >= 6) CHECK(t.tail[i] == 0.0);
  }
  const std::vector<std::int64_t> same(10, 7);
  const auto step = tail_histogram(same, 1, 0);
  for (std::size_t i = 0; i < step.n.size(); ++i) CHECK(step.tail[i] == (step.n[i] <= 7 ? 1.0 : 0.0));
  CHECK_THROWS_AS(tail_histogram(std::vector<std::int64_t>{}, 1, 0), SpecError);

  std::vector<std::int64_t> geometric;
  for (int n = 0; n < 12; ++n) {
    for (int i = 0; i < (1 << (12 - n)); ++i) geometric.push_back(n);
  }
  const auto g = tail_histogram(geometric, 1, 0);
  for (std::size_t i = 1; i < g.tail.size(); ++i) CHECK(g.tail[i] <= g.tail[i - 1]);
  CHECK(g.slope == doctest::Approx(-std::log(2.0)).epsilon(0.05));
}

TEST_CASE("cutset json round trip") {
  const Region b = box2(4, 4);
  const auto field = sample_field(b, DistributionSpec::uniform(0, 1), 3, 0);
  const Cutset w = canonical_min_cut(field, b);
  const Cutset back = cutset_from_json(cutset_to_json(w, field.quant_bits()));
  CHECK(back.edges == w.edges);
  CHECK(back.passage_time == w.passage_time);
  CHECK(back.host == w.host);
  CHECK(back.self_avoiding);
  CHECK_THROWS_AS(cutset_from_json("{\"edges\": 3}"), SpecError);
}
