#include "doctest.h"
#include "latflow/cluster.hpp"
#include "latflow/errors.hpp"
#include "latflow/flow.hpp"

using namespace latflow;

namespace {

Region cube(int d, int r) {
  Region w;
  w.d = d;
  for (int a = 0; a < d; ++a) {
    w.lo[a] = -r;
    w.hi[a] = r;
  }
  return w;
}

OpenCluster cluster_at(const CapacityField& f, const Point& p) {
  const VertexId v = f.grid().vertex_id(p);
  return open_cluster(f, std::span<const VertexId>(&v, 1), false);
}

}  // namespace

TEST_CASE("isolated vertex has four exterior boundary edges") {
  const auto f = CapacityField::constant(cube(2, 3), 0);
  const auto c = cluster_at(f, Point{});
  REQUIRE(c.vertices.size() == 1);
  const auto b = exterior_boundary(c, f.grid());
  CHECK(b.delta_e.size() == 4);
  CHECK(b.delta.size() == 4);
  CHECK(b.partial.size() == 8);
  CHECK(b.partial_e.size() == 8);
  CHECK(b.partial_i.size() == 1);
}

TEST_CASE("open pair has six exterior boundary edges") {
  auto f = CapacityField::constant(cube(2, 3), 0);
  f.set(Point{0, 0}, 0, 1);
  const auto c = cluster_at(f, Point{});
  CHECK(c.vertices.size() == 2);
  CHECK(exterior_boundary(c, f.grid()).delta_e.size() == 6);
}

TEST_CASE("cavity edges belong to delta but not delta_e") {
  auto f = CapacityField::constant(cube(2, 4), 0);
  for (int x = -1; x < 1; ++x) {
    f.set(Point{x, -1}, 0, 1);
    f.set(Point{x, 1}, 0, 1);
  }
  for (int y = -1; y < 1; ++y) {
    f.set(Point{-1, y}, 1, 1);
    f.set(Point{1, y}, 1, 1);
  }
  const auto c = cluster_at(f, Point{1, 1});
  CHECK(c.vertices.size() == 8);
  CHECK_FALSE(c.member[f.grid().vertex_id(Point{})]);
  const auto b = exterior_boundary(c, f.grid());
  CHECK(b.delta.size() == 16);
  CHECK(b.delta_e.size() == 12);
  const VertexId centre = f.grid().vertex_id(Point{});
  CHECK(std::find(b.partial.begin(), b.partial.end(), centre) != b.partial.end());
  CHECK(std::find(b.partial_e.begin(), b.partial_e.end(), centre) == b.partial_e.end());
}

TEST_CASE("cluster reaching the window has no exterior boundary") {
  const auto f = CapacityField::constant(cube(2, 3), 1);
  const auto c = cluster_at(f, Point{});
  CHECK(c.touches_window_boundary);
  CHECK_THROWS_AS(exterior_boundary(c, f.grid()), PreconditionError);
}

TEST_CASE("all-closed boundary tail is a point mass at 2d") {
  for (int d : {2, 3}) {
    const auto t = boundary_tail(DistributionSpec::dirac(0.0), d, 20, 2, 8, 1);
    CHECK(t.finite == 20);
    CHECK(t.discarded == 0);
    CHECK_FALSE(t.insufficient);
    for (auto s : t.sizes) CHECK(s == 2 * d);
  }
}

TEST_CASE("boundary tail flags too few finite clusters") {
  const auto t = boundary_tail(DistributionSpec::dirac(1.0), 2, 5, 2, 4, 1);
  CHECK(t.finite == 0);
  CHECK(t.discarded == 5);
  CHECK(t.insufficient);
  CHECK_THROWS_AS(boundary_tail(DistributionSpec::dirac(0.0), 2, 1, 4, 2, 1), SpecError);
}

TEST_CASE("zero cutset exists exactly when the boundary flow vanishes") {
  const Region box = build_box(2, {3}, 3).region();
  int zero = 0;
  for (std::uint32_t r = 0; r < 60; ++r) {
    const auto f = sample_field(box.expanded(4), DistributionSpec::bernoulli(0.45, 1.0), 7, r);
    const bool g = zero_cutset_exists(f, box);
    CHECK(g == (max_flow_to_boundary(f, box, 4).value == 0));
    zero += g;
  }
  CHECK(zero > 0);
  CHECK(zero < 60);
}

TEST_CASE("subcritical bonds almost always leave a closed cutset") {
  const Region box = build_box(2, {4}, 4).region();
  int hits = 0;
  const int n = 40;
  for (std::uint32_t r = 0; r < n; ++r) {
    const auto f = sample_field(box.expanded(32), DistributionSpec::bernoulli(0.2, 1.0), 11, r);
    hits += zero_cutset_exists(f, box);
  }
  CHECK(hits >= 0.95 * n);
}
