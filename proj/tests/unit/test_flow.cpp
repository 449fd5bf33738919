#include "doctest.h"
#include "latflow/errors.hpp"
#include "latflow/flow.hpp"
#include "oracles.hpp"

using namespace latflow;

namespace {
Region box2(int k, int m) { return build_box(2, {k}, m).region(); }
}  // namespace

TEST_CASE("unit grid carries one unit per column") {
  const Region b = box2(2, 2);
  const auto field = sample_field(b, DistributionSpec::dirac(1), 1, 0);
  const FlowResult r = max_flow_box(field, b);
  CHECK(r.value == 3 * field.quantum_one());
  CHECK(verify_flow(r, field).ok);
  const Cutset cut = min_cut_from_flow(r, field);
  CHECK(cut.edges.size() == 3);
  CHECK(cut.passage_time == 3 * field.quantum_one());
  for (EdgeId e : cut.edges) CHECK(field.grid().edge(e).axis == 1);
  CHECK(is_cutset(field.grid(), cut));
}

TEST_CASE("0/1 capacities count disjoint open paths") {
  const Region b = box2(3, 3);
  auto field = CapacityField::constant(b, 1, 0);
  // Close every vertical edge of column 1 and 2: only columns 0 and 3 remain,
  // but horizontal detours let a path reroute.
  for (int y = 0; y < 3; ++y) {
    field.set(Point{1, y}, 1, 0);
    field.set(Point{2, y}, 1, 0);
  }
  CHECK(max_flow_box(field, b).value == 2);
}

TEST_CASE("a closed layer blocks all flow") {
  const Region b = box2(5, 4);
  auto field = sample_field(b, DistributionSpec::uniform(1, 2), 3, 0);
  for (int x = 0; x <= 5; ++x) field.set(Point{x, 2}, 1, 0);
  const FlowResult r = max_flow_box(field, b);
  CHECK(r.value == 0);
  const Cutset cut = min_cut_from_flow(r, field);
  CHECK(cut.passage_time == 0);
  for (EdgeId e : cut.edges) CHECK(field.capacity(e) == 0);
  CHECK(is_cutset(field.grid(), cut));
}

TEST_CASE("degenerate and out-of-window boxes") {
  const Region b = box2(3, 0);
  const auto field = sample_field(box2(3, 3), DistributionSpec::dirac(1), 1, 0);
  CHECK_THROWS_AS(max_flow_box(field, b), SpecError);
  CHECK_THROWS_AS(max_flow_box(field, box2(4, 3)), RangeError);
}

TEST_CASE("cut to the window boundary") {
  Region window;
  window.d = 2;
  window.lo = Point{-1, -1};
  window.hi = Point{1, 1};
  const Region origin = build_box(2, {0}, 0).region();
  const auto ones = sample_field(window, DistributionSpec::dirac(1), 1, 0, 0);
  CHECK(max_flow_to_boundary(ones, origin, 1).value == 4);

  Region wide = origin.expanded(4);
  const auto closed = sample_field(wide, DistributionSpec::bernoulli(0, 1), 1, 0);
  CHECK(max_flow_to_boundary(closed, origin, 3).value == 0);

  CHECK_THROWS_AS(max_flow_to_boundary(ones, origin, 0), SpecError);
  CHECK_THROWS_AS(max_flow_to_boundary(ones, origin, 2), RangeError);
  CHECK_THROWS_AS(max_flow_to_boundary(ones, origin, 1, 4), ResourceError);
}

TEST_CASE("cut to the boundary does not grow with the margin") {
  const Region b = box2(3, 3);
  for (std::uint32_t rep = 0; rep < 100; ++rep) {
    const auto field = sample_field(b.expanded(4), DistributionSpec::parse("mixture(0.4,uniform(0,2))"), 77, rep);
    const FlowResult near = max_flow_to_boundary(field, b, 2);
    const FlowResult far = max_flow_to_boundary(field, b, 4);
    CHECK(near.value >= far.value);
    CHECK(verify_flow(far, field).ok);
    CHECK(min_cut_from_flow(far, field).passage_time == far.value);
  }
}

TEST_CASE("verify_flow detects tampering") {
  const Region b = box2(4, 4);
  const auto field = sample_field(b, DistributionSpec::uniform(1, 2), 9, 0);
  FlowResult r = max_flow_box(field, b);
  REQUIRE(verify_flow(r, field).ok);
  // Pick an edge whose endpoints are interior so conservation is checked.
  const EdgeId e = field.grid().edge_id(Point{2, 2}, 0);
  r.flow[e] += 1;
  const FlowCheck check = verify_flow(r, field);
  CHECK_FALSE(check.ok);
  REQUIRE(check.vertex.has_value());
  const Point p = field.grid().point(*check.vertex);
  CHECK(p[1] == 2);
  CHECK((p[0] == 2 || p[0] == 3));

  FlowResult zero = max_flow_box(field, b);
  std::fill(zero.flow.begin(), zero.flow.end(), 0);
  zero.value = 0;
  CHECK(verify_flow(zero, field).ok);
}

TEST_CASE("min cut requires a maximal flow") {
  const Region b = box2(2, 2);
  const auto field = sample_field(b, DistributionSpec::dirac(1), 1, 0);
  FlowResult r = max_flow_box(field, b);
  std::fill(r.flow.begin(), r.flow.end(), 0);
  r.value = 0;
  std::fill(r.source_side.begin(), r.source_side.end(), 1);
  CHECK_THROWS_AS(min_cut_from_flow(r, field), ContractError);
}

TEST_CASE("duality and oracles on random small fields") {
  const char* dists[] = {"bernoulli(0.6,1)", "uniform(0,1)", "mixture(0.3,exponential(1))"};
  int n = 0;
  for (std::uint32_t rep = 0; rep < 100; ++rep) {
    const Region b = box2(4, 4);
    const auto field = sample_field(b, DistributionSpec::parse(dists[rep % 3]), 11, rep, 8);
    const FlowResult r = max_flow_box(field, b);
    CHECK(verify_flow(r, field).ok);
    const Cutset cut = min_cut_from_flow(r, field);
    CHECK(cut.passage_time == r.value);
    CHECK(is_cutset(field.grid(), cut));
    CHECK(oracle::dual_shortest_path(field, b) == r.value);
    CHECK(oracle::brute_force_partitions(field, b) == r.value);
    ++n;
  }
  CHECK(n == 100);
}

TEST_CASE("edge-subset enumeration agrees on tiny boxes") {
  for (std::uint32_t rep = 0; rep < 10; ++rep) {
    const Region b = box2(2, 3);  // 17 edges
    const auto field = sample_field(b, DistributionSpec::parse("mixture(0.2,uniform(0,3))"), 4, rep, 6);
    CHECK(oracle::brute_force_edge_subsets(field, b) == max_flow_box(field, b).value);
  }
}

TEST_CASE("raising one capacity never lowers the flow") {
  const Region b = box2(5, 5);
  auto field = sample_field(b, DistributionSpec::parse("mixture(0.4,uniform(0,2))"), 5, 0);
  Capacity last = max_flow_box(field, b).value;
  for (EdgeId e = 0; e < field.grid().edge_count(); e += 3) {
    field.set(e, field.capacity(e) + field.quantum_one() / 2);
    const Capacity now = max_flow_box(field, b).value;
    CHECK(now >= last);
    last = now;
  }
}

TEST_CASE("nested boxes: the inner cut is no heavier") {
  const Region outer = box2(8, 6);
  for (std::uint32_t rep = 0; rep < 50; ++rep) {
    const auto field = sample_field(outer, DistributionSpec::parse("mixture(0.3,exponential(1))"), 8, rep);
    const Cutset w = canonical_min_cut(field, outer);
    const Region inner = box2(5, 6);
    const Cutset w_inner = canonical_min_cut(field, inner);
    CHECK(w_inner.passage_time <= w.passage_time);
    // The outer cut restricted to the inner box still separates it.
    std::vector<EdgeId> restricted;
    for (EdgeId e : w.edges) {
      if (edge_in_region(field.grid(), e, inner)) restricted.push_back(e);
    }
    const Faces f = faces(field.grid(), inner);
    CHECK(is_cutset(field.grid(), restricted, inner, f.bottom, f.top));
  }
}

TEST_CASE("three-dimensional duality") {
  const Region b = build_box(3, {3, 3}, 3).region();
  for (std::uint32_t rep = 0; rep < 30; ++rep) {
    const auto field = sample_field(b, DistributionSpec::parse("mixture(0.3,uniform(0,1))"), 21, rep, 8);
    const FlowResult r = max_flow_box(field, b);
    CHECK(verify_flow(r, field).ok);
    CHECK(min_cut_from_flow(r, field).passage_time == r.value);
  }
  const Region small = build_box(3, {2, 2}, 2).region();
  for (std::uint32_t rep = 0; rep < 10; ++rep) {
    const auto field = sample_field(small, DistributionSpec::uniform(0, 1), 22, rep, 8);
    CHECK(oracle::brute_force_partitions(field, small) == max_flow_box(field, small).value);
  }
}
