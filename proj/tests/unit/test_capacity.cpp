#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "latflow/capacity.hpp"
#include "latflow/errors.hpp"
#include "latflow/rng.hpp"

using namespace latflow;

namespace {
Region square(int lo, int hi, int d = 2) {
  Region r;
  r.d = d;
  for (int a = 0; a < d; ++a) {
    r.lo[a] = lo;
    r.hi[a] = hi;
  }
  return r;
}
}  // namespace

TEST_CASE("philox known answers") {
  using P = Philox4x32;
  CHECK(P::generate({0, 0, 0, 0}, {0, 0}) ==
        P::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(P::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
        P::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(P::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
        P::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("distribution parsing round trip") {
  for (const char* text : {"dirac(1)", "bernoulli(0.7,1)", "uniform(0.5,2)", "exponential(1.5)",
                           "mixture(0.3,exponential(1))", "mixture(0.25,uniform(1,2))"}) {
    const auto d = DistributionSpec::parse(text);
    CHECK(d.to_string() == text);
    CHECK(DistributionSpec::parse(d.to_string()) == d);
  }
  CHECK(DistributionSpec::parse("bernoulli(0.7,1)").zero_mass() == doctest::Approx(0.3));
  CHECK(DistributionSpec::parse("mixture(0.3,exponential(1))").zero_mass() == doctest::Approx(0.3));
  CHECK(DistributionSpec::dirac(0).zero_mass() == 1.0);
}

TEST_CASE("invalid distributions are rejected") {
  CHECK_THROWS_AS(DistributionSpec::bernoulli(1.5, 1), SpecError);
  CHECK_THROWS_AS(DistributionSpec::bernoulli(-0.1, 1), SpecError);
  CHECK_THROWS_AS(DistributionSpec::uniform(2, 1), SpecError);
  CHECK_THROWS_AS(DistributionSpec::exponential(0), SpecError);
  CHECK_THROWS_AS(DistributionSpec::exponential(-1), SpecError);
  CHECK_THROWS_AS(DistributionSpec::parse("gamma(1)"), SpecError);
  CHECK_THROWS_AS(DistributionSpec::parse("bernoulli(0.5"), SpecError);
}

TEST_CASE("dirac and closed bernoulli fields") {
  const auto ones = sample_field(square(0, 9), DistributionSpec::dirac(1), 7, 0);
  for (Capacity c : ones.values()) CHECK(c == ones.quantum_one());
  const auto closed = sample_field(square(0, 9), DistributionSpec::bernoulli(0, 5), 7, 0);
  for (Capacity c : closed.values()) CHECK(c == 0);
}

TEST_CASE("bernoulli closed fraction") {
  const auto field = sample_field(square(0, 230), DistributionSpec::bernoulli(0.7, 1), 12345, 0);
  REQUIRE(field.values().size() >= 100000);
  const double closed =
      std::count(field.values().begin(), field.values().end(), Capacity{0}) / double(field.values().size());
  CHECK(std::abs(closed - 0.30) <= 0.005);
}

TEST_CASE("uniform mean within three standard errors") {
  const auto field = sample_field(square(0, 230), DistributionSpec::uniform(1, 3), 99, 4);
  const auto n = static_cast<double>(field.values().size());
  double sum = 0;
  for (Capacity c : field.values()) sum += to_real(c);
  const double se = (2.0 / std::sqrt(12.0)) / std::sqrt(n);
  CHECK(std::abs(sum / n - 2.0) <= 3 * se);
}

TEST_CASE("zero atom is exact under quantization") {
  // A tiny positive part must never round to zero, and the closed fraction
  // tracks F(0) even at coarse resolution.
  const auto dist = DistributionSpec::mixture(0.4, DistributionSpec::exponential(1000.0));
  const auto field = sample_field(square(0, 200), dist, 5, 0, 4);
  std::size_t zeros = 0;
  for (Capacity c : field.values()) {
    CHECK(c >= 0);
    zeros += c == 0;
  }
  const double n = static_cast<double>(field.values().size());
  const double se = std::sqrt(0.4 * 0.6 / n);
  CHECK(std::abs(zeros / n - 0.4) <= 3 * se);
}

TEST_CASE("sampling is order independent and window independent") {
  const auto dist = DistributionSpec::parse("mixture(0.3,exponential(1))");
  const Region r = square(-3, 12, 3);
  const auto field = sample_field(r, dist, 2024, 3);
  std::vector<EdgeId> order(field.grid().edge_count());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), std::mt19937_64(1));
  for (EdgeId e : order) {
    const EdgeEnds ends = field.grid().edge(e);
    const Capacity c = sample_edge(dist, 2024, 3, field.grid().point(ends.lower), ends.axis, 3);
    if (c != field.capacity(e)) FAIL("edge " << e << " differs");
  }
  // The same lattice edge has the same capacity in a smaller window.
  const auto inner = sample_field(square(0, 5, 3), dist, 2024, 3);
  for (EdgeId e = 0; e < inner.grid().edge_count(); ++e) {
    const EdgeEnds ends = inner.grid().edge(e);
    CHECK(inner.capacity(e) == field.capacity(inner.grid().point(ends.lower), ends.axis));
  }
  // Replicates differ.
  const auto other = sample_field(r, dist, 2024, 4);
  CHECK_FALSE(std::equal(field.values().begin(), field.values().end(), other.values().begin()));
}

TEST_CASE("classification boundaries") {
  const Capacity eps = to_fixed(1.0 / 16);
  CHECK(classify_capacity(0, eps) == EdgeClass::kClosed);
  CHECK(classify_capacity(eps, eps) == EdgeClass::kEpsMinus);
  CHECK(classify_capacity(1, eps) == EdgeClass::kEpsMinus);
  CHECK(classify_capacity(eps + 1, eps) == EdgeClass::kEpsPlus);
}

TEST_CASE("moment estimates") {
  const auto a = estimate_moment(DistributionSpec::dirac(1), 1.0, 100000);
  CHECK(std::abs(a.mean - std::exp(1.0)) <= 0.01 * std::exp(1.0));
  CHECK_FALSE(a.diverging);
  const auto b = estimate_moment(DistributionSpec::bernoulli(0.5, 2), 1.0, 100000);
  const double want = 0.5 + 0.5 * std::exp(2.0);
  CHECK(std::abs(b.mean - want) <= 0.02 * want);
  CHECK(estimate_moment(DistributionSpec::dirac(0), 3.0, 1000).mean == 1.0);
  // exp(eta*tau) with eta above the exponential rate has no finite mean.
  CHECK(estimate_moment(DistributionSpec::exponential(1.0), 2.0, 100000).diverging);
}

TEST_CASE("fixed point helpers") {
  CHECK(to_fixed(1.0) == (1 << 20));
  CHECK(to_real(to_fixed(2.5)) == 2.5);
  auto field = CapacityField::constant(square(0, 2), 3);
  field.set(Point{0, 0}, 0, 7);
  CHECK(field.capacity(Point{0, 0}, 0) == 7);
  CHECK_THROWS_AS(field.set(EdgeId{0}, -1), SpecError);
}
