#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "latflow/errors.hpp"
#include "latflow/estimator.hpp"

using namespace latflow;

namespace {

ExperimentPlan small_plan(DistributionSpec dist, int d, std::vector<BoxSpec> rungs, std::size_t reps) {
  ExperimentPlan plan;
  plan.dist = dist;
  plan.d = d;
  plan.rungs = std::move(rungs);
  plan.replicates = reps;
  plan.master_seed = 7;
  return plan;
}

}  // namespace

TEST_CASE("stats helpers") {
  const std::vector<double> x{1, 2, 3, 4};
  CHECK(stats::mean(x) == doctest::Approx(2.5));
  CHECK(stats::sd(x) == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(stats::quantile(x, 0.5) == doctest::Approx(2.5));
  CHECK(stats::quantile(x, 1.0) == 4);
  const auto fit = stats::least_squares(x, std::vector<double>{3, 5, 7, 9});
  CHECK(fit.slope == doctest::Approx(2));
  CHECK(fit.intercept == doctest::Approx(1));
  CHECK(std::isnan(stats::least_squares(std::vector<double>{1, 1}, std::vector<double>{0, 2}).slope));
  const auto ci = stats::normal_ci(x);
  CHECK(ci.contains(2.5));
  CHECK(ci.high - ci.low == doctest::Approx(2 * 1.959963984540054 * stats::sd(x) / 2));
}

TEST_CASE("ladder grows and respects the first rung") {
  const auto l = geometric_ladder(3, 4, 4, 0.5);
  REQUIRE(l.size() == 4);
  CHECK(l[0].k == std::vector<int>{4, 4});
  CHECK(l[1].k[0] == 6);
  CHECK(l[2].k[0] == 9);
  for (std::size_t i = 1; i < l.size(); ++i) CHECK(l[i].m > l[i - 1].m);
  CHECK_THROWS_AS(geometric_ladder(2, 0, 3, 0.5), SpecError);
}

TEST_CASE("constant capacities give the exact column count") {
  for (int d : {2, 3}) {
    const auto plan = small_plan(DistributionSpec::dirac(1), d, geometric_ladder(d, 2, 3, 0.5), 3);
    const auto series = run_plan(plan, 2);
    for (const auto& rr : series.rungs) {
      const Capacity expect = static_cast<Capacity>(std::pow(rr.box.k[0] + 1, d - 1)) << plan.quant_bits;
      for (const auto& r : rr.records) {
        CHECK(r.tau_min == expect);
        CHECK(r.n_bar == static_cast<std::size_t>(std::pow(rr.box.k[0] + 1, d - 1)));
        CHECK(r.regular);
      }
      CHECK(rr.summary.sd_ratio < 1e-12);
      CHECK(rr.summary.zero_fraction == 0);
    }
  }
}

TEST_CASE("output is identical for every worker count and on replay") {
  const auto plan = small_plan(DistributionSpec::uniform(0.0, 2.0), 2, geometric_ladder(2, 3, 3, 0.5), 6);
  const auto one = run_plan(plan, 1);
  const std::string jsonl = samples_jsonl(one);
  const std::string csv = summary_csv(one);
  for (unsigned w : {1u, 2u, 8u}) {
    const auto other = run_plan(plan, w);
    CHECK(samples_jsonl(other) == jsonl);
    CHECK(summary_csv(other) == csv);
  }
  const SampleRecord again = run_replicate(plan, 1, 4);
  CHECK(again.tau_min == one.rungs[1].records[4].tau_min);
  CHECK(again.replicate_id == replicate_id(plan, 1, 4));
  CHECK(jsonl.find("seconds") == std::string::npos);
}

TEST_CASE("raising the open probability never lowers a replicate") {
  const auto rungs = geometric_ladder(2, 6, 2, 0.5);
  std::vector<SampleSeries> runs;
  for (double p : {0.3, 0.5, 0.7, 0.9}) {
    runs.push_back(run_plan(small_plan(DistributionSpec::bernoulli(p, 1.0), 2, rungs, 20), 4));
  }
  for (std::size_t i = 1; i < runs.size(); ++i) {
    for (std::size_t g = 0; g < rungs.size(); ++g) {
      for (std::size_t r = 0; r < 20; ++r) {
        CHECK(runs[i].rungs[g].records[r].tau_min >= runs[i - 1].rungs[g].records[r].tau_min);
      }
    }
  }
}

TEST_CASE("subcritical bond percolation gives zero flow") {
  const BoxSpec box = build_box(2, {24}, 24);
  const auto series = run_plan(small_plan(DistributionSpec::bernoulli(0.3, 1.0), 2, {box}, 20), 4);
  CHECK(series.rungs[0].summary.zero_fraction >= 0.9);
  const auto est = flow_constant_estimate(series);
  CHECK(est.nu_hat < 0.05);
  CHECK(!est.warnings.empty());
}

TEST_CASE("criticality scan brackets the threshold") {
  const BoxSpec box = build_box(2, {16}, 16);
  const auto scan = criticality_scan({0.2, 0.35, 0.65, 0.8}, box, 20, 3, 0.5, 4);
  REQUIRE(scan.points.size() == 4);
  CHECK(scan.monotone_within_noise);
  CHECK(scan.last_zero <= 0.5);
  CHECK(scan.first_positive >= 0.5);
  CHECK(scan.points.front().zero_fraction > scan.points.back().zero_fraction);
  CHECK_THROWS_AS(criticality_scan({1.5}, box, 2, 3, 0.5), SpecError);
}

TEST_CASE("fluctuations shrink relative to the face") {
  const auto plan = small_plan(DistributionSpec::uniform(0.5, 1.5), 2, geometric_ladder(2, 4, 3, 1.0), 40);
  const auto series = run_plan(plan, 4);
  const auto rep = concentration_diagnostic(series);
  REQUIRE(rep.rungs.size() == 3);
  CHECK(rep.shrinking);
  CHECK(rep.warnings.empty());
  for (const auto& c : rep.rungs) {
    CHECK(c.sd > 0);
    CHECK(c.u.size() == c.exceedance.size());
    for (std::size_t i = 1; i < c.exceedance.size(); ++i) CHECK(c.exceedance[i] <= c.exceedance[i - 1]);
  }
  const auto est = flow_constant_estimate(series);
  CHECK(est.cauchy_gap.size() == 2);
  CHECK(est.ci.contains(est.nu_hat));
}

TEST_CASE("zero-flow frequency decays with the face") {
  const auto plan = small_plan(DistributionSpec::bernoulli(0.8, 1.0), 2,
                               {build_box(2, {1}, 1), build_box(2, {2}, 1), build_box(2, {3}, 1)}, 400);
  const auto rep = area_law_frequency(run_plan(plan, 4));
  CHECK(rep.decreasing);
  CHECK(rep.rate > 0);
}

TEST_CASE("few replicates draw warnings") {
  const auto plan = small_plan(DistributionSpec::uniform(0.5, 1.5), 2, {build_box(2, {3}, 3)}, 5);
  const auto rep = concentration_diagnostic(run_plan(plan));
  CHECK(rep.warnings.size() == 2);
  CHECK(!rep.shrinking);
}

TEST_CASE("plan validation") {
  auto plan = small_plan(DistributionSpec::dirac(1), 2, {build_box(2, {4}, 4)}, 2);
  CHECK_NOTHROW(validate_plan(plan));
  auto bad = plan;
  bad.replicates = 0;
  CHECK_THROWS_AS(validate_plan(bad), SpecError);
  bad = plan;
  bad.rungs.clear();
  CHECK_THROWS_AS(validate_plan(bad), SpecError);
  bad = plan;
  bad.rungs = {build_box(3, {4, 4}, 4)};
  CHECK_THROWS_AS(validate_plan(bad), SpecError);
  bad = plan;
  bad.rungs = {build_box(2, {4}, 1000)};
  CHECK_THROWS_AS(validate_plan(bad), SpecError);
  bad = plan;
  bad.d = 9;
  CHECK_THROWS_AS(validate_plan(bad), SpecError);
}

TEST_CASE("rungs over the vertex budget are skipped") {
  auto plan = small_plan(DistributionSpec::dirac(1), 2, {build_box(2, {3}, 3), build_box(2, {30}, 30)}, 2);
  plan.max_vertices = 100;
  const auto series = run_plan(plan);
  CHECK(!series.rungs[0].skipped);
  CHECK(series.rungs[1].skipped);
  CHECK(series.rungs[1].records.empty());
  CHECK(summary_csv(series).find("\n1,") == std::string::npos);
}

TEST_CASE("parallel_for runs every index and propagates the first error") {
  std::atomic<int> sum{0};
  parallel_for(100, 8, [&](std::size_t i) { sum += static_cast<int>(i); });
  CHECK(sum == 4950);
  CHECK_THROWS_AS(parallel_for(50, 4, [](std::size_t i) {
                    if (i == 17) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
  parallel_for(0, 4, [](std::size_t) { FAIL("no jobs expected"); });
}

TEST_CASE("scan end points are exact") {
  const BoxSpec box = build_box(2, {8}, 8);
  const auto scan = criticality_scan({0.0, 1.0}, box, 5, 1, 0.5);
  CHECK(scan.points[0].nu_hat == 0.0);
  CHECK(scan.points[0].zero_fraction == 1.0);
  CHECK(scan.points[1].nu_hat == doctest::Approx(9.0 / 8.0).epsilon(1e-15));
  CHECK(scan.last_zero == 0.0);
  CHECK(scan.first_positive == 1.0);
}

TEST_CASE("scan across the plane threshold") {
  const auto scan = criticality_scan({0.3, 0.45, 0.55, 0.7}, build_box(2, {24}, 24), 30, 5, 0.5, 4);
  CHECK(scan.monotone_within_noise);
  CHECK(scan.points[0].ci.contains(0.0));
  CHECK(scan.points[3].ci.low > 0.0);
}

TEST_CASE("subcritical fields cut for free at every rung") {
  const auto plan = small_plan(DistributionSpec::bernoulli(0.2, 1.0), 2, geometric_ladder(2, 8, 3, 0.5), 30);
  const auto rep = area_law_frequency(run_plan(plan, 4));
  for (double f : rep.zero_fraction) CHECK(f >= 0.9);
  const auto dirac = area_law_frequency(run_plan(small_plan(DistributionSpec::dirac(2), 2, geometric_ladder(2, 2, 3, 0.5), 3)));
  for (double f : dirac.zero_fraction) CHECK(f == 0.0);
  CHECK(!dirac.decreasing);
}

TEST_CASE("constant capacity c scales the ratio and has no spread") {
  const auto series = run_plan(small_plan(DistributionSpec::dirac(2.5), 2, geometric_ladder(2, 4, 3, 1.0), 30));
  const auto est = flow_constant_estimate(series);
  CHECK(est.nu_hat == doctest::Approx(2.5 * 17.0 / 16.0));
  for (const auto& c : concentration_diagnostic(series).rungs) CHECK(c.sd == 0.0);
}
