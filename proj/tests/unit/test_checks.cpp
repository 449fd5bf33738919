#include <doctest.h>

#include "latflow/checks.hpp"

using namespace latflow;

TEST_CASE("check suite passes on a small budget") {
  CheckPlan plan;
  plan.realizations_2d = 12;
  plan.realizations_3d = 3;
  const auto rep = run_checks(plan, 4);
  CHECK(rep.ok());
  CHECK(rep.checks.size() == check_names().size());
  for (const auto& c : rep.checks) {
    INFO(c.name);
    CHECK(c.passed > 0);
  }
  CHECK(rep.at("min_cut_equals_max_flow").passed == 15);
  CHECK(rep.at("exits_disjoint").passed == 15);
}

TEST_CASE("tampering with a solved field is caught and named") {
  CheckPlan plan;
  plan.realizations_2d = 4;
  plan.realizations_3d = 0;
  plan.tamper = true;
  const auto rep = run_checks(plan, 2);
  CHECK(!rep.ok());
  CHECK(rep.at("min_cut_equals_max_flow").failed == 4);
  CHECK(rep.at("min_cut_equals_max_flow").first_failure.find("realization 0") != std::string::npos);
  CHECK(rep.to_json().find("\"ok\": false") != std::string::npos);
}

TEST_CASE("empty budget passes with a warning") {
  CheckPlan plan;
  plan.realizations_2d = 0;
  plan.realizations_3d = 0;
  const auto rep = run_checks(plan);
  CHECK(rep.ok());
  CHECK(rep.warnings.size() == 1);
  for (const auto& c : rep.checks) CHECK(c.passed + c.failed == 0);
}

TEST_CASE("check results do not depend on the worker count") {
  CheckPlan plan;
  plan.realizations_2d = 6;
  plan.realizations_3d = 2;
  CHECK(run_checks(plan, 1).to_json() == run_checks(plan, 8).to_json());
}
