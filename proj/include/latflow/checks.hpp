#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latflow/capacity.hpp"

namespace latflow {

/// Per-realization structural checks over random fields. Each family draws
/// its own fields; a realization whose construction precondition fails
/// (cluster too close to the window) is counted as skipped, not passed.
struct CheckPlan {
  DistributionSpec dist = DistributionSpec::uniform(0.0, 2.0);  // cut and patch families
  std::size_t realizations_2d = 100;
  std::size_t realizations_3d = 25;
  std::uint64_t master_seed = 1;
  int t = 4;
  int margin = 0;  // window padding around the box; 0 picks 24 (d=2) or 12 (d=3)
  double gamma_p_open_2d = 0.2;
  double gamma_p_open_3d = 0.1;
  // Negative control: after solving, flip the capacity of one cut edge
  // (zero becomes one unit, positive becomes zero) before the checks run.
  bool tamper = false;
};

struct CheckTally {
  std::string name;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::string first_failure;  // "d=2 realization 17: ..."
};

struct CheckReport {
  std::vector<CheckTally> checks;  // fixed order, see check_names()
  std::size_t skipped = 0;         // realizations whose preconditions failed
  std::vector<std::string> warnings;

  bool ok() const;
  const CheckTally& at(const std::string& name) const;
  std::string to_json() const;
};

std::vector<std::string> check_names();

CheckReport run_checks(const CheckPlan& plan, unsigned workers = 1);

}  // namespace latflow
