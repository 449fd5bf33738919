#pragma once

#include <string>
#include <string_view>

#include "latflow/checks.hpp"
#include "latflow/estimator.hpp"

namespace latflow {

enum class Verification { kOff, kChecks, kFull };

/// Everything a run needs. Text form: one `key = value` per line, `#`
/// starts a comment. See README for the key list.
struct RunConfig {
  ExperimentPlan plan;
  std::string out_dir = "out";
  bool write_jsonl = true;
  bool write_csv = true;
  bool write_svg = false;
  Verification verification = Verification::kOff;
  unsigned workers = 1;
  int t = 4;
  int margin = 0;  // 0: per-dimension default of the checks
  double p_c = 0.5;  // 0.2488 when d = 3 and not given
  std::size_t verify_realizations_2d = 100;
  std::size_t verify_realizations_3d = 25;
  bool verify_tamper = false;

  CheckPlan check_plan() const;
};

/// ConfigError names the line and key for unknown keys and bad values.
/// `rungs` lists boxes as k/m with k components joined by ';'
/// (`8/8, 16/16`; in d=3 `4;4/4`). Without `rungs`, the ladder keys
/// ladder_k0, ladder_rungs and ladder_growth build a geometric ladder.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Canonical text; parse_config(config_to_text(c)) reproduces c.
std::string config_to_text(const RunConfig& config);

std::string verification_name(Verification v);

}  // namespace latflow
