#pragma once

#include <optional>
#include <string>

#include "latflow/checks.hpp"
#include "latflow/config.hpp"
#include "latflow/cutset.hpp"
#include "latflow/estimator.hpp"

namespace latflow {

std::string version_string();

/// Mean ratio against rung with 95% CI bars.
std::string convergence_svg(const SampleSeries& series);

/// A d=2 box: edges shaded by capacity (black = largest), cut edges in red.
/// SpecError for other dimensions.
std::string cut_svg(const CapacityField& field, const Cutset& cut, const Region& box);

/// Rebuilds records and summaries from samples.jsonl for the given plan.
/// SpecError when a line does not fit the plan.
SampleSeries series_from_jsonl(const std::string& jsonl, const ExperimentPlan& plan);

struct ReplayReport {
  std::size_t checked = 0;
  std::size_t exact = 0;
};

/// Re-runs every recorded replicate alone and compares tau_min.
ReplayReport replay_all(const SampleSeries& series, unsigned workers);

/// Config echo, version, seed, scale, skipped rungs, estimate and, when
/// present, check tallies and replay counts.
std::string manifest_json(const RunConfig& config, const SampleSeries& series,
                          const std::optional<CheckReport>& checks,
                          const std::optional<ReplayReport>& replay);

/// Config text stored in a manifest.
std::string config_from_manifest(const std::string& manifest);

}  // namespace latflow
