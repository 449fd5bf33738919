#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "latflow/capacity.hpp"
#include "latflow/lattice.hpp"
#include "latflow/stats.hpp"

namespace latflow {

struct ExperimentPlan {
  DistributionSpec dist = DistributionSpec::dirac(1.0);
  int d = 2;
  std::vector<BoxSpec> rungs;
  std::size_t replicates = 10;
  std::uint64_t master_seed = 1;
  double epsilon = 0.5;                    // eps for the N+/N- split
  double delta = 0.5;                      // growth exponent in log m <= k_max^(1-delta)
  double beta = 3.0;                       // regularity constant; bound is 2d * beta * ||k||_v
  int quant_bits = kDefaultQuantBits;
  std::uint64_t max_vertices = std::uint64_t{1} << 24;  // per-rung budget

  double beta_bar() const { return 2.0 * d * beta; }
};

/// Rungs k_{n+1} = ceil(k_n * (1 + growth)), m = k (all sides equal).
std::vector<BoxSpec> geometric_ladder(int d, int k0, std::size_t n_rungs, double growth);

/// SpecError on dimension mismatch, empty ladder, zero replicates or a rung
/// breaking log m <= max_i k_i^(1-delta).
void validate_plan(const ExperimentPlan& plan);

struct SampleRecord {
  std::size_t rung = 0;
  std::size_t replicate = 0;
  std::uint32_t replicate_id = 0;
  Capacity tau_min = 0;        // fixed point, quant_bits
  std::size_t n_bar = 0;       // cut edges
  std::size_t n_plus = 0;
  std::size_t n_minus = 0;
  std::size_t j = 0;           // open cut edges
  std::size_t vertices = 0;    // cut vertices
  bool regular = false;
  double seconds = 0.0;        // not part of the persisted sample
};

struct RungSummary {
  BoxSpec box;
  std::size_t replicates = 0;
  double mean_ratio = 0.0;     // tau_min / ||k||_v
  double sd_ratio = 0.0;
  stats::Interval ci;
  double sd_tau = 0.0;
  double zero_fraction = 0.0;
  double mean_nbar = 0.0;
  std::size_t irregular = 0;   // N-bar above the regularity bound; tallied, never dropped
};

struct RungResult {
  BoxSpec box;
  bool skipped = false;
  std::string skip_reason;
  std::vector<SampleRecord> records;  // replicate order
  RungSummary summary;
};

struct SampleSeries {
  ExperimentPlan plan;
  std::vector<RungResult> rungs;
};

/// Replicate id of (rung, r); fixes the field independently of scheduling.
std::uint32_t replicate_id(const ExperimentPlan& plan, std::size_t rung, std::size_t r);

/// Samples, solves and measures one replicate.
SampleRecord run_replicate(const ExperimentPlan& plan, std::size_t rung, std::size_t r);

/// Runs every replicate on `workers` threads. Output does not depend on the
/// worker count. Rungs above the vertex budget are skipped with a reason.
SampleSeries run_plan(const ExperimentPlan& plan, unsigned workers = 1);

/// Runs job(i) for i in [0, n) on `workers` threads; rethrows the first
/// exception after all threads stop.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& job);

RungSummary summarize(const BoxSpec& box, const std::vector<SampleRecord>& records, int quant_bits);

struct FlowConstantEstimate {
  double nu_hat = 0.0;
  stats::Interval ci;
  std::vector<double> mean_ratio;   // per rung
  std::vector<double> cauchy_gap;   // |mean_ratio[i+1] - mean_ratio[i]|
  std::vector<std::string> warnings;
};

FlowConstantEstimate flow_constant_estimate(const SampleSeries& series);

struct ScanPoint {
  double p_open = 0.0;
  double nu_hat = 0.0;
  stats::Interval ci;
  double zero_fraction = 0.0;
};

struct CriticalityScan {
  std::vector<ScanPoint> points;
  bool monotone_within_noise = true;
  // Largest p whose CI contains 0 and smallest p whose CI is above 0 (NaN if none).
  double last_zero = 0.0;
  double first_positive = 0.0;
  double p_c_reference = 0.5;
};

/// bernoulli(p, 1) at each p on one rung.
CriticalityScan criticality_scan(const std::vector<double>& p_grid, const BoxSpec& rung,
                                 std::size_t replicates, std::uint64_t seed, double p_c_reference,
                                 unsigned workers = 1);

struct ConcentrationRung {
  double volume = 0.0;
  double sd = 0.0;
  double sd_over_volume = 0.0;
  std::vector<double> u;            // thresholds (multiples of sd)
  std::vector<double> exceedance;   // P^[|tau - mean| >= u]
  double fitted_c = 0.0;            // for exp(-c * min(u^2 / volume, u))
};

struct ConcentrationReport {
  std::vector<ConcentrationRung> rungs;
  bool shrinking = false;           // sd / volume strictly decreasing over rungs
  std::vector<std::string> warnings;
};

ConcentrationReport concentration_diagnostic(const SampleSeries& series);

struct AreaLawReport {
  std::vector<double> volume;
  std::vector<double> zero_fraction;
  bool decreasing = false;          // strictly, over rungs
  double rate = 0.0;                // -slope of log frequency against volume (NaN if < 2 usable rungs)
};

AreaLawReport area_law_frequency(const SampleSeries& series);

/// Records as JSON lines; keys sorted, no timing fields.
std::string samples_jsonl(const SampleSeries& series);
/// Fixed-column CSV summary, one row per rung.
std::string summary_csv(const SampleSeries& series);
/// rung, replicate, seconds.
std::string timings_csv(const SampleSeries& series);

}  // namespace latflow
