#include "latflow/estimator.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "latflow/cutset.hpp"
#include "latflow/errors.hpp"
#include "latflow/flow.hpp"

namespace latflow {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Shortest round-trip decimal form; keeps CSV output byte-stable.
std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::vector<BoxSpec> geometric_ladder(int d, int k0, std::size_t n_rungs, double growth) {
  if (k0 < 1 || growth <= 0.0) throw SpecError("ladder needs k0 >= 1 and positive growth");
  std::vector<BoxSpec> out;
  int k = k0;
  for (std::size_t i = 0; i < n_rungs; ++i) {
    out.push_back(build_box(d, std::vector<int>(static_cast<std::size_t>(d - 1), k), k));
    k = std::max(k + 1, static_cast<int>(std::ceil(k * (1.0 + growth))));
  }
  return out;
}

void validate_plan(const ExperimentPlan& plan) {
  if (plan.d < 2 || plan.d > kMaxDim) throw SpecError("dimension must lie in [2, " + std::to_string(kMaxDim) + "]");
  if (plan.rungs.empty()) throw SpecError("plan has no rungs");
  if (plan.replicates == 0) throw SpecError("replicates must be positive");
  if (plan.epsilon <= 0.0) throw SpecError("epsilon must be positive");
  if (plan.delta <= 0.0 || plan.delta >= 1.0) throw SpecError("delta must lie in (0, 1)");
  if (plan.beta <= 0.0) throw SpecError("beta must be positive");
  if (plan.quant_bits < 1 || plan.quant_bits > 40) throw SpecError("scale_bits must lie in [1, 40]");
  for (const BoxSpec& b : plan.rungs) {
    if (b.d != plan.d) throw SpecError("rung dimension differs from d");
    int kmax = 0;
    for (int k : b.k) kmax = std::max(kmax, k);
    if (b.m > 0 && std::log(static_cast<double>(b.m)) > std::pow(static_cast<double>(kmax), 1.0 - plan.delta)) {
      throw SpecError("rung k=" + b.k_string() + " m=" + std::to_string(b.m) +
                      " breaks log m <= max k_i^(1-delta)");
    }
  }
}

std::uint32_t replicate_id(const ExperimentPlan& plan, std::size_t rung, std::size_t r) {
  return static_cast<std::uint32_t>(rung * plan.replicates + r);
}

SampleRecord run_replicate(const ExperimentPlan& plan, std::size_t rung, std::size_t r) {
  const auto start = std::chrono::steady_clock::now();
  const BoxSpec& box = plan.rungs.at(rung);
  const Region region = box.region();
  SampleRecord rec;
  rec.rung = rung;
  rec.replicate = r;
  rec.replicate_id = replicate_id(plan, rung, r);
  const auto field = sample_field(region, plan.dist, plan.master_seed, rec.replicate_id, plan.quant_bits);
  const Cutset cut = canonical_min_cut(field, region);
  rec.tau_min = cut.passage_time;
  const SizeStats s = size_stats(cut, field, to_fixed(plan.epsilon, plan.quant_bits));
  rec.n_bar = s.n_bar;
  rec.n_plus = s.n_plus;
  rec.n_minus = s.n_minus;
  rec.j = s.j;
  rec.vertices = cut.vertex_count(field.grid());
  rec.regular = static_cast<double>(rec.n_bar) <= plan.beta_bar() * static_cast<double>(box.volume());
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& job) {
  const unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        job(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
}

SampleSeries run_plan(const ExperimentPlan& plan, unsigned workers) {
  validate_plan(plan);
  SampleSeries series;
  series.plan = plan;
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t i = 0; i < plan.rungs.size(); ++i) {
    RungResult rr;
    rr.box = plan.rungs[i];
    if (rr.box.vertex_count() > plan.max_vertices) {
      rr.skipped = true;
      rr.skip_reason = "box has " + std::to_string(rr.box.vertex_count()) + " vertices, budget " +
                       std::to_string(plan.max_vertices);
    } else {
      rr.records.resize(plan.replicates);
      for (std::size_t r = 0; r < plan.replicates; ++r) jobs.emplace_back(i, r);
    }
    series.rungs.push_back(std::move(rr));
  }
  parallel_for(jobs.size(), workers, [&](std::size_t i) {
    const auto [rung, r] = jobs[i];
    series.rungs[rung].records[r] = run_replicate(plan, rung, r);
  });
  for (auto& rr : series.rungs) {
    if (!rr.skipped) {
      rr.summary = summarize(rr.box, rr.records, plan.quant_bits);
      rr.summary.irregular = static_cast<std::size_t>(
          std::count_if(rr.records.begin(), rr.records.end(), [](const SampleRecord& s) { return !s.regular; }));
    }
  }
  return series;
}

RungSummary summarize(const BoxSpec& box, const std::vector<SampleRecord>& records, int quant_bits) {
  RungSummary s;
  s.box = box;
  s.replicates = records.size();
  const double vol = static_cast<double>(box.volume());
  std::vector<double> ratio, tau, nbar;
  std::size_t zeros = 0;
  for (const auto& r : records) {
    const double t = to_real(r.tau_min, quant_bits);
    tau.push_back(t);
    ratio.push_back(t / vol);
    nbar.push_back(static_cast<double>(r.n_bar));
    zeros += r.tau_min == 0;
  }
  s.mean_ratio = stats::mean(ratio);
  s.sd_ratio = stats::sd(ratio);
  s.ci = stats::normal_ci(ratio);
  s.sd_tau = stats::sd(tau);
  s.zero_fraction = records.empty() ? kNaN : static_cast<double>(zeros) / static_cast<double>(records.size());
  s.mean_nbar = stats::mean(nbar);
  return s;
}

FlowConstantEstimate flow_constant_estimate(const SampleSeries& series) {
  FlowConstantEstimate e;
  const RungResult* last = nullptr;
  for (const auto& rr : series.rungs) {
    if (rr.skipped) continue;
    if (!e.mean_ratio.empty()) e.cauchy_gap.push_back(std::abs(rr.summary.mean_ratio - e.mean_ratio.back()));
    e.mean_ratio.push_back(rr.summary.mean_ratio);
    last = &rr;
  }
  if (last == nullptr) {
    e.nu_hat = kNaN;
    e.ci = {kNaN, kNaN};
    e.warnings.push_back("no rung was run");
    return e;
  }
  if (e.mean_ratio.size() < 2) e.warnings.push_back("single rung: no convergence evidence");
  e.nu_hat = last->summary.mean_ratio;
  e.ci = last->summary.ci;
  return e;
}

CriticalityScan criticality_scan(const std::vector<double>& p_grid, const BoxSpec& rung, std::size_t replicates,
                                 std::uint64_t seed, double p_c_reference, unsigned workers) {
  CriticalityScan scan;
  scan.p_c_reference = p_c_reference;
  scan.last_zero = kNaN;
  scan.first_positive = kNaN;
  for (double p : p_grid) {
    if (p < 0.0 || p > 1.0) throw SpecError("p_open must lie in [0, 1]");
    ExperimentPlan plan;
    plan.dist = DistributionSpec::bernoulli(p, 1.0);
    plan.d = rung.d;
    plan.rungs = {rung};
    plan.replicates = replicates;
    plan.master_seed = seed;
    const auto series = run_plan(plan, workers);
    const auto& s = series.rungs.front().summary;
    scan.points.push_back({p, s.mean_ratio, s.ci, s.zero_fraction});
  }
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    const auto& pt = scan.points[i];
    if (pt.ci.low <= 0.0 && (std::isnan(scan.last_zero) || pt.p_open > scan.last_zero)) scan.last_zero = pt.p_open;
    if (pt.ci.low > 0.0 && (std::isnan(scan.first_positive) || pt.p_open < scan.first_positive)) {
      scan.first_positive = pt.p_open;
    }
    for (std::size_t j = 0; j < scan.points.size(); ++j) {
      const auto& q = scan.points[j];
      if (q.p_open > pt.p_open && q.ci.high < pt.ci.low) scan.monotone_within_noise = false;
    }
  }
  return scan;
}

ConcentrationReport concentration_diagnostic(const SampleSeries& series) {
  ConcentrationReport rep;
  const int bits = series.plan.quant_bits;
  for (const auto& rr : series.rungs) {
    if (rr.skipped) continue;
    if (rr.records.size() < 30) {
      rep.warnings.push_back("rung k=" + rr.box.k_string() + " has fewer than 30 replicates");
    }
    ConcentrationRung c;
    c.volume = static_cast<double>(rr.box.volume());
    std::vector<double> tau;
    for (const auto& r : rr.records) tau.push_back(to_real(r.tau_min, bits));
    c.sd = stats::sd(tau);
    c.sd_over_volume = c.sd / c.volume;
    const double m = stats::mean(tau);
    double num_c = 0.0;
    double den_c = 0.0;
    if (c.sd > 0.0) {
      for (double mult : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
        const double u = mult * c.sd;
        const auto hits = std::count_if(tau.begin(), tau.end(), [&](double t) { return std::abs(t - m) >= u; });
        const double f = static_cast<double>(hits) / static_cast<double>(tau.size());
        c.u.push_back(u);
        c.exceedance.push_back(f);
        if (f > 0.0) {
          const double g = std::min(u * u / c.volume, u);
          num_c += g * -std::log(f);
          den_c += g * g;
        }
      }
    }
    c.fitted_c = den_c > 0.0 ? num_c / den_c : kNaN;
    rep.rungs.push_back(std::move(c));
  }
  if (rep.rungs.size() < 2) rep.warnings.push_back("fewer than 2 rungs");
  rep.shrinking = rep.rungs.size() >= 2;
  for (std::size_t i = 1; i < rep.rungs.size(); ++i) {
    if (!(rep.rungs[i].sd_over_volume < rep.rungs[i - 1].sd_over_volume)) rep.shrinking = false;
  }
  return rep;
}

AreaLawReport area_law_frequency(const SampleSeries& series) {
  AreaLawReport rep;
  std::vector<double> xs, ys;
  for (const auto& rr : series.rungs) {
    if (rr.skipped) continue;
    rep.volume.push_back(static_cast<double>(rr.box.volume()));
    rep.zero_fraction.push_back(rr.summary.zero_fraction);
    if (rr.summary.zero_fraction > 0.0) {
      xs.push_back(rep.volume.back());
      ys.push_back(std::log(rr.summary.zero_fraction));
    }
  }
  rep.decreasing = rep.zero_fraction.size() >= 2;
  for (std::size_t i = 1; i < rep.zero_fraction.size(); ++i) {
    if (!(rep.zero_fraction[i] < rep.zero_fraction[i - 1])) rep.decreasing = false;
  }
  const auto fit = stats::least_squares(xs, ys);
  rep.rate = std::isnan(fit.slope) ? kNaN : -fit.slope;
  return rep;
}

std::string samples_jsonl(const SampleSeries& series) {
  std::string out;
  for (const auto& rr : series.rungs) {
    for (const auto& r : rr.records) {
      nlohmann::json j;
      j["rung"] = r.rung;
      j["replicate"] = r.replicate;
      j["replicate_id"] = r.replicate_id;
      j["k"] = rr.box.k;
      j["m"] = rr.box.m;
      j["tau_min"] = r.tau_min;
      j["scale_bits"] = series.plan.quant_bits;
      j["nbar"] = r.n_bar;
      j["nplus"] = r.n_plus;
      j["nminus"] = r.n_minus;
      j["j"] = r.j;
      j["vertices"] = r.vertices;
      j["regular"] = r.regular;
      out += j.dump();
      out += '\n';
    }
  }
  return out;
}

std::string summary_csv(const SampleSeries& series) {
  std::ostringstream os;
  os << "rung_index,d,k,m,replicates,mean_ratio,sd_ratio,ci_low,ci_high,zero_fraction,mean_Nbar\n";
  for (std::size_t i = 0; i < series.rungs.size(); ++i) {
    const auto& rr = series.rungs[i];
    if (rr.skipped) continue;
    const auto& s = rr.summary;
    os << i << ',' << rr.box.d << ',' << rr.box.k_string(';') << ',' << rr.box.m << ',' << s.replicates << ','
       << num(s.mean_ratio) << ',' << num(s.sd_ratio) << ',' << num(s.ci.low) << ',' << num(s.ci.high) << ','
       << num(s.zero_fraction) << ',' << num(s.mean_nbar) << '\n';
  }
  return os.str();
}

std::string timings_csv(const SampleSeries& series) {
  std::ostringstream os;
  os << "rung,replicate,seconds\n";
  for (const auto& rr : series.rungs) {
    for (const auto& r : rr.records) os << r.rung << ',' << r.replicate << ',' << num(r.seconds) << '\n';
  }
  return os.str();
}

}  // namespace latflow
