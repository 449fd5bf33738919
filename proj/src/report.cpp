#include "latflow/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "latflow/errors.hpp"

#ifndef LATFLOW_VERSION
#define LATFLOW_VERSION "0.0.0"
#endif

namespace latflow {
namespace {

std::string f2(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << v;
  return os.str();
}

}  // namespace

std::string version_string() { return LATFLOW_VERSION; }

std::string convergence_svg(const SampleSeries& series) {
  struct Row {
    std::string label;
    double mean, low, high;
  };
  std::vector<Row> rows;
  for (const auto& rr : series.rungs) {
    if (rr.skipped) continue;
    rows.push_back({rr.box.k_string(';') + "/" + std::to_string(rr.box.m), rr.summary.mean_ratio, rr.summary.ci.low,
                    rr.summary.ci.high});
  }
  const double w = 640, h = 400, left = 70, right = 20, top = 30, bottom = 60;
  double lo = 0.0, hi = 1.0;
  if (!rows.empty()) {
    lo = hi = rows.front().mean;
    for (const auto& r : rows) {
      lo = std::min({lo, r.low, r.mean});
      hi = std::max({hi, r.high, r.mean});
    }
  }
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.1 * (hi - lo);
  lo -= pad;
  hi += pad;
  auto y = [&](double v) { return top + (h - top - bottom) * (hi - v) / (hi - lo); };
  auto x = [&](std::size_t i) {
    return rows.size() < 2 ? (left + w - right) / 2
                           : left + (w - left - right) * static_cast<double>(i) / static_cast<double>(rows.size() - 1);
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << left << "\" y=\"18\" font-size=\"13\">tau_min / ||k||_v, " << series.plan.dist.to_string()
     << ", d=" << series.plan.d << "</text>\n"
     << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << h - bottom
     << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << left << "\" y1=\"" << h - bottom << "\" x2=\"" << w - right << "\" y2=\"" << h - bottom
     << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = lo + (hi - lo) * i / 4.0;
    os << "<text x=\"" << left - 6 << "\" y=\"" << f2(y(v) + 4) << "\" text-anchor=\"end\">" << f2(v) << "</text>\n";
  }
  std::string path;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const std::string xi = f2(x(i));
    os << "<line x1=\"" << xi << "\" y1=\"" << f2(y(r.low)) << "\" x2=\"" << xi << "\" y2=\"" << f2(y(r.high))
       << "\" stroke=\"steelblue\" stroke-width=\"2\"/>\n"
       << "<circle cx=\"" << xi << "\" cy=\"" << f2(y(r.mean)) << "\" r=\"4\" fill=\"steelblue\"/>\n"
       << "<text x=\"" << xi << "\" y=\"" << h - bottom + 16 << "\" text-anchor=\"middle\">" << r.label
       << "</text>\n";
    path += (i ? " L " : "M ") + xi + " " + f2(y(r.mean));
  }
  if (!path.empty()) os << "<path d=\"" << path << "\" fill=\"none\" stroke=\"steelblue\" stroke-dasharray=\"4 3\"/>\n";
  os << "<text x=\"" << (left + w - right) / 2 << "\" y=\"" << h - 12 << "\" text-anchor=\"middle\">rung (k/m)</text>\n"
     << "</svg>\n";
  return os.str();
}

std::string cut_svg(const CapacityField& field, const Cutset& cut, const Region& box) {
  if (box.d != 2) throw SpecError("cut rendering needs d = 2");
  const Grid& g = field.grid();
  const auto edges = region_edges(g, box);
  Capacity top = 0;
  for (EdgeId e : edges) top = std::max(top, field.capacity(e));
  std::vector<std::uint8_t> in_cut(g.edge_count(), 0);
  for (EdgeId e : cut.edges) in_cut[e] = 1;

  const double cell = std::clamp(480.0 / std::max(box.extent(0), box.extent(1)), 4.0, 32.0);
  const double margin = 20;
  const double w = cell * box.extent(0) + 2 * margin;
  const double h = cell * box.extent(1) + 2 * margin;
  // Height grows upward.
  auto px = [&](const Point& p) { return margin + cell * (p[0] - box.lo[0]); };
  auto py = [&](const Point& p) { return h - margin - cell * (p[1] - box.lo[1]); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f2(w) << "\" height=\"" << f2(h) << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  auto draw = [&](EdgeId e, bool cut_pass) {
    if (static_cast<bool>(in_cut[e]) != cut_pass) return;
    const EdgeEnds ends = g.edge(e);
    const Point a = g.point(ends.lower);
    const Point b = g.point(ends.upper);
    std::string colour;
    double width = 1.5;
    if (cut_pass) {
      colour = "#d62728";
      width = 3.0;
    } else {
      const double frac = top > 0 ? static_cast<double>(field.capacity(e)) / static_cast<double>(top) : 0.0;
      const int shade = static_cast<int>(std::lround(230.0 * (1.0 - frac)));
      colour = "rgb(" + std::to_string(shade) + "," + std::to_string(shade) + "," + std::to_string(shade) + ")";
    }
    os << "<line x1=\"" << f2(px(a)) << "\" y1=\"" << f2(py(a)) << "\" x2=\"" << f2(px(b)) << "\" y2=\"" << f2(py(b))
       << "\" stroke=\"" << colour << "\" stroke-width=\"" << width << "\"/>\n";
  };
  for (EdgeId e : edges) draw(e, false);
  for (EdgeId e : edges) draw(e, true);
  os << "</svg>\n";
  return os.str();
}

SampleSeries series_from_jsonl(const std::string& jsonl, const ExperimentPlan& plan) {
  SampleSeries series;
  series.plan = plan;
  for (const BoxSpec& b : plan.rungs) {
    RungResult rr;
    rr.box = b;
    series.rungs.push_back(std::move(rr));
  }
  std::istringstream in(jsonl);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw SpecError("samples line " + std::to_string(lineno) + ": " + e.what());
    }
    SampleRecord r;
    try {
      r.rung = j.at("rung").get<std::size_t>();
      r.replicate = j.at("replicate").get<std::size_t>();
      r.replicate_id = j.at("replicate_id").get<std::uint32_t>();
      r.tau_min = j.at("tau_min").get<Capacity>();
      r.n_bar = j.at("nbar").get<std::size_t>();
      r.n_plus = j.at("nplus").get<std::size_t>();
      r.n_minus = j.at("nminus").get<std::size_t>();
      r.j = j.at("j").get<std::size_t>();
      r.vertices = j.at("vertices").get<std::size_t>();
      r.regular = j.at("regular").get<bool>();
    } catch (const nlohmann::json::exception& e) {
      throw SpecError("samples line " + std::to_string(lineno) + ": " + e.what());
    }
    if (r.rung >= series.rungs.size() || j.at("m").get<int>() != plan.rungs[r.rung].m ||
        j.at("scale_bits").get<int>() != plan.quant_bits) {
      throw SpecError("samples line " + std::to_string(lineno) + " does not match the configured rungs");
    }
    series.rungs[r.rung].records.push_back(r);
  }
  for (auto& rr : series.rungs) {
    std::sort(rr.records.begin(), rr.records.end(),
              [](const SampleRecord& a, const SampleRecord& b) { return a.replicate < b.replicate; });
    if (rr.records.empty()) {
      rr.skipped = true;
      rr.skip_reason = "no samples";
      continue;
    }
    rr.summary = summarize(rr.box, rr.records, plan.quant_bits);
  }
  return series;
}

ReplayReport replay_all(const SampleSeries& series, unsigned workers) {
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t g = 0; g < series.rungs.size(); ++g) {
    for (std::size_t r = 0; r < series.rungs[g].records.size(); ++r) jobs.emplace_back(g, r);
  }
  std::atomic<std::size_t> exact{0};
  parallel_for(jobs.size(), workers, [&](std::size_t i) {
    const auto [g, r] = jobs[i];
    const SampleRecord& rec = series.rungs[g].records[r];
    if (run_replicate(series.plan, rec.rung, rec.replicate).tau_min == rec.tau_min) ++exact;
  });
  return {jobs.size(), exact.load()};
}

std::string manifest_json(const RunConfig& config, const SampleSeries& series,
                          const std::optional<CheckReport>& checks, const std::optional<ReplayReport>& replay) {
  nlohmann::json j;
  j["version"] = version_string();
  j["config"] = config_to_text(config);
  j["master_seed"] = config.plan.master_seed;
  j["scale_bits"] = config.plan.quant_bits;
  j["distribution"] = config.plan.dist.to_string();
  j["d"] = config.plan.d;
  j["replicates"] = config.plan.replicates;
  j["beta_bar"] = config.plan.beta_bar();
  j["p_c_reference"] = config.p_c;
  j["verification"] = verification_name(config.verification);
  nlohmann::json rungs = nlohmann::json::array();
  for (const auto& rr : series.rungs) {
    nlohmann::json r{{"k", rr.box.k}, {"m", rr.box.m}, {"skipped", rr.skipped}};
    if (rr.skipped) {
      r["skip_reason"] = rr.skip_reason;
    } else {
      r["irregular"] = rr.summary.irregular;
    }
    rungs.push_back(r);
  }
  j["rungs"] = rungs;
  const auto est = flow_constant_estimate(series);
  j["estimate"] = {{"nu_hat", est.nu_hat},
                   {"ci_low", est.ci.low},
                   {"ci_high", est.ci.high},
                   {"cauchy_gap", est.cauchy_gap},
                   {"warnings", est.warnings}};
  if (checks) j["checks"] = nlohmann::json::parse(checks->to_json());
  if (replay) j["replay"] = {{"checked", replay->checked}, {"exact", replay->exact}};
  return j.dump(2) + "\n";
}

std::string config_from_manifest(const std::string& manifest) {
  try {
    return nlohmann::json::parse(manifest).at("config").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("manifest: ") + e.what());
  }
}

}  // namespace latflow
