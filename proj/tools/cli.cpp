#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "latflow/checks.hpp"
#include "latflow/config.hpp"
#include "latflow/errors.hpp"
#include "latflow/flow.hpp"
#include "latflow/report.hpp"

namespace latflow::cli {
namespace {

namespace fs = std::filesystem;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config;
  std::optional<unsigned> workers;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

RunConfig resolve(const Options& o) {
  RunConfig c = load_config(o.config);
  if (o.workers) c.workers = *o.workers;
  if (o.seed) c.plan.master_seed = *o.seed;
  if (o.out) c.out_dir = *o.out;
  return c;
}

void prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir);
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  f.close();
  if (!f) throw IoError("cannot write " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void print_checks(const CheckReport& rep, std::ostream& out, std::ostream& err) {
  for (const auto& w : rep.warnings) err << "warning: " << w << '\n';
  for (const auto& c : rep.checks) {
    out << (c.failed ? "FAIL " : "ok   ") << c.name << " passed=" << c.passed << " failed=" << c.failed;
    if (c.failed) out << " first: " << c.first_failure;
    out << '\n';
  }
  out << "skipped realizations: " << rep.skipped << '\n';
}

void write_svgs(const SampleSeries& series, const fs::path& dir) {
  write_file(dir / "convergence.svg", convergence_svg(series));
  if (series.plan.d != 2) return;
  for (auto it = series.rungs.rbegin(); it != series.rungs.rend(); ++it) {
    if (it->skipped) continue;
    const std::size_t rung = static_cast<std::size_t>(std::distance(it, series.rungs.rend()) - 1);
    const Region box = it->box.region();
    const auto field = sample_field(box, series.plan.dist, series.plan.master_seed,
                                    replicate_id(series.plan, rung, 0), series.plan.quant_bits);
    write_file(dir / "cut.svg", cut_svg(field, canonical_min_cut(field, box), box));
    return;
  }
}

int do_run(const Options& o, std::ostream& out, std::ostream& err) {
  const RunConfig c = resolve(o);
  prepare_dir(c.out_dir);
  const fs::path dir = c.out_dir;
  const SampleSeries series = run_plan(c.plan, c.workers);
  for (const auto& rr : series.rungs) {
    if (rr.skipped) err << "warning: skipped rung k=" << rr.box.k_string(';') << ": " << rr.skip_reason << '\n';
  }
  std::optional<CheckReport> checks;
  std::optional<ReplayReport> replay;
  if (c.verification != Verification::kOff) {
    checks = run_checks(c.check_plan(), c.workers);
    print_checks(*checks, out, err);
  }
  if (c.verification == Verification::kFull) {
    replay = replay_all(series, c.workers);
    out << "replay exact: " << replay->exact << "/" << replay->checked << '\n';
  }
  if (c.write_jsonl) write_file(dir / "samples.jsonl", samples_jsonl(series));
  if (c.write_csv) write_file(dir / "summary.csv", summary_csv(series));
  write_file(dir / "timings.csv", timings_csv(series));
  write_file(dir / "manifest.json", manifest_json(c, series, checks, replay));
  if (c.write_svg) write_svgs(series, dir);

  const auto est = flow_constant_estimate(series);
  out << "nu_hat = " << est.nu_hat << "  95% CI [" << est.ci.low << ", " << est.ci.high << "]\n";
  for (const auto& w : est.warnings) err << "warning: " << w << '\n';
  const bool failed = (checks && !checks->ok()) || (replay && replay->exact != replay->checked);
  return failed ? kViolation : kOk;
}

int do_verify(const Options& o, std::ostream& out, std::ostream& err) {
  const RunConfig c = resolve(o);
  const CheckReport rep = run_checks(c.check_plan(), c.workers);
  print_checks(rep, out, err);
  if (o.out) {
    prepare_dir(*o.out);
    write_file(fs::path(*o.out) / "checks.json", rep.to_json() + "\n");
  }
  return rep.ok() ? kOk : kViolation;
}

int do_plot(const Options& o, std::ostream& out) {
  std::string dir;
  if (o.out) {
    dir = *o.out;
  } else if (!o.config.empty()) {
    dir = load_config(o.config).out_dir;
  } else {
    throw ConfigError("plot needs --out or --config");
  }
  const RunConfig c = parse_config(config_from_manifest(read_file(fs::path(dir) / "manifest.json")));
  const SampleSeries series = series_from_jsonl(read_file(fs::path(dir) / "samples.jsonl"), c.plan);
  write_svgs(series, dir);
  out << "wrote " << (fs::path(dir) / "convergence.svg").string() << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random-capacity lattice flows: sampling, min cuts, structural checks"};
  app.name("latflow");
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", o.config, "flat key = value config file");
    if (config_required) opt->required();
    sub->add_option("--workers", o.workers, "worker threads");
    sub->add_option("--seed", o.seed, "master seed, overrides the config");
    sub->add_option("--out", o.out, "output directory");
  };
  CLI::App* run_cmd = app.add_subcommand("run", "sample, solve and write samples, summary and manifest");
  CLI::App* verify_cmd = app.add_subcommand("verify", "run the per-realization structural checks");
  CLI::App* plot_cmd = app.add_subcommand("plot", "re-render SVGs from an existing output directory");
  add_common(run_cmd, true);
  add_common(verify_cmd, true);
  add_common(plot_cmd, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (run_cmd->parsed()) return do_run(o, out, err);
    if (verify_cmd->parsed()) return do_verify(o, out, err);
    return do_plot(o, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const SpecError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kViolation;
  }
}

}  // namespace latflow::cli
