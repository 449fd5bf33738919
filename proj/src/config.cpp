#include "latflow/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "latflow/errors.hpp"

namespace latflow {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

template <class T>
T parse_num(std::string_view v) {
  T x{};
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ConfigError("expected a number, got '" + std::string(v) + "'");
  }
  return x;
}

bool parse_bool(std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("expected true or false, got '" + std::string(v) + "'");
}

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<BoxSpec> parse_rungs(std::string_view v, int d) {
  std::vector<BoxSpec> out;
  for (std::string_view item : split(v, ',')) {
    const auto slash = item.find('/');
    if (slash == std::string_view::npos) throw ConfigError("rung '" + std::string(item) + "' is not k/m");
    std::vector<int> k;
    for (std::string_view c : split(item.substr(0, slash), ';')) k.push_back(parse_num<int>(c));
    out.push_back(build_box(d, k, parse_num<int>(trim(item.substr(slash + 1)))));
  }
  return out;
}

Verification parse_verification(std::string_view v) {
  if (v == "off") return Verification::kOff;
  if (v == "lemma-checks") return Verification::kChecks;
  if (v == "full") return Verification::kFull;
  throw ConfigError("verification must be off, lemma-checks or full");
}

}  // namespace

std::string verification_name(Verification v) {
  switch (v) {
    case Verification::kOff: return "off";
    case Verification::kChecks: return "lemma-checks";
    case Verification::kFull: return "full";
  }
  return "off";
}

CheckPlan RunConfig::check_plan() const {
  CheckPlan c;
  c.dist = plan.dist;
  c.realizations_2d = verify_realizations_2d;
  c.realizations_3d = verify_realizations_3d;
  c.master_seed = plan.master_seed;
  c.t = t;
  c.margin = margin;
  c.tamper = verify_tamper;
  return c;
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::string rungs_text;
  int ladder_k0 = 8;
  std::size_t ladder_rungs = 3;
  double ladder_growth = 1.0;
  std::string formats;
  bool p_c_given = false;

  using Setter = std::function<void(std::string_view)>;
  const std::map<std::string, Setter, std::less<>> setters = {
      {"dist", [&](auto v) { c.plan.dist = DistributionSpec::parse(v); }},
      {"d", [&](auto v) { c.plan.d = parse_num<int>(v); }},
      {"rungs", [&](auto v) { rungs_text = v; }},
      {"ladder_k0", [&](auto v) { ladder_k0 = parse_num<int>(v); }},
      {"ladder_rungs", [&](auto v) { ladder_rungs = parse_num<std::size_t>(v); }},
      {"ladder_growth", [&](auto v) { ladder_growth = parse_num<double>(v); }},
      {"replicates", [&](auto v) { c.plan.replicates = parse_num<std::size_t>(v); }},
      {"seed", [&](auto v) { c.plan.master_seed = parse_num<std::uint64_t>(v); }},
      {"epsilon", [&](auto v) { c.plan.epsilon = parse_num<double>(v); }},
      {"delta", [&](auto v) { c.plan.delta = parse_num<double>(v); }},
      {"beta", [&](auto v) { c.plan.beta = parse_num<double>(v); }},
      {"scale_bits", [&](auto v) { c.plan.quant_bits = parse_num<int>(v); }},
      {"max_vertices", [&](auto v) { c.plan.max_vertices = parse_num<std::uint64_t>(v); }},
      {"t", [&](auto v) { c.t = parse_num<int>(v); }},
      {"margin", [&](auto v) { c.margin = parse_num<int>(v); }},
      {"p_c", [&](auto v) { c.p_c = parse_num<double>(v), p_c_given = true; }},
      {"out", [&](auto v) { c.out_dir = v; }},
      {"formats", [&](auto v) { formats = v; }},
      {"verification", [&](auto v) { c.verification = parse_verification(v); }},
      {"workers", [&](auto v) { c.workers = parse_num<unsigned>(v); }},
      {"verify_realizations_2d", [&](auto v) { c.verify_realizations_2d = parse_num<std::size_t>(v); }},
      {"verify_realizations_3d", [&](auto v) { c.verify_realizations_3d = parse_num<std::size_t>(v); }},
      {"verify_tamper", [&](auto v) { c.verify_tamper = parse_bool(v); }},
  };

  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string_view key = trim(s.substr(0, eq));
    const std::string_view value = trim(s.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + std::string(key) + "'");
    }
    try {
      it->second(value);
    } catch (const SpecError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + std::string(key) + ": " + e.what());
    }
  }

  try {
    c.plan.rungs = rungs_text.empty() ? geometric_ladder(c.plan.d, ladder_k0, ladder_rungs, ladder_growth)
                                      : parse_rungs(rungs_text, c.plan.d);
  } catch (const SpecError& e) {
    throw ConfigError(std::string("rungs: ") + e.what());
  }
  if (!formats.empty()) {
    c.write_jsonl = c.write_csv = c.write_svg = false;
    for (std::string_view f : split(formats, ',')) {
      if (f == "none") continue;
      if (f == "jsonl") c.write_jsonl = true;
      else if (f == "csv") c.write_csv = true;
      else if (f == "svg") c.write_svg = true;
      else throw ConfigError("formats: unknown format '" + std::string(f) + "'");
    }
  }
  // Bond percolation literature value for d=3; d=2 is exact.
  if (!p_c_given && c.plan.d == 3) c.p_c = 0.2488;
  // The check boxes have sides 8 and 4, so the cube scale must divide 4.
  if (c.t != 1 && c.t != 2 && c.t != 4) throw ConfigError("t must be 1, 2 or 4");
  try {
    validate_plan(c.plan);
  } catch (const SpecError& e) {
    throw ConfigError(e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_text(const RunConfig& c) {
  std::ostringstream os;
  std::string rungs;
  for (const BoxSpec& b : c.plan.rungs) {
    if (!rungs.empty()) rungs += ", ";
    rungs += b.k_string(';') + "/" + std::to_string(b.m);
  }
  std::string formats;
  for (auto [on, name] : {std::pair{c.write_jsonl, "jsonl"}, {c.write_csv, "csv"}, {c.write_svg, "svg"}}) {
    if (on) formats += std::string(formats.empty() ? "" : ",") + name;
  }
  os << "dist = " << c.plan.dist.to_string() << '\n'
     << "d = " << c.plan.d << '\n'
     << "rungs = " << rungs << '\n'
     << "replicates = " << c.plan.replicates << '\n'
     << "seed = " << c.plan.master_seed << '\n'
     << "epsilon = " << fmt(c.plan.epsilon) << '\n'
     << "delta = " << fmt(c.plan.delta) << '\n'
     << "beta = " << fmt(c.plan.beta) << '\n'
     << "scale_bits = " << c.plan.quant_bits << '\n'
     << "max_vertices = " << c.plan.max_vertices << '\n'
     << "t = " << c.t << '\n'
     << "margin = " << c.margin << '\n'
     << "p_c = " << fmt(c.p_c) << '\n'
     << "out = " << c.out_dir << '\n'
     << "formats = " << (formats.empty() ? "none" : formats) << '\n'
     << "verification = " << verification_name(c.verification) << '\n'
     << "workers = " << c.workers << '\n'
     << "verify_realizations_2d = " << c.verify_realizations_2d << '\n'
     << "verify_realizations_3d = " << c.verify_realizations_3d << '\n'
     << "verify_tamper = " << (c.verify_tamper ? "true" : "false") << '\n';
  return os.str();
}

}  // namespace latflow
