#include "latflow/checks.hpp"

#include <cstdlib>
#include <functional>

#include "json.hpp"
#include "latflow/cutset.hpp"
#include "latflow/errors.hpp"
#include "latflow/estimator.hpp"
#include "latflow/flow.hpp"
#include "latflow/patch.hpp"
#include "latflow/renorm.hpp"

namespace latflow {
namespace {

enum Check : std::size_t {
  kDuality,
  kFeasible,
  kBoundaryIdentity,
  kBoundaryConnected,
  kBoundaryCount,
  kRestrictionCutset,
  kRestrictionShorter,
  kShellBound,
  kExitsDisjoint,
  kExitBoundary,
  kExitsMaximal,
  kMirrorPatch,
  kGammaStructure,
  kGammaZeroCutset,
  kGammaBlockedOrDisjoint,
  kCubePacking,
  kCheckCount
};

const char* const kNames[kCheckCount] = {
    "min_cut_equals_max_flow",   "flow_is_feasible",        "cut_is_exterior_boundary",
    "exterior_boundary_connected", "boundary_count_bound",  "restriction_is_cutset",
    "restriction_not_longer",    "shell_bound",             "exits_disjoint",
    "exit_boundary_in_cut",      "exits_maximal",           "mirror_patch_is_cutset",
    "gamma_structure",           "gamma_zero_cutset",       "gamma_blocked_or_disjoint",
    "cube_packing",
};

struct Outcome {
  std::vector<int> state = std::vector<int>(kCheckCount, -1);  // -1 not run, 0 failed, 1 passed
  std::vector<std::string> why = std::vector<std::string>(kCheckCount);
  bool skipped = false;

  void record(Check c, bool ok, const std::string& detail = {}) {
    if (state[c] == 0) return;
    state[c] = ok ? 1 : 0;
    if (!ok) why[c] = detail;
  }
};

struct Family {
  int d;
  BoxSpec box;
  int gamma_margin;
};

Family family(int d) {
  if (d == 2) return {2, build_box(2, {8}, 8), 24};
  return {3, build_box(3, {4, 4}, 4), 12};
}

void cut_checks(const CheckPlan& plan, const Family& fam, std::uint32_t id, Outcome& out) {
  const Region box = fam.box.region();
  CapacityField field = sample_field(box, plan.dist, plan.master_seed, id);
  const FlowResult flow = max_flow_box(field, box);
  const Cutset cut = make_self_avoiding(min_cut_from_flow(flow, field), field);
  if (plan.tamper && !cut.edges.empty()) {
    const EdgeId e = cut.edges[cut.edges.size() / 2];
    field.set(e, field.capacity(e) == 0 ? field.quantum_one() : 0);
  }
  const Capacity tau = passage_time(field, cut.edges);
  out.record(kDuality, tau == flow.value,
             "cut passage time " + std::to_string(tau) + " != flow value " + std::to_string(flow.value));
  const FlowCheck fc = verify_flow(flow, field);
  out.record(kFeasible, fc.ok, fc.violation);

  const ConnectivityReport conn = connectivity_structure(cut, field.grid());
  out.record(kBoundaryIdentity, conn.identity_holds, "exterior edge boundary differs from the cut");
  out.record(kBoundaryConnected, conn.boundary_connected, "exterior vertex boundary is not connected");
  out.record(kBoundaryCount, conn.count_bound_holds,
             std::to_string(cut.edges.size()) + " edges for " + std::to_string(conn.exterior_boundary.size()) +
                 " boundary vertices");

  std::vector<int> inner = fam.box.k;
  inner[0] = static_cast<int>(id % static_cast<std::uint32_t>(inner[0] + 1));
  const NestedBoxReport nest = check_nested_boxes(field, fam.box, inner);
  out.record(kRestrictionCutset, nest.restriction_is_cutset, "restricted cut does not separate the inner box");
  out.record(kRestrictionShorter, nest.inner_le_outer,
             "inner " + std::to_string(nest.inner_time) + " > outer " + std::to_string(nest.outer_time));
  out.record(kShellBound, nest.outer_le_inner_plus_shell,
             "outer " + std::to_string(nest.outer_time) + " > inner plus shell");

  for (int coord = 0; coord <= fam.box.k[0]; ++coord) {
    const TunnelExits ex = tunnel_exits(cut, field.grid(), 0, coord);
    const std::string where = "plane x0=" + std::to_string(coord);
    out.record(kExitsDisjoint, verify_exit_disjoint(ex), where);
    out.record(kExitBoundary, ex.boundary_in_cutset, where);
    out.record(kExitsMaximal, ex.closed_under_paths, where);
  }
}

void patch_check(const CheckPlan& plan, const Family& fam, std::uint32_t id, Outcome& out) {
  const Region b = fam.box.region();
  const ReflectionMap m{0, fam.box.k[0], 0};
  Region joined = b;
  joined.hi[0] = m.apply(b).hi[0];
  const auto base = sample_field(joined, plan.dist, plan.master_seed ^ 0x5bd1e995u, id);
  const auto f = mirror_field(base, m, b);
  const Grid& g = f.grid();
  const Cutset w = canonical_min_cut(f, b);
  const Cutset w2 = reflect_cutset(w, g, m);
  try {
    const Cutset u = patch_cutsets(w, w2, tunnel_exits(w, g, 0, fam.box.k[0]),
                                   tunnel_exits(w2, g, 0, fam.box.k[0] + 1), joined, g);
    out.record(kMirrorPatch, is_cutset(g, u) && u.passage_time == 2 * w.passage_time,
               "patched union fails the path check");
  } catch (const std::exception& e) {
    out.record(kMirrorPatch, false, e.what());
  }
}

void gamma_checks(const CheckPlan& plan, const Family& fam, std::uint32_t id, Outcome& out) {
  const Region box = fam.box.region();
  const double p = fam.d == 2 ? plan.gamma_p_open_2d : plan.gamma_p_open_3d;
  const int margin = plan.margin > 0 ? plan.margin : fam.gamma_margin;
  const auto f = sample_field(renorm_window(box, plan.t, margin), DistributionSpec::bernoulli(p, 1.0),
                              plan.master_seed ^ 0x9e3779b9u, id);
  RenormDecomposition r;
  try {
    r = decompose(f, box, plan.t);
  } catch (const PreconditionError&) {
    out.skipped = true;
    return;
  }
  std::string flags;
  for (bool b : {r.gamma_in_boundary, r.gamma_connected, r.ponds_avoid_cluster, r.s_avoids_cluster,
                 r.cubic_exterior_contained}) {
    flags += b ? '1' : '0';
  }
  out.record(kGammaStructure, flags == "11111", "structure flags " + flags);
  out.record(kGammaZeroCutset, verify_gamma_zero_cutset(r, f), "closed edges of the cube set do not separate");
  const CubePropertyReport cp = verify_blocked_or_disjoint(r, f);
  out.record(kGammaBlockedOrDisjoint, cp.ok, std::to_string(cp.failures.size()) + " cubes are neither");

  const auto packed = disjoint_3t_packing(r.gamma, fam.d);
  bool separated = true;
  for (std::size_t i = 0; i < packed.size() && separated; ++i) {
    for (std::size_t j = i + 1; j < packed.size() && separated; ++j) {
      int gap = 0;
      for (int a = 0; a < fam.d; ++a) gap = std::max(gap, std::abs(packed[i][a] - packed[j][a]));
      separated = gap >= 3;
    }
  }
  const std::size_t need = (r.gamma.size() + (std::size_t{1} << (2 * fam.d)) - 1) >> (2 * fam.d);
  out.record(kCubePacking, separated && packed.size() >= need,
             std::to_string(packed.size()) + " packed cubes for " + std::to_string(r.gamma.size()));
}

}  // namespace

std::vector<std::string> check_names() { return {std::begin(kNames), std::end(kNames)}; }

bool CheckReport::ok() const {
  for (const auto& c : checks) {
    if (c.failed > 0) return false;
  }
  return true;
}

const CheckTally& CheckReport::at(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw RangeError("no check named " + name);
}

std::string CheckReport::to_json() const {
  nlohmann::json j;
  for (const auto& c : checks) {
    nlohmann::json e{{"passed", c.passed}, {"failed", c.failed}};
    if (c.failed > 0) e["first_failure"] = c.first_failure;
    j["checks"][c.name] = e;
  }
  j["skipped"] = skipped;
  j["warnings"] = warnings;
  j["ok"] = ok();
  return j.dump(2);
}

CheckReport run_checks(const CheckPlan& plan, unsigned workers) {
  CheckReport rep;
  for (const char* n : kNames) rep.checks.push_back({n, 0, 0, {}});
  const std::size_t total = plan.realizations_2d + plan.realizations_3d;
  if (total == 0) {
    rep.warnings.push_back("empty realization budget: nothing was checked");
    return rep;
  }
  std::vector<Outcome> outcomes(total);
  parallel_for(total, workers, [&](std::size_t i) {
    const bool plane = i < plan.realizations_2d;
    const Family fam = family(plane ? 2 : 3);
    const auto id = static_cast<std::uint32_t>(plane ? i : i - plan.realizations_2d);
    cut_checks(plan, fam, id, outcomes[i]);
    patch_check(plan, fam, id, outcomes[i]);
    gamma_checks(plan, fam, id, outcomes[i]);
  });
  for (std::size_t i = 0; i < total; ++i) {
    const bool plane = i < plan.realizations_2d;
    const std::size_t id = plane ? i : i - plan.realizations_2d;
    rep.skipped += outcomes[i].skipped;
    for (std::size_t c = 0; c < kCheckCount; ++c) {
      auto& tally = rep.checks[c];
      if (outcomes[i].state[c] == 1) ++tally.passed;
      if (outcomes[i].state[c] == 0) {
        if (tally.failed++ == 0) {
          tally.first_failure = "d=" + std::to_string(plane ? 2 : 3) + " realization " + std::to_string(id) + ": " +
                                outcomes[i].why[c];
        }
      }
    }
  }
  return rep;
}

}  // namespace latflow
