#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latflow/capacity.hpp"
#include "latflow/lattice.hpp"

namespace latflow {

/// Cube index u; the cube is B_t(u) = prod [t*u_i, t*u_i + t] (closed, so
/// neighbouring cubes share faces).
using CubeIndex = Point;

enum class CubeClass {
  kOther,           // outside region
  kCluster,         // meets the cluster, no boundary vertex
  kBoundary,        // in dC_t but not its exterior part
  kExterior,        // exterior cube boundary d_e C_t (holds a d_e C vertex)
  kPond,            // in a pond
};

enum class CubeVerdict { kBlocked, kDisjoint, kNeither };

struct Pond {
  std::vector<CubeIndex> cubes;
  std::vector<CubeIndex> exterior;  // exterior boundary cubes
  bool live = false;
};

/// How S'_t treats the exterior boundaries of ponds.
enum class SCubeRule {
  kAllPonds,   // exclude d_e Q' of every pond
  kLivePonds,  // exclude only the boundaries of live ponds
};

struct RenormOptions {
  SCubeRule s_rule = SCubeRule::kAllPonds;
};

struct RenormDecomposition {
  int t = 0;
  Region box;
  Region cube_range;                      // admissible cube indices
  std::vector<CubeClass> cube_class;      // per cube, indexed by cube_grid
  std::vector<Pond> ponds;
  std::vector<CubeIndex> boundary_cubes;  // dC_t
  std::vector<CubeIndex> exterior_cubes;  // d_e C_t
  std::vector<CubeIndex> s_cubes;         // S_t
  std::vector<CubeIndex> gamma;           // Gamma_t, sorted
  std::size_t cluster_size = 0;
  std::size_t s_vertices = 0;             // |S|

  // Checks computed during construction.
  bool gamma_in_boundary = false;         // Gamma_t within dC_t
  bool gamma_connected = false;           // Z^d-connected as a cube set
  bool ponds_avoid_cluster = false;       // no pond cube meets C or dC
  bool s_avoids_cluster = false;          // S and live ponds miss C
  // Every dC_t cube next to the unbounded cube region holds an exterior
  // boundary vertex of C.
  bool cubic_exterior_contained = false;

  std::size_t live_ponds() const;
  std::size_t dead_ponds() const;
  bool in_gamma(const CubeIndex& u) const;
  std::string summary_json() const;
};

/// Region of the cube B_t(u).
Region cube_region(const CubeIndex& u, int d, int t);
/// The 3t-cube around B_t(u).
Region cube3_region(const CubeIndex& u, int d, int t);

/// The box padded by `margin` rounded up to a multiple of t.
Region renorm_window(const Region& box, int t, int margin);

/// Cube construction around the box's open cluster (box edges count as open).
/// SpecError when the box or window is not aligned to t; PreconditionError
/// when the cluster comes too close to the window boundary.
RenormDecomposition decompose(const CapacityField& field, const Region& box, int t,
                              const RenormOptions& options = {});

/// True iff the closed edges inside Gamma_t cubes separate the box from the
/// window boundary.
bool verify_gamma_zero_cutset(const RenormDecomposition& decomp, const CapacityField& field);

struct CubePropertyDetail {
  bool blocked = false;
  bool blocked_pair = false;     // some pair of sub-cube surfaces is not joined
  bool blocked_escape = false;   // an escaping path misses some surface
  bool disjoint = false;
  CubeVerdict verdict = CubeVerdict::kNeither;
};

/// Blocked/disjoint detection on the 3t-cube around B_t(u), using only edges
/// with an endpoint strictly inside it. Edges joining two vertices of
/// `open_box` count as open. RangeError when the 3t-cube leaves the window.
CubePropertyDetail cube_property_detail(const CapacityField& field, const CubeIndex& u, int t,
                                        const Region* open_box = nullptr);
CubeVerdict cube_property(const CapacityField& field, const CubeIndex& u, int t,
                          const Region* open_box = nullptr);

struct CubePropertyReport {
  bool ok = true;
  std::size_t blocked = 0;
  std::size_t disjoint = 0;
  std::vector<CubeIndex> failures;
};

CubePropertyReport verify_blocked_or_disjoint(const RenormDecomposition& decomp, const CapacityField& field);

/// Cubes whose 3t-cubes have pairwise disjoint interiors; at least
/// |cubes| / 3^d of them.
std::vector<CubeIndex> disjoint_3t_packing(const std::vector<CubeIndex>& cubes, int d);

}  // namespace latflow
