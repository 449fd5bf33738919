#pragma once

#include <string>
#include <vector>

#include "latflow/capacity.hpp"
#include "latflow/cutset.hpp"
#include "latflow/lattice.hpp"

namespace latflow {

/// A vertex cluster on a plane, as sorted lattice points.
using PlaneCluster = std::vector<Point>;

struct TunnelExits {
  int axis = 0;
  int coord = 0;
  std::vector<EdgeId> trace_edges;   // cutset edges lying in the plane
  std::vector<PlaneCluster> upper;   // T: reach the top face off the cutset
  std::vector<PlaneCluster> lower;   // S: reach the bottom face off the cutset
  std::size_t unlabeled = 0;         // clusters reaching neither face

  // Per-realization checks filled by tunnel_exits.
  bool boundary_in_cutset = false;   // exit boundary edges on the plane are cutset edges
  bool closed_under_paths = false;   // plane vertices reachable from the exits are exits
};

/// Exits of the upper and lower tunnels on the plane x_axis = coord inside the
/// cutset's host. RangeError when the plane misses the host.
TunnelExits tunnel_exits(const Cutset& cut, const Grid& grid, int axis, int coord);

/// True iff no vertex belongs to both an upper and a lower exit.
bool verify_exit_disjoint(const TunnelExits& exits);

/// pi(u) = (2h + 1 - u_axis + shift) along `axis`: reflection about h + 1/2
/// followed by a translation. It is its own inverse.
struct ReflectionMap {
  int axis = 0;
  int h = 0;
  int shift = 0;

  Point apply(Point p) const {
    p[axis] = 2 * h + 1 - p[axis] + shift;
    return p;
  }
  Region apply(const Region& r) const;
};

/// The map sending `box` onto itself reversed along `axis`.
ReflectionMap self_reflection(const Region& box, int axis);

/// Field whose capacity at pi(e) is the source capacity at e, for every edge e
/// of `region`; other edges keep their values. RangeError when pi(region)
/// leaves the window.
CapacityField mirror_field(const CapacityField& field, const ReflectionMap& map, const Region& region);

/// Image of a cutset under pi (edges, faces and host).
Cutset reflect_cutset(const Cutset& cut, const Grid& grid, const ReflectionMap& map);

/// Union of two cutsets on boxes adjacent along `exits.axis`, with W' on the
/// far side. Requires T_j and S_i to equal T'_j and S'_i shifted by one unit;
/// ExitMismatch names the first cluster without a partner. The union is
/// checked as a cutset of `joined` (PropertyViolation if it is not).
Cutset patch_cutsets(const Cutset& w, const Cutset& w_prime, const TunnelExits& exits,
                     const TunnelExits& exits_prime, const Region& joined, const Grid& grid);

struct NestedBoxReport {
  Capacity outer_time = 0;     // tau(W(k,m))
  Capacity inner_time = 0;     // tau(W(k',m))
  Capacity shell_capacity = 0; // sum over edges of B(k,m) outside B(k',m)
  bool restriction_is_cutset = false;  // (a)
  bool inner_le_outer = false;         // (b)
  bool outer_le_inner_plus_shell = false;  // (c)
  bool ok() const { return restriction_is_cutset && inner_le_outer && outer_le_inner_plus_shell; }
};

/// Nested-box comparison for B(k',m) inside B(k,m), both anchored at the
/// origin. SpecError unless k' <= k componentwise.
NestedBoxReport check_nested_boxes(const CapacityField& field, const BoxSpec& outer,
                                   const std::vector<int>& k_inner);

}  // namespace latflow
