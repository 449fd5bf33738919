#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "latflow/capacity.hpp"
#include "latflow/cutset.hpp"
#include "latflow/lattice.hpp"

namespace latflow {

/// Vertices joined to the seed by open (positive-capacity) paths.
struct OpenCluster {
  std::vector<VertexId> seed;
  std::vector<VertexId> vertices;     // ascending
  std::vector<std::uint8_t> member;   // per window vertex
  bool touches_window_boundary = false;
};

/// With `inside_open`, edges joining two seed vertices count as open whatever
/// their capacity (the convention used for a box seed).
OpenCluster open_cluster(const CapacityField& field, std::span<const VertexId> seed,
                         bool inside_open);
/// Seed = every vertex of `box`.
OpenCluster open_cluster(const CapacityField& field, const Region& box, bool inside_open);

struct BoundarySets {
  std::vector<EdgeId> delta;          // edges with exactly one endpoint in the cluster
  std::vector<EdgeId> delta_e;        // the part facing the window boundary
  std::vector<VertexId> partial;      // outside vertices L^d-adjacent to the cluster
  std::vector<VertexId> partial_e;    // those joined to the window boundary off the cluster
  std::vector<VertexId> partial_i;    // cluster vertices L^d-adjacent to `partial`
};

/// Boundary sets of a finite cluster. PreconditionError when the cluster
/// reaches the window boundary.
BoundarySets exterior_boundary(const OpenCluster& cluster, const Grid& grid);

/// Event G: the box's open cluster (box edges open) stays off the window
/// boundary, so a closed cutset separates the box from it.
bool zero_cutset_exists(const CapacityField& field, const Region& box);

struct BoundaryTail {
  std::vector<std::int64_t> sizes;  // |exterior boundary edges| per finite sample
  std::size_t discarded = 0;        // still touching at the largest window
  std::size_t finite = 0;
  bool insufficient = false;
  TailReport tail;
};

/// Samples the origin's cluster in d dimensions, growing the window (x2) up to
/// `max_margin` while it touches the boundary.
BoundaryTail boundary_tail(const DistributionSpec& dist, int d, std::size_t n_samples,
                           int margin, int max_margin, std::uint64_t seed,
                           std::size_t min_finite = 10);

}  // namespace latflow
