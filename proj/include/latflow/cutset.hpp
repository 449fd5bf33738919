#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "latflow/capacity.hpp"
#include "latflow/lattice.hpp"

namespace latflow {

/// An edge set separating `source` from `sink` inside `host`. Vertex and edge
/// ids refer to the grid of the capacity field the cutset was built on.
struct Cutset {
  Region host;
  std::vector<VertexId> source;
  std::vector<VertexId> sink;
  std::vector<EdgeId> edges;  // ascending
  Capacity passage_time = 0;
  bool self_avoiding = false;

  std::size_t edge_count() const { return edges.size(); }
  /// Number of distinct endpoints of the edges.
  std::size_t vertex_count(const Grid& grid) const;
};

/// True iff every host path from S to T uses an edge of `edges`.
bool is_cutset(const Grid& grid, std::span<const EdgeId> edges, const Region& host,
               std::span<const VertexId> source, std::span<const VertexId> sink);
bool is_cutset(const Grid& grid, const Cutset& cut);

/// Sums capacities over the edge set.
Capacity passage_time(const CapacityField& field, std::span<const EdgeId> edges);

/// Drops redundant edges until every remaining edge is essential. Edges are
/// tried in descending capacity, then descending EdgeId. Throws ContractError
/// when the input does not separate.
Cutset make_self_avoiding(const Cutset& cut, const CapacityField& field);

struct ConnectivityReport {
  std::size_t reachable_vertices = 0;          // |V^|
  std::vector<VertexId> exterior_boundary;     // vertices of the exterior boundary of V^
  std::size_t delta_e_size = 0;                // |exterior boundary edges of V^|
  bool identity_holds = false;                 // those edges == cutset edges
  bool boundary_connected = false;             // L^d-connected
  bool count_bound_holds = false;              // |edges| * 3^(d+1) >= |exterior boundary|
  bool ok() const { return identity_holds && boundary_connected && count_bound_holds; }
};

/// V^ is everything reachable from the source side without crossing the
/// cutset; checks that the cutset is exactly V^'s exterior edge boundary and
/// that the exterior vertex boundary is connected and not too large.
/// Throws ContractError for a cutset that is not self-avoiding.
ConnectivityReport connectivity_structure(const Cutset& cut, const Grid& grid);

struct SizeStats {
  std::size_t n_bar = 0;    // edge count
  std::size_t n_plus = 0;   // tau > eps
  std::size_t n_minus = 0;  // 0 < tau <= eps
  std::size_t j = 0;        // tau > 0
  bool eps_bound_holds = false;  // eps * N+ <= passage time
};

SizeStats size_stats(const Cutset& cut, const CapacityField& field, Capacity epsilon);

struct RegularityReport {
  bool is_regular = false;
  std::size_t vertex_count = 0;
  double bound = 0.0;               // beta_bar * ||k||_v
  std::optional<int> plane;         // offset l from the low side along axis 0
  std::size_t plane_trace_size = 0; // cutset vertices on the two chosen planes
  double trace_bound = 0.0;         // beta_bar * k1^(delta/2) * k2 ... k_{d-1}
  bool pigeonhole_ok = false;       // l <= k1^(1 - delta/2)
};

/// Vertex-count regularity test plus the search for the first pair of planes
/// x_1 = l, x_1 = k_1 - l whose combined trace is small. Throws ContractError
/// for an irregular cutset and PropertyViolation if no plane qualifies.
RegularityReport balanced_plane_search(const Cutset& cut, const Grid& grid, const Region& box,
                                       double beta_bar, double delta);
/// Regularity only, never throws on irregular input.
RegularityReport regularity(const Cutset& cut, const Grid& grid, const Region& box,
                            double beta_bar);

struct TailReport {
  std::vector<std::int64_t> n;   // thresholds
  std::vector<double> tail;      // P^[N >= n]
  double slope = 0.0;            // least-squares slope of log tail over the fit range
  double fit_from = 0.0;
  std::size_t fit_points = 0;
};

/// Empirical tail function of integer samples, evaluated at min + j*bin_width.
TailReport tail_histogram(std::span<const std::int64_t> samples, std::int64_t bin_width,
                          double fit_from);

/// JSON record: host, edge ids, passage time as scaled integer.
std::string cutset_to_json(const Cutset& cut, int quant_bits);
Cutset cutset_from_json(const std::string& text);

}  // namespace latflow
