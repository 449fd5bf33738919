#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "latflow/capacity.hpp"
#include "latflow/cutset.hpp"
#include "latflow/lattice.hpp"

namespace latflow {

/// Maximum flow on a host region of a capacity field's window.
///
/// `flow[e]` is indexed by window EdgeId and signed: positive means fluid
/// moves from the lower endpoint to the upper one. Edges outside the host
/// carry zero.
struct FlowResult {
  Region host;
  Capacity value = 0;
  std::vector<Capacity> flow;
  std::vector<std::uint8_t> is_source;    // per window vertex
  std::vector<std::uint8_t> is_sink;      // per window vertex
  std::vector<std::uint8_t> source_side;  // residual-reachable from the sources

  Capacity magnitude(EdgeId e) const { return flow[e] < 0 ? -flow[e] : flow[e]; }
  /// +1 lower to upper, -1 upper to lower, 0 idle.
  int orientation(EdgeId e) const { return (flow[e] > 0) - (flow[e] < 0); }
  std::vector<VertexId> sources() const;
  std::vector<VertexId> sinks() const;
};

/// Flow from the bottom face to the top face inside `box` (a region of the
/// field's window, last axis = height). SpecError when the height is 0,
/// RangeError when the box leaves the window.
FlowResult max_flow_box(const CapacityField& field, const Region& box);
FlowResult max_flow_box(const CapacityField& field, const BoxSpec& box);

/// Flow from every vertex of `box` to the boundary of box.expanded(margin).
/// Requires margin >= 1; the expanded box must lie in the window.
FlowResult max_flow_to_boundary(const CapacityField& field, const Region& box, int margin,
                                std::uint64_t max_vertices = std::uint64_t{1} << 26);

/// Maximum flow between arbitrary vertex sets of a host region.
FlowResult max_flow(const CapacityField& field, const Region& host,
                    const std::vector<VertexId>& sources, const std::vector<VertexId>& sinks);

struct FlowCheck {
  bool ok = true;
  std::string violation;
  std::optional<VertexId> vertex;
  std::optional<EdgeId> edge;
};

/// Admissibility, conservation off sources and sinks, and value accounting,
/// all in exact integer arithmetic.
FlowCheck verify_flow(const FlowResult& result, const CapacityField& field);

/// Edges leaving the residual-reachable set. ContractError when the flow is
/// not maximal (an unsaturated crossing edge or a reachable sink).
Cutset min_cut_from_flow(const FlowResult& result, const CapacityField& field);

/// The residual cut reduced to a self-avoiding cutset: W(k,m) for a box.
Cutset canonical_min_cut(const CapacityField& field, const Region& box);

}  // namespace latflow
