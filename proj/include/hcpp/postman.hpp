#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "hcpp/graph.hpp"

namespace hcpp {

/// Walk from `source` to `target` covering every required edge, using only
/// admitted edges of `graph`. The graph is borrowed and must outlive the
/// instance.
struct StRppInstance {
  const WeightedGraph* graph = nullptr;
  EdgeMask allowed;
  std::vector<EdgeId> required;
  VertexId source = 0;
  VertexId target = 0;
};

/// Closed-walk variant: no endpoints.
struct RppInstance {
  const WeightedGraph* graph = nullptr;
  EdgeMask allowed;
  std::vector<EdgeId> required;
};

/// Intermediate objects of the metric 5/3-approximation. Pairs are in host
/// vertex ids; when source == target the pipeline adds a dummy source whose
/// id is graph->vertex_count() and `dummy_source` is set.
struct ApproxTrace {
  std::vector<std::pair<VertexId, VertexId>> connector;
  std::vector<VertexId> parity_set;
  std::vector<std::pair<VertexId, VertexId>> matching;
  /// ω(R ∪ T) with connector edges at closure distance.
  Weight required_and_connector_weight = 0;
  Weight matching_weight = 0;
  bool dummy_source = false;
};

struct ApproxResult {
  Walk walk;
  ApproxTrace trace;
};

inline constexpr std::size_t kDefaultOracleLimit = 7;

/// Every required-edge endpoint and both terminals lie in one admitted component.
bool is_feasible(const StRppInstance& inst);
bool is_feasible(const RppInstance& inst);

/// Optimal closed walk traversing every edge (classic Chinese postman):
/// E ⊎ minimum T-join on the odd vertices, then an Euler tour. Isolated
/// vertices are ignored; edges in more than one component are infeasible.
Walk solve_cpp_exact(const WeightedGraph& g);

/// Metric closure on V(R) ∪ {s, t}, minimum connector, parity set, minimum
/// perfect matching, Euler walk, then expansion of closure edges to host paths.
/// ω(walk) ≤ 5/3 · OPT. Throws InfeasibleError.
ApproxResult solve_strpp_approx(const StRppInstance& inst);

/// Exact by exhaustive search over the order and orientation of the required
/// edges, joined by shortest paths. Throws SizeLimitError above `limit`.
Walk solve_strpp_oracle(const StRppInstance& inst, std::size_t limit = kDefaultOracleLimit);

/// Exact for instances whose required edges form one component. Tries every
/// attachment of s and t to V(R) and closes the parity with a minimum T-join.
Walk solve_strpp_connected_exact(const StRppInstance& inst);

/// Closed-walk oracle; the first required edge is pinned to kill rotations and
/// reflections. R = ∅ yields the trivial walk at vertex 0.
Walk solve_rpp_oracle(const RppInstance& inst, std::size_t limit = kDefaultOracleLimit);

/// RPP instance whose optimum is the s-t optimum plus 2ω(E): a required edge
/// {s, t} of that weight is added. If s = t or s is adjacent to t, fresh
/// sources joined by required zero-weight edges are prepended first.
struct RppReduction {
  WeightedGraph graph;
  EdgeMask allowed;
  std::vector<EdgeId> required;
  EdgeId closing_edge = 0;
  Weight closing_weight = 0;
  VertexId source = 0;
  VertexId target = 0;
  VertexId original_source = 0;
  std::size_t original_vertex_count = 0;
  std::vector<VertexId> added_sources;

  RppInstance instance() const { return RppInstance{&graph, allowed, required}; }
  /// Maps a closed walk of the RPP instance that uses the closing edge exactly
  /// once back to an s-t walk of the original instance.
  Walk lift(const Walk& closed) const;
};

RppReduction reduce_strpp_to_rpp(const StRppInstance& inst);

}  // namespace hcpp
