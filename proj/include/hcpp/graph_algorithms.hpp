#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hcpp/graph.hpp"

namespace hcpp {

/// Components of the subgraph induced by the admitted edges. Isolated vertices
/// are not reported. Components are sorted internally and ordered by their
/// smallest vertex.
std::vector<std::vector<VertexId>> connected_components(const WeightedGraph& g,
                                                        const EdgeMask& restrict_to = {});

/// Components of the multigraph induced by `m` over an arbitrary edge list.
std::vector<std::vector<VertexId>> connected_components(std::span<const Edge> edges,
                                                        std::size_t vertex_count,
                                                        const EdgeMultiset& m);

/// True when the edges of `m` induce a single component (vacuously for m = {}).
bool is_connected(std::span<const Edge> edges, std::size_t vertex_count, const EdgeMultiset& m);

struct ShortestPathTree {
  VertexId source = 0;
  std::vector<std::optional<Weight>> distance;
  std::vector<std::optional<VertexId>> predecessor;
  std::vector<std::optional<EdgeId>> via;

  bool reaches(VertexId v) const { return distance.at(v).has_value(); }
  /// Tree path from the source to `target`. Throws InfeasibleError if unreachable.
  Walk path_to(VertexId target) const;
};

/// Dijkstra restricted to the admitted edges. Among equal-length routes the
/// predecessor with the smallest vertex id wins.
ShortestPathTree shortest_paths(const WeightedGraph& g, VertexId source, const EdgeMask& allowed = {});

/// Shortest-path metric on a terminal set, with the paths that realize it.
class MetricClosure {
 public:
  std::span<const VertexId> terminals() const { return terminals_; }
  std::size_t size() const { return terminals_.size(); }
  /// Distance between terminals by position in terminals().
  Weight distance(std::size_t i, std::size_t j) const { return dist_[i * terminals_.size() + j]; }
  /// Shortest walk in the host graph from terminals()[i] to terminals()[j].
  Walk expand(std::size_t i, std::size_t j) const;
  /// Position of a host vertex among the terminals.
  std::optional<std::size_t> index_of(VertexId v) const;
  /// The closure as a complete graph whose vertex i is terminals()[i].
  WeightedGraph as_graph(const WeightedGraph& host) const;

 private:
  friend MetricClosure metric_closure(const WeightedGraph&, std::span<const VertexId>, const EdgeMask&);
  std::vector<VertexId> terminals_;
  std::vector<Weight> dist_;
  std::vector<ShortestPathTree> trees_;
};

/// Throws InfeasibleError when two terminals are disconnected.
MetricClosure metric_closure(const WeightedGraph& g, std::span<const VertexId> terminals,
                             const EdgeMask& allowed = {});

/// Euler walk of the multigraph `m` (over `edges`) from `start` to `end`.
///
/// Hierholzer's algorithm, always leaving a vertex by its smallest unused edge
/// id. An empty multiset yields the trivial walk when start == end.
Walk euler_walk(std::span<const Edge> edges, std::size_t vertex_count, const EdgeMultiset& m,
                VertexId start, VertexId end);

inline Walk euler_walk(const WeightedGraph& g, const EdgeMultiset& m, VertexId start, VertexId end) {
  return euler_walk(g.edges(), g.vertex_count(), m, start, end);
}

/// Minimum-weight T such that R ∪ T connects every vertex. Candidates are the
/// admitted edges; ties go to the smaller edge id.
std::vector<EdgeId> spanning_connector(std::span<const Edge> edges, std::size_t vertex_count,
                                       std::span<const EdgeId> required,
                                       const EdgeMask& candidates = {});

inline std::vector<EdgeId> spanning_connector(const WeightedGraph& g, std::span<const EdgeId> required) {
  return spanning_connector(g.edges(), g.vertex_count(), required);
}

/// Minimum-weight edge set whose odd-degree vertices are exactly `t_set`.
/// Every multiplicity in the result is 1.
EdgeMultiset min_t_join(const WeightedGraph& g, std::span<const VertexId> t_set,
                        const EdgeMask& allowed = {});

/// Vertices of odd degree in the multigraph `m`, ascending.
std::vector<VertexId> odd_vertices(std::span<const Edge> edges, std::size_t vertex_count,
                                   const EdgeMultiset& m);

}  // namespace hcpp
