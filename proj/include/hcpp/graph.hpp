#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hcpp/error.hpp"
#include "hcpp/weight.hpp"

namespace hcpp {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  Weight w = 0;

  VertexId other(VertexId x) const { return x == u ? v : u; }
  bool joins(VertexId a, VertexId b) const { return (u == a && v == b) || (u == b && v == a); }
};

/// Simple undirected graph with non-negative integer edge weights.
///
/// Vertices and edges are dense ids in insertion order. Every vertex carries a
/// display name (defaults to its decimal id). Self-loops and parallel edges are
/// rejected. Once built, a graph is only read.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  explicit WeightedGraph(std::size_t vertex_count);
  explicit WeightedGraph(std::vector<std::string> names);

  VertexId add_vertex(std::string name = {});
  EdgeId add_edge(VertexId u, VertexId v, Weight w);

  std::size_t vertex_count() const { return names_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  std::span<const Edge> edges() const { return edges_; }
  /// Incident edge ids of `v`, ascending.
  std::span<const EdgeId> incident(VertexId v) const { return incidence_.at(v); }

  std::optional<EdgeId> find_edge(VertexId u, VertexId v) const;
  std::optional<VertexId> find_vertex(const std::string& name) const;
  const std::string& name(VertexId v) const { return names_.at(v); }
  std::span<const std::string> names() const { return names_; }

  bool has_vertex(VertexId v) const { return v < names_.size(); }
  Weight total_weight() const;
  Weight max_weight() const;

 private:
  std::vector<std::string> names_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> incidence_;
  std::map<std::pair<VertexId, VertexId>, EdgeId> edge_index_;
  std::map<std::string, VertexId> name_index_;
};

/// Edge filter over a graph's edge ids. The empty mask admits every edge.
using EdgeMask = std::vector<bool>;

inline bool admits(const EdgeMask& mask, EdgeId e) { return mask.empty() || mask[e]; }

EdgeMask make_mask(std::size_t edge_count, std::span<const EdgeId> edges);

/// Multiset of edge ids. Multiplicities are positive; absent means zero.
class EdgeMultiset {
 public:
  using Storage = std::map<EdgeId, std::uint32_t>;

  EdgeMultiset() = default;
  EdgeMultiset(std::initializer_list<EdgeId> edges);
  explicit EdgeMultiset(std::span<const EdgeId> edges);

  void add(EdgeId e, std::uint32_t count = 1);
  std::uint32_t multiplicity(EdgeId e) const;

  /// Multiset sum: multiplicities add.
  EdgeMultiset& operator+=(const EdgeMultiset& other);
  /// Multiset difference: multiplicities subtract, clamped at zero.
  EdgeMultiset& operator-=(const EdgeMultiset& other);
  friend EdgeMultiset operator+(EdgeMultiset a, const EdgeMultiset& b) { return a += b; }
  friend EdgeMultiset operator-(EdgeMultiset a, const EdgeMultiset& b) { return a -= b; }
  friend bool operator==(const EdgeMultiset&, const EdgeMultiset&) = default;

  /// Keep each edge with multiplicity mod 2.
  EdgeMultiset reduced_mod2() const;

  bool empty() const { return counts_.empty(); }
  std::size_t distinct() const { return counts_.size(); }
  std::uint64_t size() const;
  std::vector<EdgeId> support() const;

  Weight weight(std::span<const Edge> edges) const;
  /// V(R): endpoints of the edges present, ascending.
  std::vector<VertexId> vertices(std::span<const Edge> edges) const;
  /// Degree of every vertex in the induced multigraph, indexed by vertex id.
  std::vector<std::uint64_t> degrees(std::span<const Edge> edges, std::size_t vertex_count) const;

  Storage::const_iterator begin() const { return counts_.begin(); }
  Storage::const_iterator end() const { return counts_.end(); }

 private:
  Storage counts_;
};

/// Alternating vertex/edge sequence v0, e1, v1, ..., el, vl.
struct Walk {
  std::vector<VertexId> vertices;
  std::vector<EdgeId> edges;

  static Walk at(VertexId v) { return Walk{{v}, {}}; }
  /// Builds a walk in a simple graph from its vertex sequence.
  static Walk from_vertices(const WeightedGraph& g, std::span<const VertexId> sequence);

  bool empty() const { return vertices.empty(); }
  std::size_t length() const { return edges.size(); }
  VertexId start() const { return vertices.front(); }
  VertexId finish() const { return vertices.back(); }
  bool is_closed() const { return !vertices.empty() && vertices.front() == vertices.back(); }

  Weight weight(std::span<const Edge> edges) const;
  Weight weight(const WeightedGraph& g) const { return weight(g.edges()); }
  EdgeMultiset multiset() const { return EdgeMultiset(std::span<const EdgeId>(edges)); }

  /// True when every edge joins its neighbouring vertices in `edges`.
  bool is_consistent(std::span<const Edge> edge_list) const;

  Walk reversed() const;
  /// Appends `tail`, which must start where this walk ends.
  void append(const Walk& tail);

  friend bool operator==(const Walk&, const Walk&) = default;
};

std::string format_walk(const WeightedGraph& g, const Walk& w);

}  // namespace hcpp
