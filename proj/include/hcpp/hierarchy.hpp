#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hcpp/graph.hpp"
#include "hcpp/postman.hpp"

namespace hcpp {

/// Zero-based edge class index. Files and messages use 1-based ids.
using ClassId = std::uint32_t;

/// Precedence between edge classes. Linear means class i precedes class j iff
/// i < j; Partial lists explicit (before, after) pairs, closed transitively.
struct PrecedenceOrder {
  enum class Kind { Linear, Partial };

  Kind kind = Kind::Linear;
  std::vector<std::pair<ClassId, ClassId>> relations;

  static PrecedenceOrder linear() { return {}; }
  static PrecedenceOrder partial(std::vector<std::pair<ClassId, ClassId>> relations) {
    return {Kind::Partial, std::move(relations)};
  }
};

/// Graph, partition of its edges into classes, and a precedence order.
class HcppInstance {
 public:
  /// Throws InputError unless `edge_class` assigns every edge to one of k
  /// nonempty classes 0..k-1 and the order is acyclic.
  HcppInstance(WeightedGraph graph, std::vector<ClassId> edge_class, PrecedenceOrder order);

  const WeightedGraph& graph() const { return graph_; }
  std::size_t class_count() const { return members_.size(); }
  ClassId class_of(EdgeId e) const { return edge_class_.at(e); }
  std::span<const ClassId> edge_classes() const { return edge_class_; }
  std::span<const EdgeId> class_edges(ClassId c) const { return members_.at(c); }
  const PrecedenceOrder& order() const { return order_; }
  bool is_linear() const { return order_.kind == PrecedenceOrder::Kind::Linear; }
  /// a ≺ b under the transitive closure of the order.
  bool precedes(ClassId a, ClassId b) const { return before_[a * class_count() + b]; }
  /// Edges of classes 0..c (a linear-order prefix).
  EdgeMask prefix_mask(ClassId c) const;

 private:
  WeightedGraph graph_;
  std::vector<ClassId> edge_class_;
  std::vector<std::vector<EdgeId>> members_;
  PrecedenceOrder order_;
  std::vector<bool> before_;
};

struct WalkViolation {
  enum class Kind { NotClosed, Uncovered, Precedence };

  Kind kind = Kind::NotClosed;
  std::optional<EdgeId> edge;
  /// For Precedence: the class still incomplete (`earlier`) when an edge of
  /// `later` was first traversed.
  std::optional<ClassId> earlier;
  std::optional<ClassId> later;
  /// Walk position (edge index) of the offending traversal.
  std::optional<std::size_t> position;
  std::string message;
};

struct WalkVerdict {
  bool feasible = false;
  std::optional<WalkViolation> violation;
};

/// Accepts iff `w` is closed, covers every edge, and for every E'' ≺ E' each
/// edge of E' is first traversed after every edge of E'' has been traversed.
/// Works for any partial order. Throws InputError if `w` is not a walk of the
/// instance graph.
WalkVerdict validate_walk(const HcppInstance& inst, const Walk& w);

/// One vertex copy per layer: V1 and V(k+1) copy V(E1); layer i (2..k) copies
/// V(Ei) ∩ V(E1 ∪ ... ∪ E(i-1)). Layers are 0-based here.
std::vector<std::vector<VertexId>> dag_layers(const HcppInstance& inst);

/// Linear-order feasibility by connectivity alone: some layer path exists when
/// arcs are present exactly for the feasible sub-instances.
bool check_feasibility(const HcppInstance& inst);

enum class Subsolver { Approx, Oracle, ConnectedExact };

struct LayerArc {
  std::size_t layer = 0;
  VertexId from = 0;
  VertexId to = 0;
  Weight weight = 0;
  /// Realizing walk from `from` to `to` covering the class of this layer.
  Walk walk;
  /// Size of the parity set when the approximation produced this arc.
  std::optional<std::size_t> parity_set_size;
};

struct LayeredDag {
  std::vector<std::vector<VertexId>> layers;
  /// Sorted by (layer, from, to).
  std::vector<LayerArc> arcs;
  std::size_t subsolves = 0;

  std::size_t class_count() const { return layers.empty() ? 0 : layers.size() - 1; }
  const LayerArc* find_arc(std::size_t layer, VertexId from, VertexId to) const;
};

struct DagOptions {
  Subsolver subsolver = Subsolver::Approx;
  std::size_t oracle_limit = kDefaultOracleLimit;
  unsigned threads = 1;
};

/// Solves R[u, v, i] for every pair of consecutive-layer copies. Requires a
/// linear order. Sub-solves run on `threads` workers; the result does not
/// depend on the thread count.
LayeredDag build_layered_dag(const HcppInstance& inst, const DagOptions& options);

struct LayerPath {
  /// Original vertex ids, one per layer; front() == back().
  std::vector<VertexId> vertices;
  Weight weight = 0;
};

/// Least-weight layer path; among ties the lexicographically smallest vertex
/// sequence. nullopt when none exists.
std::optional<LayerPath> best_layer_path(const LayeredDag& dag);

/// Concatenation of the arcs' realizing walks; closed, weight == path.weight.
Walk assemble_walk(const LayeredDag& dag, const LayerPath& path);

struct ClassComponentStats {
  std::vector<std::size_t> components;
  std::size_t max_components = 0;
  Weight max_weight = 0;
};

ClassComponentStats class_component_stats(const HcppInstance& inst);

enum class SolveMode { Approx, ExactConnected, ExactOracle };

struct SolveOptions {
  SolveMode mode = SolveMode::Approx;
  std::size_t oracle_limit = kDefaultOracleLimit;
  unsigned threads = 1;
};

struct SolveStats {
  std::size_t k = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t c = 0;
  Weight omega_max = 0;
  std::size_t arc_count = 0;
  std::size_t subsolves = 0;
  /// Every approximation sub-solve had an even parity set (vacuous otherwise).
  bool parity_sets_even = true;
  std::size_t parity_set_checks = 0;
  /// Approximation guarantee carried by the solution (1 for exact modes).
  double ratio_bound = 1.0;
  /// Upper bound k·p on the failure probability; sub-solvers are
  /// deterministic so p = 0.
  double failure_probability = 0.0;
};

struct HcppSolution {
  std::optional<Walk> walk;
  std::optional<LayerPath> path;
  Weight weight = 0;
  SolveStats stats;

  bool feasible() const { return walk.has_value(); }
};

/// Layered-DAG solver for linear orders. Rejects partial orders (NP-hard) and
/// mode preconditions with PreconditionError naming the offending class.
HcppSolution solve_hcppl(const HcppInstance& inst, const SolveOptions& options);

std::string to_string(SolveMode mode);
std::optional<SolveMode> parse_solve_mode(const std::string& text);

}  // namespace hcpp
