#include "hcpp/postman.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "hcpp/graph_algorithms.hpp"
#include "hcpp/matching.hpp"

namespace hcpp {

namespace {

const WeightedGraph& host_of(const WeightedGraph* g) {
  if (g == nullptr) throw InputError("instance has no graph");
  return *g;
}

void check_required(const WeightedGraph& g, const EdgeMask& allowed, std::span<const EdgeId> required) {
  if (!allowed.empty() && allowed.size() != g.edge_count()) throw InputError("edge mask size mismatch");
  std::set<EdgeId> seen;
  for (auto e : required) {
    if (e >= g.edge_count()) throw InputError("required edge id " + std::to_string(e) + " is unknown");
    if (!admits(allowed, e)) throw InputError("required edge id " + std::to_string(e) + " is not admitted");
    if (!seen.insert(e).second) throw InputError("required edge id " + std::to_string(e) + " listed twice");
  }
}

void check_instance(const StRppInstance& inst) {
  const auto& g = host_of(inst.graph);
  if (!g.has_vertex(inst.source) || !g.has_vertex(inst.target)) throw InputError("unknown source or target vertex");
  check_required(g, inst.allowed, inst.required);
}

/// V(R) ∪ extra, ascending.
std::vector<VertexId> terminal_set(const WeightedGraph& g, std::span<const EdgeId> required,
                                   std::initializer_list<VertexId> extra) {
  std::set<VertexId> out(extra);
  for (auto e : required) {
    out.insert(g.edge(e).u);
    out.insert(g.edge(e).v);
  }
  return {out.begin(), out.end()};
}

Weight required_weight(const WeightedGraph& g, std::span<const EdgeId> required) {
  Weight total = 0;
  for (auto e : required) total = checked_add(total, g.edge(e).w);
  return total;
}

// Shared enumeration for the s-t and closed oracles. Required edge i is
// traversed as (tail, head) in one of two orientations; consecutive traversals
// are joined by closure distances. Branches are explored by ascending edge
// index, forward orientation first, and only a strictly cheaper completion
// replaces the incumbent.
class SequenceSearch {
 public:
  struct Step {
    std::size_t edge;
    bool reversed;
  };

  SequenceSearch(const MetricClosure& closure, std::vector<std::pair<std::size_t, std::size_t>> ends,
                 std::vector<Weight> weights)
      : closure_(closure), ends_(std::move(ends)), weights_(std::move(weights)) {}

  /// Open search from terminal index `from` to `to`.
  std::vector<Step> open(std::size_t from, std::size_t to) {
    goal_ = to;
    used_.assign(ends_.size(), false);
    Weight remaining = 0;
    for (auto w : weights_) remaining = checked_add(remaining, w);
    best_.reset();
    current_.clear();
    descend(from, 0, remaining);
    return best_steps_;
  }

  /// Closed search; edge 0 is pinned first, forward.
  std::vector<Step> closed() {
    used_.assign(ends_.size(), false);
    Weight remaining = 0;
    for (auto w : weights_) remaining = checked_add(remaining, w);
    best_.reset();
    current_.clear();
    goal_ = ends_[0].first;
    used_[0] = true;
    current_.push_back({0, false});
    descend(ends_[0].second, weights_[0], remaining - weights_[0]);
    return best_steps_;
  }

  Weight best_weight() const { return best_.value_or(0); }

 private:
  void descend(std::size_t at, Weight cost, Weight remaining) {
    if (best_ && checked_add(cost, remaining) >= *best_) return;
    if (current_.size() == ends_.size()) {
      const Weight total = checked_add(cost, closure_.distance(at, goal_));
      if (!best_ || total < *best_) {
        best_ = total;
        best_steps_ = current_;
      }
      return;
    }
    for (std::size_t i = 0; i < ends_.size(); ++i) {
      if (used_[i]) continue;
      used_[i] = true;
      for (bool rev : {false, true}) {
        const auto tail = rev ? ends_[i].second : ends_[i].first;
        const auto head = rev ? ends_[i].first : ends_[i].second;
        current_.push_back({i, rev});
        descend(head, checked_add(checked_add(cost, closure_.distance(at, tail)), weights_[i]),
                remaining - weights_[i]);
        current_.pop_back();
      }
      used_[i] = false;
    }
  }

  const MetricClosure& closure_;
  std::vector<std::pair<std::size_t, std::size_t>> ends_;
  std::vector<Weight> weights_;
  std::size_t goal_ = 0;
  std::vector<bool> used_;
  std::optional<Weight> best_;
  std::vector<Step> current_;
  std::vector<Step> best_steps_;
};

struct OracleSetup {
  MetricClosure closure;
  std::vector<std::pair<std::size_t, std::size_t>> ends;
  std::vector<Weight> weights;
};

OracleSetup oracle_setup(const WeightedGraph& g, const EdgeMask& allowed, std::span<const EdgeId> required,
                         std::vector<VertexId> terminals) {
  OracleSetup setup{metric_closure(g, terminals, allowed), {}, {}};
  for (auto e : required) {
    setup.ends.emplace_back(*setup.closure.index_of(g.edge(e).u), *setup.closure.index_of(g.edge(e).v));
    setup.weights.push_back(g.edge(e).w);
  }
  return setup;
}

Walk stitch(const OracleSetup& setup, std::span<const EdgeId> required,
            const std::vector<SequenceSearch::Step>& steps, std::size_t from, std::size_t to) {
  Walk w = Walk::at(setup.closure.terminals()[from]);
  std::size_t at = from;
  for (const auto& step : steps) {
    const auto [a, b] = setup.ends[step.edge];
    const auto tail = step.reversed ? b : a;
    const auto head = step.reversed ? a : b;
    w.append(setup.closure.expand(at, tail));
    const auto terminals = setup.closure.terminals();
    w.append(Walk{{terminals[tail], terminals[head]}, {required[step.edge]}});
    at = head;
  }
  w.append(setup.closure.expand(at, to));
  return w;
}

}  // namespace

bool is_feasible(const StRppInstance& inst) {
  check_instance(inst);
  const auto& g = *inst.graph;
  const auto terminals = terminal_set(g, inst.required, {inst.source, inst.target});
  const auto tree = shortest_paths(g, terminals.front(), inst.allowed);
  return std::all_of(terminals.begin(), terminals.end(), [&](VertexId v) { return tree.reaches(v); });
}

bool is_feasible(const RppInstance& inst) {
  const auto& g = host_of(inst.graph);
  check_required(g, inst.allowed, inst.required);
  if (inst.required.empty()) return true;
  const auto terminals = terminal_set(g, inst.required, {});
  const auto tree = shortest_paths(g, terminals.front(), inst.allowed);
  return std::all_of(terminals.begin(), terminals.end(), [&](VertexId v) { return tree.reaches(v); });
}

Walk solve_cpp_exact(const WeightedGraph& g) {
  if (g.edge_count() == 0) {
    if (g.vertex_count() == 0) return {};
    return Walk::at(0);
  }
  EdgeMultiset all;
  for (EdgeId e = 0; e < g.edge_count(); ++e) all.add(e);
  const auto comps = connected_components(g);
  if (comps.size() > 1)
    throw InfeasibleError("graph is disconnected: vertex '" + g.name(comps[1].front()) +
                          "' is not reachable from '" + g.name(comps[0].front()) + "'");
  const auto odd = odd_vertices(g.edges(), g.vertex_count(), all);
  all += min_t_join(g, odd);
  const VertexId start = comps[0].front();
  return euler_walk(g, all, start, start);
}

ApproxResult solve_strpp_approx(const StRppInstance& inst) {
  check_instance(inst);
  const auto& g = *inst.graph;
  const auto terminals = terminal_set(g, inst.required, {inst.source, inst.target});
  const auto closure = metric_closure(g, terminals, inst.allowed);

  // Working multigraph on closure indices: complete closure edges first, then
  // the required edges with their own weights. A dummy source gets index t.
  const bool dummy = inst.source == inst.target;
  const std::size_t t = closure.size();
  const std::size_t vcount = t + (dummy ? 1 : 0);
  const std::size_t target = *closure.index_of(inst.target);
  const std::size_t source = dummy ? t : *closure.index_of(inst.source);
  std::vector<Edge> work;
  std::vector<std::pair<std::size_t, std::size_t>> closure_pair;  // per closure work edge
  std::map<std::pair<std::size_t, std::size_t>, EdgeId> pair_edge;
  auto dist = [&](std::size_t i, std::size_t j) -> Weight {
    if (dummy && (i == t || j == t)) {
      const std::size_t other = i == t ? j : i;
      return other == t ? 0 : closure.distance(target, other);
    }
    return closure.distance(i, j);
  };
  for (std::size_t i = 0; i < vcount; ++i)
    for (std::size_t j = i + 1; j < vcount; ++j) {
      pair_edge[{i, j}] = static_cast<EdgeId>(work.size());
      work.push_back(Edge{static_cast<VertexId>(i), static_cast<VertexId>(j), dist(i, j)});
      closure_pair.emplace_back(i, j);
    }
  const std::size_t closure_edges = work.size();
  std::vector<EdgeId> required_work;
  for (auto e : inst.required) {
    required_work.push_back(static_cast<EdgeId>(work.size()));
    work.push_back(Edge{static_cast<VertexId>(*closure.index_of(g.edge(e).u)),
                        static_cast<VertexId>(*closure.index_of(g.edge(e).v)), g.edge(e).w});
  }
  EdgeMask candidates(work.size(), false);
  std::fill(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(closure_edges), true);

  // Step 1: cheapest connector.
  const auto connector = spanning_connector(work, vcount, required_work, candidates);

  // Step 2: parity set.
  EdgeMultiset base(required_work);
  for (auto e : connector) base.add(e);
  const auto deg = base.degrees(work, vcount);
  std::vector<std::size_t> parity;
  for (std::size_t v = 0; v < vcount; ++v) {
    const bool endpoint = v == source || v == target;
    const bool odd = deg[v] % 2 == 1;
    if (odd != endpoint) parity.push_back(v);
  }
  if (parity.size() % 2 != 0) throw Error("internal: parity set has odd size");

  // Step 3: matching on the parity set.
  CostMatrix costs(parity.size());
  for (std::size_t i = 0; i < parity.size(); ++i)
    for (std::size_t j = i + 1; j < parity.size(); ++j) costs.set(i, j, dist(parity[i], parity[j]));
  const auto matching = min_weight_perfect_matching(costs);
  EdgeMultiset full = base;
  for (const auto& [i, j] : matching.pairs) full.add(pair_edge.at(std::minmax(parity[i], parity[j])));

  // Step 4: Euler walk, then expansion into the host graph.
  const auto euler = euler_walk(work, vcount, full, static_cast<VertexId>(source), static_cast<VertexId>(target));
  auto host_vertex = [&](std::size_t idx) { return idx == t && dummy ? inst.target : closure.terminals()[idx]; };
  auto closure_index = [&](std::size_t idx) { return idx == t && dummy ? target : idx; };
  Walk walk = Walk::at(host_vertex(source));
  for (std::size_t step = 0; step < euler.edges.size(); ++step) {
    const EdgeId we = euler.edges[step];
    const std::size_t from = euler.vertices[step];
    const std::size_t to = euler.vertices[step + 1];
    if (we >= closure_edges) {
      const EdgeId host = inst.required[we - closure_edges];
      walk.append(Walk{{host_vertex(from), host_vertex(to)}, {host}});
    } else {
      walk.append(closure.expand(closure_index(from), closure_index(to)));
    }
  }

  ApproxResult result;
  result.walk = std::move(walk);
  auto& trace = result.trace;
  trace.dummy_source = dummy;
  const auto host_id = [&](std::size_t idx) {
    return idx == t && dummy ? static_cast<VertexId>(g.vertex_count()) : closure.terminals()[idx];
  };
  trace.required_and_connector_weight = required_weight(g, inst.required);
  for (auto e : connector) {
    trace.connector.emplace_back(host_id(work[e].u), host_id(work[e].v));
    trace.required_and_connector_weight = checked_add(trace.required_and_connector_weight, work[e].w);
  }
  for (auto v : parity) trace.parity_set.push_back(host_id(v));
  for (const auto& [i, j] : matching.pairs) trace.matching.emplace_back(host_id(parity[i]), host_id(parity[j]));
  trace.matching_weight = matching.weight;
  return result;
}

Walk solve_strpp_oracle(const StRppInstance& inst, std::size_t limit) {
  check_instance(inst);
  if (inst.required.size() > limit)
    throw SizeLimitError("oracle limit is " + std::to_string(limit) + " required edges, instance has " +
                         std::to_string(inst.required.size()));
  const auto& g = *inst.graph;
  const auto setup = oracle_setup(g, inst.allowed, inst.required,
                                  terminal_set(g, inst.required, {inst.source, inst.target}));
  const auto from = *setup.closure.index_of(inst.source);
  const auto to = *setup.closure.index_of(inst.target);
  SequenceSearch search(setup.closure, setup.ends, setup.weights);
  const auto steps = search.open(from, to);
  return stitch(setup, inst.required, steps, from, to);
}

Walk solve_rpp_oracle(const RppInstance& inst, std::size_t limit) {
  const auto& g = host_of(inst.graph);
  check_required(g, inst.allowed, inst.required);
  if (inst.required.size() > limit)
    throw SizeLimitError("oracle limit is " + std::to_string(limit) + " required edges, instance has " +
                         std::to_string(inst.required.size()));
  if (inst.required.empty()) {
    if (g.vertex_count() == 0) return {};
    return Walk::at(0);
  }
  const auto setup = oracle_setup(g, inst.allowed, inst.required, terminal_set(g, inst.required, {}));
  SequenceSearch search(setup.closure, setup.ends, setup.weights);
  const auto steps = search.closed();
  const auto start = setup.ends[0].first;
  return stitch(setup, inst.required, steps, start, start);
}

Walk solve_strpp_connected_exact(const StRppInstance& inst) {
  check_instance(inst);
  const auto& g = *inst.graph;
  const auto s = inst.source;
  const auto t = inst.target;
  if (connected_components(g, make_mask(g.edge_count(), inst.required)).size() > 1)
    throw PreconditionError("required edges are not connected");
  if (!is_feasible(inst)) throw InfeasibleError("s-t rural postman instance is infeasible");

  const auto from_s = shortest_paths(g, s, inst.allowed);
  const auto from_t = shortest_paths(g, t, inst.allowed);
  if (inst.required.empty()) return from_s.path_to(t);

  const EdgeMultiset required(inst.required);
  const auto vr = required.vertices(g.edges());
  std::set<VertexId> heads(vr.begin(), vr.end());
  std::set<VertexId> tails(vr.begin(), vr.end());
  heads.insert(s);
  tails.insert(t);

  std::map<std::vector<VertexId>, EdgeMultiset> join_cache;
  std::optional<EdgeMultiset> best;
  Weight best_weight = 0;
  for (auto x : heads) {
    const auto lead = from_s.path_to(x).multiset();
    for (auto y : tails) {
      auto candidate = required + lead + from_t.path_to(y).multiset();
      // Residual parity: odd vertices of the candidate, symmetric-differenced
      // with the endpoint pair the walk must leave unbalanced.
      auto odd = odd_vertices(g.edges(), g.vertex_count(), candidate);
      if (s != t) {
        for (auto v : {s, t}) {
          const auto it = std::lower_bound(odd.begin(), odd.end(), v);
          if (it != odd.end() && *it == v)
            odd.erase(it);
          else
            odd.insert(it, v);
        }
      }
      auto cached = join_cache.find(odd);
      if (cached == join_cache.end()) cached = join_cache.emplace(odd, min_t_join(g, odd, inst.allowed)).first;
      candidate += cached->second;
      const auto cv = candidate.vertices(g.edges());
      if (!std::binary_search(cv.begin(), cv.end(), s) || !std::binary_search(cv.begin(), cv.end(), t)) continue;
      if (!is_connected(g.edges(), g.vertex_count(), candidate)) continue;
      const Weight w = candidate.weight(g.edges());
      if (!best || w < best_weight) {
        best = std::move(candidate);
        best_weight = w;
      }
    }
  }
  if (!best) throw InfeasibleError("no connected attachment found");
  return euler_walk(g, *best, s, t);
}

RppReduction reduce_strpp_to_rpp(const StRppInstance& inst) {
  check_instance(inst);
  const auto& g = *inst.graph;
  RppReduction out;
  out.original_vertex_count = g.vertex_count();
  out.graph = WeightedGraph(std::vector<std::string>(g.names().begin(), g.names().end()));
  Weight total = 0;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    out.graph.add_edge(g.edge(e).u, g.edge(e).v, g.edge(e).w);
    if (admits(inst.allowed, e)) total = checked_add(total, g.edge(e).w);
  }
  out.allowed.assign(g.edge_count(), true);
  if (!inst.allowed.empty()) out.allowed = inst.allowed;
  out.required = inst.required;
  out.target = inst.target;
  out.original_source = inst.source;
  VertexId source = inst.source;
  while (source == inst.target || out.graph.find_edge(source, inst.target)) {
    std::string name = out.graph.name(source) + "'";
    while (out.graph.find_vertex(name)) name += "'";
    const VertexId fresh = out.graph.add_vertex(name);
    out.required.push_back(out.graph.add_edge(fresh, source, 0));
    out.allowed.push_back(true);
    out.added_sources.push_back(fresh);
    source = fresh;
  }
  out.source = source;
  out.closing_weight = checked_mul(2, total);
  out.closing_edge = out.graph.add_edge(source, inst.target, out.closing_weight);
  out.allowed.push_back(true);
  out.required.push_back(out.closing_edge);
  return out;
}

Walk RppReduction::lift(const Walk& closed) const {
  if (!closed.is_closed() || !closed.is_consistent(graph.edges()))
    throw PreconditionError("lift expects a closed walk of the reduced instance");
  const auto uses = std::count(closed.edges.begin(), closed.edges.end(), closing_edge);
  if (uses != 1) throw PreconditionError("lift expects exactly one traversal of the closing edge");
  const auto pos = static_cast<std::size_t>(std::find(closed.edges.begin(), closed.edges.end(), closing_edge) -
                                            closed.edges.begin());
  // Rotate so the walk starts right after the closing traversal.
  const std::size_t len = closed.edges.size();
  Walk open;
  open.vertices.push_back(closed.vertices[pos + 1]);
  for (std::size_t k = 1; k < len; ++k) {
    const std::size_t i = (pos + k) % len;
    open.edges.push_back(closed.edges[i]);
    open.vertices.push_back(closed.vertices[i + 1]);
  }
  if (open.start() != source) open = open.reversed();

  // Drop every traversal touching an added source; the remainder is
  // contiguous because added sources hang off the original source only.
  Walk lifted;
  for (std::size_t i = 0; i < open.edges.size(); ++i) {
    const auto a = open.vertices[i];
    const auto b = open.vertices[i + 1];
    if (a >= original_vertex_count || b >= original_vertex_count) continue;
    if (lifted.empty()) lifted = Walk::at(a);
    lifted.append(Walk{{a, b}, {open.edges[i]}});
  }
  if (lifted.empty()) lifted = Walk::at(original_source);
  return lifted;
}

}  // namespace hcpp
