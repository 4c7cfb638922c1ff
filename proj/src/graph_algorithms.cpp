#include "hcpp/graph_algorithms.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <string>

#include "hcpp/matching.hpp"

namespace hcpp {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

std::vector<std::vector<VertexId>> group(DisjointSets& sets, const std::vector<bool>& touched) {
  std::vector<std::vector<VertexId>> by_root(touched.size());
  for (VertexId v = 0; v < touched.size(); ++v)
    if (touched[v]) by_root[sets.find(v)].push_back(v);
  std::vector<std::vector<VertexId>> out;
  for (auto& comp : by_root)
    if (!comp.empty()) out.push_back(std::move(comp));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

}  // namespace

std::vector<std::vector<VertexId>> connected_components(const WeightedGraph& g, const EdgeMask& restrict_to) {
  DisjointSets sets(g.vertex_count());
  std::vector<bool> touched(g.vertex_count(), false);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (!admits(restrict_to, e)) continue;
    const auto& edge = g.edge(e);
    touched[edge.u] = touched[edge.v] = true;
    sets.unite(edge.u, edge.v);
  }
  return group(sets, touched);
}

std::vector<std::vector<VertexId>> connected_components(std::span<const Edge> edges,
                                                        std::size_t vertex_count,
                                                        const EdgeMultiset& m) {
  DisjointSets sets(vertex_count);
  std::vector<bool> touched(vertex_count, false);
  for (const auto& [e, count] : m) {
    const auto& edge = edges[e];
    touched.at(edge.u) = touched.at(edge.v) = true;
    sets.unite(edge.u, edge.v);
  }
  return group(sets, touched);
}

bool is_connected(std::span<const Edge> edges, std::size_t vertex_count, const EdgeMultiset& m) {
  return connected_components(edges, vertex_count, m).size() <= 1;
}

Walk ShortestPathTree::path_to(VertexId target) const {
  if (!reaches(target)) throw InfeasibleError("vertex " + std::to_string(target) + " is unreachable");
  Walk w;
  VertexId v = target;
  w.vertices.push_back(v);
  while (v != source) {
    w.edges.push_back(*via[v]);
    v = *predecessor[v];
    w.vertices.push_back(v);
  }
  return w.reversed();
}

ShortestPathTree shortest_paths(const WeightedGraph& g, VertexId source, const EdgeMask& allowed) {
  if (!g.has_vertex(source)) throw InputError("shortest_paths: unknown source vertex " + std::to_string(source));
  const std::size_t n = g.vertex_count();
  ShortestPathTree tree;
  tree.source = source;
  tree.distance.assign(n, std::nullopt);
  tree.predecessor.assign(n, std::nullopt);
  tree.via.assign(n, std::nullopt);
  std::vector<bool> settled(n, false);
  using Item = std::pair<Weight, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  tree.distance[source] = 0;
  heap.emplace(0, source);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (settled[u] || d != *tree.distance[u]) continue;
    settled[u] = true;
    for (EdgeId e : g.incident(u)) {
      if (!admits(allowed, e)) continue;
      const VertexId v = g.edge(e).other(u);
      if (settled[v]) continue;
      const Weight nd = checked_add(d, g.edge(e).w);
      auto& dv = tree.distance[v];
      if (!dv || nd < *dv) {
        dv = nd;
        tree.predecessor[v] = u;
        tree.via[v] = e;
        heap.emplace(nd, v);
      } else if (nd == *dv && u < *tree.predecessor[v]) {
        tree.predecessor[v] = u;
        tree.via[v] = e;
      }
    }
  }
  return tree;
}

Walk MetricClosure::expand(std::size_t i, std::size_t j) const { return trees_.at(i).path_to(terminals_.at(j)); }

std::optional<std::size_t> MetricClosure::index_of(VertexId v) const {
  const auto it = std::find(terminals_.begin(), terminals_.end(), v);
  if (it == terminals_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - terminals_.begin());
}

WeightedGraph MetricClosure::as_graph(const WeightedGraph& host) const {
  WeightedGraph out;
  for (auto t : terminals_) out.add_vertex(host.name(t));
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j)
      out.add_edge(static_cast<VertexId>(i), static_cast<VertexId>(j), distance(i, j));
  return out;
}

MetricClosure metric_closure(const WeightedGraph& g, std::span<const VertexId> terminals, const EdgeMask& allowed) {
  MetricClosure closure;
  closure.terminals_.assign(terminals.begin(), terminals.end());
  {
    auto sorted = closure.terminals_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw PreconditionError("metric_closure: duplicate terminal");
  }
  const std::size_t t = terminals.size();
  closure.dist_.assign(t * t, 0);
  for (std::size_t i = 0; i < t; ++i) {
    closure.trees_.push_back(shortest_paths(g, terminals[i], allowed));
    const auto& tree = closure.trees_.back();
    for (std::size_t j = 0; j < t; ++j) {
      if (!tree.reaches(terminals[j]))
        throw InfeasibleError("terminals '" + g.name(terminals[i]) + "' and '" + g.name(terminals[j]) +
                              "' are disconnected");
      closure.dist_[i * t + j] = *tree.distance[terminals[j]];
    }
  }
  return closure;
}

std::vector<VertexId> odd_vertices(std::span<const Edge> edges, std::size_t vertex_count, const EdgeMultiset& m) {
  const auto deg = m.degrees(edges, vertex_count);
  std::vector<VertexId> odd;
  for (VertexId v = 0; v < vertex_count; ++v)
    if (deg[v] % 2 == 1) odd.push_back(v);
  return odd;
}

Walk euler_walk(std::span<const Edge> edges, std::size_t vertex_count, const EdgeMultiset& m, VertexId start,
                VertexId end) {
  if (start >= vertex_count || end >= vertex_count) throw InputError("euler_walk: unknown endpoint");
  const auto odd = odd_vertices(edges, vertex_count, m);
  if (start == end) {
    if (!odd.empty())
      throw PreconditionError("euler_walk: vertex " + std::to_string(odd.front()) +
                              " is imbalanced in a closed Euler walk request");
  } else {
    const auto [lo, hi] = std::minmax(start, end);
    if (odd != std::vector<VertexId>{lo, hi}) {
      VertexId culprit = start;
      if (!std::binary_search(odd.begin(), odd.end(), start))
        culprit = start;
      else if (!std::binary_search(odd.begin(), odd.end(), end))
        culprit = end;
      else
        for (auto v : odd)
          if (v != start && v != end) {
            culprit = v;
            break;
          }
      throw PreconditionError("euler_walk: parity of vertex " + std::to_string(culprit) +
                              " does not allow an open walk between the requested endpoints");
    }
  }
  if (m.empty()) {
    if (start != end) throw PreconditionError("euler_walk: empty multigraph but distinct endpoints");
    return Walk::at(start);
  }
  const auto comps = connected_components(edges, vertex_count, m);
  if (comps.size() > 1)
    throw PreconditionError("euler_walk: multigraph is disconnected; component containing vertex " +
                            std::to_string(comps[1].front()) + " is separate");
  if (!std::binary_search(comps[0].begin(), comps[0].end(), start))
    throw PreconditionError("euler_walk: start vertex " + std::to_string(start) + " is not on any edge");

  // One slot per traversal; incidence lists ordered by edge id.
  std::vector<EdgeId> slot_edge;
  std::vector<std::vector<std::size_t>> slots(vertex_count);
  for (const auto& [e, count] : m) {
    for (std::uint32_t c = 0; c < count; ++c) {
      const std::size_t s = slot_edge.size();
      slot_edge.push_back(e);
      slots[edges[e].u].push_back(s);
      slots[edges[e].v].push_back(s);
    }
  }
  std::vector<bool> used(slot_edge.size(), false);
  std::vector<std::size_t> cursor(vertex_count, 0);

  struct Frame {
    VertexId v;
    std::optional<EdgeId> arrived_by;
  };
  std::vector<Frame> stack{{start, std::nullopt}};
  std::vector<VertexId> popped_vertices;
  std::vector<EdgeId> popped_edges;
  while (!stack.empty()) {
    const VertexId v = stack.back().v;
    auto& cur = cursor[v];
    while (cur < slots[v].size() && used[slots[v][cur]]) ++cur;
    if (cur < slots[v].size()) {
      const std::size_t s = slots[v][cur];
      used[s] = true;
      stack.push_back({edges[slot_edge[s]].other(v), slot_edge[s]});
    } else {
      popped_vertices.push_back(v);
      if (stack.back().arrived_by) popped_edges.push_back(*stack.back().arrived_by);
      stack.pop_back();
    }
  }
  Walk w;
  w.vertices.assign(popped_vertices.rbegin(), popped_vertices.rend());
  w.edges.assign(popped_edges.rbegin(), popped_edges.rend());
  return w;
}

std::vector<EdgeId> spanning_connector(std::span<const Edge> edges, std::size_t vertex_count,
                                       std::span<const EdgeId> required, const EdgeMask& candidates) {
  DisjointSets sets(vertex_count);
  std::size_t components = vertex_count;
  for (auto e : required)
    if (sets.unite(edges[e].u, edges[e].v)) --components;
  std::vector<EdgeId> order;
  for (EdgeId e = 0; e < edges.size(); ++e)
    if (admits(candidates, e)) order.push_back(e);
  std::stable_sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) { return edges[a].w < edges[b].w; });
  std::vector<EdgeId> connector;
  for (auto e : order) {
    if (components <= 1) break;
    if (sets.unite(edges[e].u, edges[e].v)) {
      connector.push_back(e);
      --components;
    }
  }
  if (components > 1) throw InfeasibleError("spanning_connector: graph cannot be connected");
  std::sort(connector.begin(), connector.end());
  return connector;
}

EdgeMultiset min_t_join(const WeightedGraph& g, std::span<const VertexId> t_set, const EdgeMask& allowed) {
  if (t_set.size() % 2 != 0)
    throw PreconditionError("min_t_join: odd-sized vertex set (" + std::to_string(t_set.size()) + ")");
  if (t_set.empty()) return {};
  const auto closure = metric_closure(g, t_set, allowed);
  CostMatrix costs(closure.size());
  for (std::size_t i = 0; i < closure.size(); ++i)
    for (std::size_t j = i + 1; j < closure.size(); ++j) costs.set(i, j, closure.distance(i, j));
  const auto matching = min_weight_perfect_matching(costs);
  EdgeMultiset joined;
  for (const auto& [i, j] : matching.pairs) joined += closure.expand(i, j).multiset();
  joined = joined.reduced_mod2();

  // Parity-neutral pieces away from the terminal set are dropped.
  std::vector<bool> in_t(g.vertex_count(), false);
  for (auto v : t_set) in_t[v] = true;
  EdgeMultiset out;
  DisjointSets sets(g.vertex_count());
  for (const auto& [e, c] : joined) sets.unite(g.edge(e).u, g.edge(e).v);
  std::vector<bool> anchored(g.vertex_count(), false);
  for (auto v : t_set) anchored[sets.find(v)] = true;
  for (const auto& [e, c] : joined)
    if (anchored[sets.find(g.edge(e).u)]) out.add(e, c);
  return out;
}

}  // namespace hcpp
