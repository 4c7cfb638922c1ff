#pragma once

// Brute-force references for the tests. Nothing here calls the library's
// algorithms; only the plain graph container is shared.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <tuple>
#include <vector>

#include "hcpp/graph.hpp"
#include "hcpp/hierarchy.hpp"
#include "hcpp/matching.hpp"

namespace oracle {

using hcpp::EdgeId;
using hcpp::VertexId;
using hcpp::Weight;
using hcpp::WeightedGraph;

inline constexpr Weight kInf = std::numeric_limits<Weight>::max();

/// All perfect matchings by recursion on the first unmatched point.
inline Weight min_perfect_matching(const hcpp::CostMatrix& c) {
  const std::size_t n = c.size();
  std::vector<bool> used(n, false);
  std::function<Weight()> go = [&]() -> Weight {
    std::size_t i = 0;
    while (i < n && used[i]) ++i;
    if (i == n) return 0;
    used[i] = true;
    Weight best = kInf;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (used[j]) continue;
      used[j] = true;
      const Weight rest = go();
      if (rest != kInf) best = std::min(best, rest + c(i, j));
      used[j] = false;
    }
    used[i] = false;
    return best;
  };
  return go();
}

inline std::vector<std::uint32_t> degrees(const WeightedGraph& g, const std::vector<std::uint32_t>& mult) {
  std::vector<std::uint32_t> d(g.vertex_count(), 0);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    d[g.edge(e).u] += mult[e];
    d[g.edge(e).v] += mult[e];
  }
  return d;
}

/// Edges with positive multiplicity form one component (true when none).
inline bool connected(const WeightedGraph& g, const std::vector<std::uint32_t>& mult) {
  std::vector<VertexId> parent(g.vertex_count());
  for (VertexId v = 0; v < parent.size(); ++v) parent[v] = v;
  std::function<VertexId(VertexId)> find = [&](VertexId v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
  std::set<VertexId> touched;
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (mult[e] > 0) {
      parent[find(g.edge(e).u)] = find(g.edge(e).v);
      touched.insert(g.edge(e).u);
      touched.insert(g.edge(e).v);
    }
  std::set<VertexId> roots;
  for (auto v : touched) roots.insert(find(v));
  return roots.size() <= 1;
}

inline Weight weight_of(const WeightedGraph& g, const std::vector<std::uint32_t>& mult) {
  Weight w = 0;
  for (EdgeId e = 0; e < g.edge_count(); ++e) w += mult[e] * g.edge(e).w;
  return w;
}

/// Minimum T-join weight by enumerating every subset of admitted edges.
/// nullopt when no subset works.
inline std::optional<Weight> min_t_join(const WeightedGraph& g, const std::vector<VertexId>& t,
                                        const hcpp::EdgeMask& allowed = {}) {
  const std::size_t m = g.edge_count();
  std::set<VertexId> want(t.begin(), t.end());
  std::optional<Weight> best;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << m); ++bits) {
    std::vector<std::uint32_t> mult(m, 0);
    bool ok = true;
    for (EdgeId e = 0; e < m; ++e)
      if ((bits >> e) & 1) {
        if (!hcpp::admits(allowed, e)) ok = false;
        mult[e] = 1;
      }
    if (!ok) continue;
    const auto d = degrees(g, mult);
    std::set<VertexId> odd;
    for (VertexId v = 0; v < d.size(); ++v)
      if (d[v] % 2) odd.insert(v);
    if (odd != want) continue;
    const auto w = weight_of(g, mult);
    if (!best || w < *best) best = w;
  }
  return best;
}

/// Shortest distance by enumerating simple paths.
inline std::optional<Weight> shortest_distance(const WeightedGraph& g, VertexId s, VertexId t,
                                               const hcpp::EdgeMask& allowed = {}) {
  std::optional<Weight> best;
  std::vector<bool> on(g.vertex_count(), false);
  std::function<void(VertexId, Weight)> go = [&](VertexId v, Weight w) {
    if (v == t) {
      if (!best || w < *best) best = w;
      return;
    }
    on[v] = true;
    for (auto e : g.incident(v)) {
      if (!hcpp::admits(allowed, e)) continue;
      const auto x = g.edge(e).other(v);
      if (!on[x]) go(x, w + g.edge(e).w);
    }
    on[v] = false;
  };
  go(s, 0);
  return best;
}

/// Optimal Chinese postman weight: each edge used once or twice (an optimal
/// tour never needs more), all degrees even. Requires a connected edge set.
inline Weight cpp_weight(const WeightedGraph& g) {
  const std::size_t m = g.edge_count();
  Weight best = kInf;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << m); ++bits) {
    std::vector<std::uint32_t> mult(m, 1);
    for (EdgeId e = 0; e < m; ++e)
      if ((bits >> e) & 1) mult[e] = 2;
    const auto d = degrees(g, mult);
    if (std::any_of(d.begin(), d.end(), [](auto x) { return x % 2; })) continue;
    best = std::min(best, weight_of(g, mult));
  }
  return best;
}

/// Optimal s-t rural postman weight over edge multiplicities 0..2 (required
/// edges at least 1): correct parity, connected, touching s and t.
inline std::optional<Weight> strpp_weight(const WeightedGraph& g, const hcpp::EdgeMask& allowed,
                                          const std::vector<EdgeId>& required, VertexId s, VertexId t) {
  const std::size_t m = g.edge_count();
  std::vector<std::uint32_t> lo(m, 0), hi(m, 0);
  for (EdgeId e = 0; e < m; ++e) hi[e] = hcpp::admits(allowed, e) ? 2 : 0;
  for (auto e : required) lo[e] = 1;
  std::vector<std::uint32_t> mult(lo);
  std::optional<Weight> best;
  std::function<void(EdgeId)> go = [&](EdgeId e) {
    if (e == m) {
      const auto d = degrees(g, mult);
      for (VertexId v = 0; v < d.size(); ++v) {
        const bool endpoint = s != t && (v == s || v == t);
        if (d[v] % 2 != (endpoint ? 1u : 0u)) return;
      }
      const bool empty = std::all_of(mult.begin(), mult.end(), [](auto x) { return x == 0; });
      if (empty) {
        if (s != t) return;
      } else {
        if (d[s] == 0 || d[t] == 0 || !connected(g, mult)) return;
      }
      const auto w = weight_of(g, mult);
      if (!best || w < *best) best = w;
      return;
    }
    for (std::uint32_t k = lo[e]; k <= hi[e]; ++k) {
      mult[e] = k;
      go(e + 1);
    }
    mult[e] = lo[e];
  };
  go(0);
  return best;
}

/// Minimum weight of a set T of admitted edges with R ∪ T spanning-connected
/// over `vertices` (every listed vertex touched, one component).
inline std::optional<Weight> min_connector(const WeightedGraph& g, const std::vector<EdgeId>& required,
                                           const std::vector<VertexId>& vertices) {
  const std::size_t m = g.edge_count();
  std::optional<Weight> best;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << m); ++bits) {
    std::vector<std::uint32_t> mult(m, 0);
    for (EdgeId e = 0; e < m; ++e)
      if ((bits >> e) & 1) mult[e] = 1;
    Weight w = weight_of(g, mult);
    for (auto e : required) mult[e] = 1;
    if (!connected(g, mult)) continue;
    const auto d = degrees(g, mult);
    if (vertices.size() > 1 && std::any_of(vertices.begin(), vertices.end(), [&](auto v) { return d[v] == 0; }))
      continue;
    if (!best || w < *best) best = w;
  }
  return best;
}

/// Exact HCPP optimum for any partial order: Dijkstra over (vertex, covered
/// edge set) where an edge may be traversed if already covered or if all
/// classes preceding its class are complete. Needs edge_count <= 20.
inline std::optional<Weight> hcpp_weight(const hcpp::HcppInstance& inst) {
  const auto& g = inst.graph();
  const std::size_t m = g.edge_count();
  const std::size_t k = inst.class_count();
  const std::uint64_t full = (std::uint64_t{1} << m) - 1;
  std::vector<std::uint64_t> class_bits(k, 0);
  for (EdgeId e = 0; e < m; ++e) class_bits[inst.class_of(e)] |= std::uint64_t{1} << e;
  auto may_start = [&](EdgeId e, std::uint64_t covered) {
    const auto c = inst.class_of(e);
    for (hcpp::ClassId d = 0; d < k; ++d)
      if (inst.precedes(d, c) && (covered & class_bits[d]) != class_bits[d]) return false;
    return true;
  };
  std::optional<Weight> best;
  for (VertexId start = 0; start < g.vertex_count(); ++start) {
    if (g.incident(start).empty()) continue;
    using State = std::tuple<Weight, VertexId, std::uint64_t>;
    std::priority_queue<State, std::vector<State>, std::greater<>> pq;
    std::map<std::pair<VertexId, std::uint64_t>, Weight> dist;
    dist[{start, 0}] = 0;
    pq.emplace(0, start, 0);
    while (!pq.empty()) {
      const auto [d, v, covered] = pq.top();
      pq.pop();
      if (dist[{v, covered}] != d) continue;
      if (best && d >= *best) break;
      if (covered == full && v == start) {
        best = d;
        break;
      }
      for (auto e : g.incident(v)) {
        const std::uint64_t bit = std::uint64_t{1} << e;
        if (!(covered & bit) && !may_start(e, covered)) continue;
        const auto x = g.edge(e).other(v);
        const std::uint64_t nc = covered | bit;
        const Weight nd = d + g.edge(e).w;
        auto it = dist.find({x, nc});
        if (it == dist.end() || nd < it->second) {
          dist[{x, nc}] = nd;
          pq.emplace(nd, x, nc);
        }
      }
    }
  }
  return best;
}

/// Independent walk check: closed, covers E, precedence by first traversal.
inline bool walk_feasible(const hcpp::HcppInstance& inst, const hcpp::Walk& w) {
  const auto& g = inst.graph();
  if (w.vertices.empty() || w.vertices.front() != w.vertices.back()) return false;
  for (std::size_t i = 0; i < w.edges.size(); ++i)
    if (!g.edge(w.edges[i]).joins(w.vertices[i], w.vertices[i + 1])) return false;
  std::vector<std::size_t> first(g.edge_count(), SIZE_MAX);
  for (std::size_t i = 0; i < w.edges.size(); ++i) first[w.edges[i]] = std::min(first[w.edges[i]], i);
  for (auto f : first)
    if (f == SIZE_MAX) return false;
  for (EdgeId a = 0; a < g.edge_count(); ++a)
    for (EdgeId b = 0; b < g.edge_count(); ++b)
      if (inst.precedes(inst.class_of(a), inst.class_of(b)) && first[a] > first[b]) return false;
  return true;
}

}  // namespace oracle
