#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hcpp/graph.hpp"
#include "hcpp/hierarchy.hpp"
#include "hcpp/io.hpp"
#include "hcpp/postman.hpp"

namespace testing_support {

using namespace hcpp;

/// The six-edge, three-class example: a–b (2) in E1; b–d (1), d–c (3), c–b (4) in
/// E2; b–e (1), e–a (2) in E3. Vertex ids a=0 .. e=4.
inline HcppInstance six_edge() {
  WeightedGraph g(std::vector<std::string>{"a", "b", "c", "d", "e"});
  g.add_edge(0, 1, 2);
  g.add_edge(1, 3, 1);
  g.add_edge(3, 2, 3);
  g.add_edge(2, 1, 4);
  g.add_edge(1, 4, 1);
  g.add_edge(4, 0, 2);
  return HcppInstance(std::move(g), {0, 1, 1, 1, 2, 2}, PrecedenceOrder::linear());
}

/// Random simple graph on n vertices with m edges, connected when
/// `connected` and m >= n - 1.
inline WeightedGraph random_graph(Rng& rng, std::size_t n, std::size_t m, Weight max_w, bool connected = true,
                                  Weight min_w = 1) {
  WeightedGraph g(n);
  std::set<std::pair<VertexId, VertexId>> used;
  auto add = [&](VertexId a, VertexId b) {
    if (a == b || !used.insert(std::minmax(a, b)).second) return false;
    g.add_edge(a, b, rng.uniform(min_w, max_w));
    return true;
  };
  if (connected)
    for (VertexId v = 1; v < n && g.edge_count() < m; ++v) add(v, static_cast<VertexId>(rng.uniform(0, v - 1)));
  const std::size_t cap = n * (n - 1) / 2;
  while (g.edge_count() < std::min(m, cap))
    add(static_cast<VertexId>(rng.uniform(0, n - 1)), static_cast<VertexId>(rng.uniform(0, n - 1)));
  return g;
}

/// Random subset of the edge ids of size `count`, ascending.
inline std::vector<EdgeId> random_edges(Rng& rng, std::size_t m, std::size_t count) {
  std::vector<EdgeId> all(m);
  for (EdgeId e = 0; e < m; ++e) all[e] = e;
  rng.shuffle(all);
  all.resize(std::min(count, m));
  std::sort(all.begin(), all.end());
  return all;
}

/// Random connected subgraph's edges: grows a tree-like edge set from a seed edge.
inline std::vector<EdgeId> random_connected_edges(Rng& rng, const WeightedGraph& g, std::size_t count) {
  std::vector<EdgeId> out{static_cast<EdgeId>(rng.uniform(0, g.edge_count() - 1))};
  std::set<VertexId> touched{g.edge(out[0]).u, g.edge(out[0]).v};
  while (out.size() < count) {
    std::vector<EdgeId> frontier;
    for (EdgeId e = 0; e < g.edge_count(); ++e)
      if (std::find(out.begin(), out.end(), e) == out.end() &&
          (touched.count(g.edge(e).u) || touched.count(g.edge(e).v)))
        frontier.push_back(e);
    if (frontier.empty()) break;
    const auto e = frontier[rng.uniform(0, frontier.size() - 1)];
    out.push_back(e);
    touched.insert(g.edge(e).u);
    touched.insert(g.edge(e).v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool covers(const Walk& w, const std::vector<EdgeId>& required) {
  const auto ms = w.multiset();
  return std::all_of(required.begin(), required.end(), [&](EdgeId e) { return ms.multiplicity(e) > 0; });
}

}  // namespace testing_support
