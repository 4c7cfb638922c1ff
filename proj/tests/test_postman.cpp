#include <doctest.h>

#include "hcpp/graph_algorithms.hpp"
#include "hcpp/postman.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace hcpp;
using namespace testing_support;

namespace {

WeightedGraph triangle() {
  WeightedGraph g(std::vector<std::string>{"a", "b", "c"});
  g.add_edge(0, 1, 1);
  g.add_edge(1, 2, 1);
  g.add_edge(2, 0, 1);
  return g;
}

std::vector<EdgeId> class_of(const HcppInstance& inst, ClassId c) {
  const auto s = inst.class_edges(c);
  return {s.begin(), s.end()};
}

void check_walk(const WeightedGraph& g, const Walk& w, const std::vector<EdgeId>& r, VertexId s, VertexId t,
                const EdgeMask& allowed = {}) {
  CHECK(w.is_consistent(g.edges()));
  CHECK(w.start() == s);
  CHECK(w.finish() == t);
  CHECK(covers(w, r));
  for (auto e : w.edges) CHECK(admits(allowed, e));
}

}  // namespace

TEST_CASE("Chinese postman examples") {
  const auto tri = triangle();
  CHECK(solve_cpp_exact(tri).weight(tri) == 3);

  WeightedGraph path(3);
  path.add_edge(0, 1, 1);
  path.add_edge(1, 2, 1);
  const auto w = solve_cpp_exact(path);
  CHECK(w.weight(path) == 4);
  CHECK(w.is_closed());

  WeightedGraph apart(4);
  apart.add_edge(0, 1, 1);
  apart.add_edge(2, 3, 1);
  CHECK_THROWS_AS(solve_cpp_exact(apart), InfeasibleError);

  // Isolated vertices do not matter.
  WeightedGraph lonely(4);
  lonely.add_edge(1, 2, 3);
  CHECK(solve_cpp_exact(lonely).weight(lonely) == 6);
}

TEST_CASE("Chinese postman matches bounded-multiplicity search") {
  Rng rng(31);
  for (int round = 0; round < 200; ++round) {
    const std::size_t n = rng.uniform(2, 6);
    const auto g = random_graph(rng, n, rng.uniform(n - 1, std::min<std::size_t>(8, n * (n - 1) / 2)), 9);
    const auto w = solve_cpp_exact(g);
    CHECK(w.is_closed());
    CHECK(w.is_consistent(g.edges()));
    std::vector<EdgeId> all(g.edge_count());
    for (EdgeId e = 0; e < all.size(); ++e) all[e] = e;
    CHECK(covers(w, all));
    CHECK(w.weight(g) == oracle::cpp_weight(g));
    const bool eulerian = odd_vertices(g.edges(), n, EdgeMultiset(all)).empty();
    CHECK((w.weight(g) == g.total_weight()) == eulerian);
  }
}

TEST_CASE("approximation on the example sub-instances") {
  const auto tri = triangle();
  StRppInstance all{&tri, {}, {0, 1, 2}, 0, 0};
  const auto res = solve_strpp_approx(all);
  CHECK(res.walk.weight(tri) == 3);
  CHECK(res.trace.parity_set.empty());
  CHECK(res.trace.dummy_source);

  const auto inst = six_edge();
  const auto& g = inst.graph();
  StRppInstance ba{&g, inst.prefix_mask(1), class_of(inst, 1), 1, 0};
  const auto r = solve_strpp_approx(ba);
  CHECK(r.walk.weight(g) == 10);
  check_walk(g, r.walk, ba.required, 1, 0, ba.allowed);
}

TEST_CASE("approximation stays within 5/3 of the optimum") {
  Rng rng(32);
  int checked = 0;
  for (int round = 0; round < 500; ++round) {
    const std::size_t n = rng.uniform(2, 10);
    const auto g = random_graph(rng, n, rng.uniform(n - 1, std::min<std::size_t>(16, n * (n - 1) / 2)), 12);
    const auto r = random_edges(rng, g.edge_count(), rng.uniform(0, 6));
    const auto s = static_cast<VertexId>(rng.uniform(0, n - 1));
    const auto t = rng.uniform(0, 3) == 0 ? s : static_cast<VertexId>(rng.uniform(0, n - 1));
    StRppInstance inst{&g, {}, r, s, t};
    const auto approx = solve_strpp_approx(inst);
    const auto opt = solve_strpp_oracle(inst);
    check_walk(g, approx.walk, r, s, t);
    check_walk(g, opt, r, s, t);
    const auto a = approx.walk.weight(g);
    const auto o = opt.weight(g);
    CHECK(3 * a <= 5 * o);
    CHECK(a >= o);
    CHECK(approx.trace.parity_set.size() % 2 == 0);
    CHECK(a == approx.trace.required_and_connector_weight + approx.trace.matching_weight);
    ++checked;
  }
  CHECK(checked == 500);
}

TEST_CASE("oracle examples") {
  const auto inst = six_edge();
  const auto& g = inst.graph();
  StRppInstance path{&g, {}, {}, 0, 2};
  CHECK(solve_strpp_oracle(path).weight(g) == *oracle::shortest_distance(g, 0, 2));

  StRppInstance bb{&g, inst.prefix_mask(1), class_of(inst, 1), 1, 1};
  CHECK(solve_strpp_oracle(bb).weight(g) == 8);

  StRppInstance aa{&g, {}, class_of(inst, 2), 0, 0};
  CHECK(solve_strpp_oracle(aa).weight(g) == 5);

  StRppInstance big{&g, {}, {0, 1, 2, 3, 4, 5}, 0, 0};
  CHECK_THROWS_AS(solve_strpp_oracle(big, 5), SizeLimitError);

  WeightedGraph apart(4);
  apart.add_edge(0, 1, 1);
  apart.add_edge(2, 3, 1);
  StRppInstance cut{&apart, {}, {1}, 0, 0};
  CHECK_FALSE(is_feasible(cut));
  CHECK_THROWS_AS(solve_strpp_oracle(cut), InfeasibleError);
  CHECK_THROWS_AS(solve_strpp_approx(cut), InfeasibleError);
}

TEST_CASE("oracle matches multiplicity enumeration") {
  Rng rng(33);
  for (int round = 0; round < 200; ++round) {
    const std::size_t n = rng.uniform(2, 6);
    const auto g = random_graph(rng, n, rng.uniform(n - 1, std::min<std::size_t>(7, n * (n - 1) / 2)), 9, true, 0);
    const auto r = random_edges(rng, g.edge_count(), rng.uniform(0, 4));
    const auto s = static_cast<VertexId>(rng.uniform(0, n - 1));
    const auto t = static_cast<VertexId>(rng.uniform(0, n - 1));
    StRppInstance inst{&g, {}, r, s, t};
    const auto w = solve_strpp_oracle(inst);
    check_walk(g, w, r, s, t);
    CHECK(w.weight(g) == *oracle::strpp_weight(g, {}, r, s, t));
  }
}

TEST_CASE("connected exact solver examples") {
  const auto inst = six_edge();
  const auto& g = inst.graph();
  StRppInstance ba{&g, inst.prefix_mask(1), class_of(inst, 1), 1, 0};
  CHECK(solve_strpp_connected_exact(ba).weight(g) == 10);
  StRppInstance bb{&g, inst.prefix_mask(0), class_of(inst, 0), 1, 1};
  CHECK(solve_strpp_connected_exact(bb).weight(g) == 4);

  // R is an a–b–c path: imbalanced exactly at its ends.
  WeightedGraph path(std::vector<std::string>{"a", "b", "c"});
  path.add_edge(0, 1, 2);
  path.add_edge(1, 2, 5);
  StRppInstance direct{&path, {}, {0, 1}, 0, 2};
  CHECK(solve_strpp_connected_exact(direct).weight(path) == 7);

  WeightedGraph apart(4);
  apart.add_edge(0, 1, 1);
  apart.add_edge(1, 2, 1);
  apart.add_edge(2, 3, 1);
  StRppInstance split{&apart, {}, {0, 2}, 0, 0};
  CHECK_THROWS_AS(solve_strpp_connected_exact(split), PreconditionError);
}

TEST_CASE("connected exact solver agrees with the oracle") {
  Rng rng(34);
  for (int round = 0; round < 400; ++round) {
    const std::size_t n = rng.uniform(2, 9);
    const auto g = random_graph(rng, n, rng.uniform(n - 1, std::min<std::size_t>(14, n * (n - 1) / 2)), 9,
                                true, rng.uniform(0, 1));
    const auto r = random_connected_edges(rng, g, rng.uniform(1, 6));
    const auto s = static_cast<VertexId>(rng.uniform(0, n - 1));
    const auto t = static_cast<VertexId>(rng.uniform(0, n - 1));
    StRppInstance inst{&g, {}, r, s, t};
    const auto w = solve_strpp_connected_exact(inst);
    check_walk(g, w, r, s, t);
    CHECK(w.weight(g) == solve_strpp_oracle(inst).weight(g));
  }
}

TEST_CASE("RPP oracle conventions") {
  const auto tri = triangle();
  RppInstance none{&tri, {}, {}};
  const auto w = solve_rpp_oracle(none);
  CHECK(w.length() == 0);
  CHECK(w.weight(tri) == 0);

  RppInstance all{&tri, {}, {0, 1, 2}};
  CHECK(solve_rpp_oracle(all).weight(tri) == 3);
}

TEST_CASE("reduction to the closed variant") {
  WeightedGraph g(std::vector<std::string>{"s", "x", "y", "t"});
  g.add_edge(0, 1, 1);
  g.add_edge(1, 2, 3);
  g.add_edge(2, 3, 1);
  g.add_edge(0, 2, 7);
  StRppInstance inst{&g, {}, {1}, 0, 3};
  const auto red = reduce_strpp_to_rpp(inst);
  CHECK(red.closing_weight == 2 * g.total_weight());
  CHECK(red.closing_weight == 24);
  CHECK(red.added_sources.empty());
  const auto opt = solve_strpp_oracle(inst).weight(g);
  CHECK(opt == 5);
  const auto closed = solve_rpp_oracle(red.instance());
  CHECK(closed.weight(red.graph) == 29);
  const auto lifted = red.lift(closed);
  check_walk(g, lifted, inst.required, 0, 3);
  CHECK(lifted.weight(g) == opt);

  // s adjacent to t and s = t both trigger fresh sources.
  StRppInstance adjacent{&g, {}, {1}, 1, 2};
  const auto r2 = reduce_strpp_to_rpp(adjacent);
  CHECK(r2.added_sources.size() == 1);
  CHECK(r2.graph.name(r2.source) == "x'");
  CHECK(r2.graph.edge(r2.required[1]).w == 0);
  StRppInstance same{&g, {}, {1}, 2, 2};
  CHECK(reduce_strpp_to_rpp(same).added_sources.size() >= 1);
}

TEST_CASE("reduction identity on random instances") {
  Rng rng(35);
  for (int round = 0; round < 150; ++round) {
    const std::size_t n = rng.uniform(2, 6);
    const auto g = random_graph(rng, n, rng.uniform(n - 1, std::min<std::size_t>(7, n * (n - 1) / 2)), 6);
    const auto r = random_edges(rng, g.edge_count(), rng.uniform(0, 4));
    const auto s = static_cast<VertexId>(rng.uniform(0, n - 1));
    const auto t = static_cast<VertexId>(rng.uniform(0, n - 1));
    StRppInstance inst{&g, {}, r, s, t};
    const auto red = reduce_strpp_to_rpp(inst);
    const auto opt = solve_strpp_oracle(inst).weight(g);
    const auto closed = solve_rpp_oracle(red.instance(), 8);
    CHECK(closed.weight(red.graph) - opt == 2 * g.total_weight());
    CHECK(closed.multiset().multiplicity(red.closing_edge) == 1);
    const auto lifted = red.lift(closed);
    check_walk(g, lifted, r, s, t);
    CHECK(lifted.weight(g) == opt);
  }
}
