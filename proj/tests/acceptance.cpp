// Runs every acceptance criterion once and prints one PASS/FAIL line each.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <unistd.h>

#include "hcpp/cli.hpp"
#include "hcpp/gadget.hpp"
#include "hcpp/graph_algorithms.hpp"
#include "hcpp/hierarchy.hpp"
#include "hcpp/io.hpp"
#include "hcpp/matching.hpp"
#include "hcpp/postman.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace hcpp;
using namespace testing_support;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Outcome six_edge_example() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto inst = six_edge();
  const auto& g = inst.graph();
  struct Row {
    const char* from;
    std::size_t layer;
    const char* to;
    Weight w;
  };
  const std::vector<Row> want{{"a", 0, "b", 2}, {"b", 0, "b", 4}, {"b", 1, "a", 10}, {"b", 1, "b", 8},
                              {"a", 2, "a", 5}, {"a", 2, "b", 3}, {"b", 2, "a", 3}, {"b", 2, "b", 5}};
  for (auto sub : {Subsolver::ConnectedExact, Subsolver::Oracle, Subsolver::Approx}) {
    const auto dag = build_layered_dag(inst, {sub, kDefaultOracleLimit, 1});
    if (dag.arcs.size() != want.size()) o.fail("arc count " + std::to_string(dag.arcs.size()));
    for (const auto& r : want) {
      const auto* a = dag.find_arc(r.layer, *g.find_vertex(r.from), *g.find_vertex(r.to));
      if (!a || a->weight != r.w)
        o.fail(std::string("arc ") + r.from + "_" + std::to_string(r.layer + 1) + " -> " + r.to + " wrong");
    }
  }
  for (auto mode : {SolveMode::Approx, SolveMode::ExactConnected, SolveMode::ExactOracle}) {
    const auto sol = solve_hcppl(inst, {mode, kDefaultOracleLimit, 1});
    if (!sol.feasible() || sol.weight != 13 || !sol.walk->is_closed() || sol.walk->start() != 0 ||
        !validate_walk(inst, *sol.walk).feasible)
      o.fail(to_string(mode) + " did not return the weight-13 closed walk at a");
  }
  const double s = seconds_since(t0);
  if (s >= 1.0) o.fail("took " + fmt("%.3f s", s));
  if (o.pass) o.detail = "8 arcs 2,4,10,8,5,3,3,5; walk of weight 13 at a in " + fmt("%.3f s", s);
  return o;
}

HcppInstance random_layered(Rng& rng) {
  for (;;) {
    RandomInstanceParams p;
    p.n = rng.uniform(3, 9);
    p.m = rng.uniform(p.n - 1, std::min<std::size_t>(14, p.n * (p.n - 1) / 2));
    p.k = rng.uniform(1, std::min<std::size_t>(3, p.m));
    if (p.k * 5 < p.m) continue;
    p.max_class_size = 5;
    p.max_weight = rng.uniform(1, 12);
    p.seed = rng.uniform(0, 1u << 30);
    return generate_random_instance(p).instance;
  }
}

Outcome ratio_audit() {
  Outcome o;
  const auto t0 = Clock::now();
  Rng rng(2024);
  std::size_t audited = 0, infeasible = 0, subsolves = 0;
  double worst = 1.0;
  while (audited < 300) {
    const auto inst = random_layered(rng);
    const auto exact = solve_hcppl(inst, {SolveMode::ExactOracle, 5, 1});
    const auto approx = solve_hcppl(inst, {SolveMode::Approx, 5, 1});
    if (exact.feasible() != approx.feasible()) o.fail("feasibility verdicts differ");
    if (!exact.feasible()) {
      ++infeasible;
      continue;
    }
    ++audited;
    subsolves += approx.stats.parity_set_checks;
    if (!approx.stats.parity_sets_even) o.fail("odd parity set in instance " + std::to_string(audited));
    if (!validate_walk(inst, *approx.walk).feasible) o.fail("approximate walk infeasible");
    if (3 * approx.weight > 5 * exact.weight)
      o.fail("ratio " + std::to_string(approx.weight) + "/" + std::to_string(exact.weight));
    if (approx.weight < exact.weight) o.fail("approximation below the optimum");
    if (exact.weight > 0) worst = std::max(worst, double(approx.weight) / double(exact.weight));
  }
  const double s = seconds_since(t0);
  if (s >= 300) o.fail("took " + fmt("%.1f s", s));
  if (o.pass)
    o.detail = std::to_string(audited) + " instances (" + std::to_string(infeasible) +
               " infeasible skipped), max ratio " + fmt("%.6f", worst) + ", " + std::to_string(subsolves) +
               " parity sets all even, " + fmt("%.1f s", s);
  return o;
}

Outcome connected_exact_vs_oracle() {
  Outcome o;
  Rng rng(3030);
  std::size_t n_cases = 0;
  for (; n_cases < 1000; ++n_cases) {
    const std::size_t n = rng.uniform(2, 9);
    const auto g = random_graph(rng, n, rng.uniform(n - 1, std::min<std::size_t>(14, n * (n - 1) / 2)), 9, true,
                                rng.uniform(0, 1));
    const auto r = random_connected_edges(rng, g, rng.uniform(1, 7));
    const auto s = static_cast<VertexId>(rng.uniform(0, n - 1));
    const auto t = static_cast<VertexId>(rng.uniform(0, n - 1));
    StRppInstance inst{&g, {}, r, s, t};
    const auto a = solve_strpp_connected_exact(inst);
    const auto b = solve_strpp_oracle(inst);
    if (a.weight(g) != b.weight(g) || !covers(a, r) || a.start() != s || a.finish() != t ||
        !a.is_consistent(g.edges()))
      o.fail("disagreement on case " + std::to_string(n_cases));
  }
  if (o.pass) o.detail = std::to_string(n_cases) + " instances, all equal";
  return o;
}

Outcome reduction_identity() {
  Outcome o;
  Rng rng(4040);
  std::size_t n_cases = 0, fresh = 0;
  for (; n_cases < 200; ++n_cases) {
    const std::size_t n = rng.uniform(2, 6);
    const auto g = random_graph(rng, n, rng.uniform(n - 1, std::min<std::size_t>(7, n * (n - 1) / 2)), 6);
    const auto r = random_edges(rng, g.edge_count(), rng.uniform(0, 4));
    const auto s = static_cast<VertexId>(rng.uniform(0, n - 1));
    const auto t = static_cast<VertexId>(rng.uniform(0, n - 1));
    StRppInstance inst{&g, {}, r, s, t};
    const auto red = reduce_strpp_to_rpp(inst);
    if (!red.added_sources.empty()) ++fresh;
    const auto opt = solve_strpp_oracle(inst).weight(g);
    const auto closed = solve_rpp_oracle(red.instance(), 8);
    if (closed.weight(red.graph) - opt != 2 * g.total_weight()) o.fail("identity broken on case " + std::to_string(n_cases));
    if (closed.multiset().multiplicity(red.closing_edge) != 1) o.fail("closing edge not used once");
    if (red.lift(closed).weight(g) != opt) o.fail("lifted walk is not optimal");
  }
  if (o.pass)
    o.detail = std::to_string(n_cases) + " instances (" + std::to_string(fresh) + " needed a fresh source)";
  return o;
}

bool satisfiable(const CnfFormula& f, std::vector<bool>& a) {
  const std::size_t n = f.variables();
  a.assign(n, false);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    for (std::size_t i = 0; i < n; ++i) a[i] = (bits >> i) & 1;
    if (f.satisfied_by(a)) return true;
  }
  return false;
}

Outcome gadget_suite() {
  Outcome o;
  const auto sample = build_gadget(CnfFormula(4, {{-1, 4}, {-2, 3}}));
  if (sample.instance.graph().edge_count() != 140 || tight_bound(sample.layout) != 166)
    o.fail("sample formula: |E| = " + std::to_string(sample.instance.graph().edge_count()) + ", bound " +
           std::to_string(tight_bound(sample.layout)));

  Rng rng(5050);
  std::size_t formulas = 0, sat = 0, too_big = 0;
  double worst = 0;
  for (; formulas < 50; ++formulas) {
    const auto f = generate_random_formula(rng, rng.uniform(1, 5), rng.uniform(1, 6));
    const auto gd = build_gadget(f);
    const auto r = check_gadget_structure(gd.instance, gd.layout, 60);
    if (!r.e0_eulerian) o.fail("E0 not Eulerian");
    if (!r.imbalanced_matches) o.fail("imbalanced set differs from V_FT and V_C");
    if (!r.size_linear) ++too_big;
    worst = std::max(worst, double(r.size) / double(f.variables() + f.clauses().size()));
    std::vector<bool> a;
    if (!satisfiable(f, a)) continue;
    ++sat;
    const auto tour = build_tight_tour(gd, a);
    if (!validate_walk(gd.instance, tour).feasible) o.fail("tight tour rejected");
    if (tour.weight(gd.instance.graph()) > tight_bound(gd.layout)) o.fail("tight tour above |E| + b/2");
  }
  if (too_big)
    o.fail(std::to_string(too_big) + "/" + std::to_string(formulas) + " gadgets exceed 60(n+m); worst " +
           fmt("%.1f", worst) + "(n+m)");
  const std::string summary = std::to_string(formulas) + " formulas, " + std::to_string(sat) +
                              " satisfiable with tight tours, sample |E| = 140, bound 166";
  o.detail = o.pass ? summary : o.detail + " (" + summary + ")";
  return o;
}

Outcome exact_primitives() {
  Outcome o;
  Rng rng(6060);
  std::size_t matchings = 0, joins = 0;
  for (; matchings < 500; ++matchings) {
    const std::size_t n = 2 * rng.uniform(1, 5);
    CostMatrix c(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) c.set(i, j, rng.uniform(0, 40));
    for (const auto& m : {min_weight_perfect_matching(c), min_weight_perfect_matching_blossom(c)})
      if (m.weight != oracle::min_perfect_matching(c)) o.fail("matching differs on case " + std::to_string(matchings));
  }
  for (; joins < 500; ++joins) {
    const std::size_t n = rng.uniform(2, 10);
    const auto g = random_graph(rng, n, rng.uniform(n - 1, std::min<std::size_t>(12, n * (n - 1) / 2)), 9, true, 0);
    std::vector<VertexId> t;
    for (VertexId v = 0; v < n; ++v)
      if (rng.coin()) t.push_back(v);
    if (t.size() % 2) t.pop_back();
    const auto j = min_t_join(g, t);
    if (j.weight(g.edges()) != *oracle::min_t_join(g, t) || odd_vertices(g.edges(), n, j) != t)
      o.fail("T-join differs on case " + std::to_string(joins));
  }
  if (o.pass) o.detail = std::to_string(matchings) + " matchings, " + std::to_string(joins) + " T-joins exact";
  return o;
}

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / ("hcpp_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto at = [&](const std::string& name) { return (dir / name).string(); };
  std::size_t compared = 0, commands = 0;

  // Each command runs under every thread count; all outputs must match the first.
  auto same = [&](const std::string& label, std::vector<std::string> args, const std::string& out_file) {
    std::optional<std::string> first;
    ++commands;
    for (const std::string threads : {"1", "2", "8"}) {
      auto a = args;
      for (auto& s : a)
        if (s == "{T}") s = threads;
      std::ostringstream out, err;
      run_cli(a, out, err);
      const auto bytes = out_file.empty() ? out.str() : slurp(out_file);
      if (!first) first = bytes;
      else if (*first != bytes) o.fail(label + " differs with --threads " + threads);
      ++compared;
    }
  };

  std::ofstream(at("sample.cnf")) << "p cnf 4 2\n-1 4 0\n-2 3 0\n";
  same("gen-random", {"gen-random", "--n", "9", "--m", "14", "--k", "3", "--seed", "99", "--out", at("r.json")},
       at("r.json"));
  same("gen-gadget", {"gen-gadget", at("sample.cnf"), "--out", at("g.json")}, at("g.json"));
  same("gen-gadget sidecar", {"gen-gadget", at("sample.cnf"), "--out", at("g.json")}, at("g.json.layout.json"));
  same("tight-tour", {"tight-tour", at("sample.cnf"), "--out", at("t.json")}, at("t.json"));
  for (const std::string mode : {"approx", "exact-connected", "exact-oracle"}) {
    same("solve " + mode, {"solve", at("r.json"), "--mode", mode, "--threads", "{T}", "--out", at("s.json")},
         at("s.json"));
    same("validate " + mode, {"validate", at("r.json"), at("s.json")}, "");
  }
  same("compare", {"compare", at("r.json"), "--threads", "{T}", "--out", at("c.csv")}, at("c.csv"));
  fs::remove_all(dir);
  if (o.pass) o.detail = std::to_string(compared) + " runs of " + std::to_string(commands) + " commands byte-identical across --threads 1/2/8";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 six-edge example", six_edge_example},
      {"2 approximation ratio", ratio_audit},
      {"3 connected exact vs oracle", connected_exact_vs_oracle},
      {"4 reduction identity", reduction_identity},
      {"5 gadget structure", gadget_suite},
      {"6 exact primitives", exact_primitives},
      {"7 determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  return failed;
}
