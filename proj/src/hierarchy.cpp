#include "hcpp/hierarchy.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <set>
#include <thread>
#include <tuple>

#include "hcpp/graph_algorithms.hpp"

namespace hcpp {

namespace {

std::string class_label(ClassId c) { return "class " + std::to_string(c + 1); }

std::vector<VertexId> class_vertices(const HcppInstance& inst, ClassId c) {
  std::set<VertexId> out;
  for (auto e : inst.class_edges(c)) {
    out.insert(inst.graph().edge(e).u);
    out.insert(inst.graph().edge(e).v);
  }
  return {out.begin(), out.end()};
}

// Component id of every vertex in G⟨E1 ∪ ... ∪ Ei⟩; vertices outside get none.
std::vector<std::optional<std::size_t>> prefix_components(const HcppInstance& inst, ClassId c) {
  std::vector<std::optional<std::size_t>> comp(inst.graph().vertex_count());
  const auto comps = connected_components(inst.graph(), inst.prefix_mask(c));
  for (std::size_t i = 0; i < comps.size(); ++i)
    for (auto v : comps[i]) comp[v] = i;
  return comp;
}

struct Job {
  std::size_t layer;
  VertexId from;
  VertexId to;
};

// R[u, v, i] is feasible iff u, v and V(Ei) share a component of the prefix graph.
std::vector<Job> feasible_jobs(const HcppInstance& inst, const std::vector<std::vector<VertexId>>& layers) {
  std::vector<Job> jobs;
  for (std::size_t i = 0; i + 1 < layers.size(); ++i) {
    const auto comp = prefix_components(inst, static_cast<ClassId>(i));
    const auto anchor = comp[inst.graph().edge(inst.class_edges(static_cast<ClassId>(i)).front()).u];
    bool connected = true;
    for (auto e : inst.class_edges(static_cast<ClassId>(i)))
      connected = connected && comp[inst.graph().edge(e).u] == anchor;
    if (!connected) continue;
    for (auto u : layers[i])
      for (auto v : layers[i + 1])
        if (comp[u] == anchor && comp[v] == anchor) jobs.push_back({i, u, v});
  }
  return jobs;
}

}  // namespace

HcppInstance::HcppInstance(WeightedGraph graph, std::vector<ClassId> edge_class, PrecedenceOrder order)
    : graph_(std::move(graph)), edge_class_(std::move(edge_class)), order_(std::move(order)) {
  if (edge_class_.size() != graph_.edge_count())
    throw InputError("class assignment covers " + std::to_string(edge_class_.size()) + " edges, graph has " +
                     std::to_string(graph_.edge_count()));
  if (graph_.edge_count() == 0) throw InputError("instance has no edges");
  const ClassId k = *std::max_element(edge_class_.begin(), edge_class_.end()) + 1;
  members_.resize(k);
  for (EdgeId e = 0; e < edge_class_.size(); ++e) members_[edge_class_[e]].push_back(e);
  for (ClassId c = 0; c < k; ++c)
    if (members_[c].empty()) throw InputError(class_label(c) + " is empty; class ids must be contiguous");

  before_.assign(static_cast<std::size_t>(k) * k, false);
  if (order_.kind == PrecedenceOrder::Kind::Linear) {
    for (ClassId a = 0; a < k; ++a)
      for (ClassId b = a + 1; b < k; ++b) before_[a * k + b] = true;
    return;
  }
  for (const auto& [a, b] : order_.relations) {
    if (a >= k || b >= k)
      throw InputError("order relation (" + std::to_string(a + 1) + ", " + std::to_string(b + 1) +
                       ") names an unknown class");
    before_[a * k + b] = true;
  }
  for (ClassId via = 0; via < k; ++via)
    for (ClassId a = 0; a < k; ++a)
      if (before_[a * k + via])
        for (ClassId b = 0; b < k; ++b)
          if (before_[via * k + b]) before_[a * k + b] = true;
  for (ClassId a = 0; a < k; ++a)
    if (before_[a * k + a]) throw InputError("order is cyclic through " + class_label(a));
}

EdgeMask HcppInstance::prefix_mask(ClassId c) const {
  EdgeMask mask(graph_.edge_count(), false);
  for (EdgeId e = 0; e < mask.size(); ++e) mask[e] = edge_class_[e] <= c;
  return mask;
}

WalkVerdict validate_walk(const HcppInstance& inst, const Walk& w) {
  const auto& g = inst.graph();
  for (auto e : w.edges)
    if (e >= g.edge_count()) throw InputError("walk uses unknown edge id " + std::to_string(e));
  for (auto v : w.vertices)
    if (!g.has_vertex(v)) throw InputError("walk uses unknown vertex id " + std::to_string(v));
  if (w.vertices.size() != w.edges.size() + 1 || !w.is_consistent(g.edges()))
    throw InputError("walk is not a walk of the instance graph");

  auto reject = [](WalkViolation v) { return WalkVerdict{false, std::move(v)}; };
  if (!w.is_closed()) {
    WalkViolation v;
    v.kind = WalkViolation::Kind::NotClosed;
    v.message = "walk starts at '" + g.name(w.start()) + "' but ends at '" + g.name(w.finish()) + "'";
    return reject(std::move(v));
  }

  std::vector<std::optional<std::size_t>> first(g.edge_count());
  for (std::size_t i = 0; i < w.edges.size(); ++i)
    if (!first[w.edges[i]]) first[w.edges[i]] = i;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (first[e]) continue;
    WalkViolation v;
    v.kind = WalkViolation::Kind::Uncovered;
    v.edge = e;
    v.message = "edge " + g.name(g.edge(e).u) + "-" + g.name(g.edge(e).v) + " (" +
                class_label(inst.class_of(e)) + ") is never traversed";
    return reject(std::move(v));
  }

  const std::size_t k = inst.class_count();
  std::vector<std::size_t> completion(k, 0);
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    completion[inst.class_of(e)] = std::max(completion[inst.class_of(e)], *first[e]);
  for (std::size_t i = 0; i < w.edges.size(); ++i) {
    const EdgeId e = w.edges[i];
    if (*first[e] != i) continue;
    const ClassId later = inst.class_of(e);
    for (ClassId earlier = 0; earlier < k; ++earlier) {
      if (!inst.precedes(earlier, later) || completion[earlier] < i) continue;
      WalkViolation v;
      v.kind = WalkViolation::Kind::Precedence;
      v.edge = e;
      v.earlier = earlier;
      v.later = later;
      v.position = i;
      v.message = "edge " + g.name(g.edge(e).u) + "-" + g.name(g.edge(e).v) + " of " + class_label(later) +
                  " traversed at step " + std::to_string(i + 1) + " before " + class_label(earlier) +
                  " is complete";
      return reject(std::move(v));
    }
  }
  return {true, std::nullopt};
}

std::vector<std::vector<VertexId>> dag_layers(const HcppInstance& inst) {
  const std::size_t k = inst.class_count();
  std::vector<std::vector<VertexId>> layers(k + 1);
  layers[0] = class_vertices(inst, 0);
  layers[k] = layers[0];
  std::set<VertexId> seen(layers[0].begin(), layers[0].end());
  for (std::size_t i = 1; i < k; ++i) {
    const auto own = class_vertices(inst, static_cast<ClassId>(i));
    for (auto v : own)
      if (seen.count(v)) layers[i].push_back(v);
    seen.insert(own.begin(), own.end());
  }
  return layers;
}

bool check_feasibility(const HcppInstance& inst) {
  if (!inst.is_linear()) throw PreconditionError("feasibility check requires a linear order");
  const auto layers = dag_layers(inst);
  const auto jobs = feasible_jobs(inst, layers);
  // Forward reachability from each start copy to its own final copy.
  for (auto start : layers.front()) {
    std::set<VertexId> frontier{start};
    for (std::size_t i = 0; i + 1 < layers.size(); ++i) {
      std::set<VertexId> next;
      for (const auto& job : jobs)
        if (job.layer == i && frontier.count(job.from)) next.insert(job.to);
      frontier = std::move(next);
    }
    if (frontier.count(start)) return true;
  }
  return false;
}

const LayerArc* LayeredDag::find_arc(std::size_t layer, VertexId from, VertexId to) const {
  const auto key = [](const LayerArc& a) { return std::tuple(a.layer, a.from, a.to); };
  const auto it = std::lower_bound(arcs.begin(), arcs.end(), std::tuple(layer, from, to),
                                   [&](const LayerArc& a, const auto& t) { return key(a) < t; });
  if (it == arcs.end() || key(*it) != std::tuple(layer, from, to)) return nullptr;
  return &*it;
}

LayeredDag build_layered_dag(const HcppInstance& inst, const DagOptions& options) {
  if (!inst.is_linear()) throw PreconditionError("layered digraph requires a linear order");
  const auto& g = inst.graph();
  LayeredDag dag;
  dag.layers = dag_layers(inst);
  const auto jobs = feasible_jobs(inst, dag.layers);
  std::vector<EdgeMask> masks;
  for (ClassId c = 0; c < inst.class_count(); ++c) masks.push_back(inst.prefix_mask(c));

  std::vector<std::optional<LayerArc>> results(jobs.size());
  std::vector<std::exception_ptr> failures(jobs.size());
  auto run = [&](std::size_t j) {
    const auto& job = jobs[j];
    const auto cls = static_cast<ClassId>(job.layer);
    const auto span = inst.class_edges(cls);
    StRppInstance sub{&g, masks[cls], {span.begin(), span.end()}, job.from, job.to};
    LayerArc arc;
    arc.layer = job.layer;
    arc.from = job.from;
    arc.to = job.to;
    try {
      switch (options.subsolver) {
        case Subsolver::Approx: {
          auto res = solve_strpp_approx(sub);
          arc.walk = std::move(res.walk);
          arc.parity_set_size = res.trace.parity_set.size();
          break;
        }
        case Subsolver::Oracle:
          arc.walk = solve_strpp_oracle(sub, options.oracle_limit);
          break;
        case Subsolver::ConnectedExact:
          arc.walk = solve_strpp_connected_exact(sub);
          break;
      }
    } catch (const InfeasibleError&) {
      return;
    } catch (const Error& e) {
      const std::string where = " (sub-instance u=" + g.name(job.from) + ", v=" + g.name(job.to) + ", " +
                                class_label(cls) + ")";
      try {
        throw;
      } catch (const SizeLimitError&) {
        failures[j] = std::make_exception_ptr(SizeLimitError(e.what() + where));
      } catch (const PreconditionError&) {
        failures[j] = std::make_exception_ptr(PreconditionError(e.what() + where));
      } catch (...) {
        failures[j] = std::current_exception();
      }
      return;
    } catch (...) {
      failures[j] = std::current_exception();
      return;
    }
    arc.weight = arc.walk.weight(g);
    results[j] = std::move(arc);
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(jobs.size())));
  if (workers <= 1) {
    for (std::size_t j = 0; j < jobs.size(); ++j) run(j);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t)
      pool.emplace_back([&] {
        for (std::size_t j = next++; j < jobs.size(); j = next++) run(j);
      });
    for (auto& th : pool) th.join();
  }

  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  dag.subsolves = jobs.size();
  for (auto& r : results)
    if (r) dag.arcs.push_back(std::move(*r));
  return dag;
}

std::optional<LayerPath> best_layer_path(const LayeredDag& dag) {
  const std::size_t k = dag.class_count();
  if (k == 0) return std::nullopt;
  std::optional<LayerPath> best;
  for (auto start : dag.layers.front()) {
    // cost[i][v]: cheapest completion from copy v_i to start_{k+1}.
    std::vector<std::map<VertexId, Weight>> cost(k + 1);
    cost[k][start] = 0;
    for (std::size_t i = k; i-- > 0;)
      for (const auto& arc : dag.arcs) {
        if (arc.layer != i) continue;
        const auto it = cost[i + 1].find(arc.to);
        if (it == cost[i + 1].end()) continue;
        const Weight w = checked_add(arc.weight, it->second);
        auto [slot, fresh] = cost[i].try_emplace(arc.from, w);
        if (!fresh && w < slot->second) slot->second = w;
      }
    const auto total = cost[0].find(start);
    if (total == cost[0].end()) continue;
    if (best && total->second >= best->weight) continue;
    // Arcs are sorted by target within (layer, from): the first optimal
    // continuation is the lexicographically smallest.
    LayerPath path{{start}, total->second};
    Weight left = total->second;
    for (std::size_t i = 0; i < k; ++i) {
      const VertexId at = path.vertices.back();
      for (const auto& arc : dag.arcs) {
        if (arc.layer != i || arc.from != at) continue;
        const auto it = cost[i + 1].find(arc.to);
        if (it == cost[i + 1].end() || checked_add(arc.weight, it->second) != left) continue;
        path.vertices.push_back(arc.to);
        left = it->second;
        break;
      }
    }
    best = std::move(path);
  }
  return best;
}

Walk assemble_walk(const LayeredDag& dag, const LayerPath& path) {
  if (path.vertices.size() != dag.layers.size()) throw PreconditionError("layer path length does not match dag");
  Walk w = Walk::at(path.vertices.front());
  for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i) {
    const auto* arc = dag.find_arc(i, path.vertices[i], path.vertices[i + 1]);
    if (arc == nullptr) throw PreconditionError("layer path uses a missing arc at layer " + std::to_string(i + 1));
    w.append(arc->walk);
  }
  return w;
}

ClassComponentStats class_component_stats(const HcppInstance& inst) {
  ClassComponentStats stats;
  const auto& g = inst.graph();
  for (ClassId c = 0; c < inst.class_count(); ++c) {
    const auto span = inst.class_edges(c);
    const auto n = connected_components(g, make_mask(g.edge_count(), span)).size();
    stats.components.push_back(n);
    stats.max_components = std::max(stats.max_components, n);
  }
  stats.max_weight = g.max_weight();
  return stats;
}

HcppSolution solve_hcppl(const HcppInstance& inst, const SolveOptions& options) {
  if (!inst.is_linear())
    throw PreconditionError(
        "NP-hard case: the order on edge classes is partial; the layered solver requires a linear order");
  const auto& g = inst.graph();
  const auto comp = class_component_stats(inst);

  DagOptions dag_options;
  dag_options.oracle_limit = options.oracle_limit;
  dag_options.threads = options.threads;
  switch (options.mode) {
    case SolveMode::Approx:
      dag_options.subsolver = Subsolver::Approx;
      break;
    case SolveMode::ExactConnected:
      dag_options.subsolver = Subsolver::ConnectedExact;
      for (ClassId c = 0; c < inst.class_count(); ++c)
        if (comp.components[c] != 1)
          throw PreconditionError("exact-connected mode needs connected classes; " + class_label(c) + " has " +
                                  std::to_string(comp.components[c]) + " components");
      break;
    case SolveMode::ExactOracle:
      dag_options.subsolver = Subsolver::Oracle;
      for (ClassId c = 0; c < inst.class_count(); ++c)
        if (inst.class_edges(c).size() > options.oracle_limit)
          throw PreconditionError("exact-oracle mode is limited to " + std::to_string(options.oracle_limit) +
                                  " edges per class; " + class_label(c) + " has " +
                                  std::to_string(inst.class_edges(c).size()));
      break;
  }

  HcppSolution sol;
  auto& st = sol.stats;
  st.k = inst.class_count();
  st.n = g.vertex_count();
  st.m = g.edge_count();
  st.c = comp.max_components;
  st.omega_max = comp.max_weight;
  st.ratio_bound = options.mode == SolveMode::Approx ? 5.0 / 3.0 : 1.0;

  const auto dag = build_layered_dag(inst, dag_options);
  st.arc_count = dag.arcs.size();
  st.subsolves = dag.subsolves;
  for (const auto& arc : dag.arcs)
    if (arc.parity_set_size) {
      ++st.parity_set_checks;
      st.parity_sets_even = st.parity_sets_even && *arc.parity_set_size % 2 == 0;
    }
  sol.path = best_layer_path(dag);
  if (!sol.path) return sol;
  sol.walk = assemble_walk(dag, *sol.path);
  sol.weight = sol.path->weight;
  return sol;
}

std::string to_string(SolveMode mode) {
  switch (mode) {
    case SolveMode::Approx:
      return "approx";
    case SolveMode::ExactConnected:
      return "exact-connected";
    case SolveMode::ExactOracle:
      return "exact-oracle";
  }
  return "approx";
}

std::optional<SolveMode> parse_solve_mode(const std::string& text) {
  for (auto m : {SolveMode::Approx, SolveMode::ExactConnected, SolveMode::ExactOracle})
    if (to_string(m) == text) return m;
  return std::nullopt;
}

}  // namespace hcpp
