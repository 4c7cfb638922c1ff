#include "hcpp/io.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hcpp/graph_algorithms.hpp"

namespace hcpp {

using nlohmann::json;

namespace {

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i)
      if (text[i] == '\n') ++line;
    throw InputError(what + ": malformed JSON at line " + std::to_string(line) + ": " + e.what());
  }
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw InputError(path + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw InputError(path + "/" + key + ": missing field");
  return *it;
}

std::uint64_t unsigned_field(const json& obj, const std::string& key, const std::string& path) {
  const auto& v = field(obj, key, path);
  if (!v.is_number_unsigned()) throw InputError(path + "/" + key + ": expected a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string string_field(const json& obj, const std::string& key, const std::string& path) {
  const auto& v = field(obj, key, path);
  if (!v.is_string()) throw InputError(path + "/" + key + ": expected a string");
  return v.get<std::string>();
}

json stats_json(const SolveStats& s) {
  json j;
  j["k"] = s.k;
  j["n"] = s.n;
  j["m"] = s.m;
  j["c"] = s.c;
  j["omega_max"] = s.omega_max;
  j["arc_count"] = s.arc_count;
  j["subsolves"] = s.subsolves;
  j["parity_sets_even"] = s.parity_sets_even;
  j["parity_set_checks"] = s.parity_set_checks;
  j["ratio_bound"] = s.ratio_bound;
  j["failure_probability"] = s.failure_probability;
  return j;
}

}  // namespace

HcppInstance parse_instance(const std::string& text) {
  const json doc = parse_json(text, "instance");
  if (!doc.is_object()) throw InputError("instance: top level must be an object");

  const auto& vs = field(doc, "vertices", "");
  if (!vs.is_array()) throw InputError("/vertices: expected an array");
  std::set<std::string> names;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (!vs[i].is_string()) throw InputError("/vertices/" + std::to_string(i) + ": expected a string");
    if (!names.insert(vs[i].get<std::string>()).second)
      throw InputError("/vertices/" + std::to_string(i) + ": duplicate vertex '" + vs[i].get<std::string>() + "'");
  }

  struct RawEdge {
    std::string u, v;
    Weight w;
    std::uint64_t cls;
  };
  const auto& es = field(doc, "edges", "");
  if (!es.is_array()) throw InputError("/edges: expected an array");
  std::vector<RawEdge> edges;
  std::uint64_t k = 0;
  for (std::size_t i = 0; i < es.size(); ++i) {
    const std::string path = "/edges/" + std::to_string(i);
    RawEdge e{string_field(es[i], "u", path), string_field(es[i], "v", path), unsigned_field(es[i], "w", path),
              unsigned_field(es[i], "class", path)};
    for (const auto* end : {&e.u, &e.v})
      if (!names.count(*end)) throw InputError(path + ": endpoint '" + *end + "' is not a declared vertex");
    if (e.u == e.v) throw InputError(path + ": self-loop at '" + e.u + "'");
    if (e.cls == 0) throw InputError(path + "/class: class ids start at 1");
    if (e.u > e.v) std::swap(e.u, e.v);
    k = std::max(k, e.cls);
    edges.push_back(std::move(e));
  }
  std::sort(edges.begin(), edges.end(), [](const RawEdge& a, const RawEdge& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });

  PrecedenceOrder order;
  const auto& ord = field(doc, "order", "");
  const auto type = string_field(ord, "type", "/order");
  if (type == "partial") {
    order.kind = PrecedenceOrder::Kind::Partial;
    const auto& rel = field(ord, "relations", "/order");
    if (!rel.is_array()) throw InputError("/order/relations: expected an array");
    for (std::size_t i = 0; i < rel.size(); ++i) {
      const std::string path = "/order/relations/" + std::to_string(i);
      if (!rel[i].is_array() || rel[i].size() != 2 || !rel[i][0].is_number_unsigned() ||
          !rel[i][1].is_number_unsigned())
        throw InputError(path + ": expected a [before, after] pair of class ids");
      const auto a = rel[i][0].get<std::uint64_t>();
      const auto b = rel[i][1].get<std::uint64_t>();
      if (a == 0 || b == 0 || a > k || b > k) throw InputError(path + ": unknown class id");
      order.relations.emplace_back(static_cast<ClassId>(a - 1), static_cast<ClassId>(b - 1));
    }
    std::sort(order.relations.begin(), order.relations.end());
    order.relations.erase(std::unique(order.relations.begin(), order.relations.end()), order.relations.end());
  } else if (type != "linear") {
    throw InputError("/order/type: expected \"linear\" or \"partial\"");
  }

  WeightedGraph g(std::vector<std::string>(names.begin(), names.end()));
  std::vector<ClassId> classes;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    if (g.find_edge(*g.find_vertex(e.u), *g.find_vertex(e.v)))
      throw InputError("/edges: duplicate edge {" + e.u + ", " + e.v + "}");
    g.add_edge(*g.find_vertex(e.u), *g.find_vertex(e.v), e.w);
    classes.push_back(static_cast<ClassId>(e.cls - 1));
  }
  return HcppInstance(std::move(g), std::move(classes), std::move(order));
}

std::string serialize_instance(const HcppInstance& inst) {
  const auto& g = inst.graph();
  std::vector<std::string> names(g.names().begin(), g.names().end());
  std::sort(names.begin(), names.end());
  struct Row {
    std::string u, v;
    Weight w;
    ClassId c;
  };
  std::vector<Row> rows;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    auto u = g.name(g.edge(e).u);
    auto v = g.name(g.edge(e).v);
    if (u > v) std::swap(u, v);
    rows.push_back({u, v, g.edge(e).w, inst.class_of(e)});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });

  json doc;
  doc["vertices"] = names;
  doc["edges"] = json::array();
  for (const auto& r : rows) doc["edges"].push_back({{"u", r.u}, {"v", r.v}, {"w", r.w}, {"class", r.c + 1}});
  if (inst.is_linear()) {
    doc["order"] = {{"type", "linear"}};
  } else {
    auto rel = inst.order().relations;
    std::sort(rel.begin(), rel.end());
    rel.erase(std::unique(rel.begin(), rel.end()), rel.end());
    json arr = json::array();
    for (const auto& [a, b] : rel) arr.push_back({a + 1, b + 1});
    doc["order"] = {{"type", "partial"}, {"relations", arr}};
  }
  return doc.dump(2) + "\n";
}

std::string serialize_solution(const SolutionRecord& rec) {
  json doc;
  doc["walk"] = rec.walk;
  doc["weight"] = rec.weight ? json(*rec.weight) : json(nullptr);
  doc["mode"] = rec.mode;
  doc["feasible"] = rec.feasible;
  auto stats = stats_json(rec.stats);
  stats["runtime_ms"] = rec.runtime_ms ? json(*rec.runtime_ms) : json(nullptr);
  doc["stats"] = stats;
  return doc.dump(2) + "\n";
}

SolutionRecord parse_solution(const std::string& text) {
  const json doc = parse_json(text, "solution");
  SolutionRecord rec;
  const auto& walk = field(doc, "walk", "");
  if (!walk.is_array()) throw InputError("/walk: expected an array");
  for (std::size_t i = 0; i < walk.size(); ++i) {
    if (!walk[i].is_string()) throw InputError("/walk/" + std::to_string(i) + ": expected a vertex name");
    rec.walk.push_back(walk[i].get<std::string>());
  }
  const auto& w = field(doc, "weight", "");
  if (w.is_number_unsigned())
    rec.weight = w.get<Weight>();
  else if (!w.is_null())
    throw InputError("/weight: expected a non-negative integer or null");
  const auto& f = field(doc, "feasible", "");
  if (!f.is_boolean()) throw InputError("/feasible: expected a boolean");
  rec.feasible = f.get<bool>();
  if (doc.contains("mode") && doc["mode"].is_string()) rec.mode = doc["mode"].get<std::string>();
  return rec;
}

SolutionRecord make_solution_record(const HcppInstance& inst, const HcppSolution& sol, SolveMode mode) {
  SolutionRecord rec;
  rec.mode = to_string(mode);
  rec.stats = sol.stats;
  rec.feasible = sol.feasible();
  if (sol.walk) {
    for (auto v : sol.walk->vertices) rec.walk.push_back(inst.graph().name(v));
    rec.weight = sol.weight;
  }
  return rec;
}

Walk walk_from_names(const WeightedGraph& g, const std::vector<std::string>& names) {
  std::vector<VertexId> ids;
  for (const auto& n : names) {
    const auto v = g.find_vertex(n);
    if (!v) throw InputError("walk visits unknown vertex '" + n + "'");
    ids.push_back(*v);
  }
  return Walk::from_vertices(g, ids);
}

CnfFormula parse_dimacs(std::istream& in) {
  std::optional<std::pair<std::size_t, std::size_t>> header;
  std::vector<std::vector<int>> clauses;
  std::vector<int> current;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto where = "DIMACS line " + std::to_string(lineno);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "c") continue;
    if (tok == "%") break;
    if (tok == "p") {
      std::string fmt;
      long long n = -1, m = -1;
      if (header || !(ls >> fmt >> n >> m) || fmt != "cnf" || n < 0 || m < 0)
        throw InputError(where + ": expected a single `p cnf <variables> <clauses>` header");
      header = {static_cast<std::size_t>(n), static_cast<std::size_t>(m)};
      continue;
    }
    if (!header) throw InputError(where + ": clause before the `p cnf` header");
    do {
      std::size_t used = 0;
      long long lit = 0;
      try {
        lit = std::stoll(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) throw InputError(where + ": '" + tok + "' is not an integer literal");
      if (lit == 0) {
        clauses.push_back(std::move(current));
        current.clear();
      } else {
        if (lit > static_cast<long long>(header->first) || -lit > static_cast<long long>(header->first))
          throw InputError(where + ": literal " + tok + " exceeds the declared variable count");
        current.push_back(static_cast<int>(lit));
      }
    } while (ls >> tok);
  }
  if (!header) throw InputError("DIMACS: missing `p cnf` header");
  if (!current.empty()) clauses.push_back(std::move(current));
  if (clauses.size() != header->second)
    throw InputError("DIMACS: header declares " + std::to_string(header->second) + " clauses, found " +
                     std::to_string(clauses.size()));
  return CnfFormula(header->first, std::move(clauses));
}

std::string serialize_dimacs(const CnfFormula& f) {
  std::ostringstream out;
  out << "p cnf " << f.variables() << ' ' << f.clauses().size() << '\n';
  for (const auto& clause : f.clauses()) {
    for (int lit : clause) out << lit << ' ';
    out << "0\n";
  }
  return out.str();
}

std::string serialize_gadget_sidecar(const Gadget& gadget) {
  const auto& L = gadget.layout;
  const auto& g = gadget.instance.graph();
  json doc;
  json symbols = json::object();
  for (const auto& [sym, v] : L.symbols) symbols[sym] = g.name(v);
  doc["symbols"] = symbols;
  doc["variables"] = L.formula.variables();
  doc["clauses"] = L.formula.clauses().size();
  doc["removed_tautologies"] = L.formula.removed_tautologies();
  doc["rho"] = L.rho;
  doc["vertex_count"] = g.vertex_count();
  doc["edge_count"] = L.edge_count;
  doc["class_count"] = gadget.instance.class_count();
  doc["imbalanced"] = L.imbalanced;
  doc["tight_bound"] = tight_bound(L);
  doc["class_e0"] = L.e0 + 1;
  doc["class_estar"] = L.estar + 1;
  return doc.dump(2) + "\n";
}

std::uint64_t Rng::uniform(std::uint64_t lo, std::uint64_t hi) {
  if (lo > hi) throw PreconditionError("empty draw range");
  const std::uint64_t span = hi - lo;
  if (span == ~std::uint64_t{0}) return engine_();
  const std::uint64_t range = span + 1;
  // Rejection sampling below the largest multiple of `range`.
  const std::uint64_t bucket = (~std::uint64_t{0} / range) * range;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x < bucket) return lo + x % range;
  }
}

namespace {

std::size_t component_score(const WeightedGraph& g, const std::vector<ClassId>& cls, std::size_t k,
                            std::size_t target, std::vector<std::size_t>* counts = nullptr) {
  std::size_t score = 0;
  for (ClassId c = 0; c < k; ++c) {
    EdgeMask mask(g.edge_count(), false);
    for (EdgeId e = 0; e < g.edge_count(); ++e) mask[e] = cls[e] == c;
    const auto n = connected_components(g, mask).size();
    if (counts) counts->push_back(n);
    score += n > target ? n - target : target - n;
  }
  return score;
}

}  // namespace

GeneratedInstance generate_random_instance(const RandomInstanceParams& p) {
  if (p.n < 2) throw InputError("need at least two vertices");
  if (p.m + 1 < p.n) throw InputError("m must be at least n - 1 for a connected graph");
  if (p.m > p.n * (p.n - 1) / 2) throw InputError("m exceeds the number of vertex pairs");
  if (p.k == 0 || p.k > p.m) throw InputError("k must be between 1 and m");
  if (p.max_weight == 0) throw InputError("max weight must be positive");
  if (p.max_class_size && *p.max_class_size * p.k < p.m)
    throw InputError("k * max class size is smaller than m");
  if (p.components_per_class && *p.components_per_class == 0)
    throw InputError("components per class must be positive");

  Rng rng(p.seed);
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= p.n; ++i) names.push_back("v" + std::to_string(i));
  WeightedGraph g(names);

  std::vector<VertexId> perm(p.n);
  for (std::size_t i = 0; i < p.n; ++i) perm[i] = static_cast<VertexId>(i);
  rng.shuffle(perm);
  std::set<std::pair<VertexId, VertexId>> chosen;
  for (std::size_t i = 1; i < p.n; ++i) {
    const auto a = perm[i];
    const auto b = perm[rng.uniform(0, i - 1)];
    chosen.insert(std::minmax(a, b));
  }
  std::vector<std::pair<VertexId, VertexId>> others;
  for (VertexId a = 0; a < p.n; ++a)
    for (VertexId b = a + 1; b < p.n; ++b)
      if (!chosen.count({a, b})) others.emplace_back(a, b);
  rng.shuffle(others);
  for (std::size_t i = 0; chosen.size() < p.m; ++i) chosen.insert(others[i]);
  for (const auto& [a, b] : chosen) g.add_edge(a, b, rng.uniform(1, p.max_weight));

  const std::size_t cap = p.max_class_size.value_or(p.m);
  auto random_assignment = [&] {
    std::vector<EdgeId> order(p.m);
    for (EdgeId e = 0; e < p.m; ++e) order[e] = e;
    rng.shuffle(order);
    std::vector<ClassId> cls(p.m);
    std::vector<std::size_t> size(p.k, 0);
    for (std::size_t i = 0; i < p.m; ++i) {
      ClassId c;
      if (i < p.k) {
        c = static_cast<ClassId>(i);
      } else {
        do c = static_cast<ClassId>(rng.uniform(0, p.k - 1));
        while (size[c] >= cap);
      }
      cls[order[i]] = c;
      ++size[c];
    }
    return cls;
  };

  std::vector<std::string> warnings;
  std::vector<ClassId> cls;
  if (!p.components_per_class) {
    cls = random_assignment();
  } else {
    // Restarted local search on Σ |components(class) - target|.
    const std::size_t target = *p.components_per_class;
    std::optional<std::size_t> best_score;
    for (int attempt = 0; attempt < 32 && best_score != std::size_t{0}; ++attempt) {
      auto cur = random_assignment();
      std::size_t score = component_score(g, cur, p.k, target);
      std::vector<std::size_t> size(p.k, 0);
      for (auto c : cur) ++size[c];
      for (bool improved = true; improved && score > 0;) {
        improved = false;
        for (EdgeId e = 0; e < p.m && score > 0; ++e)
          for (ClassId d = 0; d < p.k; ++d) {
            const ClassId from = cur[e];
            if (d == from || size[from] == 1 || size[d] >= cap) continue;
            cur[e] = d;
            const auto s = component_score(g, cur, p.k, target);
            if (s < score) {
              score = s;
              --size[from];
              ++size[d];
              improved = true;
              break;
            }
            cur[e] = from;
          }
      }
      if (!best_score || score < *best_score) {
        best_score = score;
        cls = cur;
      }
    }
    if (*best_score > 0) {
      std::vector<std::size_t> counts;
      component_score(g, cls, p.k, target, &counts);
      std::string list;
      for (std::size_t c = 0; c < counts.size(); ++c)
        list += (c ? ", " : "") + std::to_string(counts[c]);
      warnings.push_back("could not give every class exactly " + std::to_string(target) +
                             " components; closest found: " + list);
    }
  }
  return {HcppInstance(std::move(g), std::move(cls), PrecedenceOrder::linear()), std::move(warnings)};
}

CnfFormula generate_random_formula(Rng& rng, std::size_t variables, std::size_t clauses) {
  if (variables == 0 || clauses == 0) throw InputError("formula needs variables and clauses");
  std::vector<std::vector<int>> out;
  for (std::size_t j = 0; j < clauses; ++j) {
    const std::size_t width = static_cast<std::size_t>(rng.uniform(1, std::min<std::size_t>(3, variables)));
    std::vector<int> vars(variables);
    for (std::size_t i = 0; i < variables; ++i) vars[i] = static_cast<int>(i + 1);
    rng.shuffle(vars);
    std::vector<int> clause;
    for (std::size_t i = 0; i < width; ++i) clause.push_back(rng.coin() ? vars[i] : -vars[i]);
    out.push_back(std::move(clause));
  }
  return CnfFormula(variables, std::move(out)).compacted();
}

}  // namespace hcpp
