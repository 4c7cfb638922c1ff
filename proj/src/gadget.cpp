#include "hcpp/gadget.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

#include "hcpp/graph_algorithms.hpp"

namespace hcpp {

CnfFormula::CnfFormula(std::size_t variables, std::vector<std::vector<int>> clauses) : variables_(variables) {
  for (std::size_t j = 0; j < clauses.size(); ++j) {
    auto clause = clauses[j];
    const std::string where = "clause " + std::to_string(j + 1);
    if (clause.empty()) throw InputError(where + " is empty");
    std::vector<int> kept;
    for (int lit : clause) {
      const auto var = static_cast<std::size_t>(std::abs(static_cast<long long>(lit)));
      if (lit == 0 || var > variables_)
        throw InputError(where + " has literal " + std::to_string(lit) + " outside 1.." + std::to_string(variables_));
      if (std::find(kept.begin(), kept.end(), lit) == kept.end()) kept.push_back(lit);
    }
    if (kept.size() > 3) throw InputError(where + " has more than three literals");
    const bool tautology = std::any_of(kept.begin(), kept.end(), [&](int lit) {
      return std::find(kept.begin(), kept.end(), -lit) != kept.end();
    });
    if (tautology) {
      ++removed_;
      continue;
    }
    clauses_.push_back(std::move(kept));
  }
}

bool CnfFormula::satisfied_by(const std::vector<bool>& assignment) const {
  if (assignment.size() != variables_) return false;
  return std::all_of(clauses_.begin(), clauses_.end(), [&](const std::vector<int>& clause) {
    return std::any_of(clause.begin(), clause.end(), [&](int lit) {
      return assignment[static_cast<std::size_t>(std::abs(lit)) - 1] == (lit > 0);
    });
  });
}

std::size_t CnfFormula::occurrences(std::size_t variable) const {
  std::size_t n = 0;
  for (const auto& clause : clauses_)
    for (int lit : clause)
      if (static_cast<std::size_t>(std::abs(lit)) == variable) ++n;
  return n;
}

CnfFormula CnfFormula::compacted() const {
  std::vector<int> renumber(variables_ + 1, 0);
  int next = 0;
  for (std::size_t v = 1; v <= variables_; ++v)
    if (occurrences(v) > 0) renumber[v] = ++next;
  auto clauses = clauses_;
  for (auto& clause : clauses)
    for (int& lit : clause) lit = lit > 0 ? renumber[lit] : -renumber[-lit];
  return CnfFormula(static_cast<std::size_t>(next), std::move(clauses));
}

namespace {

std::string idx(std::size_t i, std::size_t l) { return std::to_string(i + 1) + "." + std::to_string(l + 1); }

class GadgetBuilder {
 public:
  VertexId vertex(const std::string& name, const std::string& symbol) {
    const auto v = graph_.add_vertex(name);
    symbols_[symbol] = v;
    return v;
  }
  void edge(VertexId u, VertexId v, ClassId c) {
    graph_.add_edge(u, v, 1);
    classes_.push_back(c);
  }

  WeightedGraph graph_;
  std::vector<ClassId> classes_;
  std::map<std::string, VertexId> symbols_;
};

}  // namespace

Gadget build_gadget(const CnfFormula& formula) {
  const std::size_t n = formula.variables();
  const std::size_t m = formula.clauses().size();
  if (m == 0) throw InputError("formula has no clauses left after removing tautologies");
  GadgetLayout L;
  L.formula = formula;
  for (std::size_t i = 1; i <= n; ++i) {
    L.rho.push_back(formula.occurrences(i));
    if (L.rho.back() == 0)
      throw InputError("variable " + std::to_string(i) + " occurs in no clause; drop it and renumber");
  }

  GadgetBuilder B;
  L.t.resize(n);
  L.z.resize(n);
  L.f.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t len = 6 * L.rho[i];
    for (std::size_t l = 0; l < len; ++l) {
      const auto sup = "_" + std::to_string(i + 1) + "^" + std::to_string(l + 1);
      L.t[i].push_back(B.vertex("t" + idx(i, l), "t" + sup));
      L.z[i].push_back(B.vertex("z" + idx(i, l), "z" + sup));
      L.f[i].push_back(B.vertex("f" + idx(i, l), "f" + sup));
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    L.c1.push_back(B.vertex("c" + std::to_string(j + 1) + ".1", "c_" + std::to_string(j + 1) + "^1"));
    L.c2.push_back(B.vertex("c" + std::to_string(j + 1) + ".2", "c_" + std::to_string(j + 1) + "^2"));
  }
  // rank[j][i]: occurrence rank (0-based) of clause j among clauses of x_i.
  std::vector<std::map<std::size_t, std::size_t>> rank(m);
  {
    std::vector<std::size_t> seen(n, 0);
    for (std::size_t j = 0; j < m; ++j)
      for (int lit : formula.clauses()[j]) {
        const auto i = static_cast<std::size_t>(std::abs(lit)) - 1;
        rank[j][i] = seen[i]++;
        const auto key = "_{" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "}";
        L.a[{i, j}] = B.vertex("a" + std::to_string(i + 1) + "." + std::to_string(j + 1), "a" + key);
        L.b[{i, j}] = B.vertex("b" + std::to_string(i + 1) + "." + std::to_string(j + 1), "b" + key);
      }
  }
  L.cstar = B.vertex("c*", "c^*");

  L.e0 = 0;
  ClassId next_class = 1;
  L.path_class.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < 6 * L.rho[i]; ++l) L.path_class[i].push_back(next_class++);
  L.estar = next_class;

  // E0: cycles X_i, Y_{i,i mod n+1}, Z_ij and Z̄_ij.
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t len = 6 * L.rho[i];
    for (std::size_t l = 0; l + 1 < len; ++l) B.edge(L.t[i][l], L.t[i][l + 1], L.e0);
    B.edge(L.t[i][len - 1], L.f[i][len - 1], L.e0);
    for (std::size_t l = len - 1; l > 0; --l) B.edge(L.f[i][l], L.f[i][l - 1], L.e0);
    B.edge(L.f[i][0], L.t[i][0], L.e0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = (i + 1) % n;
    const auto ti = L.t[i].back();
    const auto fi = L.f[i].back();
    B.edge(ti, L.f[k][0], L.e0);
    B.edge(L.f[k][0], fi, L.e0);
    B.edge(fi, L.t[k][0], L.e0);
    B.edge(L.t[k][0], ti, L.e0);
  }
  for (std::size_t j = 0; j < m; ++j)
    for (int lit : formula.clauses()[j]) {
      const auto i = static_cast<std::size_t>(std::abs(lit)) - 1;
      const auto& side = lit > 0 ? L.t[i] : L.f[i];
      const std::size_t l = rank[j][i] + 1;
      const auto first = side[6 * l - 4];
      const auto second = side[6 * l - 3];
      B.edge(first, L.c1[j], L.e0);
      B.edge(L.c1[j], L.a[{i, j}], L.e0);
      B.edge(L.a[{i, j}], L.c2[j], L.e0);
      B.edge(L.c2[j], second, L.e0);
      B.edge(second, L.b[{i, j}], L.e0);
      B.edge(L.b[{i, j}], first, L.e0);
    }
  // E_i^l: paths (t, z, f).
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < 6 * L.rho[i]; ++l) {
      B.edge(L.t[i][l], L.z[i][l], L.path_class[i][l]);
      B.edge(L.z[i][l], L.f[i][l], L.path_class[i][l]);
    }
  // E*: star at c*.
  for (std::size_t j = 0; j < m; ++j) {
    B.edge(L.c1[j], L.cstar, L.estar);
    B.edge(L.cstar, L.c2[j], L.estar);
  }

  std::vector<std::pair<ClassId, ClassId>> relations;
  for (ClassId c = 1; c < L.estar; ++c) {
    relations.emplace_back(L.e0, c);
    if (c + 1 < L.estar) relations.emplace_back(c, c + 1);
  }

  for (std::size_t i = 0; i < n; ++i) {
    L.v_ft.insert(L.v_ft.end(), L.t[i].begin(), L.t[i].end());
    L.v_ft.insert(L.v_ft.end(), L.f[i].begin(), L.f[i].end());
  }
  std::sort(L.v_ft.begin(), L.v_ft.end());
  for (std::size_t j = 0; j < m; ++j) {
    L.v_c.push_back(L.c1[j]);
    L.v_c.push_back(L.c2[j]);
  }
  L.edge_count = B.graph_.edge_count();
  L.imbalanced = L.v_ft.size() + L.v_c.size();
  L.symbols = std::move(B.symbols_);

  HcppInstance inst(std::move(B.graph_), std::move(B.classes_), PrecedenceOrder::partial(std::move(relations)));
  return Gadget{std::move(inst), std::move(L)};
}

GadgetStructureReport check_gadget_structure(const HcppInstance& inst, const GadgetLayout& layout,
                                             std::size_t size_constant) {
  GadgetStructureReport r;
  const auto& g = inst.graph();

  const auto e0 = inst.class_edges(layout.e0);
  const EdgeMultiset e0_set(e0);
  const auto e0_deg = e0_set.degrees(g.edges(), g.vertex_count());
  r.e0_eulerian = true;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (e0_deg[v] % 2 != 0) {
      r.e0_eulerian = false;
      r.failures.push_back("E0 degree of '" + g.name(v) + "' is odd (" + std::to_string(e0_deg[v]) + ")");
      break;
    }
  const auto comps = connected_components(g.edges(), g.vertex_count(), e0_set);
  if (comps.size() != 1) {
    r.e0_eulerian = false;
    r.failures.push_back("G<E0> has " + std::to_string(comps.size()) + " components");
  }

  std::vector<EdgeId> all(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) all[e] = e;
  const auto odd = odd_vertices(g.edges(), g.vertex_count(), EdgeMultiset(all));
  std::vector<VertexId> expected = layout.v_ft;
  expected.insert(expected.end(), layout.v_c.begin(), layout.v_c.end());
  std::sort(expected.begin(), expected.end());
  r.imbalanced = odd.size();
  r.imbalanced_matches = odd == expected;
  if (!r.imbalanced_matches) {
    std::vector<VertexId> diff;
    std::set_symmetric_difference(odd.begin(), odd.end(), expected.begin(), expected.end(),
                                  std::back_inserter(diff));
    r.failures.push_back("imbalanced set differs from V_FT ∪ V_C at '" + g.name(diff.front()) + "'");
  }

  const std::size_t n = layout.formula.variables();
  const std::size_t m = layout.formula.clauses().size();
  r.size = g.vertex_count() + g.edge_count() + inst.class_count();
  r.size_linear = r.size <= size_constant * (n + m);
  if (!r.size_linear)
    r.failures.push_back("|V| + |E| + k = " + std::to_string(r.size) + " exceeds " + std::to_string(size_constant) +
                         "(n + m) = " + std::to_string(size_constant * (n + m)));
  return r;
}

std::size_t tight_bound(const GadgetLayout& layout) { return layout.edge_count + layout.imbalanced / 2; }

Walk build_tight_tour(const Gadget& gadget, const std::vector<bool>& assignment) {
  const auto& L = gadget.layout;
  const auto& g = gadget.instance.graph();
  if (!L.formula.satisfied_by(assignment)) throw PreconditionError("assignment does not satisfy the formula");
  const std::size_t n = L.formula.variables();
  const std::size_t m = L.formula.clauses().size();

  // First vertex of the zig-zag on X_i; also where the E0 tour starts for i = 0.
  auto entry = [&](std::size_t i) { return assignment[i] ? L.f[i][0] : L.t[i][0]; };
  const VertexId start = entry(0);
  Walk tour = euler_walk(g, EdgeMultiset(gadget.instance.class_edges(L.e0)), start, start);

  // detour[i][l]: clause whose star path is taken after path 6l-3 of x_i.
  std::vector<std::map<std::size_t, std::size_t>> detour(n);
  std::vector<bool> covered(m, false);
  std::vector<std::size_t> seen(n, 0);
  std::vector<std::vector<std::pair<std::size_t, int>>> occ(n);  // (clause, literal) by rank
  for (std::size_t j = 0; j < m; ++j)
    for (int lit : L.formula.clauses()[j]) occ[static_cast<std::size_t>(std::abs(lit)) - 1].emplace_back(j, lit);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t r = 0; r < occ[i].size(); ++r) {
      const auto [j, lit] = occ[i][r];
      if (covered[j] || (lit > 0) != assignment[i]) continue;
      covered[j] = true;
      detour[i][r + 1] = j;
    }

  std::vector<VertexId> seq{start};
  for (std::size_t i = 0; i < n; ++i) {
    // On the "near" side a path is entered, on the "far" side it is left.
    const auto& near = assignment[i] ? L.f[i] : L.t[i];
    const auto& far = assignment[i] ? L.t[i] : L.f[i];
    const std::size_t len = 6 * L.rho[i];
    for (std::size_t l = 0; l < len; ++l) {
      const bool odd = l % 2 == 0;  // path l+1 is odd
      const auto from = odd ? near[l] : far[l];
      const auto to = odd ? far[l] : near[l];
      if (seq.back() != from) seq.push_back(from);
      seq.push_back(L.z[i][l]);
      seq.push_back(to);
      if (l + 1 == len) break;
      const std::size_t path = l + 1;
      if (path % 6 == 3) {
        const auto it = detour[i].find((path + 3) / 6);
        if (it != detour[i].end()) {
          seq.push_back(L.c1[it->second]);
          seq.push_back(L.cstar);
          seq.push_back(L.c2[it->second]);
        }
      }
      // Connector on the side the path ended: far after odd paths, near after even.
      seq.push_back(odd ? far[l + 1] : near[l + 1]);
    }
    // Y edge to the entry of the next block (or back to the start).
    seq.push_back(entry((i + 1) % n));
  }
  tour.append(Walk::from_vertices(g, seq));
  return tour;
}

SecondVisitProfile second_visit_profile(const HcppInstance& inst, const GadgetLayout& layout, const Walk& w) {
  const auto& g = inst.graph();
  SecondVisitProfile p;
  EdgeMultiset once;
  for (EdgeId e = 0; e < g.edge_count(); ++e) once.add(e);
  p.extra = w.multiset() - once;

  std::vector<std::uint32_t> touched(g.vertex_count(), 0);
  p.matching = true;
  p.inside_e0 = true;
  p.touches_ft = true;
  const std::set<VertexId> ft(layout.v_ft.begin(), layout.v_ft.end());
  for (const auto& [e, count] : p.extra) {
    const auto& edge = g.edge(e);
    if (count != 1) p.matching = false;
    touched[edge.u] += count;
    touched[edge.v] += count;
    if (inst.class_of(e) != layout.e0) p.inside_e0 = false;
    if (!ft.count(edge.u) && !ft.count(edge.v)) p.touches_ft = false;
  }
  std::vector<VertexId> covered;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (touched[v] > 1) p.matching = false;
    if (touched[v] > 0) covered.push_back(v);
  }
  std::vector<VertexId> expected = layout.v_ft;
  expected.insert(expected.end(), layout.v_c.begin(), layout.v_c.end());
  std::sort(expected.begin(), expected.end());
  p.covers_imbalanced = covered == expected;
  return p;
}

}  // namespace hcpp
