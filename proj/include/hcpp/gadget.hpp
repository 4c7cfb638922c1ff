#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hcpp/graph.hpp"
#include "hcpp/hierarchy.hpp"

namespace hcpp {

/// CNF formula over variables 1..n. A literal is +i or -i.
///
/// Construction drops repeated literals inside a clause and deletes clauses
/// containing both x and -x.
class CnfFormula {
 public:
  /// Throws InputError on empty clauses, clauses wider than three literals
  /// (after deduplication) and literals outside 1..n.
  CnfFormula(std::size_t variables, std::vector<std::vector<int>> clauses);

  std::size_t variables() const { return variables_; }
  const std::vector<std::vector<int>>& clauses() const { return clauses_; }
  std::size_t removed_tautologies() const { return removed_; }

  /// assignment[i - 1] is the value of x_i.
  bool satisfied_by(const std::vector<bool>& assignment) const;
  /// Number of clauses mentioning x_i (ρ(i)).
  std::size_t occurrences(std::size_t variable) const;
  /// Drops variables without occurrences and renumbers the rest in order.
  CnfFormula compacted() const;

 private:
  std::size_t variables_ = 0;
  std::vector<std::vector<int>> clauses_;
  std::size_t removed_ = 0;
};

/// Where everything of the reduction lives in the generated instance. Indices
/// are 0-based: t[i][l] is t_{i+1}^{l+1}, c1[j] is c_{j+1}^1.
struct GadgetLayout {
  CnfFormula formula{0, {}};
  std::vector<std::size_t> rho;
  std::vector<std::vector<VertexId>> t, z, f;
  std::vector<VertexId> c1, c2;
  std::map<std::pair<std::size_t, std::size_t>, VertexId> a, b;  // keyed by (i, j)
  VertexId cstar = 0;

  ClassId e0 = 0;
  std::vector<std::vector<ClassId>> path_class;  // E_i^l
  ClassId estar = 0;

  std::vector<VertexId> v_ft;
  std::vector<VertexId> v_c;
  std::size_t edge_count = 0;
  std::size_t imbalanced = 0;  // b

  /// Symbolic names ("t_1^1", "c_2^1", "a_{1,2}", "c^*") to vertex ids.
  std::map<std::string, VertexId> symbols;
};

struct Gadget {
  HcppInstance instance;
  GadgetLayout layout;
};

/// Requires a nonempty formula whose variables all occur; otherwise
/// InputError.
Gadget build_gadget(const CnfFormula& formula);

/// |V| + |E| + k never exceeds this multiple of n + m.
inline constexpr std::size_t kGadgetSizeConstant = 175;

struct GadgetStructureReport {
  bool e0_eulerian = false;
  bool imbalanced_matches = false;
  bool size_linear = false;
  std::size_t imbalanced = 0;
  std::size_t size = 0;  // |V| + |E| + k
  std::vector<std::string> failures;

  bool ok() const { return e0_eulerian && imbalanced_matches && size_linear; }
};

/// Checks that G<E0> is connected with even degrees, that the odd-degree
/// vertices of G are exactly V_FT ∪ V_C, and the linear size bound.
GadgetStructureReport check_gadget_structure(const HcppInstance& inst, const GadgetLayout& layout,
                                             std::size_t size_constant = kGadgetSizeConstant);

/// |E| + b/2.
std::size_t tight_bound(const GadgetLayout& layout);

/// Closed walk of weight at most tight_bound for a satisfying assignment.
/// Throws PreconditionError if the assignment does not satisfy the formula.
Walk build_tight_tour(const Gadget& gadget, const std::vector<bool>& assignment);

struct SecondVisitProfile {
  EdgeMultiset extra;  // E(w) minus one copy of every edge
  bool matching = false;
  bool covers_imbalanced = false;
  bool inside_e0 = false;
  bool touches_ft = false;
};

SecondVisitProfile second_visit_profile(const HcppInstance& inst, const GadgetLayout& layout, const Walk& w);

}  // namespace hcpp
