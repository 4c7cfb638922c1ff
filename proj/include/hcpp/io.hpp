#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hcpp/gadget.hpp"
#include "hcpp/hierarchy.hpp"

namespace hcpp {

/// Parses an instance document. Vertices and edges are re-sorted into
/// canonical order before ids are assigned, so permuted files of the same
/// instance solve identically. Throws InputError naming the line (syntax) or
/// the JSON field (schema).
HcppInstance parse_instance(const std::string& text);
/// Canonical document: vertices sorted, edges sorted by endpoint names.
std::string serialize_instance(const HcppInstance& inst);

struct SolutionRecord {
  std::vector<std::string> walk;
  std::optional<Weight> weight;
  std::string mode;
  bool feasible = false;
  SolveStats stats;
  std::optional<double> runtime_ms;
};

std::string serialize_solution(const SolutionRecord& rec);
/// Only `walk`, `weight` and `feasible` are required.
SolutionRecord parse_solution(const std::string& text);
SolutionRecord make_solution_record(const HcppInstance& inst, const HcppSolution& sol, SolveMode mode);
/// Vertex names to a walk; throws InputError on unknown names or non-edges.
Walk walk_from_names(const WeightedGraph& g, const std::vector<std::string>& names);

/// DIMACS CNF: `c` comment lines, one `p cnf n m` header, zero-terminated
/// clauses that may span lines, optional `%` terminator.
CnfFormula parse_dimacs(std::istream& in);
std::string serialize_dimacs(const CnfFormula& f);

/// Gadget sidecar: symbol -> vertex name, counts and the tight bound.
std::string serialize_gadget_sidecar(const Gadget& gadget);

/// Bounded draws with a fixed algorithm (the standard distributions are
/// implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform in [lo, hi].
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi);
  bool coin() { return uniform(0, 1) == 1; }
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform(0, i - 1)]);
  }

 private:
  std::mt19937_64 engine_;
};

struct RandomInstanceParams {
  std::size_t n = 6;
  std::size_t m = 8;
  std::size_t k = 2;
  Weight max_weight = 10;
  std::uint64_t seed = 1;
  std::optional<std::size_t> components_per_class;
  std::optional<std::size_t> max_class_size;
};

struct GeneratedInstance {
  HcppInstance instance;
  std::vector<std::string> warnings;
};

/// Connected graph (random spanning tree plus extra edges), weights in
/// 1..max_weight, k nonempty classes under a linear order. Throws InputError
/// for impossible parameters.
GeneratedInstance generate_random_instance(const RandomInstanceParams& p);

/// Random formula with every variable occurring; clause widths 1..3.
CnfFormula generate_random_formula(Rng& rng, std::size_t variables, std::size_t clauses);

}  // namespace hcpp
