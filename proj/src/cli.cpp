#include "hcpp/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "hcpp/gadget.hpp"
#include "hcpp/hierarchy.hpp"
#include "hcpp/io.hpp"

namespace hcpp {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << text;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

struct SolveArgs {
  std::string instance;
  std::string mode = "approx";
  std::string out;
  unsigned threads = 1;
  std::size_t oracle_limit = kDefaultOracleLimit;
  bool timing = false;
};

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  const auto mode = parse_solve_mode(a.mode);
  if (!mode) throw InputError("unknown mode '" + a.mode + "'");
  const auto inst = parse_instance(read_file(a.instance));
  const auto t0 = std::chrono::steady_clock::now();
  const auto sol = solve_hcppl(inst, {*mode, a.oracle_limit, a.threads});
  auto rec = make_solution_record(inst, sol, *mode);
  if (a.timing) rec.runtime_ms = elapsed_ms(t0);
  emit(a.out, serialize_solution(rec), out);
  if (!sol.feasible()) {
    err << "infeasible: no layer path exists\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

struct ValidateArgs {
  std::string instance;
  std::string solution;
};

int cmd_validate(const ValidateArgs& a, std::ostream& out) {
  const auto inst = parse_instance(read_file(a.instance));
  const auto rec = parse_solution(read_file(a.solution));
  const auto& g = inst.graph();
  auto reject = [&](const std::string& why) {
    out << "REJECT " << why << "\n";
    return kExitReject;
  };

  if (rec.walk.empty()) {
    if (rec.feasible) return reject("solution claims feasibility but has an empty walk");
    if (!inst.is_linear()) return reject("infeasibility claims cannot be checked for partial orders");
    if (check_feasibility(inst)) return reject("solution claims infeasibility but the instance is feasible");
    out << "ACCEPT infeasible instance\n";
    return kExitOk;
  }

  Walk w;
  try {
    w = walk_from_names(g, rec.walk);
  } catch (const InputError& e) {
    return reject(e.what());
  }
  const Weight weight = w.weight(g);
  if (!rec.weight || *rec.weight != weight)
    return reject("weight field " + (rec.weight ? std::to_string(*rec.weight) : std::string("null")) +
                  " differs from the walk weight " + std::to_string(weight));
  const auto verdict = validate_walk(inst, w);
  if (verdict.feasible != rec.feasible)
    return reject(std::string("feasible field is ") + (rec.feasible ? "true" : "false") + " but the walk is " +
                  (verdict.feasible ? "feasible" : "infeasible: " + verdict.violation->message));
  if (!verdict.feasible) return reject(verdict.violation->message);
  out << "ACCEPT weight " << weight << "\n";
  return kExitOk;
}

struct GenRandomArgs {
  RandomInstanceParams params;
  std::optional<std::size_t> components;
  std::optional<std::size_t> max_class_size;
  std::string out;
};

int cmd_gen_random(GenRandomArgs a, std::ostream& out, std::ostream& err) {
  a.params.components_per_class = a.components;
  a.params.max_class_size = a.max_class_size;
  const auto gen = generate_random_instance(a.params);
  for (const auto& w : gen.warnings) err << "warning: " << w << "\n";
  emit(a.out, serialize_instance(gen.instance), out);
  return kExitOk;
}

struct GenGadgetArgs {
  std::string cnf;
  std::string out;
  std::string sidecar;
};

int cmd_gen_gadget(const GenGadgetArgs& a, std::ostream& out, std::ostream& err) {
  std::ifstream in(a.cnf);
  if (!in) throw InputError("cannot open '" + a.cnf + "'");
  const auto formula = parse_dimacs(in);
  if (formula.removed_tautologies() > 0)
    err << "note: removed " << formula.removed_tautologies() << " clause(s) containing x and -x\n";
  const auto gadget = build_gadget(formula);
  emit(a.out, serialize_instance(gadget.instance), out);
  const auto sidecar = serialize_gadget_sidecar(gadget);
  if (!a.sidecar.empty())
    emit(a.sidecar, sidecar, out);
  else if (!a.out.empty() && a.out != "-")
    emit(a.out + ".layout.json", sidecar, out);
  return kExitOk;
}

struct CompareArgs {
  std::vector<std::string> instances;
  std::string out;
  unsigned threads = 1;
  std::size_t oracle_limit = kDefaultOracleLimit;
  bool timing = false;
};

int cmd_compare(const CompareArgs& a, std::ostream& out, std::ostream& err) {
  std::ostringstream csv;
  csv << kCompareHeader << "\n";
  int status = kExitOk;
  for (const auto& path : a.instances) {
    const auto inst = parse_instance(read_file(path));
    const auto stats = class_component_stats(inst);
    std::vector<std::string> row{csv_field(path),
                                 std::to_string(inst.graph().vertex_count()),
                                 std::to_string(inst.graph().edge_count()),
                                 std::to_string(inst.class_count()),
                                 std::to_string(stats.max_components)};
    auto t0 = std::chrono::steady_clock::now();
    const auto approx = solve_hcppl(inst, {SolveMode::Approx, a.oracle_limit, a.threads});
    const double approx_ms = elapsed_ms(t0);
    std::optional<HcppSolution> exact;
    double oracle_ms = 0;
    try {
      t0 = std::chrono::steady_clock::now();
      exact = solve_hcppl(inst, {SolveMode::ExactOracle, a.oracle_limit, a.threads});
      oracle_ms = elapsed_ms(t0);
    } catch (const PreconditionError& e) {
      err << "warning: " << path << ": oracle skipped: " << e.what() << "\n";
    } catch (const SizeLimitError& e) {
      err << "warning: " << path << ": oracle skipped: " << e.what() << "\n";
    }
    if (!approx.feasible()) {
      err << "warning: " << path << ": instance is infeasible\n";
      status = kExitInfeasible;
    }
    row.push_back(approx.feasible() ? std::to_string(approx.weight) : "");
    row.push_back(exact && exact->feasible() ? std::to_string(exact->weight) : "");
    std::string ratio;
    if (approx.feasible() && exact && exact->feasible()) {
      if (exact->weight > 0)
        ratio = fixed(static_cast<double>(approx.weight) / static_cast<double>(exact->weight), 6);
      else if (approx.weight == 0)
        ratio = fixed(1.0, 6);
    }
    row.push_back(ratio);
    row.push_back(a.timing ? fixed(approx_ms, 3) : "");
    row.push_back(a.timing && exact ? fixed(oracle_ms, 3) : "");
    for (std::size_t i = 0; i < row.size(); ++i) csv << (i ? "," : "") << row[i];
    csv << "\n";
  }
  emit(a.out, csv.str(), out);
  return status;
}

struct TightTourArgs {
  std::string cnf;
  std::string assignment;
  std::string out;
};

int cmd_tight_tour(const TightTourArgs& a, std::ostream& out, std::ostream& err) {
  std::ifstream in(a.cnf);
  if (!in) throw InputError("cannot open '" + a.cnf + "'");
  const auto formula = parse_dimacs(in);
  const auto gadget = build_gadget(formula);
  const std::size_t n = formula.variables();
  std::vector<bool> assignment(n, false);
  if (!a.assignment.empty()) {
    if (a.assignment.size() != n || a.assignment.find_first_not_of("01") != std::string::npos)
      throw InputError("assignment must be a string of " + std::to_string(n) + " characters 0/1");
    for (std::size_t i = 0; i < n; ++i) assignment[i] = a.assignment[i] == '1';
    if (!formula.satisfied_by(assignment)) throw PreconditionError("assignment does not satisfy the formula");
  } else {
    if (n > 24) throw SizeLimitError("exhaustive assignment search is limited to 24 variables");
    bool found = false;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n) && !found; ++bits) {
      for (std::size_t i = 0; i < n; ++i) assignment[i] = (bits >> i) & 1;
      found = formula.satisfied_by(assignment);
    }
    if (!found) {
      err << "formula is unsatisfiable\n";
      return kExitInfeasible;
    }
  }
  const auto tour = build_tight_tour(gadget, assignment);
  SolutionRecord rec;
  rec.mode = "tight-tour";
  for (auto v : tour.vertices) rec.walk.push_back(gadget.instance.graph().name(v));
  rec.weight = tour.weight(gadget.instance.graph());
  rec.feasible = validate_walk(gadget.instance, tour).feasible;
  const auto cs = class_component_stats(gadget.instance);
  rec.stats.k = gadget.instance.class_count();
  rec.stats.n = gadget.instance.graph().vertex_count();
  rec.stats.m = gadget.instance.graph().edge_count();
  rec.stats.c = cs.max_components;
  rec.stats.omega_max = cs.max_weight;
  emit(a.out, serialize_solution(rec), out);
  err << "tour weight " << *rec.weight << ", tight bound " << tight_bound(gadget.layout) << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hierarchical Chinese postman solver", "hcpp"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Solve an instance with the layered solver");
  s->add_option("instance", solve.instance, "Instance JSON")->required();
  s->add_option("--mode", solve.mode, "approx | exact-connected | exact-oracle")
      ->check(CLI::IsMember({"approx", "exact-connected", "exact-oracle"}));
  s->add_option("--out", solve.out, "Solution file (default stdout)");
  s->add_option("--threads", solve.threads, "Worker threads for arc sub-solves")->check(CLI::PositiveNumber);
  s->add_option("--oracle-limit", solve.oracle_limit, "Largest class the exact oracle accepts");
  s->add_flag("--timing", solve.timing, "Record runtime_ms (output no longer reproducible)");

  ValidateArgs validate;
  auto* v = app.add_subcommand("validate", "Check a solution file against an instance");
  v->add_option("instance", validate.instance, "Instance JSON")->required();
  v->add_option("solution", validate.solution, "Solution JSON")->required();

  GenRandomArgs gen;
  auto* r = app.add_subcommand("gen-random", "Generate a random instance with a linear order");
  r->add_option("--n", gen.params.n, "Vertices")->required();
  r->add_option("--m", gen.params.m, "Edges")->required();
  r->add_option("--k", gen.params.k, "Classes")->required();
  r->add_option("--max-weight", gen.params.max_weight, "Largest edge weight");
  r->add_option("--seed", gen.params.seed, "RNG seed")->envname("POSTMAN_SEED");
  r->add_option("--components-per-class", gen.components, "Target components per class");
  r->add_option("--max-class-size", gen.max_class_size, "Largest class");
  r->add_option("--out", gen.out, "Instance file (default stdout)");

  GenGadgetArgs gadget;
  auto* gg = app.add_subcommand("gen-gadget", "Build the 3-SAT reduction instance from DIMACS CNF");
  gg->add_option("cnf", gadget.cnf, "DIMACS file")->required();
  gg->add_option("--out", gadget.out, "Instance file (default stdout)");
  gg->add_option("--sidecar", gadget.sidecar, "Layout file (default <out>.layout.json)");

  CompareArgs compare;
  auto* c = app.add_subcommand("compare", "Approximation against exact oracle, as CSV");
  c->add_option("instances", compare.instances, "Instance files")->required();
  c->add_option("--out", compare.out, "CSV file (default stdout)");
  c->add_option("--threads", compare.threads, "Worker threads")->check(CLI::PositiveNumber);
  c->add_option("--oracle-limit", compare.oracle_limit, "Largest class the exact oracle accepts");
  c->add_flag("--timing", compare.timing, "Fill approx_ms/oracle_ms");

  TightTourArgs tight;
  auto* t = app.add_subcommand("tight-tour", "Build the tight tour of a satisfiable formula's gadget");
  t->add_option("cnf", tight.cnf, "DIMACS file")->required();
  t->add_option("--assignment", tight.assignment, "Values of x1..xn as 0/1 (default: first satisfying)");
  t->add_option("--out", tight.out, "Solution file (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  try {
    if (s->parsed()) return cmd_solve(solve, out, err);
    if (v->parsed()) return cmd_validate(validate, out);
    if (r->parsed()) return cmd_gen_random(gen, out, err);
    if (gg->parsed()) return cmd_gen_gadget(gadget, out, err);
    if (c->parsed()) return cmd_compare(compare, out, err);
    if (t->parsed()) return cmd_tight_tour(tight, out, err);
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace hcpp
