#include "hcpp/graph.hpp"

#include <algorithm>
#include <sstream>

namespace hcpp {

WeightedGraph::WeightedGraph(std::size_t vertex_count) {
  for (std::size_t i = 0; i < vertex_count; ++i) add_vertex();
}

WeightedGraph::WeightedGraph(std::vector<std::string> names) {
  for (auto& n : names) add_vertex(std::move(n));
}

VertexId WeightedGraph::add_vertex(std::string name) {
  const auto id = static_cast<VertexId>(names_.size());
  if (name.empty()) name = std::to_string(id);
  if (!name_index_.emplace(name, id).second) throw InputError("duplicate vertex name '" + name + "'");
  names_.push_back(std::move(name));
  incidence_.emplace_back();
  return id;
}

EdgeId WeightedGraph::add_edge(VertexId u, VertexId v, Weight w) {
  if (!has_vertex(u) || !has_vertex(v)) throw InputError("edge endpoint is not a declared vertex");
  if (u == v) throw InputError("self-loop at vertex '" + names_[u] + "'");
  const auto key = std::minmax(u, v);
  const auto id = static_cast<EdgeId>(edges_.size());
  if (!edge_index_.emplace(std::pair{key.first, key.second}, id).second)
    throw InputError("duplicate edge {" + names_[u] + ", " + names_[v] + "}");
  edges_.push_back(Edge{key.first, key.second, w});
  incidence_[u].push_back(id);
  incidence_[v].push_back(id);
  return id;
}

std::optional<EdgeId> WeightedGraph::find_edge(VertexId u, VertexId v) const {
  const auto key = std::minmax(u, v);
  const auto it = edge_index_.find({key.first, key.second});
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<VertexId> WeightedGraph::find_vertex(const std::string& name) const {
  const auto it = name_index_.find(name);
  if (it == name_index_.end()) return std::nullopt;
  return it->second;
}

Weight WeightedGraph::total_weight() const {
  Weight total = 0;
  for (const auto& e : edges_) total = checked_add(total, e.w);
  return total;
}

Weight WeightedGraph::max_weight() const {
  Weight best = 0;
  for (const auto& e : edges_) best = std::max(best, e.w);
  return best;
}

EdgeMask make_mask(std::size_t edge_count, std::span<const EdgeId> edges) {
  EdgeMask mask(edge_count, false);
  for (auto e : edges) mask.at(e) = true;
  return mask;
}

EdgeMultiset::EdgeMultiset(std::initializer_list<EdgeId> edges) {
  for (auto e : edges) add(e);
}

EdgeMultiset::EdgeMultiset(std::span<const EdgeId> edges) {
  for (auto e : edges) add(e);
}

void EdgeMultiset::add(EdgeId e, std::uint32_t count) {
  if (count == 0) return;
  counts_[e] += count;
}

std::uint32_t EdgeMultiset::multiplicity(EdgeId e) const {
  const auto it = counts_.find(e);
  return it == counts_.end() ? 0 : it->second;
}

EdgeMultiset& EdgeMultiset::operator+=(const EdgeMultiset& other) {
  for (const auto& [e, c] : other.counts_) counts_[e] += c;
  return *this;
}

EdgeMultiset& EdgeMultiset::operator-=(const EdgeMultiset& other) {
  for (const auto& [e, c] : other.counts_) {
    const auto it = counts_.find(e);
    if (it == counts_.end()) continue;
    if (it->second <= c)
      counts_.erase(it);
    else
      it->second -= c;
  }
  return *this;
}

EdgeMultiset EdgeMultiset::reduced_mod2() const {
  EdgeMultiset out;
  for (const auto& [e, c] : counts_)
    if (c % 2 == 1) out.add(e);
  return out;
}

std::uint64_t EdgeMultiset::size() const {
  std::uint64_t total = 0;
  for (const auto& [e, c] : counts_) total += c;
  return total;
}

std::vector<EdgeId> EdgeMultiset::support() const {
  std::vector<EdgeId> out;
  out.reserve(counts_.size());
  for (const auto& [e, c] : counts_) out.push_back(e);
  return out;
}

Weight EdgeMultiset::weight(std::span<const Edge> edges) const {
  Weight total = 0;
  for (const auto& [e, c] : counts_) total = checked_add(total, checked_mul(edges[e].w, c));
  return total;
}

std::vector<VertexId> EdgeMultiset::vertices(std::span<const Edge> edges) const {
  std::set<VertexId> seen;
  for (const auto& [e, c] : counts_) {
    seen.insert(edges[e].u);
    seen.insert(edges[e].v);
  }
  return {seen.begin(), seen.end()};
}

std::vector<std::uint64_t> EdgeMultiset::degrees(std::span<const Edge> edges,
                                                 std::size_t vertex_count) const {
  std::vector<std::uint64_t> deg(vertex_count, 0);
  for (const auto& [e, c] : counts_) {
    deg.at(edges[e].u) += c;
    deg.at(edges[e].v) += c;
  }
  return deg;
}

Walk Walk::from_vertices(const WeightedGraph& g, std::span<const VertexId> sequence) {
  Walk w;
  if (sequence.empty()) return w;
  for (auto v : sequence)
    if (!g.has_vertex(v)) throw InputError("walk visits an unknown vertex");
  w.vertices.assign(sequence.begin(), sequence.end());
  for (std::size_t i = 1; i < sequence.size(); ++i) {
    const auto e = g.find_edge(sequence[i - 1], sequence[i]);
    if (!e)
      throw InputError("walk uses a non-edge {" + g.name(sequence[i - 1]) + ", " +
                       g.name(sequence[i]) + "}");
    w.edges.push_back(*e);
  }
  return w;
}

Weight Walk::weight(std::span<const Edge> edge_list) const {
  Weight total = 0;
  for (auto e : edges) total = checked_add(total, edge_list[e].w);
  return total;
}

bool Walk::is_consistent(std::span<const Edge> edge_list) const {
  if (vertices.empty()) return edges.empty();
  if (vertices.size() != edges.size() + 1) return false;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i] >= edge_list.size()) return false;
    if (!edge_list[edges[i]].joins(vertices[i], vertices[i + 1])) return false;
  }
  return true;
}

Walk Walk::reversed() const {
  return Walk{{vertices.rbegin(), vertices.rend()}, {edges.rbegin(), edges.rend()}};
}

void Walk::append(const Walk& tail) {
  if (tail.vertices.empty()) return;
  if (vertices.empty()) {
    *this = tail;
    return;
  }
  if (finish() != tail.start()) throw PreconditionError("appended walk does not start at the current end");
  vertices.insert(vertices.end(), tail.vertices.begin() + 1, tail.vertices.end());
  edges.insert(edges.end(), tail.edges.begin(), tail.edges.end());
}

std::string format_walk(const WeightedGraph& g, const Walk& w) {
  std::ostringstream out;
  for (std::size_t i = 0; i < w.vertices.size(); ++i) {
    if (i) out << ' ';
    out << g.name(w.vertices[i]);
  }
  return out.str();
}

}  // namespace hcpp
