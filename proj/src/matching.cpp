#include "hcpp/matching.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <string>

#include "hcpp/error.hpp"

namespace hcpp {

namespace {

void require_even(const CostMatrix& costs) {
  if (costs.size() % 2 != 0)
    throw PreconditionError("perfect matching needs an even number of points, got " +
                            std::to_string(costs.size()));
}

PerfectMatching finish(const CostMatrix& costs, std::vector<std::pair<std::size_t, std::size_t>> pairs) {
  PerfectMatching out;
  for (auto& [a, b] : pairs)
    if (a > b) std::swap(a, b);
  std::sort(pairs.begin(), pairs.end());
  for (const auto& [a, b] : pairs) out.weight = checked_add(out.weight, costs(a, b));
  out.pairs = std::move(pairs);
  return out;
}

// Maximum-weight matching of maximum cardinality on a general graph
// (Galil's formulation of Edmonds' algorithm with dual variables). Endpoint
// p of edge k is 2k or 2k+1; mate[] holds the remote endpoint.
class BlossomMatcher {
 public:
  struct WEdge {
    int i;
    int j;
    std::int64_t w;
  };

  BlossomMatcher(int n, std::vector<WEdge> edges) : n_(n), edges_(std::move(edges)) {}

  std::vector<int> run();

 private:
  std::int64_t slack(int k) const {
    const auto& e = edges_[k];
    return dual_[e.i] + dual_[e.j] - 2 * e.w;
  }
  static int wrap(int j, int len) { return ((j % len) + len) % len; }

  void leaves(int b, std::vector<int>& out) const {
    if (b < n_) {
      out.push_back(b);
      return;
    }
    for (int c : childs_[b]) leaves(c, out);
  }
  std::vector<int> leaves(int b) const {
    std::vector<int> out;
    leaves(b, out);
    return out;
  }

  void assign_label(int w, int t, int p);
  int scan_blossom(int v, int w);
  void add_blossom(int base, int k);
  void expand_blossom(int b, bool endstage);
  void augment_blossom(int b, int v);
  void augment_matching(int k);

  int n_;
  std::vector<WEdge> edges_;
  std::vector<int> endpoint_;
  std::vector<std::vector<int>> neighbend_;
  std::vector<int> mate_, label_, labelend_, inblossom_, blossomparent_, blossombase_, bestedge_;
  std::vector<std::vector<int>> childs_, endps_, bestedges_;
  std::vector<bool> has_bestedges_;
  std::vector<int> unused_;
  std::vector<std::int64_t> dual_;
  std::vector<bool> allowedge_;
  std::vector<int> queue_;
};

void BlossomMatcher::assign_label(int w, int t, int p) {
  const int b = inblossom_[w];
  label_[w] = label_[b] = t;
  labelend_[w] = labelend_[b] = p;
  bestedge_[w] = bestedge_[b] = -1;
  if (t == 1) {
    leaves(b, queue_);
  } else if (t == 2) {
    const int base = blossombase_[b];
    assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
  }
}

int BlossomMatcher::scan_blossom(int v, int w) {
  std::vector<int> path;
  int base = -1;
  while (v != -1 || w != -1) {
    int b = inblossom_[v];
    if (label_[b] & 4) {
      base = blossombase_[b];
      break;
    }
    path.push_back(b);
    label_[b] = 5;
    if (labelend_[b] == -1) {
      v = -1;
    } else {
      v = endpoint_[labelend_[b]];
      b = inblossom_[v];
      v = endpoint_[labelend_[b]];
    }
    if (w != -1) std::swap(v, w);
  }
  for (int b : path) label_[b] = 1;
  return base;
}

void BlossomMatcher::add_blossom(int base, int k) {
  int v = edges_[k].i;
  int w = edges_[k].j;
  const int bb = inblossom_[base];
  int bv = inblossom_[v];
  int bw = inblossom_[w];
  const int b = unused_.back();
  unused_.pop_back();
  blossombase_[b] = base;
  blossomparent_[b] = -1;
  blossomparent_[bb] = b;
  auto& path = childs_[b];
  auto& endps = endps_[b];
  path.clear();
  endps.clear();
  while (bv != bb) {
    blossomparent_[bv] = b;
    path.push_back(bv);
    endps.push_back(labelend_[bv]);
    v = endpoint_[labelend_[bv]];
    bv = inblossom_[v];
  }
  path.push_back(bb);
  std::reverse(path.begin(), path.end());
  std::reverse(endps.begin(), endps.end());
  endps.push_back(2 * k);
  while (bw != bb) {
    blossomparent_[bw] = b;
    path.push_back(bw);
    endps.push_back(labelend_[bw] ^ 1);
    w = endpoint_[labelend_[bw]];
    bw = inblossom_[w];
  }
  label_[b] = 1;
  labelend_[b] = labelend_[bb];
  dual_[b] = 0;
  for (int leaf : leaves(b)) {
    if (label_[inblossom_[leaf]] == 2) queue_.push_back(leaf);
    inblossom_[leaf] = b;
  }
  std::vector<int> bestedgeto(2 * n_, -1);
  for (int sub : path) {
    std::vector<std::vector<int>> nblists;
    if (!has_bestedges_[sub]) {
      for (int leaf : leaves(sub)) {
        std::vector<int> list;
        for (int p : neighbend_[leaf]) list.push_back(p / 2);
        nblists.push_back(std::move(list));
      }
    } else {
      nblists.push_back(bestedges_[sub]);
    }
    for (const auto& list : nblists) {
      for (int kk : list) {
        int i = edges_[kk].i;
        int j = edges_[kk].j;
        if (inblossom_[j] == b) std::swap(i, j);
        const int bj = inblossom_[j];
        if (bj != b && label_[bj] == 1 && (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj])))
          bestedgeto[bj] = kk;
      }
    }
    has_bestedges_[sub] = false;
    bestedges_[sub].clear();
    bestedge_[sub] = -1;
  }
  bestedges_[b].clear();
  for (int kk : bestedgeto)
    if (kk != -1) bestedges_[b].push_back(kk);
  has_bestedges_[b] = true;
  bestedge_[b] = -1;
  for (int kk : bestedges_[b])
    if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) bestedge_[b] = kk;
}

void BlossomMatcher::expand_blossom(int b, bool endstage) {
  const std::vector<int> children = childs_[b];
  for (int s : children) {
    blossomparent_[s] = -1;
    if (s < n_) {
      inblossom_[s] = s;
    } else if (endstage && dual_[s] == 0) {
      expand_blossom(s, endstage);
    } else {
      for (int leaf : leaves(s)) inblossom_[leaf] = s;
    }
  }
  if (!endstage && label_[b] == 2) {
    const int len = static_cast<int>(children.size());
    const int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
    int j = static_cast<int>(std::find(children.begin(), children.end(), entrychild) - children.begin());
    int jstep = 0;
    int endptrick = 0;
    if (j & 1) {
      j -= len;
      jstep = 1;
      endptrick = 0;
    } else {
      jstep = -1;
      endptrick = 1;
    }
    const auto& endps = endps_[b];
    int p = labelend_[b];
    while (j != 0) {
      label_[endpoint_[p ^ 1]] = 0;
      label_[endpoint_[endps[wrap(j - endptrick, len)] ^ endptrick ^ 1]] = 0;
      assign_label(endpoint_[p ^ 1], 2, p);
      allowedge_[endps[wrap(j - endptrick, len)] / 2] = true;
      j += jstep;
      p = endps[wrap(j - endptrick, len)] ^ endptrick;
      allowedge_[p / 2] = true;
      j += jstep;
    }
    int bv = children[wrap(j, len)];
    label_[endpoint_[p ^ 1]] = label_[bv] = 2;
    labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
    bestedge_[bv] = -1;
    j += jstep;
    while (children[wrap(j, len)] != entrychild) {
      bv = children[wrap(j, len)];
      if (label_[bv] == 1) {
        j += jstep;
        continue;
      }
      int found = -1;
      for (int leaf : leaves(bv)) {
        if (label_[leaf] != 0) {
          found = leaf;
          break;
        }
      }
      if (found != -1) {
        label_[found] = 0;
        label_[endpoint_[mate_[blossombase_[bv]]]] = 0;
        assign_label(found, 2, labelend_[found]);
      }
      j += jstep;
    }
  }
  label_[b] = labelend_[b] = -1;
  childs_[b].clear();
  endps_[b].clear();
  blossombase_[b] = -1;
  bestedges_[b].clear();
  has_bestedges_[b] = false;
  bestedge_[b] = -1;
  unused_.push_back(b);
}

void BlossomMatcher::augment_blossom(int b, int v) {
  int t = v;
  while (blossomparent_[t] != b) t = blossomparent_[t];
  if (t >= n_) augment_blossom(t, v);
  auto& children = childs_[b];
  auto& endps = endps_[b];
  const int len = static_cast<int>(children.size());
  const int i = static_cast<int>(std::find(children.begin(), children.end(), t) - children.begin());
  int j = i;
  int jstep = 0;
  int endptrick = 0;
  if (i & 1) {
    j -= len;
    jstep = 1;
    endptrick = 0;
  } else {
    jstep = -1;
    endptrick = 1;
  }
  while (j != 0) {
    j += jstep;
    t = children[wrap(j, len)];
    const int p = endps[wrap(j - endptrick, len)] ^ endptrick;
    if (t >= n_) augment_blossom(t, endpoint_[p]);
    j += jstep;
    t = children[wrap(j, len)];
    if (t >= n_) augment_blossom(t, endpoint_[p ^ 1]);
    mate_[endpoint_[p]] = p ^ 1;
    mate_[endpoint_[p ^ 1]] = p;
  }
  std::rotate(children.begin(), children.begin() + i, children.end());
  std::rotate(endps.begin(), endps.begin() + i, endps.end());
  blossombase_[b] = blossombase_[children[0]];
}

void BlossomMatcher::augment_matching(int k) {
  const int v = edges_[k].i;
  const int w = edges_[k].j;
  for (auto [s, p] : {std::pair{v, 2 * k + 1}, std::pair{w, 2 * k}}) {
    while (true) {
      const int bs = inblossom_[s];
      if (bs >= n_) augment_blossom(bs, s);
      mate_[s] = p;
      if (labelend_[bs] == -1) break;
      const int t = endpoint_[labelend_[bs]];
      const int bt = inblossom_[t];
      s = endpoint_[labelend_[bt]];
      const int j = endpoint_[labelend_[bt] ^ 1];
      if (bt >= n_) augment_blossom(bt, j);
      mate_[j] = labelend_[bt];
      p = labelend_[bt] ^ 1;
    }
  }
}

std::vector<int> BlossomMatcher::run() {
  const int m = static_cast<int>(edges_.size());
  std::int64_t maxweight = 0;
  for (const auto& e : edges_) maxweight = std::max(maxweight, e.w);
  endpoint_.resize(2 * m);
  for (int k = 0; k < m; ++k) {
    endpoint_[2 * k] = edges_[k].i;
    endpoint_[2 * k + 1] = edges_[k].j;
  }
  neighbend_.assign(n_, {});
  for (int k = 0; k < m; ++k) {
    neighbend_[edges_[k].i].push_back(2 * k + 1);
    neighbend_[edges_[k].j].push_back(2 * k);
  }
  mate_.assign(n_, -1);
  label_.assign(2 * n_, 0);
  labelend_.assign(2 * n_, -1);
  inblossom_.resize(n_);
  for (int v = 0; v < n_; ++v) inblossom_[v] = v;
  blossomparent_.assign(2 * n_, -1);
  childs_.assign(2 * n_, {});
  endps_.assign(2 * n_, {});
  blossombase_.assign(2 * n_, -1);
  for (int v = 0; v < n_; ++v) blossombase_[v] = v;
  bestedge_.assign(2 * n_, -1);
  bestedges_.assign(2 * n_, {});
  has_bestedges_.assign(2 * n_, false);
  unused_.clear();
  for (int b = 2 * n_ - 1; b >= n_; --b) unused_.push_back(b);
  dual_.assign(2 * n_, 0);
  for (int v = 0; v < n_; ++v) dual_[v] = maxweight;
  allowedge_.assign(m, false);

  for (int stage = 0; stage < n_; ++stage) {
    std::fill(label_.begin(), label_.end(), 0);
    std::fill(bestedge_.begin(), bestedge_.end(), -1);
    for (int b = n_; b < 2 * n_; ++b) {
      bestedges_[b].clear();
      has_bestedges_[b] = false;
    }
    std::fill(allowedge_.begin(), allowedge_.end(), false);
    queue_.clear();
    for (int v = 0; v < n_; ++v)
      if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);

    bool augmented = false;
    while (true) {
      while (!queue_.empty() && !augmented) {
        const int v = queue_.back();
        queue_.pop_back();
        for (int p : neighbend_[v]) {
          const int k = p / 2;
          const int w = endpoint_[p];
          if (inblossom_[v] == inblossom_[w]) continue;
          std::int64_t kslack = 0;
          if (!allowedge_[k]) {
            kslack = slack(k);
            if (kslack <= 0) allowedge_[k] = true;
          }
          if (allowedge_[k]) {
            if (label_[inblossom_[w]] == 0) {
              assign_label(w, 2, p ^ 1);
            } else if (label_[inblossom_[w]] == 1) {
              const int base = scan_blossom(v, w);
              if (base >= 0) {
                add_blossom(base, k);
              } else {
                augment_matching(k);
                augmented = true;
                break;
              }
            } else if (label_[w] == 0) {
              label_[w] = 2;
              labelend_[w] = p ^ 1;
            }
          } else if (label_[inblossom_[w]] == 1) {
            const int b = inblossom_[v];
            if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
          } else if (label_[w] == 0) {
            if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
          }
        }
      }
      if (augmented) break;

      int deltatype = -1;
      std::int64_t delta = 0;
      int deltaedge = -1;
      int deltablossom = -1;
      for (int v = 0; v < n_; ++v) {
        if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
          const std::int64_t d = slack(bestedge_[v]);
          if (deltatype == -1 || d < delta) {
            delta = d;
            deltatype = 2;
            deltaedge = bestedge_[v];
          }
        }
      }
      for (int b = 0; b < 2 * n_; ++b) {
        if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
          const std::int64_t d = slack(bestedge_[b]) / 2;
          if (deltatype == -1 || d < delta) {
            delta = d;
            deltatype = 3;
            deltaedge = bestedge_[b];
          }
        }
      }
      for (int b = n_; b < 2 * n_; ++b) {
        if (blossombase_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 &&
            (deltatype == -1 || dual_[b] < delta)) {
          delta = dual_[b];
          deltatype = 4;
          deltablossom = b;
        }
      }
      if (deltatype == -1) {
        deltatype = 1;
        delta = std::max<std::int64_t>(0, *std::min_element(dual_.begin(), dual_.begin() + n_));
      }
      for (int v = 0; v < n_; ++v) {
        if (label_[inblossom_[v]] == 1)
          dual_[v] -= delta;
        else if (label_[inblossom_[v]] == 2)
          dual_[v] += delta;
      }
      for (int b = n_; b < 2 * n_; ++b) {
        if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
          if (label_[b] == 1)
            dual_[b] += delta;
          else if (label_[b] == 2)
            dual_[b] -= delta;
        }
      }
      if (deltatype == 1) break;
      if (deltatype == 2) {
        allowedge_[deltaedge] = true;
        int i = edges_[deltaedge].i;
        if (label_[inblossom_[i]] == 0) i = edges_[deltaedge].j;
        queue_.push_back(i);
      } else if (deltatype == 3) {
        allowedge_[deltaedge] = true;
        queue_.push_back(edges_[deltaedge].i);
      } else {
        expand_blossom(deltablossom, false);
      }
    }
    if (!augmented) break;
    for (int b = n_; b < 2 * n_; ++b)
      if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 && dual_[b] == 0)
        expand_blossom(b, true);
  }

  std::vector<int> result(n_, -1);
  for (int v = 0; v < n_; ++v)
    if (mate_[v] >= 0) result[v] = endpoint_[mate_[v]];
  return result;
}

}  // namespace

PerfectMatching min_weight_perfect_matching(const CostMatrix& costs) {
  if (costs.size() <= kMatchingDpThreshold) return min_weight_perfect_matching_dp(costs);
  return min_weight_perfect_matching_blossom(costs);
}

PerfectMatching min_weight_perfect_matching_dp(const CostMatrix& costs) {
  require_even(costs);
  const std::size_t n = costs.size();
  if (n > kMatchingDpLimit)
    throw SizeLimitError("subset matching is limited to " + std::to_string(kMatchingDpLimit) + " points");
  if (n == 0) return {};
  const std::size_t full = (std::size_t{1} << n) - 1;
  // best[mask]: cheapest perfect matching of the points in mask.
  std::vector<Weight> best(full + 1, kWeightMax);
  std::vector<std::uint8_t> partner(full + 1, 0);
  best[0] = 0;
  for (std::size_t mask = 3; mask <= full; ++mask) {
    if (std::popcount(mask) % 2 != 0) continue;
    const auto low = static_cast<std::size_t>(std::countr_zero(mask));
    for (std::size_t j = low + 1; j < n; ++j) {
      if (!(mask >> j & 1)) continue;
      const auto rest = mask & ~(std::size_t{1} << low) & ~(std::size_t{1} << j);
      if (best[rest] == kWeightMax) continue;
      const Weight cand = checked_add(best[rest], costs(low, j));
      if (cand < best[mask]) {
        best[mask] = cand;
        partner[mask] = static_cast<std::uint8_t>(j);
      }
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t mask = full; mask != 0;) {
    const auto low = static_cast<std::size_t>(std::countr_zero(mask));
    const std::size_t j = partner[mask];
    pairs.emplace_back(low, j);
    mask &= ~(std::size_t{1} << low) & ~(std::size_t{1} << j);
  }
  return finish(costs, std::move(pairs));
}

PerfectMatching min_weight_perfect_matching_blossom(const CostMatrix& costs) {
  require_even(costs);
  const std::size_t n = costs.size();
  if (n == 0) return {};
  Weight top = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) top = std::max(top, costs(i, j));
  if (top > static_cast<Weight>(INT64_MAX / 8)) throw OverflowError("matching costs too large for the blossom solver");
  // Maximum-cardinality maximum-weight matching on (top - cost) is a
  // minimum-cost perfect matching. Doubling keeps every dual integral.
  std::vector<BlossomMatcher::WEdge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      edges.push_back({static_cast<int>(i), static_cast<int>(j),
                       2 * static_cast<std::int64_t>(top - costs(i, j))});
  BlossomMatcher matcher(static_cast<int>(n), std::move(edges));
  const auto mate = matcher.run();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t v = 0; v < n; ++v) {
    if (mate[v] < 0) throw Error("blossom matcher returned an imperfect matching");
    if (v < static_cast<std::size_t>(mate[v])) pairs.emplace_back(v, mate[v]);
  }
  return finish(costs, std::move(pairs));
}

}  // namespace hcpp
