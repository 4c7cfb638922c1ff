#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "hcpp/weight.hpp"

namespace hcpp {

/// Symmetric pairwise costs on points 0..n-1.
class CostMatrix {
 public:
  CostMatrix() = default;
  explicit CostMatrix(std::size_t n) : n_(n), cost_(n * n, 0) {}

  std::size_t size() const { return n_; }
  Weight operator()(std::size_t i, std::size_t j) const { return cost_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, Weight w) {
    cost_[i * n_ + j] = w;
    cost_[j * n_ + i] = w;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Weight> cost_;
};

struct PerfectMatching {
  /// Matched pairs (i, j) with i < j, sorted.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  Weight weight = 0;
};

/// Largest size the subset dynamic program accepts.
inline constexpr std::size_t kMatchingDpLimit = 22;
/// Above this size the dispatcher switches to the blossom algorithm.
inline constexpr std::size_t kMatchingDpThreshold = 16;

/// Exact minimum-weight perfect matching. Uses the subset dynamic program up
/// to kMatchingDpThreshold points and the blossom algorithm above that.
/// Throws PreconditionError for an odd number of points.
PerfectMatching min_weight_perfect_matching(const CostMatrix& costs);

/// Subset dynamic program, O(2^n n). Always matches the lowest unmatched point
/// first; among equal costs the smaller partner wins.
PerfectMatching min_weight_perfect_matching_dp(const CostMatrix& costs);

/// Edmonds' weighted blossom algorithm with primal-dual updates, O(n^3).
PerfectMatching min_weight_perfect_matching_blossom(const CostMatrix& costs);

}  // namespace hcpp
