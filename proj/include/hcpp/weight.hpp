#pragma once

#include <cstdint>
#include <limits>

#include "hcpp/error.hpp"

namespace hcpp {

/// Edge and walk weights. Non-negative integers; all arithmetic is checked.
using Weight = std::uint64_t;

inline Weight checked_add(Weight a, Weight b) {
  Weight r{};
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("weight addition overflows");
  return r;
}

inline Weight checked_mul(Weight a, Weight b) {
  Weight r{};
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("weight multiplication overflows");
  return r;
}

inline constexpr Weight kWeightMax = std::numeric_limits<Weight>::max();

}  // namespace hcpp
