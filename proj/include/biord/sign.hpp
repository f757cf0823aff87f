#pragma once

#include <string_view>

#include "biord/rational.hpp"

namespace biord {

enum class Sign : int { negative = -1, zero = 0, positive = 1 };

constexpr Sign operator-(Sign s) { return static_cast<Sign>(-static_cast<int>(s)); }

template <typename T>
constexpr Sign sign_of(const T& value) {
  if (value > 0) return Sign::positive;
  if (value < 0) return Sign::negative;
  return Sign::zero;
}

inline Sign sign_of(const Rational& value) { return static_cast<Sign>(sgn(value)); }

constexpr std::string_view to_string(Sign s) {
  switch (s) {
    case Sign::negative: return "negative";
    case Sign::zero: return "zero";
    case Sign::positive: return "positive";
  }
  return "?";
}

enum class Comparison : int { less = -1, equal = 0, greater = 1 };

constexpr std::string_view to_string(Comparison c) {
  switch (c) {
    case Comparison::less: return "less";
    case Comparison::equal: return "equal";
    case Comparison::greater: return "greater";
  }
  return "?";
}

}  // namespace biord
