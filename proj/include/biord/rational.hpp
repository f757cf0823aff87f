#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "biord/errors.hpp"

namespace biord {

using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Parses `p` or `p/q` with an optional leading minus sign.
inline Rational parse_rational(std::string_view text) {
  auto digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
  };
  std::string_view body = text;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
  auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{} : body.substr(slash + 1);
  if (!digits(num) || (slash != std::string_view::npos && !digits(den))) {
    throw ParseError("malformed rational '" + std::string(text) + "'");
  }
  std::string canon(text);
  if (!canon.empty() && canon.front() == '+') canon.erase(0, 1);
  Rational r;
  if (r.set_str(canon, 10) != 0) {
    throw ParseError("malformed rational '" + std::string(text) + "'");
  }
  if (r.get_den() == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline Rational midpoint(const Rational& a, const Rational& b) {
  Rational m = (a + b) / 2;
  return m;
}

}  // namespace biord
