#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "biord/errors.hpp"
#include "biord/sign.hpp"
#include "biord/word.hpp"

namespace biord {

/// Noncommutative monomial over {A, B}. The first symbol is the most
/// significant of the `degree` low bits (A = 0, B = 1), so the defaulted
/// ordering is degree-lexicographic with A < B.
struct Monomial {
  std::uint8_t degree = 0;
  std::uint64_t bits = 0;

  constexpr auto operator<=>(const Monomial&) const = default;

  friend constexpr Monomial operator*(Monomial u, Monomial v) {
    const std::uint64_t high = v.degree >= 64 ? 0 : (u.bits << v.degree);
    return {static_cast<std::uint8_t>(u.degree + v.degree), high | v.bits};
  }

  static constexpr Monomial power(int symbol, int k) {
    Monomial m;
    for (int i = 0; i < k; ++i) m = m * Monomial{1, static_cast<std::uint64_t>(symbol)};
    return m;
  }
};

inline std::string format_monomial(Monomial m) {
  if (m.degree == 0) return "1";
  std::string s;
  for (int i = m.degree - 1; i >= 0; --i) s += ((m.bits >> i) & 1U) ? 'B' : 'A';
  return s;
}

/// Power series in noncommuting A, B with integer coefficients, truncated
/// above `cap`. `exact` stays true while no nonzero term has been dropped.
class TruncSeries {
 public:
  explicit TruncSeries(int cap) : cap_(cap) {
    if (cap < 1 || cap > 64) throw PreconditionError("degree cap must lie in [1, 64]");
  }

  static TruncSeries one(int cap) {
    TruncSeries s(cap);
    s.terms_[Monomial{}] = 1;
    return s;
  }

  /// (1 + X)^k for X = A (symbol 0) or B (symbol 1), via generalized binomials.
  static TruncSeries generator_power(int symbol, std::int64_t k, int cap) {
    TruncSeries s(cap);
    __int128 c = 1;
    for (int j = 0; j <= cap; ++j) {
      if (c == 0) break;
      s.terms_[Monomial::power(symbol, j)] = checked(c);
      c = c * (k - j) / (j + 1);
    }
    // Negative powers never terminate; positive ones terminate at degree k.
    s.exact_ = k >= 0 && k <= cap;
    return s;
  }

  int cap() const { return cap_; }
  bool exact() const { return exact_; }
  const std::map<Monomial, std::int64_t>& terms() const { return terms_; }

  std::int64_t coefficient(Monomial m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? 0 : it->second;
  }

  friend TruncSeries operator*(const TruncSeries& u, const TruncSeries& v) {
    TruncSeries out(std::min(u.cap_, v.cap_));
    out.exact_ = u.exact_ && v.exact_;
    std::map<Monomial, __int128> acc;
    for (const auto& [mu, cu] : u.terms_) {
      for (const auto& [mv, cv] : v.terms_) {
        if (mu.degree + mv.degree > out.cap_) {
          out.exact_ = false;
          continue;
        }
        acc[mu * mv] += static_cast<__int128>(cu) * cv;
      }
    }
    for (const auto& [m, c] : acc) {
      if (c != 0) out.terms_[m] = checked(c);
    }
    return out;
  }

  bool operator==(const TruncSeries& o) const { return cap_ == o.cap_ && terms_ == o.terms_; }

 private:
  static std::int64_t checked(__int128 c) {
    if (c > INT64_MAX || c < INT64_MIN) throw Error("Magnus coefficient overflow");
    return static_cast<std::int64_t>(c);
  }

  int cap_;
  bool exact_ = true;
  std::map<Monomial, std::int64_t> terms_;
};

inline std::string format_series(const TruncSeries& s) {
  std::string out;
  for (const auto& [m, c] : s.terms()) {
    std::string coeff = std::to_string(c < 0 ? -c : c);
    if (out.empty()) {
      out += c < 0 ? "-" : "";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (m.degree == 0) {
      out += coeff;
    } else {
      if (coeff != "1") out += coeff;
      out += format_monomial(m);
    }
  }
  return out.empty() ? "0" : out;
}

/// Magnus image of a word over {a, b} (a -> 1 + A, b -> 1 + B), truncated at `cap`.
inline TruncSeries expand(const Word& w, int cap) {
  TruncSeries s = TruncSeries::one(cap);
  for (const Letter& l : w.letters()) {
    if ((l.factor != 'a' && l.factor != 'b') || l.element.q != 0) {
      throw PreconditionError("Magnus expansion is defined on words over a, b");
    }
    s = s * TruncSeries::generator_power(l.factor == 'a' ? 0 : 1, l.element.p, cap);
  }
  return s;
}

/// Sign of the leading non-constant term in degree-lex order, nullopt when the
/// truncation leaves nothing to decide. An exact series equal to 1 is zero.
inline std::optional<Sign> series_sign(const TruncSeries& s) {
  for (const auto& [m, c] : s.terms()) {
    if (m.degree == 0) continue;
    return c > 0 ? Sign::positive : Sign::negative;
  }
  if (s.exact()) return Sign::zero;
  return std::nullopt;
}

inline constexpr int kMagnusCapCeiling = 64;

/// Sign of a word in the Magnus bi-order; the degree cap doubles until decided.
inline Sign magnus_sign(const Word& w, int ceiling = kMagnusCapCeiling) {
  if (w.empty()) return Sign::zero;
  for (int cap = 2;; cap *= 2) {
    cap = std::min(cap, ceiling);
    if (auto s = series_sign(expand(w, cap))) return *s;
    if (cap >= ceiling) break;
  }
  throw MagnusCapExceeded("Magnus sign undecided up to degree " + std::to_string(ceiling) + " for " +
                          format_word(w));
}

}  // namespace biord
