#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "biord/errors.hpp"

namespace biord {

/// Element of a free factor. A Z factor uses `p` only; a Z^2 factor uses the
/// lattice point (p, q), with `p` the coordinate of the dominant generator.
struct FactorElement {
  std::int64_t p = 0;
  std::int64_t q = 0;

  constexpr bool is_identity() const { return p == 0 && q == 0; }
  constexpr FactorElement operator+(FactorElement o) const { return {p + o.p, q + o.q}; }
  constexpr FactorElement operator-() const { return {-p, -q}; }
  constexpr std::int64_t length() const { return (p < 0 ? -p : p) + (q < 0 ? -q : q); }
  constexpr auto operator<=>(const FactorElement&) const = default;
};

/// A syllable of a free-product word: a non-identity element of one factor.
/// Factors are named by a lowercase letter other than `e`.
struct Letter {
  char factor = 'a';
  FactorElement element;

  constexpr auto operator<=>(const Letter&) const = default;
};

/// Normal-form element of a free product of Z and Z^2 factors.
///
/// Letters are stored in written order: `letters().front()` is the leftmost
/// syllable and `letters().back()` acts first. Adjacent letters always come
/// from different factors and no letter is an identity.
class Word {
 public:
  Word() = default;

  static Word from_letters(std::span<const Letter> letters) {
    Word w;
    for (const Letter& l : letters) w.push_back(l);
    return w;
  }

  static Word from_letters(std::initializer_list<Letter> letters) {
    return from_letters(std::span<const Letter>(letters.begin(), letters.size()));
  }

  /// The one-letter word factor^k (identity when k == 0).
  static Word gen(char factor, std::int64_t k = 1) { return from_letters({Letter{factor, {k, 0}}}); }

  const std::vector<Letter>& letters() const { return letters_; }
  bool empty() const { return letters_.empty(); }
  std::size_t syllables() const { return letters_.size(); }

  /// Word length over the factor generators.
  std::int64_t length() const {
    std::int64_t n = 0;
    for (const Letter& l : letters_) n += l.element.length();
    return n;
  }

  bool operator==(const Word&) const = default;

 private:
  // Appends on the right, reducing with the tail; one pass handles cascades.
  void push_back(const Letter& l) {
    if (l.element.is_identity()) return;
    if (!letters_.empty() && letters_.back().factor == l.factor) {
      FactorElement merged = letters_.back().element + l.element;
      if (merged.is_identity()) {
        letters_.pop_back();
      } else {
        letters_.back().element = merged;
      }
      return;
    }
    letters_.push_back(l);
  }

  std::vector<Letter> letters_;

  friend Word multiply(const Word& u, const Word& v);
};

inline Word normal_form(std::span<const Letter> letters) { return Word::from_letters(letters); }

inline Word multiply(const Word& u, const Word& v) {
  Word w = u;
  for (const Letter& l : v.letters_) w.push_back(l);
  return w;
}

inline Word operator*(const Word& u, const Word& v) { return multiply(u, v); }

inline Word invert(const Word& w) {
  std::vector<Letter> out(w.letters().rbegin(), w.letters().rend());
  for (Letter& l : out) l.element = -l.element;
  return Word::from_letters(out);
}

/// g^h := h g h^-1, so that the critical point of g^h is h of that of g.
inline Word conjugate(const Word& g, const Word& h) { return h * g * invert(h); }

inline Word power(const Word& w, std::int64_t n) {
  Word base = n < 0 ? invert(w) : w;
  Word out;
  for (std::int64_t i = 0; i < (n < 0 ? -n : n); ++i) out = out * base;
  return out;
}

/// True when every letter of `w` belongs to one of `factors`.
inline bool word_in_factors(const Word& w, std::string_view factors) {
  return std::all_of(w.letters().begin(), w.letters().end(),
                     [&](const Letter& l) { return factors.find(l.factor) != std::string_view::npos; });
}

/// Exponent sum of one factor's first coordinate.
inline std::int64_t exponent_sum(const Word& w, char factor) {
  std::int64_t s = 0;
  for (const Letter& l : w.letters()) {
    if (l.factor == factor) s += l.element.p;
  }
  return s;
}

/// Tails of `w` in acting order, shortest first, starting with the identity.
/// Syllables are split into unit steps, so a^2 b contributes b, ab and a^2 b.
inline std::vector<Word> suffixes(const Word& w) {
  std::vector<Word> out{Word{}};
  const auto& ls = w.letters();
  for (std::size_t i = ls.size(); i-- > 0;) {
    std::vector<Letter> rest(ls.begin() + static_cast<std::ptrdiff_t>(i) + 1, ls.end());
    const FactorElement e = ls[i].element;
    std::vector<FactorElement> steps;
    const std::int64_t dq = e.q > 0 ? 1 : -1;
    for (std::int64_t q = dq; e.q != 0 && q != e.q + dq; q += dq) steps.push_back({0, q});
    const std::int64_t dp = e.p > 0 ? 1 : -1;
    for (std::int64_t p = dp; e.p != 0 && p != e.p + dp; p += dp) steps.push_back({p, e.q});
    for (FactorElement partial : steps) {
      std::vector<Letter> tail{Letter{ls[i].factor, partial}};
      tail.insert(tail.end(), rest.begin(), rest.end());
      out.push_back(Word::from_letters(tail));
    }
  }
  return out;
}

/// Shortlex: generator length first, then letters by factor and exponent.
struct ShortlexLess {
  bool operator()(const Word& u, const Word& v) const {
    const auto lu = u.length();
    const auto lv = v.length();
    if (lu != lv) return lu < lv;
    return std::lexicographical_compare(u.letters().begin(), u.letters().end(), v.letters().begin(),
                                        v.letters().end());
  }
};

struct WordHash {
  std::size_t operator()(const Word& w) const {
    std::size_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t x) {
      h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    };
    for (const Letter& l : w.letters()) {
      mix(static_cast<std::uint64_t>(l.factor));
      mix(static_cast<std::uint64_t>(l.element.p));
      mix(static_cast<std::uint64_t>(l.element.q));
    }
    return h;
  }
};

/// All distinct products of at most `radius` generators or their inverses,
/// sorted shortlex.
inline std::vector<Word> ball(std::span<const Word> generators, int radius) {
  if (radius < 0) throw PreconditionError("ball radius must be non-negative");
  std::vector<Word> steps;
  for (const Word& g : generators) {
    steps.push_back(g);
    steps.push_back(invert(g));
  }
  std::unordered_set<Word, WordHash> seen{Word{}};
  std::vector<Word> all{Word{}};
  std::vector<Word> frontier{Word{}};
  for (int r = 0; r < radius; ++r) {
    std::vector<Word> next;
    for (const Word& w : frontier) {
      for (const Word& s : steps) {
        Word x = w * s;
        if (seen.insert(x).second) {
          next.push_back(x);
          all.push_back(x);
        }
      }
    }
    frontier = std::move(next);
  }
  std::sort(all.begin(), all.end(), ShortlexLess{});
  return all;
}

/// One-letter generators a, b, ... for the given factor names.
inline std::vector<Word> generators_of(std::string_view factors) {
  std::vector<Word> out;
  for (char f : factors) out.push_back(Word::gen(f));
  return out;
}

inline std::vector<Word> ball(std::string_view factors, int radius) {
  auto gens = generators_of(factors);
  return ball(std::span<const Word>(gens), radius);
}

// ---------------------------------------------------------------------------
// Text format: `a^1 b^-2 a^3`, `c^(1,-2)` for Z^2 letters, `e` for identity.

inline std::string format_letter(const Letter& l) {
  std::string s(1, l.factor);
  s += '^';
  if (l.element.q == 0) {
    s += std::to_string(l.element.p);
  } else {
    s += '(' + std::to_string(l.element.p) + ',' + std::to_string(l.element.q) + ')';
  }
  return s;
}

inline std::string format_word(const Word& w) {
  if (w.empty()) return "e";
  std::string s;
  for (const Letter& l : w.letters()) {
    if (!s.empty()) s += ' ';
    s += format_letter(l);
  }
  return s;
}

/// Accepts the canonical format plus shorthand such as `ab`, `a^-1b` or `a b^2`.
inline Word parse_word(std::string_view text) {
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  };
  auto fail = [&](const std::string& why) -> ParseError {
    return ParseError("malformed word '" + std::string(text) + "': " + why);
  };
  auto read_int = [&]() -> std::int64_t {
    std::size_t start = i;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
    std::size_t digits = i;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
    if (i == digits) throw fail("expected integer exponent");
    if (i - digits > 17) throw fail("exponent too large");
    return std::stoll(std::string(text.substr(start, i - start)));
  };

  skip_ws();
  if (i < text.size() && text[i] == 'e') {
    ++i;
    skip_ws();
    if (i != text.size()) throw fail("identity 'e' must stand alone");
    return Word{};
  }
  std::vector<Letter> letters;
  while (true) {
    skip_ws();
    if (i == text.size()) break;
    const char f = text[i];
    if (f < 'a' || f > 'z' || f == 'e') throw fail(std::string("bad factor name '") + f + "'");
    ++i;
    Letter l{f, {1, 0}};
    if (i < text.size() && text[i] == '^') {
      ++i;
      if (i < text.size() && text[i] == '(') {
        ++i;
        l.element.p = read_int();
        if (i >= text.size() || text[i] != ',') throw fail("expected ','");
        ++i;
        l.element.q = read_int();
        if (i >= text.size() || text[i] != ')') throw fail("expected ')'");
        ++i;
      } else {
        l.element.p = read_int();
      }
    }
    letters.push_back(l);
  }
  if (letters.empty()) throw fail("empty word (use 'e' for the identity)");
  return Word::from_letters(letters);
}

}  // namespace biord
