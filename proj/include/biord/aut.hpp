#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "biord/word.hpp"

namespace biord {

/// Nielsen generators of Aut(F2) on the free basis a, b.
enum class Nielsen {
  inv_a,     // a -> a^-1
  inv_a_inv, // formal inverse of inv_a (same map)
  swap,      // a <-> b
  swap_inv,  // formal inverse of swap (same map)
  mult,      // a -> ab
  mult_inv,  // a -> ab^-1
};

inline constexpr std::array<Nielsen, 6> kNielsenMoves = {
    Nielsen::inv_a, Nielsen::inv_a_inv, Nielsen::swap, Nielsen::swap_inv, Nielsen::mult, Nielsen::mult_inv};

constexpr Nielsen inverse(Nielsen m) {
  switch (m) {
    case Nielsen::inv_a: return Nielsen::inv_a_inv;
    case Nielsen::inv_a_inv: return Nielsen::inv_a;
    case Nielsen::swap: return Nielsen::swap_inv;
    case Nielsen::swap_inv: return Nielsen::swap;
    case Nielsen::mult: return Nielsen::mult_inv;
    case Nielsen::mult_inv: return Nielsen::mult;
  }
  return m;
}

constexpr std::string_view to_string(Nielsen m) {
  switch (m) {
    case Nielsen::inv_a: return "inv_a";
    case Nielsen::inv_a_inv: return "inv_a^-1";
    case Nielsen::swap: return "swap";
    case Nielsen::swap_inv: return "swap^-1";
    case Nielsen::mult: return "mult";
    case Nielsen::mult_inv: return "mult^-1";
  }
  return "?";
}

/// A composition m_1 o m_2 o ... o m_k; the rightmost move is applied first.
using AutWord = std::vector<Nielsen>;

inline AutWord compose(const AutWord& sigma, const AutWord& tau) {
  AutWord out = sigma;
  out.insert(out.end(), tau.begin(), tau.end());
  return out;
}

inline AutWord inverse(const AutWord& sigma) {
  AutWord out;
  for (auto it = sigma.rbegin(); it != sigma.rend(); ++it) out.push_back(inverse(*it));
  return out;
}

inline std::string format_aut(const AutWord& sigma) {
  if (sigma.empty()) return "id";
  std::string s;
  for (Nielsen m : sigma) {
    if (!s.empty()) s += " o ";
    s += to_string(m);
  }
  return s;
}

/// Image of a word over {a, b} under one Nielsen move.
inline Word apply_move(Nielsen m, const Word& w) {
  Word image_a;
  Word image_b = Word::gen('b');
  switch (m) {
    case Nielsen::inv_a:
    case Nielsen::inv_a_inv: image_a = Word::gen('a', -1); break;
    case Nielsen::swap:
    case Nielsen::swap_inv:
      image_a = Word::gen('b');
      image_b = Word::gen('a');
      break;
    case Nielsen::mult: image_a = Word::gen('a') * Word::gen('b'); break;
    case Nielsen::mult_inv: image_a = Word::gen('a') * Word::gen('b', -1); break;
  }
  Word out;
  for (const Letter& l : w.letters()) {
    if (l.element.q != 0 || (l.factor != 'a' && l.factor != 'b')) {
      throw PreconditionError("automorphisms act on words over the free basis a, b");
    }
    out = out * power(l.factor == 'a' ? image_a : image_b, l.element.p);
  }
  return out;
}

inline Word apply_aut(const AutWord& sigma, const Word& w) {
  Word out = w;
  for (auto it = sigma.rbegin(); it != sigma.rend(); ++it) out = apply_move(*it, out);
  return out;
}

/// Every AutWord of length at most `max_len`, shortest first.
inline std::vector<AutWord> aut_words(int max_len) {
  std::vector<AutWord> out{AutWord{}};
  std::vector<AutWord> layer{AutWord{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<AutWord> next;
    for (const AutWord& s : layer) {
      for (Nielsen m : kNielsenMoves) {
        AutWord t = s;
        t.push_back(m);
        next.push_back(t);
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

}  // namespace biord
