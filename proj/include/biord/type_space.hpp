#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "biord/aut.hpp"
#include "biord/cone.hpp"
#include "biord/errors.hpp"
#include "biord/oracle.hpp"
#include "biord/rational.hpp"
#include "biord/word.hpp"

namespace biord {

namespace detail {

inline void require_ab(const Word& w) {
  for (const Letter& l : w.letters()) {
    if ((l.factor != 'a' && l.factor != 'b') || l.element.q != 0) {
      throw PreconditionError("type-space maps are defined on words over a, b");
    }
  }
}

inline Rational rational_power(const Rational& base, std::int64_t n) {
  Rational out = 1;
  Rational b = n < 0 ? Rational(1 / base) : base;
  for (std::int64_t i = 0; i < (n < 0 ? -n : n); ++i) out *= b;
  return out;
}

}  // namespace detail

/// Exponent sum of a.
inline std::int64_t phi(const Word& w) {
  detail::require_ab(w);
  return exponent_sum(w, 'a');
}

/// On ker phi: sum of k * alpha^h over the letters b^k, where h is the
/// exponent sum of a to the left of the letter. So psi(a g a^-1) = alpha psi(g).
inline Rational psi(const Word& w, const Rational& alpha) {
  if (phi(w) != 0) throw NotInKernel("psi is defined on ker phi only; got " + format_word(w));
  Rational total = 0;
  std::int64_t height = 0;
  for (const Letter& l : w.letters()) {
    if (l.factor == 'a') {
      height += l.element.p;
    } else {
      total += l.element.p * detail::rational_power(alpha, height);
    }
  }
  return total;
}

/// phi first, then psi on ker phi, then the base order on ker psi.
inline Sign type_alpha_sign(const Word& w, const Rational& alpha, const OrderOracle& base) {
  if (!(alpha > 1)) throw PreconditionError("type alpha needs alpha > 1");
  if (std::int64_t f = phi(w); f != 0) return sign_of(f);
  if (Sign s = sign_of(psi(w, alpha)); s != Sign::zero) return s;
  return base.sign(w);
}

inline OrderOracle type_alpha_oracle(const Rational& alpha, const OrderOracle& base = magnus_oracle()) {
  if (!(alpha > 1)) throw PreconditionError("type alpha needs alpha > 1");
  return OrderOracle("type:" + to_string(alpha), Provenance::type_alpha, generators_of("ab"),
                     [alpha, base](const Word& w) { return type_alpha_sign(w, alpha, base); });
}

struct ConradValues {
  std::int64_t phi = 0;
  std::optional<Rational> psi;
};

/// phi always; psi only when phi vanishes.
inline ConradValues conrad_values(const Rational& alpha, const Word& w) {
  ConradValues v{phi(w), std::nullopt};
  if (v.phi == 0) v.psi = psi(w, alpha);
  return v;
}

/// Window (k, l, m, n) with 1 < k/l < m/n.
struct Window {
  std::int64_t k = 0;
  std::int64_t l = 0;
  std::int64_t m = 0;
  std::int64_t n = 0;

  Rational lower() const { return make_rational(k, l); }
  Rational upper() const { return make_rational(m, n); }

  void validate() const {
    if (k <= 0 || l <= 0 || m <= 0 || n <= 0) throw PreconditionError("window entries must be positive");
    if (!(1 < lower() && lower() < upper())) throw PreconditionError("window needs 1 < k/l < m/n");
  }

  bool operator==(const Window&) const = default;
};

inline std::string format_window(const Window& w) {
  return std::to_string(w.k) + "," + std::to_string(w.l) + "," + std::to_string(w.m) + "," + std::to_string(w.n);
}

inline Window parse_window(std::string_view text) {
  std::vector<std::int64_t> v;
  std::size_t i = 0;
  while (i <= text.size()) {
    std::size_t j = text.find(',', i);
    if (j == std::string_view::npos) j = text.size();
    std::string part(text.substr(i, j - i));
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos || part.size() > 12) {
      throw ParseError("malformed window '" + std::string(text) + "'");
    }
    v.push_back(std::stoll(part));
    i = j + 1;
  }
  if (v.size() != 4) throw ParseError("a window has four entries k,l,m,n");
  Window w{v[0], v[1], v[2], v[3]};
  try {
    w.validate();
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  }
  return w;
}

/// Strict inequalities u < v defining the window, in order:
/// 1 < b, b < a, (b^a)^n < b^m, and b^k < (b^a)^l. With `printed_form` the
/// last one is b^l < (b^a)^k instead.
inline std::vector<std::pair<Word, Word>> window_inequalities(const Window& w, bool printed_form = false) {
  w.validate();
  const Word a = Word::gen('a');
  const Word b = Word::gen('b');
  auto ba_pow = [&](std::int64_t e) { return conjugate(Word::gen('b', e), a); };
  std::vector<std::pair<Word, Word>> out;
  out.emplace_back(Word{}, b);
  out.emplace_back(b, a);
  out.emplace_back(ba_pow(w.n), Word::gen('b', w.m));
  if (printed_form) {
    out.emplace_back(Word::gen('b', w.l), ba_pow(w.k));
  } else {
    out.emplace_back(Word::gen('b', w.k), ba_pow(w.l));
  }
  return out;
}

inline bool in_window(const OrderOracle& o, const Window& w, bool printed_form = false) {
  for (const auto& [u, v] : window_inequalities(w, printed_form)) {
    if (compare(o, u, v) != Comparison::less) return false;
  }
  return true;
}

/// Positive words v u^-1, one per window inequality u < v.
inline std::vector<Word> window_seeds(const Window& w) {
  std::vector<Word> out;
  for (const auto& [u, v] : window_inequalities(w)) out.push_back(v * invert(u));
  return out;
}

struct SeparationReport {
  bool membership = false;  // alpha order in W1, beta order in W2
  bool orbits = false;      // no pulled back order crosses into the other window
  bool disjoint = false;    // the combined window seeds are contradictory
  std::size_t automorphisms = 0;
  std::vector<std::string> failures;
  std::vector<Word> seeds;
  ConeCertificate certificate;

  bool ok() const { return membership && orbits && disjoint; }
};

/// Finite evidence that the Aut(F2) orbits of the type alpha and type beta
/// orders stay in separate windows.
inline SeparationReport separation_evidence(const Rational& alpha, const Rational& beta, const Window& w1,
                                            const Window& w2, int aut_len, std::int64_t length_bound = 24,
                                            SaturateLimits limits = {3, 200000}) {
  w1.validate();
  w2.validate();
  if (!(w1.lower() < alpha && alpha < w1.upper() && w1.upper() < w2.lower() && w2.lower() < beta &&
        beta < w2.upper())) {
    throw PreconditionError("separation needs 1 < k1/l1 < alpha < m1/n1 < k2/l2 < beta < m2/n2");
  }
  if (aut_len < 0) throw PreconditionError("automorphism length must be non-negative");
  SeparationReport rep;
  const OrderOracle base = magnus_oracle();
  const OrderOracle oa = type_alpha_oracle(alpha, base);
  const OrderOracle ob = type_alpha_oracle(beta, base);

  const bool a_in = in_window(oa, w1);
  const bool b_in = in_window(ob, w2);
  if (!a_in) rep.failures.push_back("type " + to_string(alpha) + " order not in window " + format_window(w1));
  if (!b_in) rep.failures.push_back("type " + to_string(beta) + " order not in window " + format_window(w2));
  rep.membership = a_in && b_in;

  rep.orbits = true;
  for (const AutWord& sigma : aut_words(aut_len)) {
    ++rep.automorphisms;
    if (in_window(pullback(oa, sigma), w2)) {
      rep.orbits = false;
      rep.failures.push_back("pullback by " + format_aut(sigma) + " moves type " + to_string(alpha) +
                             " into window " + format_window(w2));
    }
    if (in_window(pullback(ob, sigma), w1)) {
      rep.orbits = false;
      rep.failures.push_back("pullback by " + format_aut(sigma) + " moves type " + to_string(beta) +
                             " into window " + format_window(w1));
    }
  }

  for (const Window* w : {&w1, &w2}) {
    for (const Word& s : window_seeds(*w)) {
      if (std::find(rep.seeds.begin(), rep.seeds.end(), s) == rep.seeds.end()) rep.seeds.push_back(s);
    }
  }
  rep.certificate = cone_saturate(std::span<const Word>(rep.seeds), length_bound, limits);
  rep.disjoint = rep.certificate.status == ConeCertificate::Status::contradiction &&
                 replay(std::span<const Word>(rep.seeds), length_bound, rep.certificate);
  if (!rep.disjoint) rep.failures.push_back("window seeds not refuted within length " + std::to_string(length_bound));
  return rep;
}

}  // namespace biord
