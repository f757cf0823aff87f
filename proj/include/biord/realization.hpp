#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "biord/errors.hpp"
#include "biord/pl_map.hpp"
#include "biord/sign.hpp"
#include "biord/word.hpp"

namespace biord {

enum class FactorKind { z, z2_lex };

/// One free factor together with the PL maps of its generators. A Z^2 factor
/// carries {dominant, subordinate}; its element (p, q) acts as d^p o s^q.
struct Factor {
  char name = 'a';
  FactorKind kind = FactorKind::z;
  std::vector<PLMap> generators;
};

/// Intrinsic order of a factor: the sign of the exponent, lexicographic for Z^2.
inline Sign factor_sign(FactorKind kind, FactorElement e) {
  if (kind == FactorKind::z || e.p != 0) return sign_of(e.p);
  return sign_of(e.q);
}

/// Generator maps for free factors acting on the line, plus the radius at
/// which the realization axioms are audited.
class Realization {
 public:
  explicit Realization(std::vector<Factor> factors, int audit_radius = 3)
      : factors_(std::move(factors)), audit_radius_(audit_radius) {
    if (audit_radius_ < 0) throw PreconditionError("audit radius must be non-negative");
    std::string seen;
    for (const Factor& f : factors_) {
      if (f.name < 'a' || f.name > 'z' || f.name == 'e') throw PreconditionError("bad factor name");
      if (seen.find(f.name) != std::string::npos) throw PreconditionError("duplicate factor name");
      seen += f.name;
      const std::size_t want = f.kind == FactorKind::z ? 1 : 2;
      if (f.generators.size() != want) throw PreconditionError("wrong number of generator maps");
      for (const PLMap& m : f.generators) {
        if (m.is_identity()) throw PreconditionError("generator maps must not be the identity");
      }
    }
  }

  const std::vector<Factor>& factors() const { return factors_; }
  int audit_radius() const { return audit_radius_; }

  std::string factor_names() const {
    std::string s;
    for (const Factor& f : factors_) s += f.name;
    return s;
  }

  bool has_factor(char name) const {
    return std::any_of(factors_.begin(), factors_.end(), [&](const Factor& f) { return f.name == name; });
  }

  const Factor& factor(char name) const {
    for (const Factor& f : factors_) {
      if (f.name == name) return f;
    }
    throw PreconditionError(std::string("no factor named '") + name + "'");
  }

  /// One word per generator: `a` for Z, `c^(1,0)` and `c^(0,1)` for Z^2.
  std::vector<Word> generator_words() const {
    std::vector<Word> out;
    for (const Factor& f : factors_) {
      if (f.kind == FactorKind::z) {
        out.push_back(Word::gen(f.name));
      } else {
        out.push_back(Word::from_letters({Letter{f.name, {1, 0}}}));
        out.push_back(Word::from_letters({Letter{f.name, {0, 1}}}));
      }
    }
    return out;
  }

  PLMap letter_map(const Letter& l) const {
    const Factor& f = factor(l.factor);
    if (f.kind == FactorKind::z) {
      if (l.element.q != 0) throw PreconditionError("Z factor letter with a second coordinate");
      return pl_power(f.generators[0], l.element.p);
    }
    return pl_compose(pl_power(f.generators[0], l.element.p), pl_power(f.generators[1], l.element.q));
  }

 private:
  std::vector<Factor> factors_;
  int audit_radius_;
};

/// Germ order of a single PL map: the left germ at its critical point.
inline Sign germ_sign(const PLMap& m) {
  auto c = critical_point(m);
  return c ? germ_sign_left(m, *c) : Sign::zero;
}

/// Caching evaluator for word maps of one realization. Not thread-safe;
/// give each thread its own instance.
class Realizer {
 public:
  explicit Realizer(const Realization& r) : r_(&r) {}

  const Realization& realization() const { return *r_; }

  const PLMap& letter(const Letter& l) {
    auto it = letters_.find(l);
    if (it == letters_.end()) it = letters_.emplace(l, r_->letter_map(l)).first;
    return it->second;
  }

  PLMap word(const Word& w) {
    const auto& ls = w.letters();
    if (ls.empty()) return PLMap{};
    if (ls.size() == 1) return letter(ls[0]);
    if (ls.size() <= kCachedSyllables) {
      auto it = words_.find(w);
      if (it != words_.end()) return it->second;
    }
    const std::size_t half = ls.size() / 2;
    std::vector<Letter> left(ls.begin(), ls.begin() + static_cast<std::ptrdiff_t>(half));
    std::vector<Letter> right(ls.begin() + static_cast<std::ptrdiff_t>(half), ls.end());
    PLMap m = pl_compose(word(Word::from_letters(left)), word(Word::from_letters(right)));
    if (ls.size() <= kCachedSyllables) {
      if (words_.size() > kMaxCached) words_.clear();
      words_.emplace(w, m);
    }
    return m;
  }

  Sign sign(const Word& w) { return germ_sign(word(w)); }

 private:
  static constexpr std::size_t kCachedSyllables = 6;
  static constexpr std::size_t kMaxCached = 200000;

  const Realization* r_;
  std::map<Letter, PLMap> letters_;
  std::unordered_map<Word, PLMap, WordHash> words_;
};

/// Composition of the letter maps, the rightmost letter acting first.
inline PLMap realize_word(const Realization& r, const Word& w) {
  PLMap m;
  for (const Letter& l : w.letters()) m = pl_compose(m, r.letter_map(l));
  return m;
}

inline Sign realized_sign(const Realization& r, const Word& w) { return germ_sign(realize_word(r, w)); }

/// Sign declared by the factors for one-factor words, realized otherwise.
inline Sign declared_sign(Realizer& rz, const Word& w) {
  if (w.syllables() == 1) {
    const Letter& l = w.letters()[0];
    return factor_sign(rz.realization().factor(l.factor).kind, l.element);
  }
  return rz.sign(w);
}

// ---------------------------------------------------------------------------
// x-reduction

/// Maps a factor name to the side of a free product decomposition. Maximal
/// runs of letters on one side are the syllables x-reduction works with.
using SideFn = std::function<int(char)>;

inline SideFn per_factor_sides() {
  return [](char f) { return static_cast<int>(f); };
}

inline std::vector<Word> side_blocks(const Word& w, const SideFn& side) {
  std::vector<Word> blocks;
  std::vector<Letter> cur;
  int cur_side = 0;
  for (const Letter& l : w.letters()) {
    const int s = side(l.factor);
    if (!cur.empty() && s != cur_side) {
      blocks.push_back(Word::from_letters(cur));
      cur.clear();
    }
    cur_side = s;
    cur.push_back(l);
  }
  if (!cur.empty()) blocks.push_back(Word::from_letters(cur));
  return blocks;
}

/// Deletes every syllable whose critical point lies below the image of x
/// under the syllables acting before it, renormalizes, and repeats until
/// nothing is deleted.
inline Word x_reduce(Realizer& rz, const Word& w, const Rational& x, const SideFn& side = per_factor_sides()) {
  Word cur = w;
  for (;;) {
    std::vector<Word> blocks = side_blocks(cur, side);
    std::vector<bool> keep(blocks.size(), true);
    bool deleted = false;
    Rational p = x;
    for (std::size_t i = blocks.size(); i-- > 0;) {
      PLMap m = rz.word(blocks[i]);
      auto c = critical_point(m);
      if (!c || *c < p) {
        keep[i] = false;
        deleted = true;
        continue;
      }
      p = m.eval(p);
    }
    if (!deleted) return cur;
    Word next;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      if (keep[i]) next = next * blocks[i];
    }
    cur = next;
  }
}

inline Word x_reduce(const Realization& r, const Word& w, const Rational& x) {
  Realizer rz(r);
  return x_reduce(rz, w, x);
}

// ---------------------------------------------------------------------------
// Combination, conjugation, standard witnesses

inline Realization combine(const Realization& g, const Realization& h) {
  std::vector<Factor> fs = g.factors();
  fs.insert(fs.end(), h.factors().begin(), h.factors().end());
  return Realization(std::move(fs), std::max(g.audit_radius(), h.audit_radius()));
}

/// Every generator map m replaced by phi o m o phi^-1.
inline Realization conjugate_realization(const Realization& r, const PLMap& phi) {
  std::vector<Factor> fs = r.factors();
  for (Factor& f : fs) {
    for (PLMap& m : f.generators) m = pl_conjugate(m, phi);
  }
  return Realization(std::move(fs), r.audit_radius());
}

/// Generator pattern for Z at critical point c: identity on [c, inf), the
/// segment [c - 1, c] contracted towards c with slope 1 - step, and the left
/// translation x -> x + step. With c = 0 and step = 1/2 this is
/// x/2 on [-1, 0] and x + 1/2 below -1.
inline PLMap standard_z_map(const Rational& c, const Rational& step = Rational(1, 2)) {
  if (!(step > 0 && step < 1)) throw PreconditionError("step must lie in (0, 1)");
  Rational lo = c - 1;
  Rational lo_image = lo + step;
  return PLMap::from_points({{lo, lo_image}, {c, c}});
}

inline Realization standard_z(char name, const Rational& c, const Rational& step = Rational(1, 2),
                              int audit_radius = 3) {
  return Realization({Factor{name, FactorKind::z, {standard_z_map(c, step)}}}, audit_radius);
}

/// Z^2 with the lexicographic order. Below c_small both generators are
/// linear about c_small with slopes 1/3 (dominant) and 1/2 (subordinate);
/// multiplicative independence keeps every non-trivial element moving on
/// every interval there. On [c_small, c_big] only the dominant generator acts.
inline Realization standard_z2_lex(char name, const Rational& c_big, const Rational& c_small, int audit_radius = 3) {
  if (!(c_small < c_big)) throw PreconditionError("Z^2 realization needs c_small < c_big");
  Rational mid = midpoint(c_small, c_big);
  Rational mid_image = midpoint(mid, c_big);
  PLMap dominant = PLMap::from_points({{c_small, c_small}, {mid, mid_image}, {c_big, c_big}}, Rational(1, 3));
  PLMap subordinate = PLMap::from_points({{c_small, c_small}}, Rational(1, 2));
  return Realization({Factor{name, FactorKind::z2_lex, {dominant, subordinate}}}, audit_radius);
}

// ---------------------------------------------------------------------------
// Merging

struct MergeViolation {
  Word word;
  Rational point;
};

struct MergeReport {
  std::vector<MergeViolation> violations;
  int checked_radius = 0;

  bool merged() const { return violations.empty(); }
};

inline std::string format_merge_report(const MergeReport& rep) {
  std::string s;
  for (const MergeViolation& v : rep.violations) {
    s += "VIOLATION " + format_word(v.word) + " @ " + to_string(v.point) + "\n";
  }
  return s;
}

/// Critical points of the non-trivial elements of ball(radius) of `r`.
inline std::vector<Rational> critical_set(Realizer& rz, int radius) {
  std::vector<Word> gens = rz.realization().generator_words();
  std::vector<Rational> out;
  for (const Word& w : ball(std::span<const Word>(gens), radius)) {
    if (auto c = critical_point(rz.word(w))) out.push_back(*c);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// For every critical point x of a ball element of either side and every
/// x-reduced word f of the ball of the free product with f(x) = x, reports
/// (f, x) unless f lies in the side that owns x. Words are visited shortlex,
/// so a word comes after every word obtained from it by cancelling letters.
inline MergeReport check_merging(const Realization& g, const Realization& h, int radius) {
  MergeReport rep;
  rep.checked_radius = radius;
  if (radius <= 0) return rep;
  Realization both = combine(g, h);
  Realizer rg(g);
  Realizer rh(h);
  Realizer rb(both);
  const std::vector<Rational> tg = critical_set(rg, radius);
  const std::vector<Rational> th = critical_set(rh, radius);
  std::vector<Rational> points = tg;
  points.insert(points.end(), th.begin(), th.end());
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  const std::string gnames = g.factor_names();
  const std::string hnames = h.factor_names();
  SideFn side = [gnames](char f) { return gnames.find(f) != std::string::npos ? 0 : 1; };
  std::vector<Word> gens = both.generator_words();
  for (const Word& f : ball(std::span<const Word>(gens), radius)) {
    PLMap m = rb.word(f);
    const bool in_g = word_in_factors(f, gnames);
    const bool in_h = word_in_factors(f, hnames);
    for (const Rational& x : points) {
      if (m.eval(x) != x) continue;
      const bool x_in_g = std::binary_search(tg.begin(), tg.end(), x);
      const bool x_in_h = std::binary_search(th.begin(), th.end(), x);
      if ((x_in_g && in_g) || (x_in_h && in_h)) continue;
      if (x_reduce(rb, f, x, side) != f) continue;
      rep.violations.push_back({f, x});
    }
  }
  return rep;
}

struct MergeResult {
  Realization merged;  // the second realization after conjugation
  PLMap conjugator;
  int attempts = 0;
  MergeReport report;
};

using MergeAcceptFn = std::function<bool(const Realization&)>;

/// Conjugates `h` by phi with ||phi|| < eps until it merges with `g` at the
/// given radius (and `accept` approves it). Attempt 0 uses the identity.
inline MergeResult merge(const Realization& g, const Realization& h, const Rational& eps, int radius,
                         std::uint64_t seed, int max_attempts = 64, const MergeAcceptFn& accept = {}) {
  if (!(eps > 0)) throw PreconditionError("merge needs eps > 0");
  std::optional<Rational> lo;
  std::optional<Rational> hi;
  for (const Realization* r : {&g, &h}) {
    for (const Factor& f : r->factors()) {
      for (const PLMap& m : f.generators) {
        for (const PLPoint& p : m.points()) {
          if (!lo || p.x < *lo) lo = p.x;
          if (!hi || p.x > *hi) hi = p.x;
        }
      }
    }
  }
  Rational wlo = *lo - 1;
  Rational whi = *hi + 1;
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    PLMap phi = attempt == 0 ? PLMap{} : random_bump(eps, wlo, whi, rng);
    Realization moved = conjugate_realization(h, phi);
    if (accept && !accept(moved)) continue;
    MergeReport rep = check_merging(g, moved, radius);
    if (rep.merged()) return MergeResult{std::move(moved), std::move(phi), attempt + 1, std::move(rep)};
  }
  throw MergeFailed("no conjugator merged the realizations within " + std::to_string(max_attempts) + " attempts");
}

/// The reference free product Z * Z: a = standard_z('a', 0, 1/2) and b the
/// colliding standard_z('b', 0, 1/3) merged into it at eps = 1/10.
inline Realization standard_free_product(std::uint64_t seed = 1, int radius = 4) {
  Realization ga = standard_z('a', Rational(0), Rational(1, 2), radius);
  Realization hb = standard_z('b', Rational(0), Rational(1, 3), radius);
  return combine(ga, merge(ga, hb, Rational(1, 10), radius, seed).merged);
}

// ---------------------------------------------------------------------------
// Audits

/// Words declared positive whose map violates
/// sup{x : w(x) > x} > sup{x : w(x) < x}.
inline std::vector<Word> dynbi_violations(const Realization& r, int radius) {
  Realizer rz(r);
  std::vector<Word> gens = r.generator_words();
  std::vector<Word> bad;
  for (const Word& w : ball(std::span<const Word>(gens), radius)) {
    if (w.empty() || declared_sign(rz, w) != Sign::positive) continue;
    PLMap m = rz.word(w);
    auto up = sup_of_displacement(m, Sign::positive);
    auto down = sup_of_displacement(m, Sign::negative);
    if (!up || (down && !(*up > *down))) bad.push_back(w);
  }
  return bad;
}

inline bool check_dynbi(const Realization& r, int radius) { return dynbi_violations(r, radius).empty(); }

struct DynnolFailure {
  Word dominant;
  Word dominated;
  std::int64_t power = 0;
};

/// For ball pairs with r_f > r_h, checks sign(h^-n f) == sign(f) for |n| <= power_bound.
inline std::vector<DynnolFailure> dynnol_failures(const Realization& r, int radius, int power_bound) {
  Realizer rz(r);
  std::vector<Word> gens = r.generator_words();
  std::vector<Word> words = ball(std::span<const Word>(gens), radius);
  std::vector<PLMap> maps;
  std::vector<std::optional<Rational>> crit;
  for (const Word& w : words) {
    maps.push_back(rz.word(w));
    crit.push_back(critical_point(maps.back()));
  }
  std::vector<DynnolFailure> out;
  for (std::size_t hi = 0; hi < words.size(); ++hi) {
    std::vector<PLMap> inv_powers;  // h^-n for n = -bound..bound
    for (int n = -power_bound; n <= power_bound; ++n) inv_powers.push_back(pl_power(maps[hi], -n));
    for (std::size_t fi = 0; fi < words.size(); ++fi) {
      if (!crit[fi] || (crit[hi] && !(*crit[fi] > *crit[hi]))) continue;
      const Sign want = germ_sign(maps[fi]);
      for (int n = -power_bound; n <= power_bound; ++n) {
        const PLMap& p = inv_powers[static_cast<std::size_t>(n + power_bound)];
        if (germ_sign(pl_compose(p, maps[fi])) != want) out.push_back({words[fi], words[hi], n});
      }
    }
  }
  return out;
}

inline bool check_dynnol_proxy(const Realization& r, int radius, int power_bound) {
  return dynnol_failures(r, radius, power_bound).empty();
}

/// Non-trivial ball words whose map is the identity on some interval below
/// their critical point.
inline std::vector<Word> germ_faithfulness_violations(const Realization& r, int radius) {
  Realizer rz(r);
  std::vector<Word> gens = r.generator_words();
  std::vector<Word> bad;
  for (const Word& w : ball(std::span<const Word>(gens), radius)) {
    if (w.empty()) continue;
    PLMap m = rz.word(w);
    if (m.is_identity()) {
      bad.push_back(w);
      continue;
    }
    const auto& pts = m.points();
    bool flat = m.left_slope() == 1 && m.left_offset() == 0;
    for (std::size_t i = 1; i < pts.size() && !flat; ++i) {
      flat = pts[i - 1].x == pts[i - 1].y && pts[i].x == pts[i].y;
    }
    if (flat) bad.push_back(w);
  }
  return bad;
}

// ---------------------------------------------------------------------------
// Realization files: one `name = <PL map>` line per Z factor, `name.x` and
// `name.y` lines for the dominant and subordinate generators of a Z^2 factor,
// optional `audit N`, `#` comments.

inline std::string format_realization(const Realization& r) {
  std::string s = "audit " + std::to_string(r.audit_radius()) + "\n";
  for (const Factor& f : r.factors()) {
    if (f.kind == FactorKind::z) {
      s += std::string(1, f.name) + " = " + format_plmap(f.generators[0]) + "\n";
    } else {
      s += std::string(1, f.name) + ".x = " + format_plmap(f.generators[0]) + "\n";
      s += std::string(1, f.name) + ".y = " + format_plmap(f.generators[1]) + "\n";
    }
  }
  return s;
}

inline Realization parse_realization(std::string_view text) {
  int audit = 3;
  std::vector<Factor> factors;
  auto find = [&](char name) -> Factor* {
    for (Factor& f : factors) {
      if (f.name == name) return &f;
    }
    return nullptr;
  };
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string_view v = line;
    while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
    while (!v.empty() && (v.back() == ' ' || v.back() == '\t' || v.back() == '\r')) v.remove_suffix(1);
    if (v.empty()) continue;
    if (v.substr(0, 6) == "audit ") {
      try {
        audit = std::stoi(std::string(v.substr(6)));
      } catch (const std::exception&) {
        throw ParseError("bad audit radius line '" + std::string(v) + "'");
      }
      continue;
    }
    auto eq = v.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected '<name> = <map>' in '" + std::string(v) + "'");
    std::string_view name = v.substr(0, eq);
    while (!name.empty() && name.back() == ' ') name.remove_suffix(1);
    PLMap m = parse_plmap(v.substr(eq + 1));
    if (name.size() == 1) {
      if (find(name[0])) throw ParseError("factor defined twice");
      factors.push_back(Factor{name[0], FactorKind::z, {m}});
    } else if (name.size() == 3 && name[1] == '.' && (name[2] == 'x' || name[2] == 'y')) {
      Factor* f = find(name[0]);
      if (!f) {
        factors.push_back(Factor{name[0], FactorKind::z2_lex, {PLMap{}, PLMap{}}});
        f = &factors.back();
      }
      if (f->kind != FactorKind::z2_lex) throw ParseError("factor defined twice");
      f->generators[name[2] == 'x' ? 0 : 1] = m;
    } else {
      throw ParseError("bad generator name '" + std::string(name) + "'");
    }
  }
  try {
    return Realization(std::move(factors), audit);
  } catch (const PreconditionError& e) {
    throw ParseError(std::string("invalid realization: ") + e.what());
  }
}

}  // namespace biord
