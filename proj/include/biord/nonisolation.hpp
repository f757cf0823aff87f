#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "biord/errors.hpp"
#include "biord/oracle.hpp"
#include "biord/pl_map.hpp"
#include "biord/realization.hpp"
#include "biord/word.hpp"

namespace biord {

struct NonIsoInput {
  Realization realization;
  std::vector<Word> chain;
  int search_radius = 4;
  int audit_radius = 2;
  std::uint64_t seed = 7;
  int merge_radius = 3;
  bool all_subwords = false;  // minimize f0 over all contiguous subwords, not just suffixes
};

/// Rejects non-positive or repeated elements and returns the chain sorted
/// increasingly in the realized order.
inline std::vector<Word> sorted_chain(const OrderOracle& order, std::vector<Word> chain) {
  if (chain.empty()) throw PreconditionError("the chain must not be empty");
  for (const Word& f : chain) {
    if (order.sign(f) != Sign::positive) throw PreconditionError("chain element " + format_word(f) + " is not positive");
  }
  std::sort(chain.begin(), chain.end(),
            [&](const Word& u, const Word& v) { return compare(order, u, v) == Comparison::less; });
  for (std::size_t i = 1; i < chain.size(); ++i) {
    if (chain[i - 1] == chain[i]) throw PreconditionError("chain element " + format_word(chain[i]) + " repeated");
  }
  return chain;
}

/// Contiguous subwords of `w` with syllables split into unit steps.
inline std::vector<Word> subwords(const Word& w) {
  std::vector<Letter> units;
  for (const Letter& l : w.letters()) {
    const std::int64_t dp = l.element.p > 0 ? 1 : -1;
    for (std::int64_t i = 0; i < (l.element.p < 0 ? -l.element.p : l.element.p); ++i) units.push_back({l.factor, {dp, 0}});
    const std::int64_t dq = l.element.q > 0 ? 1 : -1;
    for (std::int64_t i = 0; i < (l.element.q < 0 ? -l.element.q : l.element.q); ++i) units.push_back({l.factor, {0, dq}});
  }
  std::vector<Word> out{Word{}};
  for (std::size_t i = 0; i < units.size(); ++i) {
    for (std::size_t j = i + 1; j <= units.size(); ++j) {
      Word s = Word::from_letters(std::span<const Letter>(units.data() + i, j - i));
      if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
  }
  return out;
}

struct SmallestConjugate {
  Word f0;
  Word u;  // f0 = conjugate(f1, u)
};

/// Least f1^u over the suffixes u of the chain elements.
inline SmallestConjugate smallest_conjugate(const OrderOracle& order, const std::vector<Word>& chain,
                                            bool all_subwords = false) {
  if (chain.empty()) throw PreconditionError("the chain must not be empty");
  const Word& f1 = chain.front();
  SmallestConjugate best{f1, Word{}};
  for (const Word& fi : chain) {
    for (const Word& u : all_subwords ? subwords(fi) : suffixes(fi)) {
      Word c = conjugate(f1, u);
      if (compare(order, c, best.f0) == Comparison::less) best = {c, u};
    }
  }
  return best;
}

inline Rational critical_or_throw(const PLMap& m, const std::string& what) {
  auto c = critical_point(m);
  if (!c) throw PreconditionError(what + " acts trivially");
  return *c;
}

/// First ball word (shortlex) moving the critical point t1 below t0.
inline Word find_push_word(Realizer& rz, const Rational& t1, const Rational& t0, int search_radius) {
  std::vector<Word> gens = rz.realization().generator_words();
  for (const Word& w : ball(std::span<const Word>(gens), search_radius)) {
    if (rz.word(w).eval(t1) < t0) return w;
  }
  throw NotFound("no word of length <= " + std::to_string(search_radius) + " moves " + to_string(t1) + " below " +
                 to_string(t0));
}

/// f' = f'_m ... f'_1 with strictly decreasing points t'_k = f'_k(t'_{k-1}),
/// t'_0 = t1, and t'_m the first point below t0.
struct PushPath {
  std::vector<Letter> letters;  // f'_1, ..., f'_m in acting order
  std::vector<Rational> points;  // t'_1, ..., t'_m

  Word word() const {
    std::vector<Letter> written(letters.rbegin(), letters.rend());
    return Word::from_letters(written);
  }
};

/// Deletes letters that do not move the running point down, drops the tail
/// after the first point below t0, and renormalizes until stable.
inline PushPath normalize_push(Realizer& rz, const Word& fprime, const Rational& t1, const Rational& t0) {
  Word cur = fprime;
  for (;;) {
    PushPath path;
    bool changed = false;
    Rational p = t1;
    const auto& ls = cur.letters();
    for (std::size_t i = ls.size(); i-- > 0;) {
      Rational q = rz.letter(ls[i]).eval(p);
      if (q >= p) {
        changed = true;
        continue;
      }
      path.letters.push_back(ls[i]);
      path.points.push_back(q);
      p = q;
      if (q < t0) {
        changed = changed || i > 0;
        break;
      }
    }
    Word next = path.word();
    if (!changed && next == cur) {
      if (path.points.empty() || !(path.points.back() < t0)) {
        throw NotFound("push word " + format_word(fprime) + " does not reach below " + to_string(t0));
      }
      return path;
    }
    cur = next;
  }
}

struct Probe {
  Word g;
  Rational t2;  // t''
  Rational t3;  // t''' = g(t'')
};

/// Maximal open intervals where m(x) != x, as (lo, hi) with lo = nullopt
/// for -infinity. The right tail is the identity, so hi is always finite.
inline std::vector<std::pair<std::optional<Rational>, Rational>> moving_intervals(const PLMap& m) {
  const auto& pts = m.points();
  if (pts.empty()) return {};
  std::vector<Rational> cuts;
  for (const PLPoint& p : pts) cuts.push_back(p.x);
  auto disp = [](const PLPoint& p) { return Rational(p.y - p.x); };
  const Rational d0 = disp(pts.front());
  if (m.left_slope() != 1) {
    Rational root = pts.front().x - d0 / (m.left_slope() - 1);
    if (root < pts.front().x) cuts.push_back(root);
  }
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const Rational da = disp(pts[i - 1]);
    const Rational db = disp(pts[i]);
    if (sgn(da) * sgn(db) < 0) cuts.push_back(pts[i - 1].x + da * (pts[i].x - pts[i - 1].x) / (da - db));
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto moves = [&](const Rational& x) { return m.eval(x) != x; };
  std::vector<std::pair<std::optional<Rational>, Rational>> out;
  auto push = [&](std::optional<Rational> lo, const Rational& hi) {
    if (!out.empty() && lo && out.back().second == *lo && moves(*lo)) {
      out.back().second = hi;
    } else {
      out.emplace_back(std::move(lo), hi);
    }
  };
  if (moves(cuts.front() - 1)) push(std::nullopt, cuts.front());
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    if (moves(midpoint(cuts[i - 1], cuts[i]))) push(cuts[i - 1], cuts[i]);
  }
  return out;
}

/// A generator g of `factor` (or its inverse) and t''' = g(t'') < t'' < bound,
/// with t'' in the rightmost interval below `bound` moved by g.
inline Probe choose_probe(Realizer& rz, char factor, const Rational& bound) {
  const Realization& r = rz.realization();
  Word g;
  for (const Word& w : r.generator_words()) {
    if (w.letters().front().factor == factor) {
      g = w;
      break;
    }
  }
  if (g.empty()) throw PreconditionError(std::string("no factor named '") + factor + "'");
  const PLMap m = rz.word(g);
  std::optional<std::pair<std::optional<Rational>, Rational>> best;
  for (const auto& iv : moving_intervals(m)) {
    if (iv.first && *iv.first >= bound) continue;
    Rational hi = std::min(iv.second, bound);
    best = std::make_pair(iv.first, hi);
  }
  if (!best) throw NoMovement("generator " + format_word(g) + " fixes everything below " + to_string(bound));
  const Rational& hi = best->second;
  Rational lo = hi - 1;
  if (best->first && *best->first > lo) lo = *best->first;
  Rational t2 = midpoint(lo, hi);
  Rational image = m.eval(t2);
  if (image > t2) {
    g = invert(g);
    image = m.eval_inverse(t2);
  }
  return Probe{g, t2, image};
}

struct TauPair {
  PLMap tau1;
  PLMap tau2;
};

/// tau_i sends t'' to t'_m and t''' to t'_{m+1} (i = 1) or t'_{m+3} (i = 2),
/// and fixes [t', inf).
inline TauPair build_tau_pair(const Rational& tp, const Rational& t2, const Rational& t3, const Rational& tm,
                              const Rational& tm1, const Rational& tm3) {
  return TauPair{make_tau(tp, t2, t3, tm, tm1), make_tau(tp, t2, t3, tm, tm3)};
}

/// tau g tau^-1 evaluated at x.
inline Rational conjugated_value(const PLMap& tau, const PLMap& g, const Rational& x) {
  return tau.eval(g.eval(tau.eval_inverse(x)));
}

/// The word (f)_i: every letter of `factor` replaced by t l t^-1.
inline Word adjusted_word(const Word& f, char factor, char tau_name) {
  Word out;
  const Word t = Word::gen(tau_name);
  const Word ti = Word::gen(tau_name, -1);
  for (const Letter& l : f.letters()) {
    Word lw = Word::from_letters({l});
    out = out * (l.factor == factor ? t * lw * ti : lw);
  }
  return out;
}

struct AdjustedOrder {
  OrderOracle order;
  Realization merged;  // the input factors plus the perturbed tau factor
  PLMap tau_prime;
  Rational eps;
  int attempts = 0;
  char tau_name = 't';
};

inline char free_factor_name(const Realization& r) {
  for (char c = 't'; c <= 'z'; ++c) {
    if (!r.has_factor(c)) return c;
  }
  for (char c = 'a'; c < 't'; ++c) {
    if (c != 'e' && !r.has_factor(c)) return c;
  }
  throw PreconditionError("no free factor name left");
}

/// Merges the Z realization generated by tau with `base` and orders F by
/// f > 1 iff the realized (f)_i is positive. `keep` must hold for the
/// perturbed tau' as well; eps starts at `eps` and halves after each failed
/// merge, up to `halvings` times.
inline AdjustedOrder adjusted_order(const Realization& base, char factor, const PLMap& tau, const Rational& eps,
                                    int merge_radius, std::uint64_t seed, const std::function<bool(const PLMap&)>& keep,
                                    std::string name, int halvings = 6) {
  const char tname = free_factor_name(base);
  const Realization rt({Factor{tname, FactorKind::z, {tau}}}, merge_radius);
  Rational e = eps;
  for (int h = 0; h <= halvings; ++h, e /= 2) {
    try {
      MergeResult res = merge(base, rt, e, merge_radius, seed + static_cast<std::uint64_t>(h), 64,
                              [&](const Realization& moved) { return keep(moved.factor(tname).generators[0]); });
      PLMap tp = res.merged.factor(tname).generators[0];
      Realization all = combine(base, res.merged);
      auto state = std::make_shared<std::pair<Realization, std::unique_ptr<Realizer>>>(all, nullptr);
      state->second = std::make_unique<Realizer>(state->first);
      OrderOracle order(std::move(name), Provenance::realized, base.generator_words(),
                        [state, factor, tname](const Word& w) {
                          return state->second->sign(adjusted_word(w, factor, tname));
                        });
      return AdjustedOrder{std::move(order), std::move(all), std::move(tp), e, res.attempts, tname};
    } catch (const MergeFailed&) {
    }
  }
  throw MergeFailed("tau realization did not merge with the base realization down to eps = " + to_string(e));
}

struct NonIsoWitness {
  std::vector<Word> chain;  // sorted
  Word f0;
  Word u_star;
  Word fprime;  // normalized push word
  PushPath path;
  Probe probe;
  Rational t0;
  Rational t1;
  Rational t_prime;
  Rational tm1;  // t'_{m+1}
  Rational tm2;
  Rational tm3;
  TauPair taus;
  std::optional<AdjustedOrder> adjusted1;
  std::optional<AdjustedOrder> adjusted2;
  Word w_plus;
  Word w_minus;

  // Re-verified facts.
  bool tau1_exact = false;  // tau1 g tau1^-1 (t'_m) == t'_{m+1}
  bool tau2_exact = false;
  bool tau1_after_merge = false;  // tau1' g tau1'^-1 (t'_m) > t'_{m+2}
  bool tau2_after_merge = false;  // tau2' g tau2'^-1 (t'_m) < t'_{m+2}
  bool chain_positive1 = false;
  bool chain_positive2 = false;
  bool critical_points_stable = false;
  Comparison verdict1 = Comparison::equal;  // compare(order1, w_plus, w_minus)
  Comparison verdict2 = Comparison::equal;
  BiinvReport biinv1;
  BiinvReport biinv2;
  std::size_t differs1 = 0;  // ball words signed differently from the base order
  std::size_t differs2 = 0;
  std::size_t differs12 = 0;

  const OrderOracle& order1() const { return adjusted1->order; }
  const OrderOracle& order2() const { return adjusted2->order; }

  bool ok() const {
    return tau1_exact && tau2_exact && tau1_after_merge && tau2_after_merge && chain_positive1 && chain_positive2 &&
           critical_points_stable && verdict1 == Comparison::greater && verdict2 == Comparison::less && biinv1.ok() &&
           biinv2.ok();
  }
};

/// Two bi-orders on the realized free product, both positive on the chain,
/// which disagree on an explicit pair of conjugates of f1.
inline NonIsoWitness nonisolation_witness(const NonIsoInput& in) {
  const Realization& rf = in.realization;
  Realizer rz(rf);
  const OrderOracle base = realized_oracle(rf);
  NonIsoWitness out;
  out.chain = sorted_chain(base, in.chain);
  const Word& f1 = out.chain.front();

  SmallestConjugate sc = smallest_conjugate(base, out.chain, in.all_subwords);
  out.f0 = sc.f0;
  out.u_star = sc.u;
  out.t1 = critical_or_throw(rz.word(f1), "f1");
  out.t0 = critical_or_throw(rz.word(out.f0), "f0");

  Word raw = find_push_word(rz, out.t1, out.t0, in.search_radius);
  out.path = normalize_push(rz, raw, out.t1, out.t0);
  out.fprime = out.path.word();
  const Letter last = out.path.letters.back();
  const Rational tm = out.path.points.back();
  const PLMap fm = rz.letter(last);
  out.tm1 = fm.eval(tm);
  out.tm2 = fm.eval(out.tm1);
  out.tm3 = fm.eval(out.tm2);
  if (!(out.tm1 < tm)) throw PreconditionError("the last push letter does not move t'_m down");

  char probe_factor = 0;
  for (const Factor& f : rf.factors()) {
    if (f.name != last.factor) {
      probe_factor = f.name;
      break;
    }
  }
  if (!probe_factor) throw PreconditionError("the realization needs a second factor");
  out.probe = choose_probe(rz, probe_factor, tm);
  out.t_prime = midpoint(tm, out.t0);
  out.taus = build_tau_pair(out.t_prime, out.probe.t2, out.probe.t3, tm, out.tm1, out.tm3);

  const PLMap g = rz.word(out.probe.g);
  const Rational v1 = conjugated_value(out.taus.tau1, g, tm);
  const Rational v2 = conjugated_value(out.taus.tau2, g, tm);
  out.tau1_exact = v1 == out.tm1 && out.tm1 > out.tm2;
  out.tau2_exact = v2 == out.tm3 && out.tm3 < out.tm2;

  const Rational t0 = out.t0;
  const Rational tm2 = out.tm2;
  auto keeps = [&](bool above) {
    return [g, tm, tm2, t0, above](const PLMap& tp) {
      auto c = critical_point(tp);
      if (!c || !(*c < t0)) return false;
      const Rational v = conjugated_value(tp, g, tm);
      return above ? v > tm2 : v < tm2;
    };
  };
  auto start_eps = [&](const Rational& v) {
    Rational gap = v > tm2 ? Rational(v - tm2) : Rational(tm2 - v);
    gap = std::min(gap, Rational(t0 - out.t_prime));
    return std::min(Rational(1, 10), Rational(gap / 2));
  };
  out.adjusted1 = adjusted_order(rf, probe_factor, out.taus.tau1, start_eps(v1), in.merge_radius, in.seed,
                                 keeps(true), "adjusted-1");
  out.adjusted2 = adjusted_order(rf, probe_factor, out.taus.tau2, start_eps(v2), in.merge_radius, in.seed + 1000,
                                 keeps(false), "adjusted-2");
  out.tau1_after_merge = keeps(true)(out.adjusted1->tau_prime);
  out.tau2_after_merge = keeps(false)(out.adjusted2->tau_prime);

  out.w_plus = conjugate(f1, out.probe.g * out.fprime);
  out.w_minus = conjugate(f1, Word::from_letters({last}) * Word::from_letters({last}) * out.fprime);

  const OrderOracle& o1 = out.order1();
  const OrderOracle& o2 = out.order2();
  auto all_positive = [&](const OrderOracle& o) {
    return std::all_of(out.chain.begin(), out.chain.end(), [&](const Word& f) { return o.sign(f) == Sign::positive; });
  };
  out.chain_positive1 = all_positive(o1);
  out.chain_positive2 = all_positive(o2);

  out.critical_points_stable = true;
  for (const AdjustedOrder* ad : {&*out.adjusted1, &*out.adjusted2}) {
    Realizer ra(ad->merged);
    for (const Word& f : out.chain) {
      if (critical_point(ra.word(adjusted_word(f, probe_factor, ad->tau_name))) != critical_point(rz.word(f))) {
        out.critical_points_stable = false;
      }
    }
  }

  out.verdict1 = compare(o1, out.w_plus, out.w_minus);
  out.verdict2 = compare(o2, out.w_plus, out.w_minus);
  out.biinv1 = check_biinvariance(o1, in.audit_radius);
  out.biinv2 = check_biinvariance(o2, in.audit_radius);

  std::vector<Word> gens = rf.generator_words();
  for (const Word& w : ball(std::span<const Word>(gens), 3)) {
    const Sign s0 = base.sign(w);
    const Sign s1 = o1.sign(w);
    const Sign s2 = o2.sign(w);
    out.differs1 += s1 != s0;
    out.differs2 += s2 != s0;
    out.differs12 += s1 != s2;
  }
  return out;
}

}  // namespace biord
