#include <gtest/gtest.h>

#include <random>

#include "biord/nonisolation.hpp"

using namespace biord;

namespace {

Rational q(long n, long d = 1) { return make_rational(n, d); }
Word w(std::string_view s) { return parse_word(s); }

const Realization& base() {
  static const Realization r = standard_free_product();
  return r;
}

const NonIsoWitness& witness() {
  static const NonIsoWitness wit = [] {
    NonIsoInput in{base(), {w("a"), w("b"), w("ab")}};
    return nonisolation_witness(in);
  }();
  return wit;
}

// Substitutes tau g tau^-1 for every probe-factor letter directly on maps.
PLMap substituted_map(const Realization& r, const Word& f, char factor, const PLMap& tau) {
  Realizer rz(r);
  PLMap out;
  for (const Letter& l : f.letters()) {
    PLMap m = rz.letter(l);
    if (l.factor == factor) m = pl_conjugate(m, tau);
    out = pl_compose(out, m);
  }
  return out;
}

}  // namespace

TEST(SortedChain, OrdersAndValidates) {
  const OrderOracle o = realized_oracle(base());
  std::vector<Word> s = sorted_chain(o, {w("ab"), w("a"), w("b")});
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(compare(o, s[0], s[1]), Comparison::less);
  EXPECT_EQ(compare(o, s[1], s[2]), Comparison::less);
  EXPECT_THROW(sorted_chain(o, {w("a^-1")}), PreconditionError);
  EXPECT_THROW(sorted_chain(o, {w("a"), w("a")}), PreconditionError);
  EXPECT_THROW(sorted_chain(o, {}), PreconditionError);
}

TEST(Subwords, Examples) {
  std::vector<Word> s = subwords(w("a b^2"));
  EXPECT_EQ(s.size(), 6u);  // e, a, ab, ab^2, b, b^2
  EXPECT_NE(std::find(s.begin(), s.end(), w("a b")), s.end());
}

TEST(SmallestConjugate, IsMinimalOverSuffixes) {
  const OrderOracle o = realized_oracle(base());
  const std::vector<Word> chain = sorted_chain(o, {w("a"), w("b"), w("ab")});
  SmallestConjugate sc = smallest_conjugate(o, chain);
  EXPECT_EQ(sc.f0, conjugate(chain.front(), sc.u));
  for (const Word& fi : chain) {
    for (const Word& u : suffixes(fi)) EXPECT_NE(compare(o, conjugate(chain.front(), u), sc.f0), Comparison::less);
  }
  SmallestConjugate wide = smallest_conjugate(o, chain, true);
  EXPECT_NE(compare(o, sc.f0, wide.f0), Comparison::less);
}

TEST(FindPushWord, Examples) {
  Realizer rz(base());
  EXPECT_TRUE(find_push_word(rz, q(-5), q(-4), 0).empty());
  EXPECT_THROW(find_push_word(rz, q(-1, 4), q(-1), 0), NotFound);
  // Everything fixes [0, inf).
  EXPECT_THROW(find_push_word(rz, q(0), q(-1), 4), NotFound);
  Word p = find_push_word(rz, q(-1, 4), q(-1), 4);
  EXPECT_LT(rz.word(p).eval(q(-1, 4)), q(-1));
}

TEST(NormalizePush, Path) {
  Realizer rz(base());
  const Rational t1 = q(-1, 4);
  const Rational t0 = q(-3, 2);
  Word raw = find_push_word(rz, t1, t0, 4);
  // Padding with letters that do not help must be removed.
  PushPath p = normalize_push(rz, raw * w("a^-1"), t1, t0);
  ASSERT_FALSE(p.points.empty());
  EXPECT_LT(p.points.back(), t0);
  Rational prev = t1;
  for (std::size_t i = 0; i < p.points.size(); ++i) {
    EXPECT_LT(p.points[i], prev);
    if (i + 1 < p.points.size()) EXPECT_GE(p.points[i], t0);
    EXPECT_EQ(rz.letter(p.letters[i]).eval(prev), p.points[i]);
    prev = p.points[i];
  }
  EXPECT_EQ(rz.word(p.word()).eval(t1), p.points.back());
  EXPECT_THROW(normalize_push(rz, Word{}, t1, t0), NotFound);
}

TEST(MovingIntervals, Examples) {
  const PLMap g0 = PLMap::from_points({{q(-1), q(-1, 2)}, {q(0), q(0)}});
  auto iv = moving_intervals(g0);
  ASSERT_EQ(iv.size(), 1u);
  EXPECT_FALSE(iv[0].first.has_value());
  EXPECT_EQ(iv[0].second, q(0));
  EXPECT_TRUE(moving_intervals(PLMap{}).empty());
  // A bump on (-2, -1) and another on (-1, 0).
  const PLMap two = PLMap::from_points({{q(-2), q(-2)}, {q(-3, 2), q(-5, 4)}, {q(-1), q(-1)}, {q(-1, 2), q(-3, 4)},
                                        {q(0), q(0)}});
  iv = moving_intervals(two);
  ASSERT_EQ(iv.size(), 2u);
  EXPECT_EQ(iv[0].first, q(-2));
  EXPECT_EQ(iv[0].second, q(-1));
  EXPECT_EQ(iv[1].first, q(-1));
  EXPECT_EQ(iv[1].second, q(0));
}

TEST(MovingIntervals, PointsInsideMoveAndOutsideStay) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 50; ++i) {
    PLMap m = random_bump(q(1, 2), q(-4), q(0), rng);
    m = pl_compose(m, random_bump(q(1, 2), q(-3), q(1), rng));
    auto iv = moving_intervals(m);
    for (int k = 0; k < 40; ++k) {
      Rational x = make_rational(static_cast<long>(rng() % 200) - 180, 32);
      bool inside = false;
      for (const auto& [lo, hi] : iv) inside = inside || ((!lo || *lo < x) && x < hi);
      EXPECT_EQ(m.eval(x) != x, inside) << to_string(x);
    }
  }
}

TEST(ChooseProbe, Postcondition) {
  Realizer rz(base());
  for (const Rational& bound : {q(0), q(-1, 3), q(-5, 2)}) {
    Probe p = choose_probe(rz, 'b', bound);
    EXPECT_LT(p.t3, p.t2);
    EXPECT_LT(p.t2, bound);
    EXPECT_EQ(rz.word(p.g).eval(p.t2), p.t3);
    EXPECT_EQ(p.g.letters().front().factor, 'b');
  }
  Realization bump({Factor{'b', FactorKind::z, {PLMap::from_points({{q(-2), q(-2)}, {q(-1), q(-1, 2)}, {q(0), q(0)}})}}});
  Realizer rb(bump);
  EXPECT_THROW(choose_probe(rb, 'b', q(-2)), NoMovement);
  EXPECT_THROW(choose_probe(rb, 'z', q(0)), PreconditionError);
}

TEST(TauPair, FixedAboveTPrime) {
  const NonIsoWitness& wit = witness();
  for (const PLMap* t : {&wit.taus.tau1, &wit.taus.tau2}) {
    EXPECT_TRUE(pl_agree_on_right(*t, PLMap{}, wit.t_prime));
    EXPECT_EQ(t->eval(wit.probe.t2), wit.path.points.back());
  }
  EXPECT_EQ(wit.taus.tau1.eval(wit.probe.t3), wit.tm1);
  EXPECT_EQ(wit.taus.tau2.eval(wit.probe.t3), wit.tm3);
}

TEST(AdjustedWord, Examples) {
  EXPECT_EQ(adjusted_word(w("a b^2 a"), 'b', 't'), w("a t b^2 t^-1 a"));
  EXPECT_EQ(adjusted_word(w("a^3"), 'b', 't'), w("a^3"));
  EXPECT_EQ(adjusted_word(Word{}, 'b', 't'), Word{});
  // Only letters of the other factor: untouched.
  for (const Word& x : ball("a", 3)) EXPECT_EQ(adjusted_word(x, 'b', 't'), x);
}

TEST(AdjustedWord, IsAHomomorphism) {
  const auto words = ball("ab", 2);
  for (const Word& u : words) {
    for (const Word& v : words) {
      EXPECT_EQ(adjusted_word(u * v, 'b', 't'), adjusted_word(u, 'b', 't') * adjusted_word(v, 'b', 't'));
    }
  }
}

TEST(AdjustedOrder, RealizesSubstitution) {
  const NonIsoWitness& wit = witness();
  const AdjustedOrder& ad = *wit.adjusted1;
  Realizer rz(ad.merged);
  std::mt19937_64 rng(5);
  const auto words = ball("ab", 4);
  for (int i = 0; i < 30; ++i) {
    const Word& f = words[rng() % words.size()];
    EXPECT_EQ(rz.word(adjusted_word(f, 'b', ad.tau_name)), substituted_map(base(), f, 'b', ad.tau_prime))
        << format_word(f);
  }
}

TEST(Witness, EndToEnd) {
  const NonIsoWitness& wit = witness();
  EXPECT_TRUE(wit.ok());
  EXPECT_TRUE(wit.tau1_exact);
  EXPECT_TRUE(wit.tau2_exact);
  EXPECT_TRUE(wit.tau1_after_merge);
  EXPECT_TRUE(wit.tau2_after_merge);
  EXPECT_TRUE(wit.chain_positive1);
  EXPECT_TRUE(wit.chain_positive2);
  EXPECT_TRUE(wit.critical_points_stable);
  EXPECT_EQ(wit.verdict1, Comparison::greater);
  EXPECT_EQ(wit.verdict2, Comparison::less);
  EXPECT_TRUE(wit.biinv1.ok());
  EXPECT_TRUE(wit.biinv2.ok());
  EXPECT_LT(wit.tm2, wit.tm1);
  EXPECT_LT(wit.tm3, wit.tm2);
  EXPECT_LT(wit.t_prime, wit.t0);
  EXPECT_LT(wit.path.points.back(), wit.t_prime);
}

TEST(Witness, OrdersDisagreeOnTheQuotient) {
  const NonIsoWitness& wit = witness();
  const Word quotient = invert(wit.w_minus) * wit.w_plus;
  EXPECT_EQ(wit.order1().sign(quotient), Sign::positive);
  EXPECT_EQ(wit.order2().sign(quotient), Sign::negative);
}

TEST(Witness, Deterministic) {
  NonIsoInput in{base(), {w("a"), w("b"), w("ab")}};
  NonIsoWitness again = nonisolation_witness(in);
  EXPECT_EQ(again.w_plus, witness().w_plus);
  EXPECT_EQ(again.w_minus, witness().w_minus);
  EXPECT_EQ(again.adjusted1->tau_prime, witness().adjusted1->tau_prime);
}

TEST(Witness, RejectsNonPositiveChain) {
  NonIsoInput in{base(), {w("a^-1"), w("b")}};
  EXPECT_THROW(nonisolation_witness(in), PreconditionError);
}

TEST(Witness, SingleFactorRealization) {
  NonIsoInput in{standard_z('a', q(0)), {w("a")}};
  EXPECT_THROW(nonisolation_witness(in), Error);
}
