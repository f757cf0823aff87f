#include <gtest/gtest.h>

#include <random>

#include "biord/pl_map.hpp"

using namespace biord;

namespace {

Rational q(long n, long d = 1) { return make_rational(n, d); }

// g0: identity on [0, inf), x/2 on [-1, 0], x + 1/2 below -1.
PLMap g0() { return PLMap::from_points({{q(-1), q(-1, 2)}, {q(0), q(0)}}); }

PLMap tau_example() { return make_tau(q(0), q(-2), q(-4), q(-1), q(-3)); }

Rational random_rational(std::mt19937_64& rng, long lo, long hi, long den = 16) {
  long span = (hi - lo) * den;
  return q(lo * den + static_cast<long>(rng() % static_cast<std::uint64_t>(span + 1)), den);
}

// Random increasing map with identity right tail and a random left slope.
PLMap random_map(std::mt19937_64& rng, bool unit_slope = false) {
  for (;;) {
    int k = 1 + static_cast<int>(rng() % 4);
    std::vector<PLPoint> pts;
    Rational x = random_rational(rng, -6, -2);
    Rational y = x + random_rational(rng, -1, 1);
    for (int i = 0; i < k; ++i) {
      pts.push_back({x, y});
      x += q(1 + static_cast<long>(rng() % 8), 4);
      y += q(1 + static_cast<long>(rng() % 8), 4);
    }
    pts.push_back({x, x});
    bool ok = true;
    for (std::size_t i = 1; i < pts.size(); ++i) ok = ok && pts[i - 1].y < pts[i].y;
    if (!ok) continue;
    Rational slope = unit_slope ? q(1) : q(1 + static_cast<long>(rng() % 6), 3);
    return PLMap::from_points(pts, slope);
  }
}

}  // namespace

TEST(PLEval, Examples) {
  EXPECT_EQ(PLMap{}.eval(q(7, 3)), q(7, 3));
  EXPECT_EQ(tau_example().eval(q(-2)), q(-1));
  EXPECT_EQ(tau_example().eval(q(-4)), q(-3));
  EXPECT_EQ(g0().eval(q(-1, 2)), q(-1, 4));
  EXPECT_EQ(g0().eval(q(-3)), q(-5, 2));
  EXPECT_EQ(g0().eval(q(5)), q(5));
}

TEST(PLMapConstruction, Validation) {
  EXPECT_THROW(PLMap::from_points({{q(0), q(1)}, {q(0), q(2)}}), PreconditionError);
  EXPECT_THROW(PLMap::from_points({{q(0), q(2)}, {q(1), q(1)}}), PreconditionError);
  EXPECT_THROW(PLMap::from_points({{q(0), q(0)}}, q(0)), PreconditionError);
}

TEST(PLMapConstruction, Canonical) {
  PLMap m = PLMap::from_points({{q(-3), q(-5, 2)}, {q(-1), q(-1, 2)}, {q(0), q(0)}, {q(2), q(2)}});
  EXPECT_EQ(m, g0());
  EXPECT_EQ(m.points().size(), 2u);
  EXPECT_TRUE(PLMap::from_points({{q(1), q(1)}}).is_identity());
}

TEST(PLCompose, InverseAndIdentity) {
  EXPECT_TRUE(pl_compose(g0(), pl_invert(g0())).is_identity());
  EXPECT_EQ(pl_compose(PLMap{}, g0()), g0());
  EXPECT_EQ(pl_compose(g0(), PLMap{}), g0());
}

TEST(PLCompose, MatchesNestedEvaluation) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    PLMap f = random_map(rng);
    PLMap g = random_map(rng);
    PLMap fg = pl_compose(f, g);
    for (int j = 0; j < 10; ++j) {
      Rational x = random_rational(rng, -10, 4, 7);
      ASSERT_EQ(fg.eval(x), f.eval(g.eval(x)));
    }
  }
}

TEST(PLCompose, Associative) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    PLMap f = random_map(rng), g = random_map(rng), h = random_map(rng);
    EXPECT_EQ(pl_compose(pl_compose(f, g), h), pl_compose(f, pl_compose(g, h)));
  }
}

TEST(PLInvert, Examples) {
  EXPECT_TRUE(pl_invert(PLMap{}).is_identity());
  EXPECT_EQ(pl_invert(tau_example()).eval(q(-1)), q(-2));
  EXPECT_EQ(pl_invert(pl_invert(g0())), g0());
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    PLMap f = random_map(rng);
    EXPECT_TRUE(pl_compose(f, pl_invert(f)).is_identity());
    Rational x = random_rational(rng, -10, 4, 5);
    EXPECT_EQ(f.eval_inverse(f.eval(x)), x);
  }
}

TEST(PLPower, MatchesRepeatedComposition) {
  PLMap acc;
  for (int n = 0; n <= 5; ++n) {
    EXPECT_EQ(pl_power(g0(), n), acc);
    EXPECT_EQ(pl_power(g0(), -n), pl_invert(acc));
    acc = pl_compose(acc, g0());
  }
}

TEST(CriticalPoint, Examples) {
  EXPECT_EQ(critical_point(PLMap{}), std::nullopt);
  EXPECT_EQ(critical_point(g0()), q(0));
  EXPECT_EQ(critical_point(tau_example()), q(0));
}

TEST(CriticalPoint, ConjugationMovesIt) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 50; ++i) {
    PLMap g = random_map(rng);
    PLMap h = random_map(rng);
    if (g.is_identity()) continue;
    EXPECT_EQ(critical_point(pl_conjugate(g, h)), h.eval(*critical_point(g)))
        << format_plmap(g) << " | " << format_plmap(h);
  }
}

TEST(GermSign, Examples) {
  EXPECT_EQ(germ_sign_left(PLMap{}, q(0)), Sign::zero);
  EXPECT_EQ(germ_sign_left(g0(), q(0)), Sign::positive);
  EXPECT_EQ(germ_sign_left(pl_invert(g0()), q(0)), Sign::negative);
  EXPECT_EQ(germ_sign_left(g0(), q(-2)), Sign::positive);
}

TEST(PLNorm, Examples) {
  EXPECT_EQ(pl_norm(PLMap{}), q(0));
  EXPECT_EQ(pl_norm(g0()), q(1, 2));
  EXPECT_EQ(pl_norm(tau_example()), q(1));
  EXPECT_EQ(pl_norm(PLMap::from_points({{q(0), q(0)}}, q(2))), std::nullopt);
}

TEST(PLNorm, TriangleInequality) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    PLMap f = random_map(rng, true);
    PLMap g = random_map(rng, true);
    EXPECT_LE(*pl_norm(pl_compose(f, g)), *pl_norm(f) + *pl_norm(g));
  }
}

TEST(Monotone, ConstructedMaps) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    PLMap f = pl_compose(random_map(rng), pl_invert(random_map(rng)));
    Rational prev_x = q(-20);
    Rational prev_y = f.eval(prev_x);
    for (int j = 0; j < 30; ++j) {
      Rational x = prev_x + random_rational(rng, 0, 1, 9) + q(1, 100);
      Rational y = f.eval(x);
      EXPECT_LT(prev_y, y);
      prev_x = x;
      prev_y = y;
    }
  }
}

TEST(MakeTau, Examples) {
  PLMap t = tau_example();
  EXPECT_EQ(t.eval(q(-2)), q(-1));
  EXPECT_EQ(t.eval(q(-4)), q(-3));
  EXPECT_EQ(t.eval(q(1)), q(1));
  // Middle slope (t' - u) / (t' - t'') = 1/2.
  EXPECT_EQ(t.eval(q(-1)) - t.eval(q(-2)), q(1, 2));
  EXPECT_THROW(make_tau(q(0), q(0), q(-4), q(-1), q(-3)), InvalidTau);
  EXPECT_THROW(make_tau(q(0), q(-2), q(-1), q(-1), q(-3)), InvalidTau);
  EXPECT_THROW(make_tau(q(0), q(-2), q(-4), q(-3), q(-1)), InvalidTau);
  EXPECT_THROW(make_tau(q(0), q(-2), q(-4), q(1), q(-3)), InvalidTau);
}

TEST(Perturb, NormBelowEps) {
  const Rational eps = q(1, 10);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    PLMap f = perturb(g0(), eps, seed);
    EXPECT_LT(*pl_norm(pl_compose(f, pl_invert(g0()))), eps);
  }
  EXPECT_LT(*pl_norm(perturb(PLMap{}, eps, 1)), eps);
}

TEST(Perturb, Deterministic) {
  EXPECT_EQ(perturb(g0(), q(1, 10), 42), perturb(g0(), q(1, 10), 42));
  EXPECT_NE(perturb(g0(), q(1, 10), 42), perturb(g0(), q(1, 10), 43));
}

TEST(SupOfDisplacement, G0) {
  EXPECT_EQ(sup_of_displacement(g0(), Sign::positive), q(0));
  EXPECT_EQ(sup_of_displacement(g0(), Sign::negative), std::nullopt);
  EXPECT_EQ(sup_of_displacement(pl_invert(g0()), Sign::negative), q(0));
  // A map moving up on (-1, 0) and down on (-3, -1).
  PLMap m = PLMap::from_points({{q(-3), q(-3)}, {q(-2), q(-5, 2)}, {q(-1), q(-1)}, {q(-1, 2), q(-1, 4)}, {q(0), q(0)}});
  EXPECT_EQ(sup_of_displacement(m, Sign::positive), q(0));
  EXPECT_EQ(sup_of_displacement(m, Sign::negative), q(-1));
}

TEST(AgreeOnRight, Basic) {
  PLMap f = g0();
  PLMap g = PLMap::from_points({{q(-2), q(-7, 4)}, {q(-1), q(-1, 2)}, {q(0), q(0)}});
  EXPECT_TRUE(pl_agree_on_right(f, g, q(-1)));
  EXPECT_TRUE(pl_agree_on_right(f, g, q(1)));
  EXPECT_FALSE(pl_agree_on_right(f, g, q(-3, 2)));
}

TEST(TextFormat, RoundTrip) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 100; ++i) {
    PLMap f = random_map(rng);
    EXPECT_EQ(parse_plmap(format_plmap(f)), f);
  }
  EXPECT_EQ(format_plmap(g0()), "1/2; (-1,-1/2) (0,0)");
  EXPECT_EQ(parse_plmap("0;"), PLMap{});
}

TEST(TextFormat, Malformed) {
  for (const char* bad : {"", "1/2 (0,0)", "x; (0,0)", "0; (0,0", "0; (1,2)", "1/0; (0,0)"}) {
    EXPECT_THROW(parse_plmap(bad), ParseError) << bad;
  }
}
