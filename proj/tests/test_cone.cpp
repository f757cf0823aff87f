#include <gtest/gtest.h>

#include <random>

#include "biord/cone.hpp"
#include "biord/oracle.hpp"

using namespace biord;

namespace {

Word w(std::string_view s) { return parse_word(s); }

std::vector<Word> window_three() { return {w("b"), w("b^7 a b^-4 a^-1"), w("a b^4 a^-1 b^-9")}; }

}  // namespace

TEST(ConeSaturate, SingleGeneratorIsConsistent) {
  const std::vector<Word> seeds{w("a")};
  ConeCertificate c = cone_saturate(seeds, 3);
  EXPECT_EQ(c.status, ConeCertificate::Status::consistent);
  EXPECT_TRUE(c.complete);
  EXPECT_FALSE(c.witness.has_value());
  EXPECT_FALSE(replay(seeds, 3, c));
}

TEST(ConeSaturate, InversePairIsImmediate) {
  const std::vector<Word> seeds{w("a"), w("a^-1")};
  ConeCertificate c = cone_saturate(seeds, 2);
  EXPECT_EQ(c.status, ConeCertificate::Status::contradiction);
  ASSERT_TRUE(c.witness.has_value());
  EXPECT_EQ(*c.witness, w("a^-1"));
  EXPECT_TRUE(c.derivation.empty());
  EXPECT_EQ(c.rounds, 0);
  EXPECT_TRUE(replay(seeds, 2, c));
}

TEST(ConeSaturate, ConjugateOfInverse) {
  // b > 1 and a b^-1 a^-1 > 1 clash once conjugated by a^-1.
  const std::vector<Word> seeds{w("b"), w("a b^-1 a^-1")};
  ConeCertificate c = cone_saturate(seeds, 4);
  ASSERT_EQ(c.status, ConeCertificate::Status::contradiction);
  EXPECT_TRUE(replay(seeds, 4, c));
}

TEST(ConeSaturate, WindowSeedsContradict) {
  const std::vector<Word> seeds = window_three();
  ConeCertificate c = cone_saturate(seeds, 24, {3, 200000});
  ASSERT_EQ(c.status, ConeCertificate::Status::contradiction);
  EXPECT_LE(c.rounds, 3);
  EXPECT_TRUE(replay(seeds, 24, c));
  bool uses_product = false;
  for (const DerivationStep& s : c.derivation) {
    uses_product = uses_product || (s.kind == DerivationStep::Kind::product && s.left == seeds[1] &&
                                    s.right == seeds[2] && s.result == w("b^-2"));
  }
  EXPECT_TRUE(uses_product);
}

TEST(ConeSaturate, TamperedCertificateFailsReplay) {
  const std::vector<Word> seeds = window_three();
  ConeCertificate c = cone_saturate(seeds, 24, {3, 200000});
  ASSERT_FALSE(c.derivation.empty());
  ConeCertificate bad = c;
  bad.derivation.front().result = bad.derivation.front().result * w("a");
  EXPECT_FALSE(replay(seeds, 24, bad));
  EXPECT_FALSE(replay(seeds, 1, c));
  const std::vector<Word> fewer{seeds[0], seeds[1]};
  EXPECT_FALSE(replay(fewer, 24, c));
}

TEST(ConeSaturate, Monotone) {
  // Adding seeds never turns a contradiction into a consistent verdict.
  const std::vector<Word> base{w("a"), w("a^-1 b")};
  ConeCertificate c0 = cone_saturate(base, 4, {3, 200000});
  std::vector<Word> more = base;
  more.push_back(w("b^-1"));
  ConeCertificate c1 = cone_saturate(more, 4, {3, 200000});
  if (c0.status == ConeCertificate::Status::contradiction) EXPECT_EQ(c1.status, c0.status);
  EXPECT_EQ(c1.status, ConeCertificate::Status::contradiction);
  EXPECT_TRUE(replay(more, 4, c1));
}

TEST(ConeSaturate, Preconditions) {
  const std::vector<Word> with_identity{Word{}};
  EXPECT_THROW(cone_saturate(with_identity, 4), PreconditionError);
  const std::vector<Word> long_seed{w("a^5")};
  EXPECT_THROW(cone_saturate(long_seed, 4), PreconditionError);
}

TEST(ConeSaturate, MagnusConeSubsetsStayConsistent) {
  // Anything inside a genuine positive cone can never be refuted.
  const std::vector<Word> cone = positive_cone_ball(magnus_oracle(), 2);
  std::mt19937 rng(11);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<Word> seeds;
    for (const Word& x : cone) {
      if (rng() % 3 == 0) seeds.push_back(x);
    }
    if (seeds.empty()) seeds.push_back(cone.front());
    ConeCertificate c = cone_saturate(seeds, 4, {2, 50000});
    EXPECT_EQ(c.status, ConeCertificate::Status::consistent);
  }
}

TEST(ConeSaturate, RoundCapStopsEarly) {
  const std::vector<Word> seeds{w("a"), w("b")};
  ConeCertificate c = cone_saturate(seeds, 10, {1, 200000});
  EXPECT_EQ(c.status, ConeCertificate::Status::consistent);
  EXPECT_EQ(c.rounds, 1);
  EXPECT_FALSE(c.complete);
}

TEST(FormatStep, Text) {
  EXPECT_EQ(format_step({DerivationStep::Kind::product, w("b^-2"), w("a"), w("b")}), "b^-2 = (a^1) * (b^1)");
  EXPECT_EQ(format_step({DerivationStep::Kind::conjugation, w("a b a^-1"), w("b"), w("a")}),
            "a^1 b^1 a^-1 = conj(b^1, a^1)");
}
