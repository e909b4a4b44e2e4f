#include <gtest/gtest.h>

#include "crossmap/algebra.hpp"
#include "crossmap/transform.hpp"
#include "support/fixtures.hpp"
#include "support/random_crossmap.hpp"

namespace crossmap {
namespace {

TEST(ToMatrix, CountryLayout) {
  const MatrixEncoding m = to_matrix(testing::country_crossmap());
  EXPECT_EQ(m.row_keys, (std::vector<Key>{"AUS", "BLX", "E.GER", "W.GER"}));
  EXPECT_EQ(m.col_keys, (std::vector<Key>{"AUS", "BEL", "DEU", "LUX"}));
  // rows: AUS, BLX, E.GER, W.GER; columns: AUS, BEL, DEU, LUX
  const Rational h(1, 2);
  const std::vector<Rational> expected{1, 0, 0, 0, 0, h, 0, h, 0, 0, 1, 0, 0, 0, 1, 0};
  EXPECT_EQ(m.values, expected);
  EXPECT_EQ(m.row_sums(), std::vector<Rational>(4, Rational(1)));
}

TEST(MatvecDense, CountryObservations) {
  const MatrixEncoding m = to_matrix(testing::country_crossmap());
  const std::vector<Rational> x{140, 10, 3, 4};
  EXPECT_EQ(matvec_dense(m, x), (std::vector<Rational>{140, 5, 7, 5}));
}

TEST(MatvecDense, ZeroAndIndicatorVectors) {
  const MatrixEncoding m = to_matrix(testing::country_crossmap());
  EXPECT_EQ(matvec_dense(m, std::vector<Rational>(4)), std::vector<Rational>(4));
  const std::vector<Rational> blx{0, 1, 0, 0};
  EXPECT_EQ(matvec_dense(m, blx), (std::vector<Rational>{0, Rational(1, 2), 0, Rational(1, 2)}));
}

TEST(MatvecDense, DimensionMismatch) {
  const MatrixEncoding m = to_matrix(testing::country_crossmap());
  EXPECT_THROW(matvec_dense(m, std::vector<Rational>(3)), Error);
}

TEST(Compose, SplitThenMergeRestoresMass) {
  const Crossmap first = require_crossmap({{{"a", "m", Rational(1, 2)}, {"a", "n", Rational(1, 2)}}, {}});
  const Crossmap second = require_crossmap({{{"m", "z", Rational(1)}, {"n", "z", Rational(1)}}, {}});
  EXPECT_EQ(compose(first, second).edges(), (std::vector<Edge>{{"a", "z", Rational(1)}}));
}

TEST(Compose, ChainGapIsCoverageError) {
  const Crossmap first = require_crossmap({{{"a", "m", Rational(1, 2)}, {"a", "n", Rational(1, 2)}}, {}});
  const Crossmap second = require_crossmap({{{"m", "z", Rational(1)}}, {}});
  try {
    compose(first, second);
    FAIL() << "expected CoverageError";
  } catch (const CoverageError& e) {
    EXPECT_EQ(e.report().uncovered_keys, std::vector<Key>{"n"});
    EXPECT_EQ(e.step(), 2u);
  }
}

TEST(Compose, IdentityIsNeutral) {
  testing::Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const Crossmap map = testing::random_crossmap(rng);
    EXPECT_EQ(compose(identity_crossmap(map.sources()), map), map);
    EXPECT_EQ(compose(map, identity_crossmap(map.targets())), map);
  }
}

TEST(Compose, AssociativeAndMassPreserving) {
  testing::Rng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const Crossmap a = testing::random_crossmap(rng);
    const Crossmap b = testing::random_crossmap_over(rng, a.targets(), testing::make_keys("u", 6), {});
    const Crossmap c = testing::random_crossmap_over(rng, b.targets(), testing::make_keys("v", 6), {});
    const Crossmap left = compose(compose(a, b), c);
    EXPECT_EQ(left, compose(a, compose(b, c)));
    const std::vector<Crossmap> chain{a, b, c};
    EXPECT_EQ(compose_all(chain), left);
    for (const Rational& s : to_matrix(left).row_sums()) EXPECT_EQ(s, Rational(1));
  }
}

TEST(Reverse, ManyToOneBecomesLateral) {
  const Crossmap map = require_crossmap(
      {{{"111311", "1111", Rational(1)}, {"111312", "1111", Rational(1)}, {"111399", "1111", Rational(1)}}, {}});
  const auto reversed = reverse(map);
  EXPECT_FALSE(reversed);
  ASSERT_EQ(reversed.report.findings.size(), 1u);
  const Finding& f = reversed.report.findings[0];
  EXPECT_EQ(f.code, "lateral_mapping");
  EXPECT_EQ(f.subject, "1111");
  EXPECT_EQ(*f.sum, Rational(3));
  EXPECT_NE(f.message.find("3 outgoing links"), std::string::npos);
}

TEST(Reverse, IscoSubsetIsNotReversible) {
  EXPECT_FALSE(reverse(testing::isco_crossmap()));
}

TEST(Reverse, BijectionRoundTrips) {
  testing::Rng rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    auto src = testing::make_keys("s", 1 + trial % 9);
    auto dst = testing::make_keys("t", src.size());
    std::shuffle(dst.begin(), dst.end(), rng);
    EdgeListDraft draft;
    for (std::size_t i = 0; i < src.size(); ++i) draft.edges.push_back({src[i], dst[i], Rational(1)});
    const Crossmap map = require_crossmap(draft);
    const auto back = reverse(map);
    ASSERT_TRUE(back);
    EXPECT_EQ(compose(map, *back), identity_crossmap(src));
    ASSERT_TRUE(reverse(*back));
    EXPECT_EQ(*reverse(*back), map);
  }
}

}  // namespace
}  // namespace crossmap
