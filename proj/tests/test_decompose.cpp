#include <cmath>
#include <iomanip>
#include <sstream>

#include "qibg/decompose.hpp"
#include "support.hpp"

namespace qibg {
namespace {

using test::imat;

const IntegerMatrix kExample3 = imat({{1, 0, 2}, {3, 1, 6}, {0, 0, 1}});

// Product of the embedded factors computed by plain left-to-right
// multiplication of full matrices, bypassing product().
IntegerMatrix slow_product(const Factorization& f) {
  IntegerMatrix acc = IntegerMatrix::identity(f.n);
  for (const auto& x : f.factors) {
    IntegerMatrix e = IntegerMatrix::identity(f.n);
    e(x.k - 1, x.k - 1) = x.block.a;
    e(x.k - 1, x.l - 1) = x.block.b;
    e(x.l - 1, x.k - 1) = x.block.c;
    e(x.l - 1, x.l - 1) = x.block.d;
    acc = multiply(acc, e);
  }
  return acc;
}

TEST(Embed, Placement) {
  EXPECT_TRUE(embed({1, 2, Sl2Block::identity()}, 3).is_identity());
  EXPECT_EQ(embed({1, 3, {0, 1, -1, 0}}, 3), imat({{0, 0, 1}, {0, 1, 0}, {-1, 0, 0}}));
  IntegerMatrix m = embed({3, 1, {1, 2, 0, 1}}, 3);
  EXPECT_EQ(m(2, 2), 1);
  EXPECT_EQ(m(2, 0), 2);
  EXPECT_EQ(m(0, 2), 0);
  EXPECT_EQ(m(0, 0), 1);
  EXPECT_EQ(m(1, 1), 1);
}

TEST(Embed, RejectsBadIndices) {
  EXPECT_THROW(embed({2, 2, {}}, 3), InvalidArgument);
  EXPECT_THROW(embed({0, 1, {}}, 3), InvalidArgument);
  EXPECT_THROW(embed({1, 4, {}}, 3), InvalidArgument);
}

TEST(ColumnMajor, IdentityGivesNoFactors) {
  for (std::size_t n = 2; n <= 6; ++n)
    EXPECT_TRUE(decompose_column_major(UnimodularMatrix(IntegerMatrix::identity(n))).factors.empty());
}

TEST(ColumnMajor, ElementaryInputIsOneFactor) {
  Factorization f = decompose_column_major(UnimodularMatrix(imat({{1, 5}, {0, 1}})));
  ASSERT_EQ(f.factors.size(), 1u);
  EXPECT_EQ(f.factors[0], (BlockFactor{1, 2, {1, 5, 0, 1}}));
}

TEST(ColumnMajor, ExampleN3Reassembles) {
  UnimodularMatrix gamma(kExample3);
  Factorization f = decompose_column_major(gamma);
  EXPECT_LE(f.factors.size(), 6u);
  EXPECT_EQ(slow_product(f), kExample3);
  test::expect_golden("column_major_example3.json", to_json(f).dump(2) + "\n");
}

TEST(ColumnMajor, NegativeDiagonalInputs) {
  for (const auto& m : {imat({{-1, 0}, {0, -1}}), imat({{-1, 0, 0}, {0, -1, 0}, {0, 0, 1}}),
                        imat({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}), imat({{0, -1}, {1, 0}})}) {
    UnimodularMatrix gamma(m);
    Factorization f = decompose_column_major(gamma);
    EXPECT_EQ(slow_product(f), m);
    EXPECT_LE(f.factors.size(), factor_bound(m.n()));
  }
}

TEST(ColumnMajor, RandomWordsRoundTripWithinBounds) {
  for (std::size_t n = 2; n <= 6; ++n)
    for (std::uint64_t s = 0; s < 60; ++s) {
      UnimodularMatrix gamma = random_word(n, s % 41, s);
      Factorization f = decompose_column_major(gamma);
      ASSERT_EQ(slow_product(f), gamma.matrix()) << "n = " << n << ", seed " << s;
      VerificationReport r = verify(gamma, f);
      EXPECT_TRUE(r.passed());
      EXPECT_EQ(r.bound_violations, 0u);
      EXPECT_LE(f.factors.size(), factor_bound(n));
    }
}

TEST(ColumnMajor, LongWordsStayExact) {
  UnimodularMatrix gamma = random_word(4, 400, 5);
  EXPECT_GT(sup_norm(gamma.matrix()).log(), 20.0);
  EXPECT_TRUE(verify(gamma, decompose_column_major(gamma)).passed());
}

TEST(Verify, IdentityWithEmptyList) {
  VerificationReport r = verify(UnimodularMatrix(IntegerMatrix::identity(3)), {3, Strategy::ColumnMajor, {}});
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.stats.max_ratio, 0.0);
  EXPECT_EQ(r.count_bound, 6u);
}

TEST(Verify, DeletedFactorBreaksProduct) {
  UnimodularMatrix gamma = random_word(3, 25, 3);
  Factorization f = decompose_column_major(gamma);
  ASSERT_FALSE(f.factors.empty());
  for (std::size_t i = 0; i < f.factors.size(); ++i) {
    Factorization g = f;
    g.factors.erase(g.factors.begin() + static_cast<std::ptrdiff_t>(i));
    // Oracle: a deleted non-identity factor changes the product unless it was
    // the identity itself.
    VerificationReport r = verify(gamma, g);
    EXPECT_EQ(r.product_equal, f.factors[i].block.is_identity());
  }
}

TEST(Verify, FlagsSupportCountAndDimensionProblems) {
  UnimodularMatrix gamma(IntegerMatrix::identity(2));
  Factorization bad_support{2, Strategy::ColumnMajor, {{1, 1, {}}}};
  EXPECT_FALSE(verify(gamma, bad_support).support_ok);
  EXPECT_FALSE(verify(gamma, bad_support).passed());

  Factorization bad_det{2, Strategy::ColumnMajor, {{1, 2, {2, 0, 0, 1}}}};
  EXPECT_FALSE(verify(gamma, bad_det).support_ok);

  Factorization too_many{2, Strategy::ColumnMajor, {{1, 2, {}}, {1, 2, {}}, {2, 1, {}}}};
  VerificationReport r = verify(gamma, too_many);
  EXPECT_TRUE(r.product_equal);
  EXPECT_FALSE(r.count_ok);

  Factorization wrong_n{3, Strategy::ColumnMajor, {}};
  EXPECT_FALSE(verify(gamma, wrong_n).dimension_ok);
  EXPECT_FALSE(verify(gamma, wrong_n).problems.empty());
}

TEST(Stats, ElementaryInputHasRatioOne) {
  UnimodularMatrix gamma(imat({{1, 5}, {0, 1}}));
  QuasiIsometryStats s = quasi_isometry_stats(gamma, decompose_column_major(gamma));
  EXPECT_DOUBLE_EQ(s.max_ratio, 1.0);
  EXPECT_DOUBLE_EQ(s.input_log_norm, std::log(5.0));
}

TEST(Stats, SmallNormsUseUnitDenominator) {
  // ||gamma|| = 2 so ln||gamma|| < 1 and the ratio divides by 1.
  UnimodularMatrix gamma(imat({{1, 2}, {0, 1}}));
  QuasiIsometryStats s = quasi_isometry_stats(gamma, decompose_column_major(gamma));
  EXPECT_DOUBLE_EQ(s.max_ratio, std::log(2.0));
}

TEST(Stats, RegressionSnapshotWord3Length30Seed7) {
  UnimodularMatrix gamma = random_word(3, 30, 7);
  QuasiIsometryStats s = quasi_isometry_stats(gamma, decompose_column_major(gamma));
  std::ostringstream text;
  text << std::setprecision(17) << s.max_ratio << '\n';
  test::expect_golden("stats_word_3_30_7.txt", text.str());
}

TEST(GuaranteedBound, Formula) {
  UnimodularMatrix gamma(imat({{1, 5}, {0, 1}}));
  EXPECT_DOUBLE_EQ(guaranteed_log_bound(gamma), 4.0 * (std::log(2.0) + std::log(5.0)));
  EXPECT_DOUBLE_EQ(guaranteed_log_bound(UnimodularMatrix(IntegerMatrix::identity(3))), 64.0 * std::log(3.0));
}

TEST(FactorizationJson, RoundTrip) {
  UnimodularMatrix gamma = random_word(4, 30, 9);
  Factorization f = decompose_column_major(gamma);
  Factorization back = factorization_from_json(nlohmann::json::parse(to_json(f).dump()));
  EXPECT_EQ(back.n, f.n);
  EXPECT_EQ(back.strategy, f.strategy);
  EXPECT_EQ(back.factors, f.factors);
}

TEST(FactorizationJson, Malformed) {
  for (const char* text : {R"({"n": 3})", R"({"n": 3, "factors": [{"k": 1, "l": 2}]})",
                           R"({"n": 3, "factors": [{"k": 1, "l": 2, "block": [["1","0"]]}]})",
                           R"({"n": 3, "strategy": "zigzag", "factors": []})", R"([])"})
    EXPECT_THROW(factorization_from_json(nlohmann::json::parse(text)), ParseError) << text;
}

TEST(Strategy, Names) {
  EXPECT_EQ(parse_strategy("column"), Strategy::ColumnMajor);
  EXPECT_EQ(parse_strategy("column_major"), Strategy::ColumnMajor);
  EXPECT_EQ(parse_strategy(to_string(Strategy::Clockwise)), Strategy::Clockwise);
  EXPECT_THROW(parse_strategy("diagonal"), InvalidArgument);
}

}  // namespace
}  // namespace qibg
