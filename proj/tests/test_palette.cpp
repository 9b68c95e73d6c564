#include <gtest/gtest.h>

#include "aljabar/palette.hpp"
#include "aljabar/verify.hpp"
#include "support.hpp"

namespace aljabar {
namespace {

using testing::col;
using testing::ms;

TEST(StandardPalette, DefinedVectors) {
  const auto& pal = testing::std_palette();
  const std::vector<std::pair<const char*, std::vector<std::uint32_t>>> want = {
      {"R", {1, 0, 0}}, {"Y", {0, 1, 0}}, {"B", {0, 0, 1}}, {"O", {1, 1, 0}},
      {"G", {0, 1, 1}}, {"P", {1, 0, 1}}, {"W", {1, 1, 1}}, {"K", {0, 0, 0}},
  };
  for (const auto& [code, entries] : want) EXPECT_EQ(pal.parse(code).entries(), entries) << code;
  EXPECT_EQ(pal.name(col("W")), "white");
  EXPECT_EQ(pal.name(col("K")), "black/clear");
  EXPECT_EQ(pal.find_name("orange"), col("O"));
  EXPECT_FALSE(pal.find_code("X").has_value());
  EXPECT_THROW(pal.parse("X"), std::invalid_argument);
}

TEST(StandardPalette, ThreeByTwoNamesInListingOrder) {
  const GroupParams p{3, 2};
  const auto pal = standard_palette(p);
  const std::vector<std::string> names = {"black/clear",  "light blue",     "dark blue",
                                          "light red",    "light purple",   "bluish purple",
                                          "dark red",     "reddish purple", "dark purple"};
  for (std::uint32_t i = 0; i < 9; ++i) EXPECT_EQ(pal.name(ColorVector::from_index(p, i)), names[i]);
  EXPECT_EQ(pal.name(ColorVector(p, {2, 2})), "dark purple");
}

TEST(StandardPalette, SystematicNames) {
  const auto pal = standard_palette({2, 1});
  EXPECT_EQ(pal.size(), 2u);
  EXPECT_EQ(pal.code(ColorVector({2, 1}, {0})), "K");
  EXPECT_EQ(pal.name(ColorVector({2, 1}, {1})), "C(1)");
  const auto p24 = standard_palette({2, 4});
  EXPECT_EQ(p24.name(ColorVector({2, 4}, {1, 0, 1, 1})), "C(1,0,1,1)");
  EXPECT_EQ(p24.code(ColorVector({2, 4}, {1, 0, 1, 1})), "C1.0.1.1");
}

TEST(Palette, RejectsDuplicatesAndBadIdentity) {
  const GroupParams p{2, 1};
  EXPECT_THROW(Palette(p, {{"black/clear", "K", ""}, {"x", "K", ""}}), ConfigError);
  EXPECT_THROW(Palette(p, {{"black", "K", ""}, {"x", "X", ""}}), ConfigError);
  EXPECT_THROW(Palette(p, {{"black/clear", "K", ""}}), ConfigError);
}

TEST(Palette, FormatsMultisets) {
  const auto& pal = testing::std_palette();
  EXPECT_EQ(pal.format(ms("B R")), "B + R");
  EXPECT_EQ(pal.format(Multiset({2, 3})), "K");
  EXPECT_EQ(pal.codes(ms("W K")), (std::vector<std::string>{"K", "W"}));
}

TEST(AdditionTable, KnownEntries) {
  const auto& pal = testing::std_palette();
  const auto t = addition_table(pal);
  EXPECT_EQ(t[col("B").index()][col("Y").index()], col("G"));
  EXPECT_EQ(t[col("W").index()][col("W").index()], col("K"));
}

TEST(AdditionTable, MatchesPublishedTable) {
  const auto cmp = compare_reference_table();
  EXPECT_EQ(cmp.total, 64u);
  EXPECT_EQ(cmp.matched, 64u);
  EXPECT_TRUE(cmp.mismatches.empty());
}

TEST(AdditionTable, CorruptedReferenceIsDetected) {
  auto bad = kReferenceTable;
  bad[7][7] = "W";
  const auto cmp = compare_reference_table(bad);
  EXPECT_EQ(cmp.matched, 63u);
  ASSERT_EQ(cmp.mismatches.size(), 1u);
  EXPECT_EQ(cmp.mismatches[0], "W + W = K, table says W");
}

TEST(AdditionTable, SymmetricWithIdentityHeader) {
  for (GroupParams p : {GroupParams{2, 3}, GroupParams{3, 2}, GroupParams{2, 4}}) {
    const auto t = addition_table(standard_palette(p));
    const auto els = all_elements(p);
    for (std::size_t i = 0; i < els.size(); ++i) {
      EXPECT_EQ(t[0][i], els[i]);
      EXPECT_EQ(t[i][0], els[i]);
      for (std::size_t j = 0; j < els.size(); ++j) EXPECT_EQ(t[i][j], t[j][i]);
    }
  }
}

TEST(AdditionTable, CsvInReferenceOrder) {
  const auto& pal = testing::std_palette();
  std::vector<ColorVector> order;
  for (const auto* c : kReferenceTableOrder) order.push_back(pal.parse(c));
  const auto csv = addition_table_csv(pal, order);
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "+,K,R,B,Y,P,O,G,W");
  std::getline(is, line);
  EXPECT_EQ(line, "K,K,R,B,Y,P,O,G,W");
  std::getline(is, line);
  EXPECT_EQ(line, "R,R,K,P,O,B,Y,W,G");
}

TEST(ReductionTrace, YellowPlusOrange) {
  const auto& pal = testing::std_palette();
  const auto tr = reduce_trace(ms("Y O"), pal);
  EXPECT_EQ(tr.final, col("R"));
  bool saw_expansion = false;
  for (const auto& st : tr.steps) saw_expansion = saw_expansion || st.after == ms("Y R Y");
  EXPECT_TRUE(saw_expansion);
  EXPECT_EQ(tr.render(pal), "Y + O = Y + Y + R = R");
}

TEST(ReductionTrace, SingleBlackHasNoSteps) {
  const auto tr = reduce_trace(ms("K"), testing::std_palette());
  EXPECT_TRUE(tr.steps.empty());
  EXPECT_EQ(tr.final, col("K"));
}

TEST(ReductionTrace, WorkedExamples) {
  const auto& pal = testing::std_palette();
  EXPECT_EQ(reduce_trace(ms("Y P G"), pal).final, col("R"));
  EXPECT_EQ(reduce_trace(ms("G W"), pal).final, col("R"));
  EXPECT_EQ(reduce_trace(ms("O P W"), pal).final, col("R"));
  EXPECT_EQ(reduce_trace(ms("R B P"), pal).final, col("K"));
}

TEST(ReductionTrace, FinalEqualsSumOnRandomMultisets) {
  Rng rng(2024);
  for (GroupParams p : {GroupParams{2, 3}, GroupParams{3, 2}, GroupParams{2, 4}, GroupParams{5, 2}}) {
    const auto pal = standard_palette(p);
    for (int t = 0; t < 2500; ++t) {
      const auto pieces = testing::random_multiset(rng, p, 1 + rng.below(12));
      const auto tr = reduce_trace(pieces, pal);
      ASSERT_EQ(tr.final, pieces.sum()) << pal.format(pieces);
      for (const auto& st : tr.steps) {
        ASSERT_EQ(st.before.sum(), st.after.sum());
        ASSERT_FALSE(st.before == st.after);
      }
      if (!tr.steps.empty()) {
        ASSERT_LE(tr.steps.back().after.size(), 1u);
      }
    }
  }
}

}  // namespace
}  // namespace aljabar
