#include <gtest/gtest.h>

#include "aljabar/policies.hpp"
#include "support.hpp"

namespace aljabar {
namespace {

using testing::ms;
using testing::position;

Exchange ex(const std::string& give, const std::string& take) { return {ms(give), ms(take)}; }

TEST(CandidateMoves, DropNullExchangesUnlessAlone) {
  const auto s = position("K R", "K R");
  const auto c = candidate_moves(s, s.turn);
  EXPECT_EQ(c, (std::vector<Move>{ex("K R", "R"), ex("R", "K R")}));
  const auto only = position("K Y", "K O");
  EXPECT_EQ(candidate_moves(only, only.turn), std::vector<Move>{ex("K", "K")});
}

TEST(RandomPolicy, UniformOverCandidates) {
  Rng pick(77);
  GameState s;
  std::vector<Move> moves;
  while (moves.size() != 5) {
    s = position("", "");
    s.hands[s.turn] = testing::random_multiset(pick, {2, 3}, 4);
    s.center = testing::random_multiset(pick, {2, 3}, 3);
    moves = candidate_moves(s, s.turn);
  }
  RandomPolicy pol(12345);
  std::vector<int> counts(moves.size(), 0);
  const int samples = 10000;
  for (int i = 0; i < samples; ++i) {
    const auto d = pol.decide(s, s.turn);
    EXPECT_EQ(d.pre_draws, 0u);
    const auto it = std::find(moves.begin(), moves.end(), d.move);
    ASSERT_NE(it, moves.end());
    ++counts[it - moves.begin()];
  }
  double chi2 = 0;
  const double expected = static_cast<double>(samples) / moves.size();
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 18.47);  // df = 4, p = 0.001
}

TEST(RandomPolicy, SameSeedSameChoices) {
  const auto s = position("R B Y", "P O K");
  RandomPolicy a(3), b(3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.decide(s, s.turn).move, b.decide(s, s.turn).move);
}

TEST(GreedyPolicy, PrefersSpectrumToSmallerReductions) {
  const auto s = position("R Y B W", "P K");
  EXPECT_EQ(score_move(s, s.turn, Spectrum{}).net_reduction, 3);
  EXPECT_EQ(score_move(s, s.turn, ex("R B", "P")).net_reduction, 1);
  GreedyPolicy g;
  EXPECT_EQ(g.decide(s, s.turn).move, Move{Spectrum{}});
}

TEST(GreedyPolicy, GivesTwoForOneRatherThanOneForTwo) {
  const auto s = position("P R B", "R B P");
  EXPECT_EQ(score_move(s, s.turn, ex("P", "R B")).net_reduction, -1);
  const auto best = score_move(s, s.turn, ex("R B", "P"));
  EXPECT_EQ(best.net_reduction, 1);
  EXPECT_EQ(best.cancellations, 2u);
  EXPECT_EQ(GreedyPolicy().decide(s, s.turn).move, Move{ex("R B", "P")});
}

TEST(GreedyPolicy, SkipsNullExchangeForTheReducingMove) {
  const auto s = position("K R", "K R");
  EXPECT_EQ(GreedyPolicy().decide(s, s.turn).move, Move{ex("K R", "R")});
}

TEST(GreedyPolicy, CancellationsBreakTies) {
  // R B -> P and Y O -> R both give two for one; only placing R B next to R B cancels
  const auto s = position("R B Y O", "P R B K");
  EXPECT_EQ(score_move(s, s.turn, ex("R B", "P")).cancellations, 2u);
  EXPECT_EQ(score_move(s, s.turn, ex("O Y", "R")).cancellations, 0u);
  EXPECT_TRUE(score_move(s, s.turn, ex("O Y", "R")) < score_move(s, s.turn, ex("R B", "P")));
  // then taking fewer pieces
  EXPECT_TRUE((MoveScore{1, 0, 2}) < (MoveScore{1, 0, 1}));
  EXPECT_TRUE((MoveScore{1, 0, 1}) < (MoveScore{1, 1, 3}));
  EXPECT_TRUE((MoveScore{0, 5, 1}) < (MoveScore{1, 0, 3}));
}

TEST(GreedyPolicy, PicksEarliestBestCandidateOnRandomStates) {
  Rng rng(31);
  for (int t = 0; t < 300; ++t) {
    auto s = position("", "");
    s.hands[s.turn] = testing::random_multiset(rng, {2, 3}, 1 + rng.below(6));
    s.center = testing::random_multiset(rng, {2, 3}, 1 + rng.below(6));
    const auto moves = candidate_moves(s, s.turn);
    if (moves.empty()) continue;
    const auto chosen = GreedyPolicy().decide(s, s.turn).move;
    const auto best = score_move(s, s.turn, chosen);
    bool seen = false;
    for (const auto& m : moves) {
      const auto sc = score_move(s, s.turn, m);
      ASSERT_FALSE(best < sc);
      if (m == chosen) seen = true;
      if (!seen) {
        ASSERT_TRUE(sc < best);
      }
    }
  }
}

TEST(GreedyPolicy, AnnouncesWhenOnePieceIsReachable) {
  const auto s = position("R B G", "O K");
  EXPECT_TRUE(GreedyPolicy().wants_announce(s, s.turn));
  const auto far = position("R Y", "O O K");
  // best move R Y -> O leaves one piece as well
  EXPECT_TRUE(GreedyPolicy().wants_announce(far, far.turn));
  const auto keep = position("R B Y", "P K");
  EXPECT_FALSE(GreedyPolicy().wants_announce(keep, keep.turn));
}

TEST(MakePolicy, KnownNames) {
  for (const auto& n : policy_names()) EXPECT_EQ(make_policy(n, 1)->name(), n);
  EXPECT_THROW(make_policy("minimax", 1), std::invalid_argument);
}

}  // namespace
}  // namespace aljabar
