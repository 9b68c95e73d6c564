#include <gtest/gtest.h>

#include <filesystem>
#include <numeric>

#include "aljabar/simulation.hpp"

namespace aljabar {
namespace {

TEST(RunMatch, SameSeedSameRecord) {
  const auto c = GameConfig::standard(3);
  const std::vector<std::string> pols = {"random", "greedy", "random"};
  EXPECT_EQ(run_match(c, pols, 17), run_match(c, pols, 17));
  EXPECT_NE(run_match(c, pols, 17).hand_sizes, run_match(c, pols, 18).hand_sizes);
}

TEST(RunMatch, RejectsWrongPolicyCount) {
  EXPECT_THROW(run_match(GameConfig::standard(3), {"random"}, 1), ConfigError);
  EXPECT_THROW(run_match(GameConfig::standard(2), {"random", "alphabeta"}, 1), std::invalid_argument);
}

TEST(RunMatch, PolicySeedsAreIndependentOfTheDeal) {
  const auto c = GameConfig::standard(2);
  const auto a = run_match(c, {"greedy", "greedy"}, 5);
  const auto b = run_match(c, {"random", "random"}, 5);
  EXPECT_EQ(new_game(GameConfig::standard(2, 5)).hands, new_game(GameConfig::standard(2, 5)).hands);
  EXPECT_EQ(a.seed, b.seed);
  EXPECT_NE(policy_seed(5, 0), policy_seed(5, 1));
}

TEST(RunMatch, PropertiesHoldAcrossConfigs) {
  struct Case {
    GameConfig config;
    std::vector<std::string> policies;
  };
  const std::vector<Case> cases = {
      {GameConfig::standard(2), {"random", "random"}},
      {GameConfig::standard(4), {"greedy", "random", "greedy", "random"}},
      {GameConfig::make({2, 4}, 2, 10, 0), {"greedy", "random"}},
      {GameConfig::make({3, 2}, 2, 6, 0), {"random", "greedy"}},
      {GameConfig::make({2, 2}, 3, 6, 0), {"random", "random", "greedy"}},
  };
  for (const auto& cs : cases) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto r = run_match(cs.config, cs.policies, seed);
      ASSERT_TRUE(r.violations.empty()) << r.violations.front();
      EXPECT_GE(r.turns, 4u);
      EXPECT_LE(r.max_hand_reduction, static_cast<int>(cs.config.params.n));
      EXPECT_FALSE(r.winners.empty());
      const auto best = *std::min_element(r.final_hands.begin(), r.final_hands.end());
      for (auto w : r.winners) EXPECT_EQ(r.final_hands[w], best);
      ASSERT_TRUE(r.final_trigger);
    }
  }
}

TEST(Tournament, ThreadCountDoesNotChangeResults) {
  const auto c = GameConfig::standard(2);
  const auto one = tournament(c, {"random", "greedy"}, 40, 9, 1);
  const auto four = tournament(c, {"random", "greedy"}, 40, 9, 4);
  EXPECT_EQ(one.matches, four.matches);
  EXPECT_EQ(tournament_csv(one), tournament_csv(four));
  EXPECT_EQ(tournament_summary(one), tournament_summary(four));
}

TEST(Tournament, WinRatesSumToOne) {
  const auto r = tournament(GameConfig::standard(3), {"random", "greedy", "random"}, 60, 2, 2);
  EXPECT_NEAR(std::accumulate(r.seat_win_rate.begin(), r.seat_win_rate.end(), 0.0), 1.0, 1e-9);
  double shares = 0;
  for (const auto& [_, x] : r.policy_win_share) shares += x;
  EXPECT_NEAR(shares, 1.0, 1e-9);
  std::uint32_t games = 0;
  for (const auto& [turns, count] : r.length_histogram) {
    EXPECT_GE(turns, 4u);
    games += count;
  }
  EXPECT_EQ(games, 60u);
  EXPECT_GE(r.min_turns(), 4u);
  for (std::uint32_t g = 0; g < 60; ++g) EXPECT_EQ(r.matches[g].seed, game_seed(2, g));
}

TEST(Tournament, CsvHasOneRowPerGame) {
  const auto r = tournament(GameConfig::standard(2), {"greedy", "random"}, 5, 1, 1);
  const auto csv = tournament_csv(r);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
  EXPECT_EQ(csv.rfind("game,seed,m,n,players,copies,policies,winners,turns", 0), 0u);
  EXPECT_NE(csv.find(",greedy;random,"), std::string::npos);
}

TEST(Tournament, WritesOneLogPerGame) {
  const auto dir = std::filesystem::temp_directory_path() / "aljabar_test_tournament_logs";
  std::filesystem::remove_all(dir);
  tournament(GameConfig::standard(2), {"random", "random"}, 3, 4, 2, dir);
  for (std::uint32_t g = 0; g < 3; ++g) EXPECT_TRUE(std::filesystem::exists(dir / game_log_name(g)));
  EXPECT_EQ(game_log_name(12), "game_000012.jsonl");
  std::filesystem::remove_all(dir);
}

TEST(Tournament, RejectsBadArguments) {
  EXPECT_THROW(tournament(GameConfig::standard(2), {"random", "random"}, 0, 1, 1), ConfigError);
  EXPECT_THROW(tournament(GameConfig::standard(5), {"random"}, 1, 1, 1), ConfigError);
}

}  // namespace
}  // namespace aljabar
