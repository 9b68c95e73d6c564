#pragma once

// Bot policies. Each policy owns an Rng separate from the game's, so swapping policies
// never perturbs deals or draws.

#include <memory>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "aljabar/rules.hpp"

namespace aljabar {

/// Voluntary draws a bot may request in one turn.
inline constexpr std::uint32_t kMaxBotPreDraws = 3;

struct Decision {
  std::uint32_t pre_draws = 0;
  Move move;
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string_view name() const = 0;
  /// Asked at the start of the bot's turn while announcing is allowed.
  virtual bool wants_announce(const GameState& s, std::uint32_t player) = 0;
  /// Requires at least one legal move for `player`.
  virtual Decision decide(const GameState& s, std::uint32_t player) = 0;
};

/// Legal moves with null exchanges removed, unless nothing else is available.
inline std::vector<Move> candidate_moves(const GameState& s, std::uint32_t player) {
  auto moves = enumerate_moves(s, player);
  std::vector<Move> out;
  for (auto& m : moves)
    if (!is_null_exchange(m)) out.push_back(m);
  return out.empty() ? moves : out;
}

/// Lexicographic greedy objective: (net hand reduction, cancellations caused, -pieces taken).
struct MoveScore {
  int net_reduction = 0;
  std::uint32_t cancellations = 0;
  int taken = 0;

  auto key() const { return std::make_tuple(net_reduction, cancellations, -taken); }
  friend bool operator==(const MoveScore& a, const MoveScore& b) { return a.key() == b.key(); }
  friend bool operator<(const MoveScore& a, const MoveScore& b) { return a.key() < b.key(); }
};

inline MoveScore score_move(const GameState& s, std::uint32_t /*player*/, const Move& move) {
  const auto& p = s.params();
  if (auto* ex = std::get_if<Exchange>(&move)) {
    Multiset center = s.center;
    center.remove(ex->take);
    center.add(ex->give);
    auto c = process_cancellations(center, ex->give);
    std::uint32_t total = 0;
    for (const auto& cc : c.cancellations) total += cc.tuples;
    return {static_cast<int>(ex->give.size()) - static_cast<int>(ex->take.size()), total,
            static_cast<int>(ex->take.size())};
  }
  if (std::holds_alternative<Spectrum>(move)) {
    Multiset center = s.center;
    const auto black = ColorVector::identity(p);
    if (center.count(black)) center.remove(black);
    Multiset placed(p, spectrum_set(p));
    center.add(placed);
    auto c = process_cancellations(center, placed);
    std::uint32_t total = 0;
    for (const auto& cc : c.cancellations) total += cc.tuples;
    return {static_cast<int>(p.n), total, 1};
  }
  return {0, 0, 0};
}

/// Best move under the greedy objective; ties go to the earliest move in canonical order.
inline Move greedy_choice(const GameState& s, std::uint32_t player) {
  auto moves = candidate_moves(s, player);
  if (moves.empty()) throw RuleError("greedy policy called without a legal move");
  std::size_t best = 0;
  MoveScore best_score = score_move(s, player, moves[0]);
  for (std::size_t i = 1; i < moves.size(); ++i) {
    auto sc = score_move(s, player, moves[i]);
    if (best_score < sc) {
      best = i;
      best_score = sc;
    }
  }
  return moves[best];
}

class RandomPolicy : public Policy {
 public:
  explicit RandomPolicy(std::uint64_t seed) : rng_(seed) {}
  std::string_view name() const override { return "random"; }

  bool wants_announce(const GameState& s, std::uint32_t player) override {
    if (!has_exchange_or_spectrum(s.hands[player], s.center, s.max_move_size())) return true;
    return rng_.below(2) == 0;
  }

  Decision decide(const GameState& s, std::uint32_t player) override {
    auto moves = candidate_moves(s, player);
    if (moves.empty()) throw RuleError("random policy called without a legal move");
    return {0, moves[rng_.below(moves.size())]};
  }

 private:
  Rng rng_;
};

class GreedyPolicy : public Policy {
 public:
  std::string_view name() const override { return "greedy"; }

  /// Announces when stuck, when the best move leaves a single piece, or when no move can
  /// shrink the hand any further (otherwise two greedy bots holding few pieces can trade
  /// identity pieces forever).
  bool wants_announce(const GameState& s, std::uint32_t player) override {
    auto moves = candidate_moves(s, player);
    if (moves.empty()) return true;
    auto best = score_move(s, player, greedy_choice(s, player));
    return best.net_reduction <= 0 ||
           static_cast<int>(s.hands[player].size()) - best.net_reduction == 1;
  }

  Decision decide(const GameState& s, std::uint32_t player) override {
    return {0, greedy_choice(s, player)};
  }
};

inline std::vector<std::string> policy_names() { return {"random", "greedy"}; }

/// Throws std::invalid_argument for unknown names.
inline std::unique_ptr<Policy> make_policy(std::string_view name, std::uint64_t seed) {
  if (name == "random") return std::make_unique<RandomPolicy>(seed);
  if (name == "greedy") return std::make_unique<GreedyPolicy>();
  throw std::invalid_argument("unknown policy '" + std::string(name) + "' (expected random or greedy)");
}

}  // namespace aljabar
