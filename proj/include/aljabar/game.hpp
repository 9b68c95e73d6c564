#pragma once

// Value types of the game: configuration, moves, events and the full game state.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "aljabar/group.hpp"
#include "aljabar/multiset.hpp"
#include "aljabar/palette.hpp"
#include "aljabar/rng.hpp"

namespace aljabar {

struct GameConfig {
  GroupParams params{2, 3};
  std::uint32_t players = 2;
  std::uint32_t copies = 10;  // A: copies of every non-identity color in the pool
  std::uint64_t seed = 0;
  Palette palette = standard_palette(GroupParams{2, 3});

  /// Builds a config with the standard palette for `params`.
  static GameConfig make(GroupParams params, std::uint32_t players, std::uint32_t copies,
                         std::uint64_t seed) {
    params.validate();
    return GameConfig{params, players, copies, seed, standard_palette(params)};
  }

  static GameConfig standard(std::uint32_t players = 2, std::uint64_t seed = 0) {
    return make({2, 3}, players, 10, seed);
  }

  /// The standard game is for 2 to 4 players; other groups are bounded by the pool only.
  std::optional<std::uint32_t> max_players() const {
    if (params.is_standard()) return 4;
    return std::nullopt;
  }

  /// Checks every setup rule; throws ConfigError naming the violated rule.
  void validate() const {
    params.validate();
    if (!(palette.params() == params)) throw ConfigError("palette does not match group parameters");
    if (players < 2) throw ConfigError("at least 2 players are required");
    if (auto mx = max_players(); mx && players > *mx)
      throw ConfigError("the standard game is played by 2 to 4 players, got " +
                        std::to_string(players));
    if (std::uint64_t{copies} < std::uint64_t{params.m} * players)
      throw ConfigError("copies per color A=" + std::to_string(copies) +
                        " must be at least m x players = " +
                        std::to_string(std::uint64_t{params.m} * players));
  }

  friend bool operator==(const GameConfig& a, const GameConfig& b) {
    return a.params == b.params && a.players == b.players && a.copies == b.copies &&
           a.seed == b.seed;
  }
};

// ---------------------------------------------------------------------------
// Moves

struct Exchange {
  Multiset give;  // from the acting player's hand
  Multiset take;  // from the Center
  friend bool operator==(const Exchange&, const Exchange&) = default;
};

/// The n primaries plus the all-(m-1) piece, exchanged for one identity piece.
struct Spectrum {
  friend bool operator==(const Spectrum&, const Spectrum&) = default;
};

/// Final round only, when no exchange or Spectrum is available.
struct Pass {
  friend bool operator==(const Pass&, const Pass&) = default;
};

using Move = std::variant<Exchange, Spectrum, Pass>;

inline bool is_null_exchange(const Move& m) {
  auto* ex = std::get_if<Exchange>(&m);
  return ex && ex->give == ex->take;
}

/// Canonical move order: exchanges by (give, take), then Spectrum, then Pass.
inline bool move_less(const Move& a, const Move& b) {
  if (a.index() != b.index()) return a.index() < b.index();
  if (auto* ea = std::get_if<Exchange>(&a)) {
    const auto& eb = std::get<Exchange>(b);
    if (ea->give < eb.give) return true;
    if (eb.give < ea->give) return false;
    return ea->take < eb.take;
  }
  return false;
}

enum class RejectReason {
  kGameFinished,
  kUnknownPlayer,
  kNotYourTurn,
  kSizeOutOfRange,
  kSumMismatch,
  kNotInHand,
  kNotInCenter,
  kSpectrumUnavailable,
  kPassOutsideFinalRound,
  kPassWithLegalMove,
};

inline std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::kGameFinished: return "game finished";
    case RejectReason::kUnknownPlayer: return "unknown player";
    case RejectReason::kNotYourTurn: return "not your turn";
    case RejectReason::kSizeOutOfRange: return "size out of range";
    case RejectReason::kSumMismatch: return "sum mismatch";
    case RejectReason::kNotInHand: return "pieces not in hand";
    case RejectReason::kNotInCenter: return "pieces not in center";
    case RejectReason::kSpectrumUnavailable: return "spectrum pieces not in hand";
    case RejectReason::kPassOutsideFinalRound: return "pass outside final round";
    case RejectReason::kPassWithLegalMove: return "pass while a legal move exists";
  }
  return "rejected";
}

struct Rejection {
  RejectReason reason;
  std::string detail;

  std::string message() const {
    std::string s(to_string(reason));
    if (!detail.empty()) s += ": " + detail;
    return s;
  }
};

/// Thrown by apply_move and friends when handed an illegal action.
class IllegalMove : public RuleError {
 public:
  explicit IllegalMove(Rejection r) : RuleError(r.message()), rejection_(std::move(r)) {}
  const Rejection& rejection() const { return rejection_; }

 private:
  Rejection rejection_;
};

// ---------------------------------------------------------------------------
// Events

enum class DrawCause { kVoluntary, kPreMove, kStuck };
enum class SignalCause { kChoice, kOnePiece, kForced, kStalemate };

inline std::string_view to_string(DrawCause c) {
  switch (c) {
    case DrawCause::kVoluntary: return "voluntary";
    case DrawCause::kPreMove: return "pre_move";
    case DrawCause::kStuck: return "stuck";
  }
  return "?";
}

inline std::string_view to_string(SignalCause c) {
  switch (c) {
    case SignalCause::kChoice: return "choice";
    case SignalCause::kOnePiece: return "one_piece";
    case SignalCause::kForced: return "forced";
    case SignalCause::kStalemate: return "stalemate";
  }
  return "?";
}

namespace ev {

struct GameStarted {
  GroupParams params;
  std::uint32_t players = 0;
  std::uint32_t copies = 0;
  std::uint64_t seed = 0;
  bool scripted = false;  // hands and Center piece were given, not drawn
  friend bool operator==(const GameStarted&, const GameStarted&) = default;
};

struct Dealt {
  std::uint32_t player = 0;
  std::vector<ColorVector> pieces;  // in draw order
  std::vector<std::uint32_t> bag_indices;
  friend bool operator==(const Dealt&, const Dealt&) = default;
};

struct CenterInitialized {
  ColorVector piece;
  std::uint32_t bag_index = 0;
  friend bool operator==(const CenterInitialized&, const CenterInitialized&) = default;
};

struct Drew {
  std::uint32_t player = 0;
  ColorVector piece;
  std::uint32_t bag_index = 0;
  DrawCause cause = DrawCause::kVoluntary;
  friend bool operator==(const Drew&, const Drew&) = default;
};

struct Announced {
  std::uint32_t player = 0;
  SignalCause cause = SignalCause::kChoice;
  std::uint32_t round = 0;
  friend bool operator==(const Announced&, const Announced&) = default;
};

struct Exchanged {
  std::uint32_t player = 0;
  Multiset give;
  Multiset take;
  std::uint32_t pre_draws = 0;
  friend bool operator==(const Exchanged&, const Exchanged&) = default;
};

struct SpectrumPlayed {
  std::uint32_t player = 0;
  bool black_from_center = true;
  std::uint32_t pre_draws = 0;
  friend bool operator==(const SpectrumPlayed&, const SpectrumPlayed&) = default;
};

struct Passed {
  std::uint32_t player = 0;
  std::uint32_t pre_draws = 0;
  friend bool operator==(const Passed&, const Passed&) = default;
};

struct Canceled {
  ColorVector color;
  std::uint32_t tuples = 0;
  bool exempt = false;
  friend bool operator==(const Canceled&, const Canceled&) = default;
};

struct ForcedDraw {
  std::uint32_t player = 0;
  std::uint32_t count = 0;
  friend bool operator==(const ForcedDraw&, const ForcedDraw&) = default;
};

struct GameEnded {
  std::vector<std::uint32_t> winners;
  std::vector<std::uint32_t> hand_sizes;
  std::uint32_t turns = 0;
  friend bool operator==(const GameEnded&, const GameEnded&) = default;
};

}  // namespace ev

using GameEvent = std::variant<ev::GameStarted, ev::Dealt, ev::CenterInitialized, ev::Drew,
                               ev::Announced, ev::Exchanged, ev::SpectrumPlayed, ev::Passed,
                               ev::Canceled, ev::ForcedDraw, ev::GameEnded>;

// ---------------------------------------------------------------------------
// Turn results

struct Cancellation {
  ColorVector color;
  std::uint32_t tuples = 0;
  bool exempt = false;
  friend bool operator==(const Cancellation&, const Cancellation&) = default;
};

struct FinalTrigger {
  std::uint32_t player = 0;
  SignalCause cause = SignalCause::kChoice;
  friend bool operator==(const FinalTrigger&, const FinalTrigger&) = default;
};

struct TurnOutcome {
  std::uint32_t voluntary_draws = 0;
  std::vector<Cancellation> cancellations;
  std::uint32_t blacks_added_to_center = 0;
  std::vector<std::uint32_t> forced_draws;  // per player; zero for the actor
  std::vector<ColorVector> exempt_colors;
  std::vector<FinalTrigger> announcements;
  bool black_from_center = true;  // Spectrum only

  std::uint32_t total_cancellations() const {
    std::uint32_t t = 0;
    for (const auto& c : cancellations) t += c.tuples;
    return t;
  }
};

// ---------------------------------------------------------------------------
// State

struct GameState {
  GameConfig config;
  Multiset bag;
  std::vector<Multiset> hands;
  Multiset center;
  ColorVector center_sum;      // value of the initial colored Center piece
  Multiset canceled;           // every piece removed by cancellation so far
  std::uint64_t black_supply = 0;  // identity pieces dispensed into play
  std::uint32_t turn = 0;
  std::uint32_t round = 1;
  std::uint32_t first_player = 0;
  std::uint32_t turns_played = 0;
  bool acted_this_turn = false;  // a draw already happened in the current turn
  std::uint64_t fewest_in_hands = 0;  // lowest total of all hands seen so far
  std::uint32_t progress_round = 1;   // round in which that low was last reached
  std::optional<std::uint32_t> final_round;
  std::optional<FinalTrigger> final_trigger;
  bool finished = false;
  Rng rng;
  std::vector<GameEvent> log;

  const GroupParams& params() const { return config.params; }
  std::uint32_t players() const { return config.players; }
  std::uint32_t max_move_size() const { return config.params.n; }
  bool final_round_active() const { return final_round.has_value(); }

  friend bool operator==(const GameState&, const GameState&) = default;
};

}  // namespace aljabar
