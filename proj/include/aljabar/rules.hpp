#pragma once

// The game state machine: setup, move legality and enumeration, turn application,
// cancellations, draws, final-round signals and scoring.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "aljabar/game.hpp"

namespace aljabar {

/// Full rounds without the total of all hands reaching a new low before the engine declares
/// a stalemate and makes the next round final.
inline constexpr std::uint32_t kStalemateRounds = 50;

/// Pieces dealt to each player: m^(n+1) - m - 1.
inline std::uint64_t deal_size(const GameConfig& config) {
  const auto& p = config.params;
  return std::uint64_t{p.order()} * p.m - p.m - 1;
}

/// A copies of every non-identity color. Identity pieces are unlimited and not pooled.
inline Multiset pool_contents(const GameConfig& config) {
  config.validate();
  Multiset pool(config.params);
  for (std::uint32_t i = 1; i < config.params.order(); ++i)
    pool.add(ColorVector::from_index(config.params, i), config.copies);
  return pool;
}

namespace detail {

inline ColorVector draw_from_bag(GameState& s, std::uint32_t& index_out) {
  index_out = static_cast<std::uint32_t>(s.rng.below(s.bag.size()));
  return s.bag.take_at(index_out);
}

// Calls fn(sub) for every distinct nonempty sub-multiset of `from` with at most max_size pieces,
// in canonical order.
inline void for_each_submultiset(const Multiset& from, std::uint32_t max_size,
                                 const std::function<void(const Multiset&)>& fn) {
  const auto& runs = from.runs();
  Multiset cur(from.params());
  std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t i, std::uint32_t room) {
    if (i == runs.size()) {
      if (!cur.empty()) fn(cur);
      return;
    }
    const auto limit = std::min(room, runs[i].count);
    for (std::uint32_t k = limit + 1; k-- > 0;) {
      cur.add(runs[i].color, k);
      rec(i + 1, room - k);
      cur.remove(runs[i].color, k);
    }
  };
  rec(0, max_size);
}

inline std::vector<bool> submultiset_sums(const Multiset& from, std::uint32_t max_size) {
  std::vector<bool> sums(from.params().order(), false);
  for_each_submultiset(from, max_size, [&](const Multiset& s) { sums[s.sum().index()] = true; });
  return sums;
}

}  // namespace detail

/// True if `hand` holds every piece of the Spectrum.
inline bool has_spectrum(const Multiset& hand) {
  return hand.contains(Multiset(hand.params(), spectrum_set(hand.params())));
}

/// True if some Exchange or the Spectrum is available between `hand` and `center`.
inline bool has_exchange_or_spectrum(const Multiset& hand, const Multiset& center,
                                     std::uint32_t max_size) {
  if (has_spectrum(hand)) return true;
  auto hs = detail::submultiset_sums(hand, max_size);
  auto cs = detail::submultiset_sums(center, max_size);
  for (std::size_t i = 0; i < hs.size(); ++i)
    if (hs[i] && cs[i]) return true;
  return false;
}

/// Every distinct equal-sum exchange of 1..max_size pieces each way, in canonical order.
inline std::vector<Exchange> legal_exchanges(const Multiset& hand, const Multiset& center,
                                             std::uint32_t max_size) {
  std::unordered_map<std::uint32_t, std::vector<Multiset>> center_by_sum;
  detail::for_each_submultiset(center, max_size, [&](const Multiset& s) {
    center_by_sum[s.sum().index()].push_back(s);
  });
  std::vector<Exchange> out;
  detail::for_each_submultiset(hand, max_size, [&](const Multiset& give) {
    auto it = center_by_sum.find(give.sum().index());
    if (it == center_by_sum.end()) return;
    for (const auto& take : it->second) out.push_back({give, take});
  });
  std::sort(out.begin(), out.end(), [](const Exchange& a, const Exchange& b) {
    if (a.give < b.give) return true;
    if (b.give < a.give) return false;
    return a.take < b.take;
  });
  return out;
}

inline GameState new_game(const GameConfig& config) {
  Multiset pool = pool_contents(config);
  const auto per_player = deal_size(config);
  if (per_player * config.players + 1 > pool.size())
    throw ConfigError("pool of " + std::to_string(pool.size()) + " pieces cannot deal " +
                      std::to_string(per_player) + " to each of " +
                      std::to_string(config.players) + " players plus one Center piece");

  GameState s;
  s.config = config;
  s.bag = std::move(pool);
  s.hands.assign(config.players, Multiset(config.params));
  s.center = Multiset(config.params);
  s.canceled = Multiset(config.params);
  s.rng = Rng(config.seed);
  s.log.push_back(ev::GameStarted{config.params, config.players, config.copies, config.seed});

  for (std::uint32_t p = 0; p < config.players; ++p) {
    ev::Dealt d{p, {}, {}};
    for (std::uint64_t k = 0; k < per_player; ++k) {
      std::uint32_t idx = 0;
      auto c = detail::draw_from_bag(s, idx);
      s.hands[p].add(c);
      d.pieces.push_back(c);
      d.bag_indices.push_back(idx);
    }
    s.log.push_back(std::move(d));
  }

  std::uint32_t idx = 0;
  auto first = detail::draw_from_bag(s, idx);
  const auto black = ColorVector::identity(config.params);
  s.center.add(first);
  s.center.add(black);
  s.center_sum = first;
  s.black_supply = 1;
  s.log.push_back(ev::CenterInitialized{first, idx});

  // Player 0 deals; play starts to the dealer's left.
  s.first_player = 1 % config.players;
  s.turn = s.first_player;
  s.fewest_in_hands = per_player * config.players;
  return s;
}

/// Starts a game from a prescribed deal. The bag holds the rest of the pool; later draws use
/// the seeded generator. Hands need not have deal_size pieces.
inline GameState new_game_from_deal(const GameConfig& config, const std::vector<Multiset>& hands,
                                    const ColorVector& center_piece) {
  Multiset pool = pool_contents(config);
  if (hands.size() != config.players)
    throw ConfigError("scripted deal has " + std::to_string(hands.size()) + " hands for " +
                      std::to_string(config.players) + " players");
  if (center_piece.is_identity()) throw ConfigError("the initial Center piece must be colored");
  GameState s;
  s.config = config;
  s.center = Multiset(config.params);
  s.canceled = Multiset(config.params);
  s.rng = Rng(config.seed);
  s.log.push_back(ev::GameStarted{config.params, config.players, config.copies, config.seed, true});
  for (std::uint32_t p = 0; p < config.players; ++p) {
    if (!pool.contains(hands[p])) throw ConfigError("scripted hands exceed the pool");
    pool.remove(hands[p]);
    s.log.push_back(ev::Dealt{p, hands[p].pieces(), {}});
  }
  if (pool.count(center_piece) == 0) throw ConfigError("scripted Center piece exceeds the pool");
  pool.remove(center_piece);
  s.bag = std::move(pool);
  s.hands = hands;
  s.center.add(center_piece);
  s.center.add(ColorVector::identity(config.params));
  s.center_sum = center_piece;
  s.black_supply = 1;
  s.log.push_back(ev::CenterInitialized{center_piece, 0});
  s.first_player = 1 % config.players;
  s.turn = s.first_player;
  for (const auto& h : hands) s.fewest_in_hands += h.size();
  return s;
}

namespace detail {

inline std::optional<Rejection> check_actor(const GameState& s, std::uint32_t player) {
  if (s.finished) return Rejection{RejectReason::kGameFinished, {}};
  if (player >= s.players())
    return Rejection{RejectReason::kUnknownPlayer, "player " + std::to_string(player)};
  if (player != s.turn)
    return Rejection{RejectReason::kNotYourTurn, "player " + std::to_string(s.turn) + " is to act"};
  return std::nullopt;
}

}  // namespace detail

inline std::optional<Rejection> validate_move(const GameState& s, std::uint32_t player,
                                              const Move& move) {
  if (auto r = detail::check_actor(s, player)) return r;
  const auto n = s.max_move_size();
  const auto& hand = s.hands[player];

  if (auto* ex = std::get_if<Exchange>(&move)) {
    if (!(ex->give.params() == s.params()) || !(ex->take.params() == s.params()))
      throw DimensionError("exchange pieces are not from the game's group");
    if (ex->give.size() < 1 || ex->give.size() > n)
      return Rejection{RejectReason::kSizeOutOfRange,
                       "give " + std::to_string(ex->give.size()) + " pieces, allowed 1.." +
                           std::to_string(n)};
    if (ex->take.size() < 1 || ex->take.size() > n)
      return Rejection{RejectReason::kSizeOutOfRange,
                       "take " + std::to_string(ex->take.size()) + " pieces, allowed 1.." +
                           std::to_string(n)};
    if (!(ex->give.sum() == ex->take.sum())) return Rejection{RejectReason::kSumMismatch, {}};
    if (!hand.contains(ex->give)) return Rejection{RejectReason::kNotInHand, {}};
    if (!s.center.contains(ex->take)) return Rejection{RejectReason::kNotInCenter, {}};
    return std::nullopt;
  }
  if (std::holds_alternative<Spectrum>(move)) {
    if (!has_spectrum(hand)) return Rejection{RejectReason::kSpectrumUnavailable, {}};
    return std::nullopt;
  }
  if (!s.final_round_active()) return Rejection{RejectReason::kPassOutsideFinalRound, {}};
  if (has_exchange_or_spectrum(hand, s.center, n))
    return Rejection{RejectReason::kPassWithLegalMove, {}};
  return std::nullopt;
}

/// All legal moves for `player` against the current hand and Center, in canonical order.
inline std::vector<Move> enumerate_moves(const GameState& s, std::uint32_t player) {
  std::vector<Move> out;
  if (s.finished || player >= s.players()) return out;
  const auto& hand = s.hands[player];
  for (auto& ex : legal_exchanges(hand, s.center, s.max_move_size())) out.emplace_back(std::move(ex));
  if (has_spectrum(hand)) out.emplace_back(Spectrum{});
  if (out.empty() && s.final_round_active()) out.emplace_back(Pass{});
  return out;
}

struct CancellationResult {
  Multiset center;
  std::vector<Cancellation> cancellations;
  std::uint32_t blacks_added = 0;
  std::uint32_t forcing_tuples = 0;  // cancellations of non-exempt colors
  std::vector<ColorVector> exempt_colors;
};

/// Cancels floor(k/m) m-tuples of every non-identity color in `center`, replacing each with one
/// identity piece. A color is exempt from forcing draws when `placed_from_hand` holds at least m
/// copies of it.
inline CancellationResult process_cancellations(const Multiset& center,
                                                const Multiset& placed_from_hand) {
  const auto& p = center.params();
  CancellationResult r{Multiset(p), {}, 0, 0, {}};
  for (const auto& run : center.runs()) {
    if (run.color.is_identity()) {
      r.center.add(run.color, run.count);
      continue;
    }
    const std::uint32_t tuples = run.count / p.m;
    r.center.add(run.color, run.count - tuples * p.m);
    if (tuples == 0) continue;
    const bool exempt = placed_from_hand.count(run.color) >= p.m;
    r.cancellations.push_back({run.color, tuples, exempt});
    r.blacks_added += tuples;
    if (exempt)
      r.exempt_colors.push_back(run.color);
    else
      r.forcing_tuples += tuples;
  }
  r.center.add(ColorVector::identity(p), r.blacks_added);
  return r;
}

namespace detail {

inline void end_turn(GameState& s, std::uint32_t actor, TurnOutcome& out) {
  if (s.hands[actor].size() == 1 && !s.final_round_active()) {
    s.final_round = s.round;
    s.final_trigger = FinalTrigger{actor, SignalCause::kOnePiece};
    s.log.push_back(ev::Announced{actor, SignalCause::kOnePiece, s.round});
    out.announcements.push_back(*s.final_trigger);
  }
  std::uint64_t in_hands = 0;
  for (const auto& h : s.hands) in_hands += h.size();
  if (in_hands < s.fewest_in_hands) {
    s.fewest_in_hands = in_hands;
    s.progress_round = s.round;
  }
  s.turn = (s.turn + 1) % s.players();
  s.acted_this_turn = false;
  ++s.turns_played;
  if (s.turn == s.first_player) {
    if (s.final_round_active()) {
      s.finished = true;
    } else {
      ++s.round;
      if (s.round - s.progress_round > kStalemateRounds) {
        s.final_round = s.round;
        s.final_trigger = FinalTrigger{s.first_player, SignalCause::kStalemate};
        s.log.push_back(ev::Announced{s.first_player, SignalCause::kStalemate, s.round});
        out.announcements.push_back(*s.final_trigger);
      }
    }
  }
  if (s.finished) {
    ev::GameEnded end;
    std::size_t best = SIZE_MAX;
    for (const auto& h : s.hands) best = std::min(best, h.size());
    for (std::uint32_t p = 0; p < s.players(); ++p) {
      end.hand_sizes.push_back(static_cast<std::uint32_t>(s.hands[p].size()));
      if (s.hands[p].size() == best) end.winners.push_back(p);
    }
    end.turns = s.turns_played;
    s.log.push_back(std::move(end));
  }
}

inline std::uint32_t draw_pieces(GameState& s, std::uint32_t player, std::uint32_t count,
                                 DrawCause cause) {
  std::uint32_t drawn = 0;
  for (; drawn < count && !s.bag.empty(); ++drawn) {
    std::uint32_t idx = 0;
    auto c = draw_from_bag(s, idx);
    s.hands[player].add(c);
    s.log.push_back(ev::Drew{player, c, idx, cause});
  }
  if (drawn) s.acted_this_turn = true;
  return drawn;
}

}  // namespace detail

/// Voluntary draws outside apply_move: up to `count` random bag pieces into the hand of the
/// player to act. Returns how many were drawn (fewer if the bag runs out).
inline std::uint32_t draw(GameState& s, std::uint32_t player, std::uint32_t count) {
  if (auto r = detail::check_actor(s, player)) throw IllegalMove(*r);
  return detail::draw_pieces(s, player, count, DrawCause::kVoluntary);
}

/// Executes `pre_draws` voluntary draws, then `move`, cancellations, forced draws, end-of-turn
/// signals and the turn advance. On an illegal move the state is left unchanged and IllegalMove
/// is thrown.
inline TurnOutcome apply_move(GameState& s, std::uint32_t player, const Move& move,
                              std::uint32_t pre_draws = 0) {
  if (auto r = detail::check_actor(s, player)) throw IllegalMove(*r);

  const Rng saved_rng = s.rng;
  const Multiset saved_bag = s.bag;
  const Multiset saved_hand = s.hands[player];
  const std::size_t saved_log = s.log.size();
  const bool saved_acted = s.acted_this_turn;

  TurnOutcome out;
  out.forced_draws.assign(s.players(), 0);
  out.voluntary_draws = detail::draw_pieces(s, player, pre_draws, DrawCause::kPreMove);

  if (auto r = validate_move(s, player, move)) {
    s.rng = saved_rng;
    s.bag = saved_bag;
    s.hands[player] = saved_hand;
    s.log.resize(saved_log);
    s.acted_this_turn = saved_acted;
    throw IllegalMove(*r);
  }

  const auto& params = s.params();
  const auto black = ColorVector::identity(params);
  auto& hand = s.hands[player];
  Multiset placed(params);

  if (auto* ex = std::get_if<Exchange>(&move)) {
    s.center.remove(ex->take);
    hand.remove(ex->give);
    s.center.add(ex->give);
    hand.add(ex->take);
    placed = ex->give;
    s.log.push_back(ev::Exchanged{player, ex->give, ex->take, out.voluntary_draws});
  } else if (std::holds_alternative<Spectrum>(move)) {
    placed = Multiset(params, spectrum_set(params));
    hand.remove(placed);
    out.black_from_center = s.center.count(black) > 0;
    if (out.black_from_center)
      s.center.remove(black);
    else
      ++s.black_supply;
    hand.add(black);
    s.center.add(placed);
    s.log.push_back(ev::SpectrumPlayed{player, out.black_from_center, out.voluntary_draws});
  } else {
    s.log.push_back(ev::Passed{player, out.voluntary_draws});
  }

  if (!std::holds_alternative<Pass>(move)) {
    auto c = process_cancellations(s.center, placed);
    for (const auto& cc : c.cancellations) {
      s.canceled.add(cc.color, cc.tuples * params.m);
      s.log.push_back(ev::Canceled{cc.color, cc.tuples, cc.exempt});
    }
    s.center = std::move(c.center);
    s.black_supply += c.blacks_added;
    out.cancellations = std::move(c.cancellations);
    out.blacks_added_to_center = c.blacks_added;
    out.exempt_colors = std::move(c.exempt_colors);
    if (c.forcing_tuples > 0) {
      for (std::uint32_t p = 0; p < s.players(); ++p) {
        if (p == player) continue;
        s.hands[p].add(black, c.forcing_tuples);
        s.black_supply += c.forcing_tuples;
        out.forced_draws[p] = c.forcing_tuples;
        s.log.push_back(ev::ForcedDraw{p, c.forcing_tuples});
      }
    }
  }

  detail::end_turn(s, player, out);
  return out;
}

/// Precondition for resolve_stuck: outside the final round, more than n pieces, no move.
inline bool is_stuck(const GameState& s, std::uint32_t player) {
  return !s.finished && !s.final_round_active() && player < s.players() &&
         s.hands[player].size() > s.max_move_size() &&
         !has_exchange_or_spectrum(s.hands[player], s.center, s.max_move_size());
}

/// Draws one piece at a time until a move exists. If the bag empties first, the final round is
/// force-activated so the game still terminates.
inline void resolve_stuck(GameState& s, std::uint32_t player) {
  if (auto r = detail::check_actor(s, player)) throw IllegalMove(*r);
  if (!is_stuck(s, player))
    throw RuleError("resolve_stuck: player " + std::to_string(player) +
                    " is not stuck (final round, hand of n or fewer, or a move exists)");
  const auto n = s.max_move_size();
  while (!s.bag.empty()) {
    detail::draw_pieces(s, player, 1, DrawCause::kStuck);
    if (has_exchange_or_spectrum(s.hands[player], s.center, n)) return;
  }
  s.final_round = s.round;
  s.final_trigger = FinalTrigger{player, SignalCause::kForced};
  s.log.push_back(ev::Announced{player, SignalCause::kForced, s.round});
}

inline bool can_announce(const GameState& s, std::uint32_t player) {
  return !detail::check_actor(s, player) && !s.acted_this_turn && !s.final_round_active() &&
         s.hands[player].size() <= s.max_move_size();
}

/// Pre-turn declaration that the current round is the final one.
inline void announce_final(GameState& s, std::uint32_t player) {
  if (auto r = detail::check_actor(s, player)) throw IllegalMove(*r);
  if (s.final_round_active()) throw RuleError("final round already declared");
  if (s.acted_this_turn) throw RuleError("the final round must be announced before the turn");
  if (s.hands[player].size() > s.max_move_size())
    throw RuleError("announcing requires " + std::to_string(s.max_move_size()) +
                    " or fewer pieces in hand, player holds " +
                    std::to_string(s.hands[player].size()));
  s.final_round = s.round;
  s.final_trigger = FinalTrigger{player, SignalCause::kChoice};
  s.log.push_back(ev::Announced{player, SignalCause::kChoice, s.round});
}

/// Players holding the fewest pieces; ties share the victory.
inline std::vector<std::uint32_t> winner(const GameState& s) {
  if (!s.finished) throw RuleError("game is not finished");
  std::size_t best = SIZE_MAX;
  for (const auto& h : s.hands) best = std::min(best, h.size());
  std::vector<std::uint32_t> out;
  for (std::uint32_t p = 0; p < s.players(); ++p)
    if (s.hands[p].size() == best) out.push_back(p);
  return out;
}

/// Checks the state invariants; returns one message per violation.
inline std::vector<std::string> check_invariants(const GameState& s) {
  std::vector<std::string> bad;
  const auto& p = s.params();
  const auto black = ColorVector::identity(p);
  if (s.bag.count(black) != 0) bad.push_back("bag holds identity pieces");
  if (!(s.center.sum() == s.center_sum))
    bad.push_back("center sum changed from " + s.center_sum.tuple_string() + " to " +
                  s.center.sum().tuple_string());
  std::uint64_t blacks = s.center.count(black);
  for (const auto& h : s.hands) blacks += h.count(black);
  if (blacks != s.black_supply)
    bad.push_back("identity pieces in play " + std::to_string(blacks) + " != dispensed " +
                  std::to_string(s.black_supply));
  for (std::uint32_t i = 1; i < p.order(); ++i) {
    auto c = ColorVector::from_index(p, i);
    std::uint64_t total = s.bag.count(c) + s.center.count(c) + s.canceled.count(c);
    for (const auto& h : s.hands) total += h.count(c);
    if (total != s.config.copies)
      bad.push_back("color " + s.config.palette.code(c) + " accounts for " +
                    std::to_string(total) + " pieces, expected " +
                    std::to_string(s.config.copies));
    if (s.center.count(c) >= p.m)
      bad.push_back("center holds an uncancelled tuple of " + s.config.palette.code(c));
  }
  return bad;
}

}  // namespace aljabar
