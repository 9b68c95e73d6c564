#pragma once

// Helpers shared by the test suites and the acceptance binary: short-code notation,
// hand-built states, a brute-force move oracle and the scripted-deal searcher.

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "aljabar/event_log.hpp"
#include "aljabar/rules.hpp"

namespace aljabar::testing {

inline const Palette& std_palette() {
  static const Palette pal = standard_palette({2, 3});
  return pal;
}

/// "R B K" -> multiset, in the standard palette unless another one is given.
inline Multiset ms(const std::string& codes, const Palette& pal = std_palette()) {
  std::istringstream is(codes);
  std::vector<std::string> parts;
  for (std::string c; is >> c;) parts.push_back(c);
  return pal.parse_multiset(parts);
}

inline ColorVector col(const std::string& code, const Palette& pal = std_palette()) { return pal.parse(code); }

/// A standard two-player game with player 1 to act holding `hand` against `center`.
/// Only hands, Center and turn flags are meaningful; use for legality questions.
inline GameState position(const std::string& hand, const std::string& center, std::uint32_t players = 2,
                          const Palette& pal = std_palette()) {
  GameState s = new_game(GameConfig::make(pal.params(), players, 10, 1));
  s.hands[s.turn] = ms(hand, pal);
  s.center = ms(center, pal);
  s.center_sum = s.center.sum();
  return s;
}

/// A canonical, comparable key for a move.
inline std::string move_key(const Move& m, const Palette& pal) {
  if (auto* ex = std::get_if<Exchange>(&m)) return "X " + pal.format(ex->give) + " | " + pal.format(ex->take);
  if (std::holds_alternative<Spectrum>(m)) return "S";
  return "P";
}

/// Every legal move, found by trying all index subsets of the hand and of the Center.
inline std::set<std::string> brute_force_moves(const GameState& s, std::uint32_t player) {
  const auto& pal = s.config.palette;
  const auto n = s.max_move_size();
  std::set<std::string> out;
  if (s.finished) return out;
  const auto hand = s.hands[player].pieces();
  const auto center = s.center.pieces();
  auto subsets = [&](const std::vector<ColorVector>& v) {
    std::vector<Multiset> res;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << v.size()); ++mask) {
      if (static_cast<std::uint32_t>(__builtin_popcountll(mask)) > n) continue;
      Multiset m(s.params());
      for (std::size_t i = 0; i < v.size(); ++i)
        if (mask >> i & 1) m.add(v[i]);
      res.push_back(m);
    }
    return res;
  };
  const auto gives = subsets(hand);
  const auto takes = subsets(center);
  for (const auto& g : gives)
    for (const auto& t : takes)
      if (g.sum() == t.sum()) out.insert(move_key(Exchange{g, t}, pal));
  std::vector<ColorVector> spec = spectrum_set(s.params());
  bool has_all = true;
  for (const auto& c : spec) has_all = has_all && std::count(hand.begin(), hand.end(), c) > 0;
  if (has_all) out.insert("S");
  if (out.empty() && s.final_round_active()) out.insert("P");
  return out;
}

/// Multiset of `size` uniformly random pieces.
inline Multiset random_multiset(Rng& rng, GroupParams p, std::size_t size) {
  Multiset m(p);
  for (std::size_t i = 0; i < size; ++i) m.add(ColorVector::from_index(p, static_cast<std::uint32_t>(rng.below(p.order()))));
  return m;
}

// ---------------------------------------------------------------------------
// Scripted-deal search for the shortest possible standard game.

struct ScriptedStep {
  enum Kind { kMove, kResolveStuck } kind = kMove;
  Move move;
};

struct ShortGame {
  std::vector<Multiset> hands;
  ColorVector center_piece;
  std::vector<ScriptedStep> steps;
  GameState final_state;
  std::uint64_t deals_tried = 0;
};

namespace detail {

/// Plays out from `s`: every option of the first player to act, then for everyone else the
/// engine-mandated action (stuck resolution) or the first move in canonical order.
inline bool search_turns(GameState& s, std::uint32_t max_turns, std::vector<ScriptedStep>& path) {
  if (s.finished) return s.turns_played <= max_turns;
  if (s.turns_played >= max_turns) return false;
  const auto p = s.turn;
  if (is_stuck(s, p)) {
    GameState t = s;
    resolve_stuck(t, p);
    path.push_back({ScriptedStep::kResolveStuck, {}});
    if (search_turns(t, max_turns, path)) {
      s = std::move(t);
      return true;
    }
    path.pop_back();
    return false;
  }
  auto moves = enumerate_moves(s, p);
  if (s.turns_played > 0 && moves.size() > 1) moves.resize(1);
  for (const auto& m : moves) {
    GameState t = s;
    apply_move(t, p, m);
    path.push_back({ScriptedStep::kMove, m});
    if (search_turns(t, max_turns, path)) {
      s = std::move(t);
      return true;
    }
    path.pop_back();
  }
  return false;
}

}  // namespace detail

/// Searches standard-palette deals for a 4-player game that ends within `max_turns` turns.
/// Deal family: one player (the second to act) holds 13 pieces drawn from the three colors of
/// a Fano line, the bag holds the other 17 pieces of those colors, the Center starts with a color
/// X off the line, and the 39 remaining pieces are dealt round-robin in sorted order to the
/// other three players. Every (line, X, composition) is tried in a fixed order; for each deal
/// every opening move is tried, with later turns played by the first canonical move.
inline std::optional<ShortGame> search_short_game(std::uint32_t max_turns, std::uint64_t seed) {
  const GroupParams p{2, 3};
  const auto config = GameConfig::make(p, 4, 10, seed);
  std::uint64_t tried = 0;
  for (const auto& line : fano_lines(p)) {
    for (std::uint32_t xi = 1; xi < p.order(); ++xi) {
      const auto x = ColorVector::from_index(p, xi);
      if (std::find(line.begin(), line.end(), x) != line.end()) continue;
      for (std::uint32_t a = 0; a <= 10; ++a) {
        for (std::uint32_t b = 0; b <= 10 && a + b <= 13; ++b) {
          const std::uint32_t c = 13 - a - b;
          if (c > 10) continue;
          Multiset subgroup_hand(p);
          subgroup_hand.add(line[0], a);
          subgroup_hand.add(line[1], b);
          subgroup_hand.add(line[2], c);
          std::vector<ColorVector> rest;
          for (std::uint32_t ci = 1; ci < p.order(); ++ci) {
            const auto cc = ColorVector::from_index(p, ci);
            if (std::find(line.begin(), line.end(), cc) != line.end()) continue;
            for (std::uint32_t k = 0; k < config.copies - (cc == x ? 1 : 0); ++k) rest.push_back(cc);
          }
          // seats in play order after the second player: 3, 0, and the first player 1
          std::vector<Multiset> hands(4, Multiset(p));
          const std::uint32_t others[3] = {1, 3, 0};
          for (std::size_t i = 0; i < rest.size(); ++i) hands[others[i % 3]].add(rest[i]);
          hands[2] = subgroup_hand;
          ++tried;
          GameState s = new_game_from_deal(config, hands, x);
          std::vector<ScriptedStep> path;
          if (detail::search_turns(s, max_turns, path))
            return ShortGame{hands, x, std::move(path), std::move(s), tried};
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace aljabar::testing
