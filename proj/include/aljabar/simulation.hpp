#pragma once

// Self-play harness: bot turns, full matches with per-turn rule checks, and seeded
// tournaments with CSV export.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "aljabar/event_log.hpp"
#include "aljabar/policies.hpp"
#include "aljabar/rules.hpp"

namespace aljabar {

inline constexpr std::uint32_t kMaxMatchTurns = 100000;

struct BotTurn {
  std::uint32_t player = 0;
  bool announced = false;
  bool resolved_stuck = false;
  Decision decision;
  std::optional<Rejection> rejection;  // set if the policy proposed an illegal move
  std::size_t hand_before_move = 0;    // after any voluntary draws
  std::size_t hand_after_move = 0;
  TurnOutcome outcome;
};

/// One complete turn for the player to act: optional announcement, stuck resolution, the
/// policy's move. Every engine call goes through the public rules API, so a human client
/// following the same steps produces the same log.
inline BotTurn play_bot_turn(GameState& s, Policy& policy) {
  BotTurn t;
  const auto p = s.turn;
  t.player = p;
  if (can_announce(s, p) && policy.wants_announce(s, p)) {
    announce_final(s, p);
    t.announced = true;
  }
  if (!s.final_round_active() &&
      !has_exchange_or_spectrum(s.hands[p], s.center, s.max_move_size())) {
    if (is_stuck(s, p)) {
      resolve_stuck(s, p);
      t.resolved_stuck = true;
    } else if (can_announce(s, p)) {
      announce_final(s, p);
      t.announced = true;
    }
  }
  t.decision = policy.decide(s, p);
  if (t.decision.pre_draws > kMaxBotPreDraws)
    throw RuleError("bot requested " + std::to_string(t.decision.pre_draws) + " voluntary draws");
  if (t.decision.pre_draws == 0) t.rejection = validate_move(s, p, t.decision.move);
  if (t.rejection) return t;
  const auto before = s.hands[p].size();
  t.outcome = apply_move(s, p, t.decision.move, t.decision.pre_draws);
  t.hand_before_move = before + t.outcome.voluntary_draws;
  t.hand_after_move = s.hands[p].size();
  return t;
}

struct MatchRecord {
  GroupParams params;
  std::uint32_t players = 0;
  std::uint32_t copies = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> policies;
  std::vector<std::uint32_t> winners;
  std::uint32_t turns = 0;
  std::uint32_t rounds = 0;
  std::vector<std::vector<std::uint32_t>> hand_sizes;  // all hands, after every turn
  std::vector<std::uint32_t> final_hands;
  std::uint32_t total_cancellations = 0;
  std::vector<std::uint32_t> forced_draws;  // received, per player
  int max_hand_reduction = 0;
  std::vector<std::string> violations;
  std::optional<FinalTrigger> final_trigger;

  friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

struct MatchOptions {
  std::ostream* log = nullptr;  // JSON-lines event log, if set
  bool check_invariants = true;
};

/// Seed of seat `seat`'s policy generator for a match seeded with `seed`.
inline std::uint64_t policy_seed(std::uint64_t seed, std::uint32_t seat) {
  return derive_seed(seed, 0x5eed0000ULL + seat);
}

/// Plays a whole game, checking legality, Center-sum and piece conservation, the per-turn
/// hand-reduction bound and post-cancellation counts on every turn.
inline MatchRecord run_match(GameConfig config, const std::vector<std::string>& policy_names,
                             std::uint64_t seed, const MatchOptions& opts = {}) {
  if (policy_names.size() != config.players)
    throw ConfigError(std::to_string(policy_names.size()) + " policies for " +
                      std::to_string(config.players) + " players");
  config.seed = seed;
  std::vector<std::unique_ptr<Policy>> bots;
  for (std::uint32_t i = 0; i < config.players; ++i)
    bots.push_back(make_policy(policy_names[i], policy_seed(seed, i)));

  GameState s = new_game(config);
  MatchRecord rec{config.params, config.players, config.copies, seed, policy_names, {}, 0, 0,
                  {}, {}, 0, std::vector<std::uint32_t>(config.players, 0), 0, {}, {}};
  const auto n = static_cast<int>(config.params.n);
  auto fail = [&](const std::string& what) {
    rec.violations.push_back("turn " + std::to_string(s.turns_played) + ": " + what);
  };
  if (opts.check_invariants)
    for (auto& v : check_invariants(s)) fail(v);

  while (!s.finished) {
    if (s.turns_played >= kMaxMatchTurns)
      throw RuleError("match with seed " + std::to_string(seed) + " exceeded " +
                      std::to_string(kMaxMatchTurns) + " turns");
    const auto t = play_bot_turn(s, *bots[s.turn]);
    if (t.rejection) {
      fail("policy " + policy_names[t.player] + " proposed an illegal move: " + t.rejection->message());
      throw RuleError(rec.violations.back());
    }
    const int reduction = static_cast<int>(t.hand_before_move) - static_cast<int>(t.hand_after_move);
    rec.max_hand_reduction = std::max(rec.max_hand_reduction, reduction);
    if (reduction > n) fail("hand reduced by " + std::to_string(reduction));
    rec.total_cancellations += t.outcome.total_cancellations();
    for (std::uint32_t p = 0; p < config.players; ++p) rec.forced_draws[p] += t.outcome.forced_draws[p];
    std::vector<std::uint32_t> sizes;
    for (const auto& h : s.hands) sizes.push_back(static_cast<std::uint32_t>(h.size()));
    rec.hand_sizes.push_back(std::move(sizes));
    if (opts.check_invariants)
      for (auto& v : check_invariants(s)) fail(v);
  }

  rec.winners = winner(s);
  rec.turns = s.turns_played;
  rec.rounds = s.round;
  rec.final_trigger = s.final_trigger;
  for (const auto& h : s.hands) rec.final_hands.push_back(static_cast<std::uint32_t>(h.size()));
  if (opts.log) write_log(*opts.log, s);
  return rec;
}

struct TournamentResult {
  std::vector<std::string> policies;            // per seat
  std::vector<double> seat_win_rate;            // shared wins count fractionally
  std::map<std::string, double> policy_win_share;  // total fractional wins / games
  std::map<std::uint32_t, std::uint32_t> length_histogram;  // turns -> games
  std::uint64_t total_cancellations = 0;
  std::vector<MatchRecord> matches;  // in game order

  std::uint32_t min_turns() const { return length_histogram.empty() ? 0 : length_histogram.begin()->first; }
};

inline std::uint64_t game_seed(std::uint64_t base_seed, std::uint32_t game) {
  return derive_seed(base_seed, game);
}

/// File name of game `game`'s log inside a tournament log directory.
inline std::string game_log_name(std::uint32_t game) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "game_%06u.jsonl", game);
  return buf;
}

/// Plays `games` matches seeded from `base_seed`, on up to `threads` worker threads.
/// Results are identical for any thread count. With `log_dir` set, each game's event log is
/// written there.
inline TournamentResult tournament(const GameConfig& config, const std::vector<std::string>& policies,
                                   std::uint32_t games, std::uint64_t base_seed,
                                   unsigned threads = std::thread::hardware_concurrency(),
                                   const std::filesystem::path& log_dir = {}) {
  if (games < 1) throw ConfigError("a tournament needs at least one game");
  config.validate();
  for (const auto& p : policies) make_policy(p, 0);
  TournamentResult r;
  r.policies = policies;
  r.matches.resize(games);
  threads = std::clamp<unsigned>(threads, 1, games);
  if (!log_dir.empty()) std::filesystem::create_directories(log_dir);

  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::uint32_t g = w; g < games; g += threads) {
          if (log_dir.empty()) {
            r.matches[g] = run_match(config, policies, game_seed(base_seed, g));
            continue;
          }
          std::ofstream log(log_dir / game_log_name(g), std::ios::binary);
          MatchOptions opts;
          opts.log = &log;
          r.matches[g] = run_match(config, policies, game_seed(base_seed, g), opts);
          if (!log) throw std::runtime_error("cannot write " + (log_dir / game_log_name(g)).string());
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  r.seat_win_rate.assign(config.players, 0.0);
  for (const auto& m : r.matches) {
    const double share = 1.0 / static_cast<double>(m.winners.size());
    for (auto w : m.winners) {
      r.seat_win_rate[w] += share;
      r.policy_win_share[policies[w]] += share;
    }
    ++r.length_histogram[m.turns];
    r.total_cancellations += m.total_cancellations;
  }
  for (auto& x : r.seat_win_rate) x /= games;
  for (auto& [_, x] : r.policy_win_share) x /= games;
  return r;
}

namespace detail {

template <class T>
std::string join(const std::vector<T>& v, char sep) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << sep;
    os << v[i];
  }
  return os.str();
}

}  // namespace detail

/// One row per match. List-valued columns are ';'-separated.
inline std::string tournament_csv(const TournamentResult& r) {
  std::ostringstream os;
  os << "game,seed,m,n,players,copies,policies,winners,turns,rounds,final_hands,cancellations,"
        "forced_draws,max_hand_reduction,final_trigger,final_cause\n";
  for (std::size_t g = 0; g < r.matches.size(); ++g) {
    const auto& m = r.matches[g];
    os << g << ',' << m.seed << ',' << m.params.m << ',' << m.params.n << ',' << m.players << ','
       << m.copies << ',' << detail::join(m.policies, ';') << ',' << detail::join(m.winners, ';')
       << ',' << m.turns << ',' << m.rounds << ',' << detail::join(m.final_hands, ';') << ','
       << m.total_cancellations << ',' << detail::join(m.forced_draws, ';') << ','
       << m.max_hand_reduction << ',';
    if (m.final_trigger)
      os << m.final_trigger->player << ',' << to_string(m.final_trigger->cause);
    else
      os << ',';
    os << '\n';
  }
  return os.str();
}

inline std::string tournament_summary(const TournamentResult& r) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(4);
  os << "games: " << r.matches.size() << '\n';
  for (std::size_t i = 0; i < r.policies.size(); ++i)
    os << "seat " << i << " (" << r.policies[i] << ") win rate: " << r.seat_win_rate[i] << '\n';
  for (const auto& [name, share] : r.policy_win_share)
    os << "policy " << name << " win share: " << share << '\n';
  os << "total cancellations: " << r.total_cancellations << '\n';
  os << "game length (turns): min " << r.min_turns() << ", max "
     << (r.length_histogram.empty() ? 0 : r.length_histogram.rbegin()->first) << '\n';
  os << "length histogram:";
  for (const auto& [turns, count] : r.length_histogram) os << ' ' << turns << ':' << count;
  os << '\n';
  return os.str();
}

}  // namespace aljabar
