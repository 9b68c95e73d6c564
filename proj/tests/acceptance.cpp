// Acceptance suite: one PASS/FAIL line per primary criterion. Exit status 0 only if all pass.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "aljabar/simulation.hpp"
#include "aljabar/verify.hpp"
#include "protocol_driver.hpp"
#include "support.hpp"

namespace {

using namespace aljabar;
using Seconds = std::chrono::duration<double>;

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << "  " << name << ": " << detail << std::endl;
  if (!ok) ++failures;
}

void report(const std::string& name, const CheckResult& r) {
  std::string detail = r.detail;
  for (const auto& f : r.failures) detail += "; " + f;
  report(name, r.ok, detail);
}

template <class F>
double timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return Seconds(std::chrono::steady_clock::now() - t0).count();
}

std::string seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f s", s);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void addition_table() {
  CheckResult r;
  const double t = timed([&] { r = check_table(); });
  r.ok = r.ok && t < 1.0;
  r.detail += " in " + seconds(t);
  report("addition-table oracle", r);
}

void group_axioms() {
  const auto a = check_axioms({2, 3});
  const auto b = check_axioms({2, 4});
  const auto c = check_axioms({3, 2}, 10000, 7);
  CheckResult all{"", a.ok && b.ok && c.ok,
                  "(2,3): " + a.detail + "; (2,4): " + b.detail + "; (3,2): " + c.detail, {}};
  for (const auto* r : {&a, &b, &c}) all.failures.insert(all.failures.end(), r->failures.begin(), r->failures.end());
  report("group axioms", all);
}

struct GameRun {
  std::vector<MatchRecord> records;
  double seconds = 0;
};

/// 1000 random-policy standard games, cycling through 2, 3 and 4 players.
GameRun conservation_games() {
  GameRun run;
  run.seconds = timed([&] {
    for (std::uint32_t g = 0; g < 1000; ++g) {
      const auto players = 2 + g % 3;
      run.records.push_back(run_match(GameConfig::standard(players), std::vector<std::string>(players, "random"),
                                      game_seed(20240601, g)));
    }
  });
  return run;
}

void conservation(const GameRun& run) {
  std::size_t violations = 0, turns = 0;
  int max_reduction = 0;
  std::string first;
  for (const auto& r : run.records) {
    violations += r.violations.size();
    if (first.empty() && !r.violations.empty()) first = "seed " + std::to_string(r.seed) + ": " + r.violations[0];
    turns += r.turns;
    max_reduction = std::max(max_reduction, r.max_hand_reduction);
  }
  const bool ok = violations == 0 && max_reduction <= 3 && run.seconds < 60.0;
  report("conservation", ok,
         std::to_string(run.records.size()) + " games, " + std::to_string(turns) + " turns checked, " +
             std::to_string(violations) + " violations, largest hand reduction " + std::to_string(max_reduction) +
             ", " + seconds(run.seconds) + (first.empty() ? "" : "; first: " + first));
}

void minimum_length(const GameRun& run) {
  std::uint32_t shortest = UINT32_MAX;
  for (const auto& r : run.records) shortest = std::min(shortest, r.turns);

  const auto fixture_path = std::string(ALJABAR_FIXTURES) + "/min_length_4_turns.jsonl";
  const auto fixture = read_file(fixture_path);
  std::string found_log;
  std::uint64_t deals = 0;
  if (const auto g = testing::search_short_game(4, 4)) {
    std::ostringstream os;
    write_log(os, g->final_state);
    found_log = os.str();
    deals = g->deals_tried;
  }
  std::uint32_t fixture_turns = 0;
  bool fixture_finished = false;
  try {
    std::istringstream in(fixture);
    const auto s = replay(in);
    fixture_turns = s.turns_played;
    fixture_finished = s.finished;
  } catch (const std::exception&) {
  }
  const bool ok = shortest >= 4 && !found_log.empty() && found_log == fixture && fixture_finished &&
                  fixture_turns == 4;
  report("minimum length", ok,
         "shortest of " + std::to_string(run.records.size()) + " games: " + std::to_string(shortest) +
             " turns; searcher found a 4-turn game after " + std::to_string(deals) + " deals" +
             (found_log == fixture ? ", identical to the fixture" : ", DIFFERENT from the fixture") +
             "; fixture replays to " + std::to_string(fixture_turns) + " turns" +
             (fixture_finished ? " and finishes" : " without finishing"));
}

void enumeration_oracle() {
  Rng rng(500);
  int discrepancies = 0;
  for (int t = 0; t < 500; ++t) {
    GameState s = new_game(GameConfig::standard(2, rng.next()));
    s.hands[s.turn] = testing::random_multiset(rng, {2, 3}, rng.below(7));
    s.center = testing::random_multiset(rng, {2, 3}, 1 + rng.below(6));
    if (rng.below(4) == 0) s.final_round = s.round;
    std::set<std::string> got;
    for (const auto& m : enumerate_moves(s, s.turn)) got.insert(testing::move_key(m, s.config.palette));
    if (got != testing::brute_force_moves(s, s.turn)) ++discrepancies;
  }
  report("enumeration oracle", discrepancies == 0,
         "500 random states (hand and Center up to 6 pieces), " + std::to_string(discrepancies) + " discrepancies");
}

void replay_determinism() {
  int exact = 0;
  std::string first_error;
  for (std::uint32_t g = 0; g < 100; ++g) {
    const auto players = 2 + g % 3;
    std::vector<std::string> pols(players, "random");
    if (g % 2) pols[1] = "greedy";
    std::ostringstream log;
    MatchOptions opts;
    opts.log = &log;
    run_match(GameConfig::standard(players), pols, game_seed(99, g), opts);
    try {
      std::istringstream in(log.str());
      std::ostringstream again;
      write_log(again, replay(in));
      if (again.str() == log.str()) ++exact;
    } catch (const std::exception& e) {
      if (first_error.empty()) first_error = e.what();
    }
  }
  int protocol_equal = 0;
  const std::vector<std::uint64_t> seeds = {11, 12, 13};
  for (auto seed : seeds) {
    const auto config = GameConfig::standard(2 + seed % 3, seed);
    std::vector<std::string> pols(config.players, "random");
    pols[0] = "greedy";
    ServiceOptions so;
    so.token_seed = seed;
    so.fallback_timeout.reset();
    SessionManager mgr(so);
    try {
      if (testing::protocol_game(mgr, config, pols) == testing::engine_log(config, pols)) ++protocol_equal;
    } catch (const std::exception& e) {
      if (first_error.empty()) first_error = e.what();
    }
  }
  report("replay determinism", exact == 100 && protocol_equal == static_cast<int>(seeds.size()),
         std::to_string(exact) + "/100 logs replay bit-exactly; " + std::to_string(protocol_equal) + "/" +
             std::to_string(seeds.size()) + " protocol-driven games log identically to the engine" +
             (first_error.empty() ? "" : "; " + first_error));
}

}  // namespace

int main() {
  addition_table();
  report("worked identities", check_identities());
  group_axioms();
  report("formula checks", check_formulas());
  report("fano property", check_fano());
  const auto run = conservation_games();
  conservation(run);
  minimum_length(run);
  enumeration_oracle();
  replay_determinism();
  std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed"))
            << std::endl;
  return failures ? 1 : 0;
}
