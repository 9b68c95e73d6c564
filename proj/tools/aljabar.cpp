// aljabar: verify the color arithmetic, run bot tournaments, replay logs, host live games.
// Exit status: 0 success, 1 verification or validation failure, 2 usage error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "aljabar/server.hpp"
#include "aljabar/simulation.hpp"
#include "aljabar/verify.hpp"

namespace {

using namespace aljabar;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct ConfigFlags {
  std::uint32_t m = 2;
  std::uint32_t n = 3;
  std::uint32_t copies = 10;
  std::uint32_t players = 2;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--m", m, "modulus of each color entry")->capture_default_str();
    cmd->add_option("--n", n, "entries per color")->capture_default_str();
    cmd->add_option("--A", copies, "copies of every non-identity color in the bag")->capture_default_str();
    cmd->add_option("--players", players, "number of players")->capture_default_str();
  }

  GameConfig config(std::uint64_t seed) const {
    auto c = GameConfig::make({m, n}, players, copies, seed);
    c.validate();
    return c;
  }
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int cmd_verify(bool corrupt, const std::string& csv_path) {
  const auto pal = standard_palette({2, 3});
  std::vector<ColorVector> order;
  for (const auto* code : kReferenceTableOrder) order.push_back(pal.parse(code));
  std::cout << addition_table_csv(pal, order) << '\n';

  bool ok = true;
  for (const auto& r : verify_all(corrupt)) {
    std::cout << (r.ok ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
    for (const auto& f : r.failures) std::cout << "  mismatch: " << f << '\n';
    ok = ok && r.ok;
  }
  if (!csv_path.empty()) {
    std::ofstream os(csv_path);
    os << addition_table_csv(pal, order);
    if (!os) {
      std::cerr << "error: cannot write " << csv_path << '\n';
      return kFailed;
    }
  }
  return ok ? kOk : kFailed;
}

int cmd_simulate(const ConfigFlags& flags, std::uint32_t games, std::uint64_t seed,
                 const std::string& policy_list, const std::string& log_dir, const std::string& csv_path,
                 unsigned threads) {
  GameConfig config;
  std::vector<std::string> policies = split_list(policy_list);
  try {
    config = flags.config(seed);
    if (policies.size() == 1) policies.assign(config.players, policies[0]);
    if (policies.size() != config.players)
      throw ConfigError(std::to_string(policies.size()) + " policies for " + std::to_string(config.players) +
                        " players");
    for (const auto& p : policies) make_policy(p, 0);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  const auto result = tournament(config, policies, games, seed, threads, log_dir);
  const auto csv = tournament_csv(result);
  if (csv_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream os(csv_path);
    os << csv;
    if (!os) {
      std::cerr << "error: cannot write " << csv_path << '\n';
      return kFailed;
    }
  }
  std::istringstream summary(tournament_summary(result));
  for (std::string line; std::getline(summary, line);) std::cout << "# " << line << '\n';
  for (const auto& m : result.matches)
    if (!m.violations.empty()) {
      std::cerr << "rule violations in game seeded " << m.seed << ": " << m.violations.front() << '\n';
      return kFailed;
    }
  return kOk;
}

int cmd_replay(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open " << path << '\n';
    return kUsage;
  }
  GameState s;
  try {
    s = replay(in);
  } catch (const ReplayError& e) {
    std::cerr << "replay error: " << e.what() << '\n';
    return kFailed;
  }
  const auto& pal = s.config.palette;
  std::cout << "config: " << s.params().to_string() << ", " << s.players() << " players, A=" << s.config.copies
            << ", seed " << s.config.seed << '\n';
  std::cout << "events: " << s.log.size() << ", turns: " << s.turns_played << ", rounds: " << s.round << '\n';
  if (s.final_trigger)
    std::cout << "final round: " << *s.final_round << " (player " << s.final_trigger->player << ", "
              << to_string(s.final_trigger->cause) << ")\n";
  std::cout << "final hands:\n";
  for (std::uint32_t p = 0; p < s.players(); ++p)
    std::cout << "  player " << p << " (" << s.hands[p].size() << "): " << pal.format(s.hands[p]) << '\n';
  if (!s.finished) {
    std::cout << "game not finished\n";
    return kOk;
  }
  const auto w = winner(s);
  std::cout << (w.size() == 1 ? "winner: player " : "winners: players ");
  for (std::size_t i = 0; i < w.size(); ++i) std::cout << (i ? ", " : "") << w[i];
  std::cout << '\n';
  return kOk;
}

int cmd_serve(const ConfigFlags& flags, const std::string& address, unsigned short port,
              const std::string& log_dir, const std::string& static_dir, double bot_timeout,
              unsigned threads) {
  net::ServerOptions so;
  ServiceOptions svc;
  try {
    so.defaults = flags.config(0);
    if (bot_timeout < 0) throw ConfigError("--bot-timeout must not be negative");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  so.address = address;
  so.port = port;
  so.static_dir = static_dir;
  so.threads = std::max(1u, threads);
  svc.log_dir = log_dir;
  if (bot_timeout > 0)
    svc.fallback_timeout = std::chrono::milliseconds(static_cast<std::int64_t>(bot_timeout * 1000));
  else
    svc.fallback_timeout.reset();
  try {
    SessionManager mgr(svc);
    net::Server server(mgr, so);
    std::cout << "listening on http://" << address << ':' << server.port() << " (websocket /ws)" << std::endl;
    server.run();
  } catch (const net::StartupError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Al-Jabar: color arithmetic checks, bot tournaments, log replay and a game server"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "check the color arithmetic and setup formulas");
  bool corrupt = false;
  std::string table_csv;
  verify->add_flag("--corrupt-table", corrupt, "compare against a deliberately wrong table (test mode)");
  verify->add_option("--csv", table_csv, "also write the addition table as CSV");

  auto* simulate = app.add_subcommand("simulate", "run a seeded bot tournament, print CSV and summary");
  ConfigFlags sim_flags;
  sim_flags.add_to(simulate);
  std::uint32_t games = 100;
  std::uint64_t seed = 1;
  std::string policies = "random";
  std::string sim_logs, sim_csv;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  simulate->add_option("--games", games, "number of games")->capture_default_str()->check(CLI::PositiveNumber);
  simulate->add_option("--seed", seed, "base seed")->capture_default_str();
  simulate->add_option("--policies", policies, "comma-separated policy per seat, or one for all (random, greedy)")
      ->capture_default_str();
  simulate->add_option("--log-dir", sim_logs, "write each game's event log here");
  simulate->add_option("--csv", sim_csv, "write the CSV here instead of standard output");
  simulate->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  auto* rep = app.add_subcommand("replay", "replay an event log and print the final hands and winner");
  std::string log_file;
  rep->add_option("file", log_file, "JSON-lines event log")->required();

  auto* serve = app.add_subcommand("serve", "host live games over HTTP and WebSocket");
  ConfigFlags serve_flags;
  serve_flags.add_to(serve);
  std::string address = "127.0.0.1", serve_logs = "logs", static_dir;
  unsigned short port = 8080;
  double bot_timeout = 30;
  unsigned serve_threads = 2;
  serve->add_option("--address", address, "listen address")->capture_default_str();
  serve->add_option("--port", port, "listen port")->capture_default_str();
  serve->add_option("--log-dir", serve_logs, "directory for per-session event logs")->capture_default_str();
  serve->add_option("--static-dir", static_dir, "serve web client files from here");
  serve->add_option("--bot-timeout", bot_timeout,
                    "seconds a disconnected human seat may hold its turn before the greedy fallback moves "
                    "(0 waits forever)")
      ->capture_default_str();
  serve->add_option("--threads", serve_threads, "I/O threads")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*verify) return cmd_verify(corrupt, table_csv);
    if (*simulate) return cmd_simulate(sim_flags, games, seed, policies, sim_logs, sim_csv, threads);
    if (*rep) return cmd_replay(log_file);
    if (*serve) return cmd_serve(serve_flags, address, port, serve_logs, static_dir, bot_timeout, serve_threads);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
  return kUsage;
}
