#pragma once

// Live game sessions behind a transport-neutral message interface. A transport registers each
// connection with connect(), feeds it incoming lines through handle() and delivers whatever the
// connection's sink receives. All game changes go through the rules engine.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "aljabar/protocol.hpp"
#include "aljabar/simulation.hpp"

namespace aljabar {

/// Unknown session or token, or a malformed request.
class ServiceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Clock = std::chrono::steady_clock;

struct ServiceOptions {
  std::filesystem::path log_dir;  // empty: logs are kept in memory only
  /// How long a disconnected human seat may hold up its turn before the fallback policy moves.
  /// Unset: wait forever.
  std::optional<std::chrono::milliseconds> fallback_timeout = std::chrono::seconds(30);
  std::string fallback_policy = "greedy";
  std::uint32_t max_players = 8;  // bound for non-standard groups
  std::uint64_t token_seed = 0;   // 0: seeded from std::random_device
  std::function<Clock::time_point()> clock = [] { return Clock::now(); };
};

struct SessionCreated {
  std::string id;
  std::vector<std::string> tokens;  // per seat; empty for bot seats
  std::string spectator_token;
};

using ClientId = std::uint64_t;
using Sink = std::function<void(const std::string& line)>;

class SessionManager {
 public:
  explicit SessionManager(ServiceOptions opts = {}) : opts_(std::move(opts)) {
    std::uint64_t seed = opts_.token_seed;
    if (seed == 0) {
      std::random_device rd;
      seed = (std::uint64_t{rd()} << 32) ^ rd();
    }
    token_rng_ = Rng(seed);
    if (!opts_.log_dir.empty()) std::filesystem::create_directories(opts_.log_dir);
    make_policy(opts_.fallback_policy, 0);
  }

  const ServiceOptions& options() const { return opts_; }

  /// `seats` holds "human" or a policy name per player. Throws ConfigError on an invalid
  /// config or seat plan.
  SessionCreated create_session(const GameConfig& config, const std::vector<std::string>& seats) {
    check_config(config);
    return add_session(new_game(config), seats);
  }

  /// Starts from a prepared deal (for fixtures and demonstrations).
  SessionCreated create_session_from_deal(const GameConfig& config, const std::vector<Multiset>& hands,
                                          const ColorVector& center_piece,
                                          const std::vector<std::string>& seats) {
    check_config(config);
    return add_session(new_game_from_deal(config, hands, center_piece), seats);
  }

  Json list_sessions() const {
    Json out = Json::array();
    for (const auto& s : all_sessions()) {
      std::lock_guard lk(s->mu);
      out.push_back(summary(*s));
    }
    return out;
  }

  /// Public state of a session, as carried by state messages.
  Json session_state(const std::string& id) const {
    auto s = find(id);
    std::lock_guard lk(s->mu);
    Json j = summary(*s);
    j["state"] = *s->snapshot;
    return j;
  }

  /// The session's event log in JSON-lines form, identical to the engine's write_log output.
  std::string log_text(const std::string& id) const {
    auto s = find(id);
    std::lock_guard lk(s->mu);
    std::ostringstream os;
    write_log(os, s->state);
    return os.str();
  }

  std::optional<std::filesystem::path> log_path(const std::string& id) const {
    auto s = find(id);
    if (opts_.log_dir.empty()) return std::nullopt;
    return opts_.log_dir / (s->id + ".jsonl");
  }

  GameState game_state(const std::string& id) const {
    auto s = find(id);
    std::lock_guard lk(s->mu);
    return s->state;
  }

  // --- operations by token, usable without a connection ------------------------------------

  /// Returns the move_result payload. `move` unset means draws only; `resolve_stuck` asks the
  /// engine to draw until a move exists.
  Json submit_move(const std::string& id, const std::string& token, std::uint32_t pre_draws,
                   const std::optional<Move>& move, bool resolve = false) {
    auto s = find(id);
    std::lock_guard lk(s->mu);
    return do_submit(*s, seat_of(*s, token), pre_draws, move, resolve, nullptr);
  }

  Json announce(const std::string& id, const std::string& token) {
    auto s = find(id);
    std::lock_guard lk(s->mu);
    return do_announce(*s, seat_of(*s, token), nullptr);
  }

  /// Up to `limit` legal moves for the token's seat in canonical order (all when unset).
  Json hint_legal_moves(const std::string& id, const std::string& token,
                        std::optional<std::size_t> limit = std::nullopt) const {
    auto s = find(id);
    std::lock_guard lk(s->mu);
    return hints(*s, seat_of(*s, token), limit);
  }

  // --- connections ----------------------------------------------------------------------------

  ClientId connect(Sink sink) {
    auto c = std::make_shared<Client>();
    c->sink = std::move(sink);
    std::lock_guard lk(mu_);
    c->id = ++next_client_;
    clients_[c->id] = c;
    return c->id;
  }

  void disconnect(ClientId id) {
    std::shared_ptr<Client> c;
    {
      std::lock_guard lk(mu_);
      auto it = clients_.find(id);
      if (it == clients_.end()) return;
      c = it->second;
      clients_.erase(it);
    }
    if (auto s = c->session.lock()) {
      std::lock_guard lk(s->mu);
      s->clients.erase(c);
      if (c->seat) --s->seat_clients[*c->seat];
      update_wait(*s);
    }
  }

  /// Processes one incoming line from a connection. Replies and broadcasts go to the sinks.
  void handle(ClientId id, std::string_view line) {
    std::shared_ptr<Client> c;
    {
      std::lock_guard lk(mu_);
      auto it = clients_.find(id);
      if (it == clients_.end()) return;
      c = it->second;
    }
    Json msg;
    try {
      msg = Json::parse(line);
      if (!msg.is_object() || !msg.contains("kind")) throw std::invalid_argument("missing kind");
    } catch (const std::exception& e) {
      return unattached_error(*c, std::string("malformed message: ") + e.what());
    }
    const auto kind = msg["kind"].is_string() ? msg["kind"].get<std::string>() : "";
    const Json payload = msg.contains("payload") ? msg["payload"] : Json::object();

    if (kind == "join") return join(c, payload);
    auto s = c->session.lock();
    if (!s) return unattached_error(*c, "join a session first");
    std::lock_guard lk(s->mu);
    try {
      if (kind == "legal_moves") {
        if (!c->seat) throw ServiceError("spectators have no legal moves");
        std::optional<std::size_t> limit;
        if (payload.contains("limit") && !payload["limit"].is_null())
          limit = payload["limit"].get<std::size_t>();
        send(*s, *c, "legal_moves", hints(*s, *c->seat, limit));
      } else if (kind == "submit_move") {
        if (!c->seat) throw ServiceError("spectators cannot move");
        const auto pre = payload.value("pre_draws", 0u);
        const bool resolve = payload.value("resolve_stuck", false);
        std::optional<Move> move;
        if (payload.contains("move") && !payload["move"].is_null())
          move = protocol::move_from_json(payload["move"], s->state.config.palette);
        do_submit(*s, *c->seat, pre, move, resolve, c.get());
      } else if (kind == "announce_final") {
        if (!c->seat) throw ServiceError("spectators cannot announce");
        do_announce(*s, *c->seat, c.get());
      } else {
        throw ServiceError("unknown message kind '" + kind + "'");
      }
    } catch (const std::exception& e) {
      send(*s, *c, "error", {{"message", e.what()}, {"request", kind}});
    }
  }

  /// Lets the fallback policy move for disconnected human seats whose timeout has elapsed.
  void tick() {
    if (!opts_.fallback_timeout) return;
    const auto now = opts_.clock();
    for (const auto& s : all_sessions()) {
      std::lock_guard lk(s->mu);
      if (!s->waiting_since || now - *s->waiting_since < *opts_.fallback_timeout) continue;
      const auto seat = s->state.turn;
      auto& fb = s->fallbacks[seat];
      if (!fb) fb = make_policy(opts_.fallback_policy, policy_seed(s->state.config.seed, seat));
      bot_turn(*s, *fb);
      run_bots(*s);
    }
  }

 private:
  struct Session;

  struct Client {
    ClientId id = 0;
    Sink sink;
    std::mutex send_mu;  // keeps client_seq in delivery order
    std::weak_ptr<Session> session;
    std::optional<std::uint32_t> seat;
    std::uint64_t sent = 0;

    void post(std::string_view kind, std::uint64_t seq, const Json& payload) {
      std::lock_guard lk(send_mu);
      const auto line = protocol::envelope(kind, seq, ++sent, payload);
      if (sink) sink(line);
    }
  };

  struct Seat {
    bool human = true;
    std::string policy;  // bot seats
    std::string token;   // human seats
  };

  struct Session {
    mutable std::mutex mu;
    std::string id;
    GameState state;
    std::vector<Seat> seats;
    std::string spectator_token;
    std::vector<std::unique_ptr<Policy>> bots;
    std::map<std::uint32_t, std::unique_ptr<Policy>> fallbacks;
    std::set<std::shared_ptr<Client>> clients;
    std::vector<std::uint32_t> seat_clients;
    std::uint64_t seq = 0;
    std::size_t published = 0;  // events already broadcast and persisted
    bool game_over_sent = false;
    std::optional<Clock::time_point> waiting_since;
    std::shared_ptr<const Json> snapshot;
    std::string created;
    std::string updated;
  };

  static std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
  }

  void check_config(const GameConfig& config) const {
    config.validate();
    if (!config.max_players() && config.players > opts_.max_players)
      throw ConfigError("at most " + std::to_string(opts_.max_players) + " players per session, got " +
                        std::to_string(config.players));
  }

  std::string new_token() {
    char buf[33];
    std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(token_rng_.next()),
                  static_cast<unsigned long long>(token_rng_.next()));
    return buf;
  }

  SessionCreated add_session(GameState state, const std::vector<std::string>& plan) {
    if (plan.size() != state.players())
      throw ConfigError("seat plan has " + std::to_string(plan.size()) + " seats for " +
                        std::to_string(state.players()) + " players");
    auto s = std::make_shared<Session>();
    SessionCreated out;
    {
      std::lock_guard lk(mu_);
      char buf[24];
      std::snprintf(buf, sizeof buf, "g%llu-%08llx", static_cast<unsigned long long>(++next_session_),
                    static_cast<unsigned long long>(token_rng_.next() & 0xffffffffULL));
      s->id = buf;
      for (std::uint32_t p = 0; p < plan.size(); ++p) {
        Seat seat;
        if (plan[p] == "human") {
          seat.token = new_token();
          s->bots.emplace_back();
        } else {
          seat.human = false;
          seat.policy = plan[p];
          s->bots.push_back(make_policy(plan[p], policy_seed(state.config.seed, p)));
        }
        out.tokens.push_back(seat.token);
        s->seats.push_back(std::move(seat));
      }
      s->spectator_token = new_token();
    }
    s->state = std::move(state);
    s->seat_clients.assign(s->seats.size(), 0);
    s->created = s->updated = utc_now();
    out.id = s->id;
    out.spectator_token = s->spectator_token;
    {
      std::lock_guard lk(s->mu);
      commit(*s);
      run_bots(*s);
    }
    std::lock_guard lk(mu_);
    sessions_[s->id] = s;
    return out;
  }

  std::shared_ptr<Session> find(const std::string& id) const {
    std::lock_guard lk(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw ServiceError("unknown session '" + id + "'");
    return it->second;
  }

  std::vector<std::shared_ptr<Session>> all_sessions() const {
    std::lock_guard lk(mu_);
    std::vector<std::shared_ptr<Session>> out;
    for (const auto& [_, s] : sessions_) out.push_back(s);
    return out;
  }

  static std::uint32_t seat_of(const Session& s, const std::string& token) {
    for (std::uint32_t p = 0; p < s.seats.size(); ++p)
      if (s.seats[p].human && s.seats[p].token == token) return p;
    throw ServiceError(token == s.spectator_token ? "spectators cannot act" : "unknown token");
  }

  Json summary(const Session& s) const {
    Json seats = Json::array();
    for (std::uint32_t p = 0; p < s.seats.size(); ++p) {
      const auto& seat = s.seats[p];
      seats.push_back({{"seat", p},
                       {"kind", seat.human ? "human" : "bot"},
                       {"policy", seat.human ? Json(nullptr) : Json(seat.policy)},
                       {"connected", seat.human ? s.seat_clients[p] > 0 : true}});
    }
    return {{"session", s.id},
            {"config", protocol::config_json(s.state.config)},
            {"seats", std::move(seats)},
            {"turn", s.state.turn},
            {"turns_played", s.state.turns_played},
            {"finished", s.state.finished},
            {"created", s.created},
            {"updated", s.updated}};
  }

  void deliver(Session& s, Client& c, std::string_view kind, const Json& payload) {
    c.post(kind, ++s.seq, payload);
  }

  void send(Session& s, Client& c, std::string_view kind, const Json& payload) {
    deliver(s, c, kind, payload);
  }

  void broadcast(Session& s, std::string_view kind, const Json& payload) {
    for (const auto& c : s.clients) deliver(s, *c, kind, payload);
  }

  /// Errors outside any session carry session sequence number 0.
  static void unattached_error(Client& c, const std::string& what, std::string_view request = {}) {
    Json p{{"message", what}};
    if (!request.empty()) p["request"] = request;
    c.post("error", 0, p);
  }

  /// Persists new events, then broadcasts them followed by the new state.
  void commit(Session& s) {
    const auto& log = s.state.log;
    const auto& pal = s.state.config.palette;
    if (s.published < log.size()) {
      if (!opts_.log_dir.empty()) {
        std::ofstream os(opts_.log_dir / (s.id + ".jsonl"), std::ios::app | std::ios::binary);
        write_log(os, s.state, s.published);
        if (!os) throw std::runtime_error("cannot append to the log of session " + s.id);
      }
      for (std::size_t i = s.published; i < log.size(); ++i)
        broadcast(s, "event", event_to_json(log[i], pal, i));
      s.published = log.size();
    }
    s.snapshot = std::make_shared<const Json>(protocol::public_state(s.state));
    s.updated = utc_now();
    broadcast(s, "state", *s.snapshot);
    if (s.state.finished && !s.game_over_sent) {
      s.game_over_sent = true;
      broadcast(s, "game_over", game_over_payload(s));
    }
    update_wait(s);
  }

  static Json game_over_payload(const Session& s) {
    Json sizes = Json::array();
    for (const auto& h : s.state.hands) sizes.push_back(h.size());
    return {{"winners", winner(s.state)}, {"hand_sizes", sizes}, {"turns", s.state.turns_played}};
  }

  void update_wait(Session& s) {
    const auto& st = s.state;
    const bool waiting = !st.finished && s.seats[st.turn].human && s.seat_clients[st.turn] == 0;
    if (!waiting)
      s.waiting_since.reset();
    else if (!s.waiting_since)
      s.waiting_since = opts_.clock();
  }

  void bot_turn(Session& s, Policy& policy) {
    auto t = play_bot_turn(s.state, policy);
    if (t.rejection)
      throw RuleError(std::string(policy.name()) + " policy proposed an illegal move: " +
                      t.rejection->message());
    s.waiting_since.reset();
    commit(s);
  }

  void run_bots(Session& s) {
    while (!s.state.finished && !s.seats[s.state.turn].human) bot_turn(s, *s.bots[s.state.turn]);
  }

  Json hints(const Session& s, std::uint32_t seat, std::optional<std::size_t> limit) const {
    const auto& st = s.state;
    const bool your_turn = !st.finished && st.turn == seat;
    Json moves = Json::array();
    std::size_t total = 0;
    if (your_turn) {
      auto all = enumerate_moves(st, seat);
      total = all.size();
      for (std::size_t i = 0; i < all.size() && (!limit || i < *limit); ++i)
        moves.push_back(protocol::move_to_json(all[i], st.config.palette));
    }
    return {{"seat", seat},
            {"your_turn", your_turn},
            {"moves", std::move(moves)},
            {"total", total},
            {"must_draw", your_turn && is_stuck(st, seat)},
            {"can_announce", can_announce(st, seat)}};
  }

  static Json rejection_payload(std::string_view reason, const std::string& message) {
    return {{"ok", false}, {"error", reason}, {"message", message}};
  }

  Json do_submit(Session& s, std::uint32_t seat, std::uint32_t pre_draws, const std::optional<Move>& move,
                 bool resolve, Client* requester) {
    auto& st = s.state;
    const auto before = st.hands[seat].size();
    Json result;
    try {
      if (resolve) {
        if (pre_draws || move) throw ServiceError("resolve_stuck takes no move or pre_draws");
        resolve_stuck(st, seat);
        result = {{"ok", true}, {"action", "resolve_stuck"}};
      } else if (!move) {
        if (pre_draws == 0) throw ServiceError("submit_move needs a move or pre_draws");
        const auto drawn = draw(st, seat, pre_draws);
        result = {{"ok", true}, {"action", "draw"}, {"drawn", drawn}};
      } else {
        auto out = apply_move(st, seat, *move, pre_draws);
        Json cancels = Json::array();
        for (const auto& c : out.cancellations)
          cancels.push_back({{"color", st.config.palette.code(c.color)}, {"tuples", c.tuples}, {"exempt", c.exempt}});
        result = {{"ok", true},
                  {"action", "move"},
                  {"move", protocol::move_to_json(*move, st.config.palette)},
                  {"voluntary_draws", out.voluntary_draws},
                  {"cancellations", std::move(cancels)},
                  {"forced_draws", out.forced_draws}};
      }
    } catch (const IllegalMove& e) {
      result = rejection_payload(to_string(e.rejection().reason), e.rejection().message());
    } catch (const RuleError& e) {
      result = rejection_payload("rule", e.what());
    }
    if (result["ok"].get<bool>()) {
      result["seat"] = seat;
      result["hand_before"] = before;
      result["hand_after"] = st.hands[seat].size();
    }
    if (requester) send(s, *requester, "move_result", result);
    if (result["ok"].get<bool>()) {
      commit(s);
      run_bots(s);
    }
    return result;
  }

  Json do_announce(Session& s, std::uint32_t seat, Client* requester) {
    Json result;
    try {
      announce_final(s.state, seat);
      result = {{"ok", true}, {"action", "announce_final"}, {"seat", seat}};
    } catch (const IllegalMove& e) {
      result = rejection_payload(to_string(e.rejection().reason), e.rejection().message());
    } catch (const RuleError& e) {
      result = rejection_payload("rule", e.what());
    }
    if (requester) send(s, *requester, "move_result", result);
    if (result["ok"].get<bool>()) commit(s);
    return result;
  }

  void join(const std::shared_ptr<Client>& c, const Json& payload) {
    std::shared_ptr<Session> s;
    try {
      if (c->session.lock()) throw ServiceError("already joined");
      s = find(payload.at("session").get<std::string>());
    } catch (const std::exception& e) {
      return unattached_error(*c, e.what(), "join");
    }
    std::lock_guard lk(s->mu);
    const auto token = payload.value("token", std::string());
    std::optional<std::uint32_t> seat;
    if (token != s->spectator_token) {
      try {
        seat = seat_of(*s, token);
      } catch (const std::exception& e) {
        return unattached_error(*c, e.what(), "join");
      }
    }
    c->session = s;
    c->seat = seat;
    s->clients.insert(c);
    if (seat) ++s->seat_clients[*seat];
    update_wait(*s);
    Json hello = summary(*s);
    hello["seat"] = seat ? Json(*seat) : Json(nullptr);
    hello["role"] = seat ? "player" : "spectator";
    hello["palette"] = protocol::palette_json(s->state.config.palette);
    send(*s, *c, "hello", hello);
    send(*s, *c, "state", *s->snapshot);
    if (s->state.finished) send(*s, *c, "game_over", game_over_payload(*s));
  }

  ServiceOptions opts_;
  mutable std::mutex mu_;
  Rng token_rng_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::map<ClientId, std::shared_ptr<Client>> clients_;
  ClientId next_client_ = 0;
  std::uint64_t next_session_ = 0;
};

}  // namespace aljabar
