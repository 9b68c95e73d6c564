#pragma once

// JSON-lines event logs: one GameEvent per line, colors as palette short codes.
// Replay re-drives the engine from the first line's configuration and checks every
// produced event against the recorded one.

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "aljabar/game.hpp"
#include "aljabar/rules.hpp"

namespace aljabar {

using Json = nlohmann::ordered_json;

/// Error in a log file; `line` is 1-based (0 when the file as a whole is at fault).
class ReplayError : public std::runtime_error {
 public:
  ReplayError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline Json codes_json(const Palette& pal, const Multiset& ms) { return pal.codes(ms); }

inline Json codes_json(const Palette& pal, const std::vector<ColorVector>& cs) {
  Json a = Json::array();
  for (const auto& c : cs) a.push_back(pal.code(c));
  return a;
}

inline Multiset multiset_from(const Palette& pal, const Json& j) {
  return pal.parse_multiset(j.get<std::vector<std::string>>());
}

template <class E>
E enum_from(const std::string& s, std::initializer_list<E> all) {
  for (E e : all)
    if (to_string(e) == s) return e;
  throw std::invalid_argument("unknown value '" + s + "'");
}

}  // namespace detail

inline std::string_view event_kind(const GameEvent& e) {
  struct V {
    std::string_view operator()(const ev::GameStarted&) const { return "game_start"; }
    std::string_view operator()(const ev::Dealt&) const { return "deal"; }
    std::string_view operator()(const ev::CenterInitialized&) const { return "center_init"; }
    std::string_view operator()(const ev::Drew&) const { return "draw"; }
    std::string_view operator()(const ev::Announced&) const { return "announce"; }
    std::string_view operator()(const ev::Exchanged&) const { return "exchange"; }
    std::string_view operator()(const ev::SpectrumPlayed&) const { return "spectrum"; }
    std::string_view operator()(const ev::Passed&) const { return "pass"; }
    std::string_view operator()(const ev::Canceled&) const { return "cancel"; }
    std::string_view operator()(const ev::ForcedDraw&) const { return "forced_draw"; }
    std::string_view operator()(const ev::GameEnded&) const { return "game_end"; }
  };
  return std::visit(V{}, e);
}

inline Json event_to_json(const GameEvent& e, const Palette& pal, std::size_t seq) {
  Json j;
  j["seq"] = seq;
  j["event"] = event_kind(e);
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ev::GameStarted>) {
          j["m"] = x.params.m;
          j["n"] = x.params.n;
          j["players"] = x.players;
          j["copies"] = x.copies;
          j["seed"] = x.seed;
          j["deal"] = x.scripted ? "scripted" : "random";
        } else if constexpr (std::is_same_v<T, ev::Dealt>) {
          j["player"] = x.player;
          j["pieces"] = detail::codes_json(pal, x.pieces);
          j["bag_indices"] = x.bag_indices;
        } else if constexpr (std::is_same_v<T, ev::CenterInitialized>) {
          j["piece"] = pal.code(x.piece);
          j["bag_index"] = x.bag_index;
        } else if constexpr (std::is_same_v<T, ev::Drew>) {
          j["player"] = x.player;
          j["piece"] = pal.code(x.piece);
          j["bag_index"] = x.bag_index;
          j["cause"] = to_string(x.cause);
        } else if constexpr (std::is_same_v<T, ev::Announced>) {
          j["player"] = x.player;
          j["cause"] = to_string(x.cause);
          j["round"] = x.round;
        } else if constexpr (std::is_same_v<T, ev::Exchanged>) {
          j["player"] = x.player;
          j["give"] = detail::codes_json(pal, x.give);
          j["take"] = detail::codes_json(pal, x.take);
          j["pre_draws"] = x.pre_draws;
        } else if constexpr (std::is_same_v<T, ev::SpectrumPlayed>) {
          j["player"] = x.player;
          j["give"] = detail::codes_json(pal, spectrum_set(pal.params()));
          j["black_from"] = x.black_from_center ? "center" : "supply";
          j["pre_draws"] = x.pre_draws;
        } else if constexpr (std::is_same_v<T, ev::Passed>) {
          j["player"] = x.player;
          j["pre_draws"] = x.pre_draws;
        } else if constexpr (std::is_same_v<T, ev::Canceled>) {
          j["color"] = pal.code(x.color);
          j["tuples"] = x.tuples;
          j["exempt"] = x.exempt;
        } else if constexpr (std::is_same_v<T, ev::ForcedDraw>) {
          j["player"] = x.player;
          j["count"] = x.count;
        } else if constexpr (std::is_same_v<T, ev::GameEnded>) {
          j["winners"] = x.winners;
          j["hand_sizes"] = x.hand_sizes;
          j["turns"] = x.turns;
        }
      },
      e);
  return j;
}

/// Parses one event. `pal` may be default-constructed only for the game_start line.
inline GameEvent event_from_json(const Json& j, const Palette& pal) {
  const auto kind = j.at("event").get<std::string>();
  auto u32 = [&](const char* k) { return j.at(k).get<std::uint32_t>(); };
  if (kind == "game_start") {
    const auto deal = j.at("deal").get<std::string>();
    if (deal != "random" && deal != "scripted") throw std::invalid_argument("bad deal kind");
    return ev::GameStarted{GroupParams{u32("m"), u32("n")}, u32("players"), u32("copies"),
                           j.at("seed").get<std::uint64_t>(), deal == "scripted"};
  }
  if (kind == "deal") {
    ev::Dealt d{u32("player"), {}, j.at("bag_indices").get<std::vector<std::uint32_t>>()};
    for (const auto& c : j.at("pieces")) d.pieces.push_back(pal.parse(c.get<std::string>()));
    return d;
  }
  if (kind == "center_init")
    return ev::CenterInitialized{pal.parse(j.at("piece").get<std::string>()), u32("bag_index")};
  if (kind == "draw")
    return ev::Drew{u32("player"), pal.parse(j.at("piece").get<std::string>()), u32("bag_index"),
                    detail::enum_from(j.at("cause").get<std::string>(),
                                      {DrawCause::kVoluntary, DrawCause::kPreMove, DrawCause::kStuck})};
  if (kind == "announce")
    return ev::Announced{
        u32("player"),
        detail::enum_from(j.at("cause").get<std::string>(),
                          {SignalCause::kChoice, SignalCause::kOnePiece, SignalCause::kForced,
                           SignalCause::kStalemate}),
        u32("round")};
  if (kind == "exchange")
    return ev::Exchanged{u32("player"), detail::multiset_from(pal, j.at("give")),
                         detail::multiset_from(pal, j.at("take")), u32("pre_draws")};
  if (kind == "spectrum") {
    const auto from = j.at("black_from").get<std::string>();
    if (from != "center" && from != "supply") throw std::invalid_argument("bad black_from");
    return ev::SpectrumPlayed{u32("player"), from == "center", u32("pre_draws")};
  }
  if (kind == "pass") return ev::Passed{u32("player"), u32("pre_draws")};
  if (kind == "cancel")
    return ev::Canceled{pal.parse(j.at("color").get<std::string>()), u32("tuples"),
                        j.at("exempt").get<bool>()};
  if (kind == "forced_draw") return ev::ForcedDraw{u32("player"), u32("count")};
  if (kind == "game_end")
    return ev::GameEnded{j.at("winners").get<std::vector<std::uint32_t>>(),
                         j.at("hand_sizes").get<std::vector<std::uint32_t>>(), u32("turns")};
  throw std::invalid_argument("unknown event kind '" + kind + "'");
}

inline std::string event_line(const GameEvent& e, const Palette& pal, std::size_t seq) {
  return event_to_json(e, pal, seq).dump();
}

/// Writes events [from, end) of the state's log, one JSON object per line.
inline void write_log(std::ostream& os, const GameState& s, std::size_t from = 0) {
  for (std::size_t i = from; i < s.log.size(); ++i)
    os << event_line(s.log[i], s.config.palette, i) << '\n';
}

struct ParsedLog {
  GameConfig config;
  std::vector<GameEvent> events;
};

inline ParsedLog read_log(std::istream& is) {
  ParsedLog out;
  std::string line;
  std::size_t lineno = 0;
  bool have_config = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) throw ReplayError(lineno, "empty line");
    Json j;
    try {
      j = Json::parse(line);
    } catch (const std::exception& e) {
      throw ReplayError(lineno, std::string("malformed JSON: ") + e.what());
    }
    try {
      if (j.at("seq").get<std::size_t>() != lineno - 1)
        throw std::invalid_argument("sequence number " + j.at("seq").dump() + ", expected " +
                                    std::to_string(lineno - 1));
      if (!have_config) {
        auto e = event_from_json(j, Palette{});
        auto* gs = std::get_if<ev::GameStarted>(&e);
        if (!gs) throw std::invalid_argument("log must start with a game_start event");
        out.config = GameConfig::make(gs->params, gs->players, gs->copies, gs->seed);
        out.config.validate();
        out.events.push_back(e);
        have_config = true;
      } else {
        out.events.push_back(event_from_json(j, out.config.palette));
      }
    } catch (const ReplayError&) {
      throw;
    } catch (const std::exception& e) {
      throw ReplayError(lineno, e.what());
    }
  }
  if (!have_config) throw ReplayError(1, "empty log");
  return out;
}

namespace detail {

inline std::optional<std::uint32_t> drew_player(const GameEvent& e, DrawCause cause) {
  if (auto* d = std::get_if<ev::Drew>(&e); d && d->cause == cause) return d->player;
  return std::nullopt;
}

}  // namespace detail

/// Re-drives the engine through the recorded actions and checks every event bit-exactly.
/// Throws ReplayError naming the first line that disagrees or is missing.
inline GameState replay(const ParsedLog& log) {
  const auto& rec = log.events;
  GameState s = [&] {
    if (!std::get<ev::GameStarted>(rec.front()).scripted) return new_game(log.config);
    std::vector<Multiset> hands;
    for (std::uint32_t p = 0; p < log.config.players; ++p) {
      auto* d = p + 1 < rec.size() ? std::get_if<ev::Dealt>(&rec[p + 1]) : nullptr;
      if (!d) throw ReplayError(p + 2, "scripted log is missing the deal for player " + std::to_string(p));
      hands.emplace_back(log.config.params, d->pieces);
    }
    const auto at = log.config.players + 1;
    auto* c = at < rec.size() ? std::get_if<ev::CenterInitialized>(&rec[at]) : nullptr;
    if (!c) throw ReplayError(at + 1, "scripted log is missing the Center piece");
    try {
      return new_game_from_deal(log.config, hands, c->piece);
    } catch (const std::exception& e) {
      throw ReplayError(1, e.what());
    }
  }();

  auto verify = [&](std::size_t from) {
    for (std::size_t i = from; i < s.log.size(); ++i) {
      if (i >= rec.size())
        throw ReplayError(i + 1, std::string("log truncated: missing ") +
                                     std::string(event_kind(s.log[i])) + " event");
      if (!(s.log[i] == rec[i]))
        throw ReplayError(i + 1, std::string("recorded ") + std::string(event_kind(rec[i])) +
                                     " event does not match replayed " +
                                     std::string(event_kind(s.log[i])));
    }
  };
  verify(0);

  while (s.log.size() < rec.size()) {
    const std::size_t at = s.log.size();
    const GameEvent& e = rec[at];
    try {
      if (auto p = detail::drew_player(e, DrawCause::kVoluntary)) {
        std::uint32_t count = 0;
        while (at + count < rec.size() && detail::drew_player(rec[at + count], DrawCause::kVoluntary) == p)
          ++count;
        draw(s, *p, count);
      } else if (detail::drew_player(e, DrawCause::kStuck)) {
        resolve_stuck(s, std::get<ev::Drew>(e).player);
      } else if (auto* an = std::get_if<ev::Announced>(&e); an && an->cause == SignalCause::kChoice) {
        announce_final(s, an->player);
      } else {
        std::size_t j = at;
        while (j < rec.size() && detail::drew_player(rec[j], DrawCause::kPreMove)) ++j;
        if (j == rec.size()) throw ReplayError(j + 1, "log truncated: missing move event");
        const GameEvent& mv = rec[j];
        if (auto* x = std::get_if<ev::Exchanged>(&mv)) {
          apply_move(s, x->player, Exchange{x->give, x->take}, x->pre_draws);
        } else if (auto* sp = std::get_if<ev::SpectrumPlayed>(&mv)) {
          apply_move(s, sp->player, Spectrum{}, sp->pre_draws);
        } else if (auto* ps = std::get_if<ev::Passed>(&mv)) {
          apply_move(s, ps->player, Pass{}, ps->pre_draws);
        } else {
          throw ReplayError(at + 1, std::string("unexpected ") + std::string(event_kind(e)) +
                                        " event where a player action was expected");
        }
      }
    } catch (const ReplayError&) {
      throw;
    } catch (const std::exception& ex) {
      throw ReplayError(at + 1, std::string("engine rejected recorded action: ") + ex.what());
    }
    verify(at);
  }
  return s;
}

inline GameState replay(std::istream& is) { return replay(read_log(is)); }

}  // namespace aljabar
