#pragma once

// JSON encodings shared by the session protocol, the HTTP endpoints and tooling:
// moves, public game state, palette descriptions and protocol envelopes.

#include <string>
#include <vector>

#include "aljabar/event_log.hpp"
#include "aljabar/rules.hpp"

namespace aljabar::protocol {

inline Json move_to_json(const Move& m, const Palette& pal) {
  Json j;
  if (auto* ex = std::get_if<Exchange>(&m)) {
    j["type"] = "exchange";
    j["give"] = pal.codes(ex->give);
    j["take"] = pal.codes(ex->take);
  } else if (std::holds_alternative<Spectrum>(m)) {
    j["type"] = "spectrum";
  } else {
    j["type"] = "pass";
  }
  return j;
}

/// Throws std::invalid_argument on unknown types or color codes.
inline Move move_from_json(const Json& j, const Palette& pal) {
  if (!j.is_object()) throw std::invalid_argument("move must be an object");
  const auto type = j.at("type").get<std::string>();
  if (type == "exchange")
    return Exchange{pal.parse_multiset(j.at("give").get<std::vector<std::string>>()),
                    pal.parse_multiset(j.at("take").get<std::vector<std::string>>())};
  if (type == "spectrum") return Spectrum{};
  if (type == "pass") return Pass{};
  throw std::invalid_argument("unknown move type '" + type + "'");
}

inline Json palette_json(const Palette& pal) {
  Json colors = Json::array();
  for (const auto& c : all_elements(pal.params())) {
    const auto& e = pal.entry(c);
    colors.push_back({{"code", e.code}, {"name", e.name}, {"display", e.display}, {"vector", c.entries()}});
  }
  Json table = Json::array();
  for (const auto& row : addition_table(pal)) {
    Json r = Json::array();
    for (const auto& c : row) r.push_back(pal.code(c));
    table.push_back(std::move(r));
  }
  Json spectrum = Json::array();
  for (const auto& c : spectrum_set(pal.params())) spectrum.push_back(pal.code(c));
  return {{"m", pal.params().m}, {"n", pal.params().n}, {"colors", std::move(colors)},
          {"addition_table", std::move(table)}, {"spectrum", std::move(spectrum)}};
}

inline Json config_json(const GameConfig& c) {
  return {{"m", c.params.m}, {"n", c.params.n}, {"copies", c.copies}, {"players", c.players},
          {"seed", c.seed}, {"deal_size", deal_size(c)}, {"max_move_size", c.params.n}};
}

/// Everything about a game that any participant may see; hands are public.
inline Json public_state(const GameState& s) {
  const auto& pal = s.config.palette;
  Json hands = Json::array();
  Json sizes = Json::array();
  for (const auto& h : s.hands) {
    hands.push_back(pal.codes(h));
    sizes.push_back(h.size());
  }
  Json j;
  j["round"] = s.round;
  j["turn"] = s.turn;
  j["first_player"] = s.first_player;
  j["turns_played"] = s.turns_played;
  j["acted_this_turn"] = s.acted_this_turn;
  j["finished"] = s.finished;
  j["final_round"] = s.final_round ? Json(*s.final_round) : Json(nullptr);
  j["final_trigger"] = s.final_trigger ? Json{{"player", s.final_trigger->player},
                                              {"cause", to_string(s.final_trigger->cause)}}
                                       : Json(nullptr);
  j["bag_count"] = s.bag.size();
  j["center"] = pal.codes(s.center);
  j["center_sum"] = pal.code(s.center.sum());
  j["hands"] = std::move(hands);
  j["hand_sizes"] = std::move(sizes);
  j["log_length"] = s.log.size();
  j["winners"] = s.finished ? Json(winner(s)) : Json(nullptr);
  return j;
}

/// Rebuilds the parts of a GameState that move legality and the bot policies read
/// (hands, Center, turn and final-round flags) from a public state message.
inline GameState mirror_state(const Json& st, const GameConfig& config) {
  const auto& pal = config.palette;
  GameState s;
  s.config = config;
  s.bag = Multiset(config.params);
  s.canceled = Multiset(config.params);
  for (const auto& h : st.at("hands")) s.hands.push_back(pal.parse_multiset(h.get<std::vector<std::string>>()));
  s.center = pal.parse_multiset(st.at("center").get<std::vector<std::string>>());
  s.center_sum = s.center.sum();
  s.round = st.at("round").get<std::uint32_t>();
  s.turn = st.at("turn").get<std::uint32_t>();
  s.first_player = st.at("first_player").get<std::uint32_t>();
  s.turns_played = st.at("turns_played").get<std::uint32_t>();
  s.acted_this_turn = st.at("acted_this_turn").get<bool>();
  s.finished = st.at("finished").get<bool>();
  if (!st.at("final_round").is_null()) s.final_round = st.at("final_round").get<std::uint32_t>();
  return s;
}

/// One protocol message as a single line (no trailing newline). `seq` counts every message of
/// the session; `client_seq` counts the messages delivered on one connection, so each client
/// sees a gapless 1, 2, 3, ... stream.
inline std::string envelope(std::string_view kind, std::uint64_t seq, std::uint64_t client_seq,
                            Json payload) {
  Json j;
  j["kind"] = kind;
  j["seq"] = seq;
  j["client_seq"] = client_seq;
  j["payload"] = std::move(payload);
  return j.dump();
}

}  // namespace aljabar::protocol
