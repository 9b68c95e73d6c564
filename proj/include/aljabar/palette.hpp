#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "aljabar/group.hpp"
#include "aljabar/multiset.hpp"

namespace aljabar {

struct ColorName {
  std::string name;     // "purple"
  std::string code;     // "P"
  std::string display;  // "#800080"
};

/// Bijection between the elements of a group and display names / short codes.
class Palette {
 public:
  Palette() = default;
  Palette(GroupParams params, std::vector<ColorName> names) : params_(params), names_(std::move(names)) {
    params_.validate();
    if (names_.size() != params_.order())
      throw ConfigError("palette needs " + std::to_string(params_.order()) + " names, got " +
                        std::to_string(names_.size()));
    for (std::uint32_t i = 0; i < names_.size(); ++i) {
      if (!by_code_.emplace(names_[i].code, i).second)
        throw ConfigError("duplicate palette code " + names_[i].code);
      if (!by_name_.emplace(names_[i].name, i).second)
        throw ConfigError("duplicate palette name " + names_[i].name);
    }
    if (names_[0].code != "K" || names_[0].name != "black/clear")
      throw ConfigError("palette identity must be named black/clear with code K");
  }

  const GroupParams& params() const { return params_; }
  std::size_t size() const { return names_.size(); }

  const ColorName& entry(const ColorVector& c) const {
    if (!(c.params() == params_)) throw DimensionError("color is not in this palette's group");
    return names_[c.index()];
  }
  const std::string& name(const ColorVector& c) const { return entry(c).name; }
  const std::string& code(const ColorVector& c) const { return entry(c).code; }

  std::optional<ColorVector> find_code(std::string_view code) const {
    auto it = by_code_.find(std::string(code));
    if (it == by_code_.end()) return std::nullopt;
    return ColorVector::from_index(params_, it->second);
  }
  std::optional<ColorVector> find_name(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return std::nullopt;
    return ColorVector::from_index(params_, it->second);
  }

  /// Like find_code but throws std::invalid_argument for unknown codes.
  ColorVector parse(std::string_view code) const {
    if (auto c = find_code(code)) return *c;
    throw std::invalid_argument("unknown color code '" + std::string(code) + "'");
  }

  Multiset parse_multiset(const std::vector<std::string>& codes) const {
    Multiset out(params_);
    for (const auto& c : codes) out.add(parse(c));
    return out;
  }

  std::vector<std::string> codes(const Multiset& ms) const {
    std::vector<std::string> out;
    out.reserve(ms.size());
    for (const auto& c : ms.pieces()) out.push_back(code(c));
    return out;
  }

  /// "R + B + B"; "K" for the empty multiset.
  std::string format(const Multiset& ms) const {
    if (ms.empty()) return "K";
    std::string s;
    for (const auto& c : ms.pieces()) {
      if (!s.empty()) s += " + ";
      s += code(c);
    }
    return s;
  }

  friend bool operator==(const Palette& a, const Palette& b) {
    return a.params_ == b.params_ && a.by_code_ == b.by_code_ && a.by_name_ == b.by_name_;
  }

 private:
  GroupParams params_{};
  std::vector<ColorName> names_;
  std::map<std::string, std::uint32_t, std::less<>> by_code_;
  std::map<std::string, std::uint32_t, std::less<>> by_name_;
};

namespace detail {

inline std::string hex_rgb(int r, int g, int b) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s = "#";
  for (int v : {r, g, b}) {
    v = std::clamp(v, 0, 255);
    s += kDigits[v >> 4];
    s += kDigits[v & 15];
  }
  return s;
}

// Evenly spaced hues for systematic palettes.
inline std::string hue_swatch(std::uint32_t i, std::uint32_t count) {
  double h = 6.0 * i / count;
  double x = 1.0 - std::abs(std::fmod(h, 2.0) - 1.0);
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(h)) {
    case 0: r = 1; g = x; break;
    case 1: r = x; g = 1; break;
    case 2: g = 1; b = x; break;
    case 3: g = x; b = 1; break;
    case 4: r = x; b = 1; break;
    default: r = 1; b = x; break;
  }
  auto s = [](double v) { return static_cast<int>(40 + 200 * v); };
  return hex_rgb(s(r), s(g), s(b));
}

}  // namespace detail

/// Named palette for (2,3) and (3,2); systematic "C(v1,...,vn)" names otherwise.
inline Palette standard_palette(GroupParams params) {
  params.validate();
  std::vector<ColorName> names(params.order());
  if (params.is_standard()) {
    // Index = 4*red + 2*yellow + blue.
    names[0] = {"black/clear", "K", "#111111"};
    names[1] = {"blue", "B", "#1f4fd1"};
    names[2] = {"yellow", "Y", "#f2d21b"};
    names[3] = {"green", "G", "#2e9e3e"};
    names[4] = {"red", "R", "#d12b2b"};
    names[5] = {"purple", "P", "#7b2fa8"};
    names[6] = {"orange", "O", "#f08a1c"};
    names[7] = {"white", "W", "#f8f8f8"};
  } else if (params.m == 3 && params.n == 2) {
    // Entry 0 is red shade, entry 1 is blue shade.
    names[0] = {"black/clear", "K", "#111111"};
    names[1] = {"light blue", "LB", "#8fb4f0"};
    names[2] = {"dark blue", "DB", "#1b3a8c"};
    names[3] = {"light red", "LR", "#f09a9a"};
    names[4] = {"light purple", "LP", "#c8a2e8"};
    names[5] = {"bluish purple", "BP", "#5b4bc4"};
    names[6] = {"dark red", "DR", "#8c1b1b"};
    names[7] = {"reddish purple", "RP", "#a8306e"};
    names[8] = {"dark purple", "DP", "#4a1460"};
  } else {
    names[0] = {"black/clear", "K", "#111111"};
    for (std::uint32_t i = 1; i < params.order(); ++i) {
      auto c = ColorVector::from_index(params, i);
      std::string code = "C";
      auto es = c.entries();
      for (std::size_t k = 0; k < es.size(); ++k) {
        if (k) code += '.';
        code += std::to_string(es[k]);
      }
      names[i] = {"C" + c.tuple_string(), code, detail::hue_swatch(i - 1, params.order() - 1)};
    }
  }
  return Palette(params, std::move(names));
}

/// table[i][j] = element i + element j, indices in lexicographic element order.
using AdditionTable = std::vector<std::vector<ColorVector>>;

inline AdditionTable addition_table(const Palette& palette) {
  auto elems = all_elements(palette.params());
  AdditionTable t(elems.size());
  for (std::size_t i = 0; i < elems.size(); ++i) {
    t[i].reserve(elems.size());
    for (std::size_t j = 0; j < elems.size(); ++j) t[i].push_back(add(elems[i], elems[j]));
  }
  return t;
}

/// CSV with a header row and column of short codes, rows and columns in `order`
/// (defaults to lexicographic element order).
inline std::string addition_table_csv(const Palette& palette,
                                      std::vector<ColorVector> order = {}) {
  if (order.empty()) order = all_elements(palette.params());
  std::ostringstream os;
  os << "+";
  for (const auto& c : order) os << ',' << palette.code(c);
  os << '\n';
  for (const auto& a : order) {
    os << palette.code(a);
    for (const auto& b : order) os << ',' << palette.code(add(a, b));
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Reduction traces: the by-hand technique for summing a set of pieces.

enum class ReductionAction { kCancel, kExpand, kCombine };

inline std::string_view to_string(ReductionAction a) {
  switch (a) {
    case ReductionAction::kCancel: return "cancel";
    case ReductionAction::kExpand: return "expand";
    case ReductionAction::kCombine: return "combine";
  }
  return "?";
}

struct ReductionStep {
  Multiset before;
  ReductionAction action;
  Multiset after;
};

struct ReductionTrace {
  Multiset start;
  std::vector<ReductionStep> steps;
  ColorVector final;

  /// "Y + O = Y + R + Y = R = R"-style chain using palette codes.
  std::string render(const Palette& palette) const {
    std::string s = palette.format(start);
    for (const auto& st : steps) s += " = " + palette.format(st.after);
    return s;
  }
};

namespace detail {

// Cancels m-tuples of every color and drops identity pieces. Returns true if anything changed.
inline bool cancel_tuples(Multiset& ms) {
  const auto m = ms.params().m;
  Multiset out(ms.params());
  for (const auto& r : ms.runs()) {
    if (r.color.is_identity()) continue;
    out.add(r.color, r.count % m);
  }
  bool changed = !(out == ms);
  ms = std::move(out);
  return changed;
}

inline bool expand_to_primaries(Multiset& ms) {
  const auto& p = ms.params();
  auto units = primaries(p);
  Multiset out(p);
  bool changed = false;
  for (const auto& r : ms.runs()) {
    if (r.color.is_identity() || is_primary(r.color)) {
      out.add(r.color, r.count);
      continue;
    }
    changed = true;
    auto es = r.color.entries();
    for (std::uint32_t i = 0; i < p.n; ++i) out.add(units[i], es[i] * r.count);
  }
  ms = std::move(out);
  return changed;
}

}  // namespace detail

/// Sums `pieces` by repeatedly cancelling m-tuples, expanding non-primary colors into
/// primaries (entry_i copies of e_i) and finally merging what remains into one piece.
/// Only steps that change the multiset are recorded.
inline ReductionTrace reduce_trace(const Multiset& pieces, const Palette& palette) {
  if (!(pieces.params() == palette.params()))
    throw DimensionError("multiset and palette are over different groups");
  const auto& p = pieces.params();
  ReductionTrace trace{pieces, {}, ColorVector::identity(p)};
  Multiset cur = pieces;
  auto record = [&](ReductionAction action, const Multiset& before) {
    trace.steps.push_back({before, action, cur});
  };

  while (cur.size() > 1) {
    Multiset before = cur;
    if (detail::cancel_tuples(cur)) record(ReductionAction::kCancel, before);
    if (cur.size() <= 1) break;
    before = cur;
    if (detail::expand_to_primaries(cur)) {
      record(ReductionAction::kExpand, before);
      continue;
    }
    // Only primaries with counts below m remain: they merge into a single piece.
    before = cur;
    cur = Multiset(p, {cur.sum()});
    record(ReductionAction::kCombine, before);
  }
  trace.final = cur.empty() ? ColorVector::identity(p) : cur.at(0);
  return trace;
}

}  // namespace aljabar
