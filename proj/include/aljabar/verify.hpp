#pragma once

// Self-checks of the color arithmetic against the published two-piece combination table,
// the worked identities, the group axioms and the setup formulas.

#include <array>
#include <sstream>
#include <string>
#include <vector>

#include "aljabar/game.hpp"
#include "aljabar/rules.hpp"

namespace aljabar {

/// Header row (and column) order of the published table.
inline constexpr std::array<const char*, 8> kReferenceTableOrder = {"K", "R", "B", "Y", "P", "O", "G", "W"};

/// The published two-piece combination table, row by row in kReferenceTableOrder.
inline constexpr std::array<std::array<const char*, 8>, 8> kReferenceTable = {{
    {"K", "R", "B", "Y", "P", "O", "G", "W"},
    {"R", "K", "P", "O", "B", "Y", "W", "G"},
    {"B", "P", "K", "G", "R", "W", "Y", "O"},
    {"Y", "O", "G", "K", "W", "R", "B", "P"},
    {"P", "B", "R", "W", "K", "G", "O", "Y"},
    {"O", "Y", "W", "R", "G", "K", "P", "B"},
    {"G", "W", "Y", "B", "O", "P", "K", "R"},
    {"W", "G", "O", "P", "Y", "B", "R", "K"},
}};

struct CheckResult {
  std::string name;
  bool ok = true;
  std::string detail;
  std::vector<std::string> failures;
};

struct TableComparison {
  std::uint32_t matched = 0;
  std::uint32_t total = 0;
  std::vector<std::string> mismatches;
};

/// Compares the generated (2,3) table with `expected` (defaults to the published table).
inline TableComparison compare_reference_table(
    const std::array<std::array<const char*, 8>, 8>& expected = kReferenceTable) {
  const auto pal = standard_palette({2, 3});
  TableComparison out;
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 8; ++j) {
      ++out.total;
      const auto got = pal.code(pal.parse(kReferenceTableOrder[i]) + pal.parse(kReferenceTableOrder[j]));
      if (got == expected[i][j]) {
        ++out.matched;
      } else {
        out.mismatches.push_back(std::string(kReferenceTableOrder[i]) + " + " + kReferenceTableOrder[j] + " = " +
                                 got + ", table says " + expected[i][j]);
      }
    }
  }
  return out;
}

inline CheckResult check_table(const std::array<std::array<const char*, 8>, 8>& expected = kReferenceTable) {
  const auto cmp = compare_reference_table(expected);
  CheckResult r{"addition table", cmp.mismatches.empty(),
                std::to_string(cmp.matched) + "/" + std::to_string(cmp.total) + " table entries match",
                cmp.mismatches};
  return r;
}

/// Sums of the worked examples. Each entry: pieces, expected sum.
inline std::vector<std::pair<std::vector<std::string>, std::string>> worked_identities() {
  return {
      // equal to R
      {{"Y", "O"}, "R"}, {{"B", "P"}, "R"}, {{"G", "W"}, "R"}, {{"Y", "P", "G"}, "R"}, {{"O", "P", "W"}, "R"},
      {{"R", "B", "P"}, "K"},
      // secondary plus primary
      {{"R", "O"}, "Y"}, {{"R", "P"}, "B"}, {{"B", "G"}, "Y"}, {{"Y", "G"}, "B"},
      // pairs of secondaries
      {{"G", "O"}, "P"}, {{"G", "P"}, "O"}, {{"O", "P"}, "G"},
      // identity pieces and white
      {{"R", "K"}, "R"}, {{"K", "K"}, "K"}, {{"K", "K", "K"}, "K"}, {{"R", "B", "B"}, "R"}, {{"R", "B", "Y"}, "W"},
  };
}

inline CheckResult check_identities() {
  const auto pal = standard_palette({2, 3});
  CheckResult r{"worked identities", true, "", {}};
  const auto ids = worked_identities();
  for (const auto& [pieces, want] : ids) {
    const auto got = pal.parse_multiset(pieces).sum();
    if (pal.code(got) != want) {
      r.ok = false;
      r.failures.push_back(pal.format(pal.parse_multiset(pieces)) + " = " + pal.code(got) + ", expected " + want);
    }
  }
  r.detail = std::to_string(ids.size() - r.failures.size()) + "/" + std::to_string(ids.size()) + " identities hold";
  return r;
}

/// Closure, identity, inverses and commutativity exhaustively; associativity exhaustively when
/// `random_triples` is 0, otherwise on that many seeded random triples.
inline CheckResult check_axioms(GroupParams p, std::uint32_t random_triples = 0, std::uint64_t seed = 1) {
  CheckResult r{"group axioms " + p.to_string(), true, "", {}};
  const auto els = all_elements(p);
  const auto e = ColorVector::identity(p);
  auto fail = [&](std::string what) {
    r.ok = false;
    if (r.failures.size() < 10) r.failures.push_back(std::move(what));
  };
  for (const auto& a : els) {
    if (!(a + e == a) || !(e + a == a)) fail("identity fails for " + a.tuple_string());
    if (!(a + inverse(a) == e)) fail("inverse fails for " + a.tuple_string());
    if (p.m == 2 && !(a + a == e)) fail("not self-inverse: " + a.tuple_string());
    for (const auto& b : els) {
      const auto s = a + b;
      if (s.index() >= p.order()) fail("closure fails for " + a.tuple_string() + " + " + b.tuple_string());
      if (!(s == b + a)) fail("commutativity fails for " + a.tuple_string() + ", " + b.tuple_string());
    }
  }
  std::uint64_t triples = 0;
  auto assoc = [&](const ColorVector& a, const ColorVector& b, const ColorVector& c) {
    ++triples;
    if (!((a + b) + c == a + (b + c)))
      fail("associativity fails for " + a.tuple_string() + ", " + b.tuple_string() + ", " + c.tuple_string());
  };
  if (random_triples == 0) {
    for (const auto& a : els)
      for (const auto& b : els)
        for (const auto& c : els) assoc(a, b, c);
  } else {
    Rng rng(seed);
    for (std::uint32_t t = 0; t < random_triples; ++t)
      assoc(els[rng.below(els.size())], els[rng.below(els.size())], els[rng.below(els.size())]);
  }
  r.detail = std::to_string(els.size()) + " elements, " + std::to_string(els.size() * els.size()) + " pairs, " +
             std::to_string(triples) + (random_triples ? " random" : "") + " triples";
  return r;
}

inline CheckResult check_formulas() {
  CheckResult r{"setup formulas", true, "", {}};
  auto expect = [&](const std::string& what, std::uint64_t got, std::uint64_t want) {
    if (got != want) {
      r.ok = false;
      r.failures.push_back(what + " = " + std::to_string(got) + ", expected " + std::to_string(want));
    }
  };
  expect("deal size (2,3)", deal_size(GameConfig::standard()), 13);
  expect("deal size (2,4)", deal_size(GameConfig::make({2, 4}, 2, 10, 0)), 29);
  expect("pool size (2,3), A=10", pool_contents(GameConfig::standard()).size(), 70);
  for (GroupParams p : {GroupParams{2, 3}, GroupParams{2, 4}, GroupParams{3, 2}}) {
    const auto s = sum_pieces(p, spectrum_set(p));
    if (!s.is_identity()) {
      r.ok = false;
      r.failures.push_back("spectrum of " + p.to_string() + " sums to " + s.tuple_string());
    }
  }
  r.detail = "deal 13 for (2,3), deal 29 for (2,4), pool 70, spectrum sums to K for (2,3) (2,4) (3,2)";
  return r;
}

inline CheckResult check_fano() {
  const GroupParams p{2, 3};
  const auto pal = standard_palette(p);
  CheckResult r{"fano lines", true, "", {}};
  const auto lines = fano_lines(p);
  if (lines.size() != 7) {
    r.ok = false;
    r.failures.push_back(std::to_string(lines.size()) + " lines, expected 7");
  }
  std::vector<int> on(p.order(), 0);
  std::ostringstream shown;
  for (const auto& l : lines) {
    if (!(l[0] + l[1] + l[2]).is_identity()) {
      r.ok = false;
      r.failures.push_back("line " + pal.code(l[0]) + pal.code(l[1]) + pal.code(l[2]) + " does not sum to K");
    }
    for (const auto& c : l) ++on[c.index()];
    shown << ' ' << pal.code(l[0]) << pal.code(l[1]) << pal.code(l[2]);
  }
  for (std::uint32_t i = 1; i < p.order(); ++i) {
    if (on[i] != 3) {
      r.ok = false;
      r.failures.push_back(pal.code(ColorVector::from_index(p, i)) + " lies on " + std::to_string(on[i]) + " lines");
    }
  }
  r.detail = "7 lines sum to K, each color on 3 lines:" + shown.str();
  return r;
}

inline std::vector<CheckResult> verify_all(bool corrupt_table = false) {
  auto expected = kReferenceTable;
  if (corrupt_table) expected[1][2] = "G";  // R + B
  return {check_table(expected),     check_identities(),          check_axioms({2, 3}),
          check_axioms({2, 4}),      check_axioms({3, 2}, 10000), check_formulas(),
          check_fano()};
}

}  // namespace aljabar
