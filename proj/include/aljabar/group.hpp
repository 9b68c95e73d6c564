#pragma once

// Arithmetic of piece colors as the finite abelian group (Z_m)^n.
//
// A color is stored as its mixed-radix index: entry 0 is the most significant
// digit, so ordering by index is the lexicographic order on entries.

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "aljabar/errors.hpp"

namespace aljabar {

struct GroupParams {
  static constexpr std::uint64_t kMaxOrder = std::uint64_t{1} << 20;

  std::uint32_t m = 2;
  std::uint32_t n = 3;

  constexpr GroupParams() = default;
  constexpr GroupParams(std::uint32_t modulus, std::uint32_t length) : m(modulus), n(length) {}

  /// Throws ConfigError unless m >= 2, n >= 1 and m^n <= 2^20.
  void validate() const {
    if (m < 2) throw ConfigError("group modulus m must be at least 2, got " + std::to_string(m));
    if (n < 1) throw ConfigError("vector length n must be at least 1");
    std::uint64_t o = 1;
    for (std::uint32_t i = 0; i < n; ++i) {
      o *= m;
      if (o > kMaxOrder)
        throw ConfigError("group order " + std::to_string(m) + "^" + std::to_string(n) +
                          " exceeds the supported limit 2^20");
    }
  }

  /// m^n. Assumes validate() passed.
  constexpr std::uint32_t order() const {
    std::uint32_t o = 1;
    for (std::uint32_t i = 0; i < n; ++i) o *= m;
    return o;
  }

  constexpr bool is_standard() const { return m == 2 && n == 3; }

  friend constexpr bool operator==(const GroupParams&, const GroupParams&) = default;

  std::string to_string() const {
    return "(Z_" + std::to_string(m) + ")^" + std::to_string(n);
  }
};

class ColorVector {
 public:
  ColorVector() = default;

  /// Builds a color from explicit residues; throws DimensionError on a bad length or entry.
  ColorVector(GroupParams params, std::span<const std::uint32_t> entries) : params_(params) {
    if (entries.size() != params.n)
      throw DimensionError("color has " + std::to_string(entries.size()) + " entries, group " +
                           params.to_string() + " needs " + std::to_string(params.n));
    std::uint32_t idx = 0;
    for (auto e : entries) {
      if (e >= params.m)
        throw DimensionError("entry " + std::to_string(e) + " is not a residue mod " +
                             std::to_string(params.m));
      idx = idx * params.m + e;
    }
    index_ = idx;
  }

  ColorVector(GroupParams params, std::initializer_list<std::uint32_t> entries)
      : ColorVector(params, std::span<const std::uint32_t>(entries.begin(), entries.size())) {}

  static ColorVector from_index(GroupParams params, std::uint32_t index) {
    if (index >= params.order())
      throw DimensionError("color index " + std::to_string(index) + " outside group " +
                           params.to_string());
    ColorVector c;
    c.params_ = params;
    c.index_ = index;
    return c;
  }

  static ColorVector identity(GroupParams params) { return from_index(params, 0); }

  const GroupParams& params() const { return params_; }
  std::uint32_t index() const { return index_; }
  bool is_identity() const { return index_ == 0; }

  std::uint32_t entry(std::uint32_t i) const {
    std::uint32_t v = index_;
    for (std::uint32_t k = params_.n - 1; k > i; --k) v /= params_.m;
    return v % params_.m;
  }

  std::vector<std::uint32_t> entries() const {
    std::vector<std::uint32_t> out(params_.n);
    std::uint32_t v = index_;
    for (std::uint32_t k = params_.n; k-- > 0;) {
      out[k] = v % params_.m;
      v /= params_.m;
    }
    return out;
  }

  /// "(1,0,1)"
  std::string tuple_string() const {
    std::string s = "(";
    auto es = entries();
    for (std::size_t i = 0; i < es.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(es[i]);
    }
    return s + ")";
  }

  friend bool operator==(const ColorVector& a, const ColorVector& b) {
    return a.params_ == b.params_ && a.index_ == b.index_;
  }
  friend std::strong_ordering operator<=>(const ColorVector& a, const ColorVector& b) {
    if (auto c = a.params_.m <=> b.params_.m; c != 0) return c;
    if (auto c = a.params_.n <=> b.params_.n; c != 0) return c;
    return a.index_ <=> b.index_;
  }

 private:
  GroupParams params_{};
  std::uint32_t index_ = 0;
};

namespace detail {

inline void require_same_group(const ColorVector& a, const ColorVector& b) {
  if (!(a.params() == b.params()))
    throw DimensionError("cannot combine colors of " + a.params().to_string() + " and " +
                         b.params().to_string());
}

}  // namespace detail

/// Componentwise sum modulo m.
inline ColorVector add(const ColorVector& a, const ColorVector& b) {
  detail::require_same_group(a, b);
  const auto& p = a.params();
  if (p.m == 2) return ColorVector::from_index(p, a.index() ^ b.index());
  std::uint32_t x = a.index(), y = b.index(), out = 0, place = 1;
  for (std::uint32_t k = 0; k < p.n; ++k) {
    out += ((x % p.m + y % p.m) % p.m) * place;
    x /= p.m;
    y /= p.m;
    place *= p.m;
  }
  return ColorVector::from_index(p, out);
}

inline ColorVector operator+(const ColorVector& a, const ColorVector& b) { return add(a, b); }

/// Componentwise negation modulo m; every color is its own inverse when m = 2.
inline ColorVector inverse(const ColorVector& a) {
  const auto& p = a.params();
  if (p.m == 2) return a;
  std::uint32_t x = a.index(), out = 0, place = 1;
  for (std::uint32_t k = 0; k < p.n; ++k) {
    out += ((p.m - x % p.m) % p.m) * place;
    x /= p.m;
    place *= p.m;
  }
  return ColorVector::from_index(p, out);
}

/// k-fold sum a + a + ... + a.
inline ColorVector multiple(const ColorVector& a, std::uint64_t k) {
  const auto& p = a.params();
  std::uint32_t x = a.index(), out = 0, place = 1;
  const auto km = static_cast<std::uint32_t>(k % p.m);
  for (std::uint32_t d = 0; d < p.n; ++d) {
    out += static_cast<std::uint32_t>((std::uint64_t{x % p.m} * km) % p.m) * place;
    x /= p.m;
    place *= p.m;
  }
  return ColorVector::from_index(p, out);
}

/// Group sum of a sequence of pieces. An empty sequence sums to the identity of `params`.
inline ColorVector sum_pieces(GroupParams params, std::span<const ColorVector> pieces) {
  ColorVector acc = ColorVector::identity(params);
  for (const auto& c : pieces) acc = add(acc, c);
  return acc;
}

inline std::vector<ColorVector> all_elements(GroupParams params) {
  std::vector<ColorVector> out;
  out.reserve(params.order());
  for (std::uint32_t i = 0; i < params.order(); ++i) out.push_back(ColorVector::from_index(params, i));
  return out;
}

/// The unit vectors e_1..e_n in index order.
inline std::vector<ColorVector> primaries(GroupParams params) {
  std::vector<ColorVector> out;
  out.reserve(params.n);
  for (std::uint32_t i = 0; i < params.n; ++i) {
    std::vector<std::uint32_t> e(params.n, 0);
    e[i] = 1;
    out.emplace_back(params, std::span<const std::uint32_t>(e));
  }
  return out;
}

/// The all-(m-1) vector; white in the standard game.
inline ColorVector spectrum_apex(GroupParams params) {
  std::vector<std::uint32_t> e(params.n, params.m - 1);
  return ColorVector(params, std::span<const std::uint32_t>(e));
}

/// The n primaries followed by the all-(m-1) vector. Sums to the identity.
inline std::vector<ColorVector> spectrum_set(GroupParams params) {
  auto out = primaries(params);
  out.push_back(spectrum_apex(params));
  return out;
}

inline bool is_primary(const ColorVector& c) {
  int nonzero = 0;
  for (auto e : c.entries()) {
    if (e > 1) return false;
    nonzero += e != 0;
  }
  return nonzero == 1;
}

using FanoLine = std::array<ColorVector, 3>;

/// The seven lines {a, b, a+b} of the Fano plane on the non-identity colors of (Z_2)^3,
/// each sorted, in lexicographic order.
inline std::vector<FanoLine> fano_lines(GroupParams params) {
  if (!params.is_standard())
    throw NotApplicable("Fano lines are defined only for (Z_2)^3, not " + params.to_string());
  std::vector<FanoLine> lines;
  for (std::uint32_t a = 1; a < 8; ++a)
    for (std::uint32_t b = a + 1; b < 8; ++b) {
      std::uint32_t c = a ^ b;
      if (c > b)
        lines.push_back({ColorVector::from_index(params, a), ColorVector::from_index(params, b),
                         ColorVector::from_index(params, c)});
    }
  return lines;
}

}  // namespace aljabar
