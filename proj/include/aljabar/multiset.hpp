#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "aljabar/group.hpp"

namespace aljabar {

/// A multiset of colors kept canonically as (color, count) runs sorted by color.
/// Two multisets are equal iff their counts match.
class Multiset {
 public:
  struct Run {
    ColorVector color;
    std::uint32_t count = 0;
    friend bool operator==(const Run&, const Run&) = default;
  };

  Multiset() = default;
  explicit Multiset(GroupParams params) : params_(params) {}

  Multiset(GroupParams params, std::span<const ColorVector> pieces) : params_(params) {
    for (const auto& c : pieces) add(c);
  }
  Multiset(GroupParams params, std::initializer_list<ColorVector> pieces)
      : Multiset(params, std::span<const ColorVector>(pieces.begin(), pieces.size())) {}

  const GroupParams& params() const { return params_; }
  const std::vector<Run>& runs() const { return runs_; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  std::size_t distinct() const { return runs_.size(); }

  std::uint32_t count(const ColorVector& c) const {
    auto it = find(c);
    return it != runs_.end() && it->color == c ? it->count : 0;
  }

  void add(const ColorVector& c, std::uint32_t k = 1) {
    check(c);
    if (k == 0) return;
    auto it = find(c);
    if (it != runs_.end() && it->color == c)
      it->count += k;
    else
      runs_.insert(it, Run{c, k});
    size_ += k;
  }

  void add(const Multiset& other) {
    for (const auto& r : other.runs_) add(r.color, r.count);
  }

  /// Removes k copies of c; throws RuleError if fewer are present.
  void remove(const ColorVector& c, std::uint32_t k = 1) {
    if (k == 0) return;
    auto it = find(c);
    if (it == runs_.end() || !(it->color == c) || it->count < k)
      throw RuleError("multiset does not hold " + std::to_string(k) + " copies of color " +
                      c.tuple_string());
    it->count -= k;
    size_ -= k;
    if (it->count == 0) runs_.erase(it);
  }

  void remove(const Multiset& other) {
    if (!contains(other)) throw RuleError("multiset does not contain the requested pieces");
    for (const auto& r : other.runs_) remove(r.color, r.count);
  }

  bool contains(const Multiset& other) const {
    for (const auto& r : other.runs_)
      if (count(r.color) < r.count) return false;
    return true;
  }

  /// The i-th piece in canonical (sorted) order.
  const ColorVector& at(std::size_t i) const {
    for (const auto& r : runs_) {
      if (i < r.count) return r.color;
      i -= r.count;
    }
    throw std::out_of_range("multiset index out of range");
  }

  /// Removes and returns the i-th piece in canonical order.
  ColorVector take_at(std::size_t i) {
    ColorVector c = at(i);
    remove(c);
    return c;
  }

  std::vector<ColorVector> pieces() const {
    std::vector<ColorVector> out;
    out.reserve(size_);
    for (const auto& r : runs_) out.insert(out.end(), r.count, r.color);
    return out;
  }

  ColorVector sum() const {
    ColorVector acc = ColorVector::identity(params_);
    for (const auto& r : runs_) acc = add_colors(acc, multiple(r.color, r.count));
    return acc;
  }

  friend bool operator==(const Multiset& a, const Multiset& b) {
    return a.params_ == b.params_ && a.runs_ == b.runs_;
  }

  /// Lexicographic on the sorted piece sequence; shorter prefixes first.
  friend bool operator<(const Multiset& a, const Multiset& b) {
    std::size_t ia = 0, ib = 0, ca = 0, cb = 0;
    while (ia < a.runs_.size() && ib < b.runs_.size()) {
      const auto& ra = a.runs_[ia];
      const auto& rb = b.runs_[ib];
      if (!(ra.color == rb.color)) return ra.color < rb.color;
      std::uint32_t left_a = ra.count - static_cast<std::uint32_t>(ca);
      std::uint32_t left_b = rb.count - static_cast<std::uint32_t>(cb);
      std::uint32_t step = std::min(left_a, left_b);
      ca += step;
      cb += step;
      if (ca == ra.count) { ++ia; ca = 0; }
      if (cb == rb.count) { ++ib; cb = 0; }
    }
    return ia == a.runs_.size() && ib < b.runs_.size();
  }

 private:
  static ColorVector add_colors(const ColorVector& a, const ColorVector& b) { return aljabar::add(a, b); }

  void check(const ColorVector& c) const {
    if (!(c.params() == params_))
      throw DimensionError("color from " + c.params().to_string() + " added to a multiset over " +
                           params_.to_string());
  }

  std::vector<Run>::iterator find(const ColorVector& c) {
    return std::lower_bound(runs_.begin(), runs_.end(), c,
                            [](const Run& r, const ColorVector& v) { return r.color < v; });
  }
  std::vector<Run>::const_iterator find(const ColorVector& c) const {
    return std::lower_bound(runs_.begin(), runs_.end(), c,
                            [](const Run& r, const ColorVector& v) { return r.color < v; });
  }

  GroupParams params_{};
  std::vector<Run> runs_;
  std::size_t size_ = 0;
};

/// Group sum of a multiset; the empty multiset sums to the identity.
inline ColorVector sum_multiset(const Multiset& pieces) { return pieces.sum(); }

}  // namespace aljabar
