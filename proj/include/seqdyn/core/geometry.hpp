#pragma once

#include <map>
#include <utility>
#include <vector>

#include "seqdyn/core/rational.hpp"

namespace seqdyn {

struct Point {
  Rational x;
  Rational y;

  friend bool operator==(const Point&, const Point&) = default;
};

struct Vec2 {
  Rational dx;
  Rational dy;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

// Half-open axis-parallel rectangle [x0, x1) x [y0, y1).
struct Rect {
  Rational x0;
  Rational y0;
  Rational x1;
  Rational y1;

  Rational width() const { return x1 - x0; }
  Rational height() const { return y1 - y0; }
  Rational area() const { return width() * height(); }
  bool empty() const { return x1 <= x0 || y1 <= y0; }

  bool contains(const Point& p) const { return x0 <= p.x && p.x < x1 && y0 <= p.y && p.y < y1; }

  Rect translated(const Vec2& v) const { return {x0 + v.dx, y0 + v.dy, x1 + v.dx, y1 + v.dy}; }

  friend bool operator==(const Rect&, const Rect&) = default;
};

inline Rect intersect(const Rect& a, const Rect& b) {
  return {max(a.x0, b.x0), max(a.y0, b.y0), min(a.x1, b.x1), min(a.y1, b.y1)};
}

inline bool overlaps(const Rect& a, const Rect& b) { return !intersect(a, b).empty(); }

inline Rect unit_square() { return {Rational(0), Rational(0), Rational(1), Rational(1)}; }

// Union of closed axis-parallel segments, stored per supporting line as
// merged disjoint intervals. Used to track partition boundaries exactly.
class SegmentSet {
 public:
  using Intervals = std::vector<std::pair<Rational, Rational>>;

  void add_horizontal(const Rational& y, const Rational& x0, const Rational& x1) {
    if (x0 < x1) insert(horizontal_[y], x0, x1);
  }
  void add_vertical(const Rational& x, const Rational& y0, const Rational& y1) {
    if (y0 < y1) insert(vertical_[x], y0, y1);
  }

  void add(const SegmentSet& other) {
    for (const auto& [y, ivs] : other.horizontal_)
      for (const auto& [a, b] : ivs) add_horizontal(y, a, b);
    for (const auto& [x, ivs] : other.vertical_)
      for (const auto& [a, b] : ivs) add_vertical(x, a, b);
  }

  // Adds the four closed edges of a rectangle.
  void add_edges(const Rect& r) {
    add_horizontal(r.y0, r.x0, r.x1);
    add_horizontal(r.y1, r.x0, r.x1);
    add_vertical(r.x0, r.y0, r.y1);
    add_vertical(r.x1, r.y0, r.y1);
  }

  // Drops segments lying on the boundary of the unit square.
  void drop_outer_boundary() {
    horizontal_.erase(Rational(0));
    horizontal_.erase(Rational(1));
    vertical_.erase(Rational(0));
    vertical_.erase(Rational(1));
  }

  Rational length() const {
    Rational total;
    for (const auto& [line, ivs] : horizontal_)
      for (const auto& [a, b] : ivs) total += b - a;
    for (const auto& [line, ivs] : vertical_)
      for (const auto& [a, b] : ivs) total += b - a;
    return total;
  }

  std::size_t segment_count() const {
    std::size_t n = 0;
    for (const auto& [line, ivs] : horizontal_) n += ivs.size();
    for (const auto& [line, ivs] : vertical_) n += ivs.size();
    return n;
  }

  const std::map<Rational, Intervals>& horizontal() const noexcept { return horizontal_; }
  const std::map<Rational, Intervals>& vertical() const noexcept { return vertical_; }

  friend bool operator==(const SegmentSet&, const SegmentSet&) = default;

 private:
  static void insert(Intervals& ivs, Rational a, Rational b) {
    Intervals out;
    out.reserve(ivs.size() + 1);
    bool placed = false;
    for (auto& iv : ivs) {
      if (iv.second < a) {
        out.push_back(std::move(iv));
      } else if (b < iv.first) {
        if (!placed) {
          out.emplace_back(a, b);
          placed = true;
        }
        out.push_back(std::move(iv));
      } else {
        a = min(a, iv.first);
        b = max(b, iv.second);
      }
    }
    if (!placed) out.emplace_back(std::move(a), std::move(b));
    ivs = std::move(out);
  }

  std::map<Rational, Intervals> horizontal_;
  std::map<Rational, Intervals> vertical_;
};

}  // namespace seqdyn
