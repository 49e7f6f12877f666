#pragma once

#include <optional>
#include <string>
#include <vector>

#include "seqdyn/core/budget.hpp"
#include "seqdyn/core/geometry.hpp"

namespace seqdyn {

struct TilingIssue {
  enum class Kind {
    kEmptySource,
    kSourceOutOfBounds,
    kOverlap,
    kGap,
    kImageOutOfBounds,
    kImageOverlap,
    kShapeMismatch,
  };

  Kind kind;
  std::size_t first = 0;
  std::size_t second = 0;
  std::string message;
};

inline const char* to_string(TilingIssue::Kind k) {
  switch (k) {
    case TilingIssue::Kind::kEmptySource: return "empty-source";
    case TilingIssue::Kind::kSourceOutOfBounds: return "source-out-of-bounds";
    case TilingIssue::Kind::kOverlap: return "overlap";
    case TilingIssue::Kind::kGap: return "gap";
    case TilingIssue::Kind::kImageOutOfBounds: return "image-out-of-bounds";
    case TilingIssue::Kind::kImageOverlap: return "image-overlap";
    case TilingIssue::Kind::kShapeMismatch: return "shape-mismatch";
  }
  return "unknown";
}

namespace detail {

inline bool inside_unit_square(const Rect& r) {
  return r.x0.sign() >= 0 && r.y0.sign() >= 0 && !(Rational(1) < r.x1) && !(Rational(1) < r.y1);
}

}  // namespace detail

// Checks that the sources tile the unit square and that the translated
// images tile it too. Returns the first violation found.
inline std::optional<TilingIssue> rect_validate(const std::vector<Rect>& sources,
                                                const std::vector<Vec2>& translations) {
  using Kind = TilingIssue::Kind;
  if (sources.size() != translations.size()) {
    return TilingIssue{Kind::kShapeMismatch, sources.size(), translations.size(),
                       "expected one translation per source rectangle"};
  }
  Rational area;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const Rect& r = sources[i];
    if (r.empty()) return TilingIssue{Kind::kEmptySource, i, i, "source " + std::to_string(i) + " is empty"};
    if (!detail::inside_unit_square(r)) {
      return TilingIssue{Kind::kSourceOutOfBounds, i, i, "source " + std::to_string(i) + " leaves the unit square"};
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (overlaps(sources[j], r)) {
        return TilingIssue{Kind::kOverlap, j, i,
                           "sources " + std::to_string(j) + " and " + std::to_string(i) + " overlap"};
      }
    }
    area += r.area();
  }
  if (area != Rational(1)) {
    return TilingIssue{Kind::kGap, 0, 0, "sources cover area " + area.str() + ", not 1"};
  }
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const Rect img = sources[i].translated(translations[i]);
    if (!detail::inside_unit_square(img)) {
      return TilingIssue{Kind::kImageOutOfBounds, i, i,
                         "image of source " + std::to_string(i) + " leaves the unit square"};
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (overlaps(sources[j].translated(translations[j]), img)) {
        return TilingIssue{Kind::kImageOverlap, j, i,
                           "images of sources " + std::to_string(j) + " and " + std::to_string(i) + " overlap"};
      }
    }
  }
  return std::nullopt;
}

// Piecewise translation of [0,1)^2 permuting axis-parallel rectangles.
// Points on shared edges belong to the rectangle containing them under the
// half-open convention (lower and left edges included).
class RectangleExchange {
 public:
  RectangleExchange() : sources_{unit_square()}, translations_{Vec2{}} {}

  RectangleExchange(std::vector<Rect> sources, std::vector<Vec2> translations)
      : sources_(std::move(sources)), translations_(std::move(translations)) {
    if (auto issue = rect_validate(sources_, translations_)) {
      throw ValidationError(std::string("invalid rectangle exchange (") + to_string(issue->kind) +
                            "): " + issue->message);
    }
  }

  static RectangleExchange identity() { return {}; }

  // Swap of the left and right halves.
  static RectangleExchange vertical_swap() {
    const Rational h(1, 2);
    return RectangleExchange({{Rational(0), Rational(0), h, Rational(1)}, {h, Rational(0), Rational(1), Rational(1)}},
                             {{h, Rational(0)}, {-h, Rational(0)}});
  }

  // (x, y) -> (x + alpha mod 1, y + beta mod 1) as four rectangles.
  static RectangleExchange product_rotation(const Rational& alpha, const Rational& beta) {
    const Rational a = frac(alpha);
    const Rational b = frac(beta);
    if (a.sign() == 0 || b.sign() == 0) throw ValidationError("product rotation needs nonzero angles");
    const Rational xa = Rational(1) - a;
    const Rational yb = Rational(1) - b;
    const Rational z(0), one(1);
    return RectangleExchange({{z, z, xa, yb}, {xa, z, one, yb}, {z, yb, xa, one}, {xa, yb, one, one}},
                             {{a, b}, {a - one, b}, {a, b - one}, {a - one, b - one}});
  }

  const std::vector<Rect>& sources() const noexcept { return sources_; }
  const std::vector<Vec2>& translations() const noexcept { return translations_; }
  std::size_t size() const noexcept { return sources_.size(); }

  std::size_t source_index(const Point& p) const {
    for (std::size_t i = 0; i < sources_.size(); ++i) {
      if (sources_[i].contains(p)) return i;
    }
    throw DomainError("point (" + p.x.str() + ", " + p.y.str() + ") outside [0,1)^2");
  }

  Point apply(const Point& p) const {
    const Vec2& v = translations_[source_index(p)];
    return {p.x + v.dx, p.y + v.dy};
  }

  RectangleExchange inverse() const {
    std::vector<Rect> src;
    std::vector<Vec2> tr;
    for (std::size_t i = 0; i < sources_.size(); ++i) {
      src.push_back(sources_[i].translated(translations_[i]));
      tr.push_back({-translations_[i].dx, -translations_[i].dy});
    }
    return RectangleExchange(std::move(src), std::move(tr));
  }

  // Exact preimage of a rectangle as disjoint rectangles.
  std::vector<Rect> preimage(const Rect& target) const {
    std::vector<Rect> out;
    for (std::size_t i = 0; i < sources_.size(); ++i) {
      const Vec2& v = translations_[i];
      const Rect hit = intersect(sources_[i].translated(v), target);
      if (!hit.empty()) out.push_back(hit.translated({-v.dx, -v.dy}));
    }
    return out;
  }

  // Pushes closed segments through the exchange: each segment is clipped to
  // every closed source rectangle and translated with it. Segments on the
  // outer boundary of the square are dropped.
  SegmentSet push_segments(const SegmentSet& segs) const {
    SegmentSet out;
    for (std::size_t i = 0; i < sources_.size(); ++i) {
      const Rect& r = sources_[i];
      const Vec2& v = translations_[i];
      for (const auto& [y, ivs] : segs.horizontal()) {
        if (y < r.y0 || r.y1 < y) continue;
        for (const auto& [a, b] : ivs) {
          const Rational lo = max(a, r.x0);
          const Rational hi = min(b, r.x1);
          if (lo < hi) out.add_horizontal(y + v.dy, lo + v.dx, hi + v.dx);
        }
      }
      for (const auto& [x, ivs] : segs.vertical()) {
        if (x < r.x0 || r.x1 < x) continue;
        for (const auto& [a, b] : ivs) {
          const Rational lo = max(a, r.y0);
          const Rational hi = min(b, r.y1);
          if (lo < hi) out.add_vertical(x + v.dx, lo + v.dy, hi + v.dy);
        }
      }
    }
    out.drop_outer_boundary();
    return out;
  }

  // Interior edges of the translated source rectangles: the set where the
  // image partition can be discontinuous.
  SegmentSet image_discontinuities() const {
    SegmentSet out;
    for (std::size_t i = 0; i < sources_.size(); ++i) out.add_edges(sources_[i].translated(translations_[i]));
    out.drop_outer_boundary();
    return out;
  }

  SegmentSet source_discontinuities() const {
    SegmentSet out;
    for (const auto& r : sources_) out.add_edges(r);
    out.drop_outer_boundary();
    return out;
  }

  Rational discontinuity_length() const { return image_discontinuities().length(); }

 private:
  std::vector<Rect> sources_;
  std::vector<Vec2> translations_;
};

inline Point rect_apply(const RectangleExchange& t, const Point& p) { return t.apply(p); }

// Greedily merges disjoint rectangles that share a full edge.
inline std::vector<Rect> merge_rects(std::vector<Rect> rects) {
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < rects.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < rects.size() && !merged; ++j) {
        Rect& a = rects[i];
        const Rect& b = rects[j];
        if (a.y0 == b.y0 && a.y1 == b.y1 && (a.x1 == b.x0 || b.x1 == a.x0)) {
          a = {min(a.x0, b.x0), a.y0, max(a.x1, b.x1), a.y1};
          merged = true;
        } else if (a.x0 == b.x0 && a.x1 == b.x1 && (a.y1 == b.y0 || b.y1 == a.y0)) {
          a = {a.x0, min(a.y0, b.y0), a.x1, max(a.y1, b.y1)};
          merged = true;
        }
        if (merged) rects.erase(rects.begin() + static_cast<std::ptrdiff_t>(j));
      }
    }
  }
  return rects;
}

// Exact preimage of a union of disjoint rectangles under T^m (m >= 0).
inline std::vector<Rect> rect_preimage_power(const RectangleExchange& t, std::vector<Rect> set,
                                             std::int64_t m, const Budget& budget = {}) {
  if (m < 0) return rect_preimage_power(t.inverse(), std::move(set), -m, budget);
  if (m > budget.max_power) throw BudgetError("power " + std::to_string(m) + " exceeds max_power");
  for (std::int64_t k = 0; k < m; ++k) {
    std::vector<Rect> next;
    for (const auto& r : set) {
      auto pre = t.preimage(r);
      next.insert(next.end(), pre.begin(), pre.end());
    }
    set = merge_rects(std::move(next));
    if (set.size() > budget.max_pieces) throw BudgetError("rectangle preimage needs too many pieces");
  }
  return set;
}

}  // namespace seqdyn
