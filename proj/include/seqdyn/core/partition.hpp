#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "seqdyn/core/entropy.hpp"
#include "seqdyn/core/geometry.hpp"

namespace seqdyn {

using Label = std::int64_t;

// Finite partition of [0, 1) into half-open gaps [cuts[i], cuts[i+1]); the
// last gap ends at 1. Gaps sharing a label form one atom.
class IntervalPartition {
 public:
  IntervalPartition() : cuts_{Rational(0)}, labels_{0} {}

  IntervalPartition(std::vector<Rational> cuts, std::vector<Label> labels)
      : cuts_(std::move(cuts)), labels_(std::move(labels)) {
    if (cuts_.empty() || cuts_.front() != Rational(0)) {
      throw ValidationError("interval partition cuts must start at 0");
    }
    if (labels_.size() != cuts_.size()) {
      throw ValidationError("interval partition needs one label per gap (" +
                            std::to_string(cuts_.size()) + " gaps, " +
                            std::to_string(labels_.size()) + " labels)");
    }
    for (std::size_t i = 1; i < cuts_.size(); ++i) {
      if (!(cuts_[i - 1] < cuts_[i])) {
        throw ValidationError("interval partition cuts not strictly increasing at index " +
                              std::to_string(i));
      }
    }
    if (!(cuts_.back() < Rational(1))) {
      throw ValidationError("interval partition cut " + cuts_.back().str() + " is not below 1");
    }
  }

  static IntervalPartition trivial() { return {}; }

  // The 2^depth dyadic intervals of length 2^-depth, labelled 0..2^depth-1.
  static IntervalPartition dyadic(unsigned depth) {
    if (depth > 24) throw BudgetError("dyadic depth " + std::to_string(depth) + " too large");
    const std::int64_t n = std::int64_t{1} << depth;
    std::vector<Rational> cuts;
    std::vector<Label> labels;
    for (std::int64_t k = 0; k < n; ++k) {
      cuts.emplace_back(k, n);
      labels.push_back(k);
    }
    return {std::move(cuts), std::move(labels)};
  }

  const std::vector<Rational>& cuts() const noexcept { return cuts_; }
  const std::vector<Label>& labels() const noexcept { return labels_; }
  std::size_t gap_count() const noexcept { return cuts_.size(); }

  Rational gap_start(std::size_t i) const { return cuts_[i]; }
  Rational gap_end(std::size_t i) const { return i + 1 < cuts_.size() ? cuts_[i + 1] : Rational(1); }
  Rational gap_length(std::size_t i) const { return gap_end(i) - gap_start(i); }

  std::size_t gap_index(const Rational& x) const {
    if (x.sign() < 0 || !(x < Rational(1))) throw DomainError("point " + x.str() + " outside [0,1)");
    auto it = std::upper_bound(cuts_.begin(), cuts_.end(), x);
    return static_cast<std::size_t>(std::distance(cuts_.begin(), it)) - 1;
  }

  Label label_at(const Rational& x) const { return labels_[gap_index(x)]; }

  std::size_t label_count() const {
    std::vector<Label> l = labels_;
    std::sort(l.begin(), l.end());
    return static_cast<std::size_t>(std::unique(l.begin(), l.end()) - l.begin());
  }

  friend bool operator==(const IntervalPartition&, const IntervalPartition&) = default;

 private:
  std::vector<Rational> cuts_;
  std::vector<Label> labels_;
};

struct LabeledRect {
  Rect rect;
  Label label = 0;

  friend bool operator==(const LabeledRect&, const LabeledRect&) = default;
};

// Partition of the unit square into disjoint labelled rectangles.
class RectanglePartition {
 public:
  RectanglePartition() : atoms_{{unit_square(), 0}} {}

  explicit RectanglePartition(std::vector<LabeledRect> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw ValidationError("rectangle partition has no atoms");
    Rational total;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      const Rect& r = atoms_[i].rect;
      if (r.empty()) throw ValidationError("rectangle atom " + std::to_string(i) + " is empty");
      if (r.x0.sign() < 0 || r.y0.sign() < 0 || Rational(1) < r.x1 || Rational(1) < r.y1) {
        throw ValidationError("rectangle atom " + std::to_string(i) + " leaves the unit square");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (overlaps(atoms_[j].rect, r)) {
          throw ValidationError("rectangle atoms " + std::to_string(j) + " and " +
                                std::to_string(i) + " overlap");
        }
      }
      total += r.area();
    }
    if (total != Rational(1)) {
      throw ValidationError("rectangle atoms cover area " + total.str() + ", not 1");
    }
  }

  static RectanglePartition trivial() { return {}; }

  // Grid of 2^x_depth by 2^y_depth dyadic cells labelled row-major.
  static RectanglePartition dyadic_grid(unsigned x_depth, unsigned y_depth) {
    if (x_depth + y_depth > 20) throw BudgetError("dyadic grid too fine");
    const std::int64_t nx = std::int64_t{1} << x_depth;
    const std::int64_t ny = std::int64_t{1} << y_depth;
    std::vector<LabeledRect> atoms;
    for (std::int64_t j = 0; j < ny; ++j) {
      for (std::int64_t i = 0; i < nx; ++i) {
        atoms.push_back({{Rational(i, nx), Rational(j, ny), Rational(i + 1, nx), Rational(j + 1, ny)},
                         j * nx + i});
      }
    }
    return RectanglePartition(std::move(atoms));
  }

  static RectanglePartition quadrants() { return dyadic_grid(1, 1); }
  static RectanglePartition vertical_halves() { return dyadic_grid(1, 0); }

  const std::vector<LabeledRect>& atoms() const noexcept { return atoms_; }

  Label label_at(const Point& p) const {
    for (const auto& a : atoms_) {
      if (a.rect.contains(p)) return a.label;
    }
    throw DomainError("point (" + p.x.str() + ", " + p.y.str() + ") outside the unit square");
  }

  std::size_t label_count() const {
    std::vector<Label> l;
    for (const auto& a : atoms_) l.push_back(a.label);
    std::sort(l.begin(), l.end());
    return static_cast<std::size_t>(std::unique(l.begin(), l.end()) - l.begin());
  }

  // Interior boundary of the atoms: rectangle edges that separate different
  // labels, excluding the outer boundary of the square.
  SegmentSet boundary() const {
    std::vector<Rational> coords;
    for (const auto& a : atoms_) {
      coords.insert(coords.end(), {a.rect.x0, a.rect.x1, a.rect.y0, a.rect.y1});
    }
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    Rational gap(1);
    for (std::size_t i = 1; i < coords.size(); ++i) gap = min(gap, coords[i] - coords[i - 1]);
    const Rational eps = gap / Rational(4);

    auto label_or_none = [&](const Point& p) -> std::optional<Label> {
      if (p.x.sign() < 0 || p.y.sign() < 0 || !(p.x < Rational(1)) || !(p.y < Rational(1))) {
        return std::nullopt;
      }
      return label_at(p);
    };

    SegmentSet out;
    for (const auto& a : atoms_) {
      const Rect& r = a.rect;
      // Split each edge at every coordinate so labels are constant on each piece.
      auto pieces = [&](const Rational& lo, const Rational& hi) {
        std::vector<Rational> pts{lo};
        for (const auto& c : coords)
          if (lo < c && c < hi) pts.push_back(c);
        pts.push_back(hi);
        return pts;
      };
      for (const Rational& y : {r.y0, r.y1}) {
        const auto pts = pieces(r.x0, r.x1);
        for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
          const Rational mid = (pts[k] + pts[k + 1]) / Rational(2);
          if (label_or_none({mid, y - eps}) != label_or_none({mid, y + eps})) {
            out.add_horizontal(y, pts[k], pts[k + 1]);
          }
        }
      }
      for (const Rational& x : {r.x0, r.x1}) {
        const auto pts = pieces(r.y0, r.y1);
        for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
          const Rational mid = (pts[k] + pts[k + 1]) / Rational(2);
          if (label_or_none({x - eps, mid}) != label_or_none({x + eps, mid})) {
            out.add_vertical(x, pts[k], pts[k + 1]);
          }
        }
      }
    }
    out.drop_outer_boundary();
    return out;
  }

 private:
  std::vector<LabeledRect> atoms_;
};

// One entry per distinct label, ordered by label value.
inline ProbabilityVector partition_measures(const IntervalPartition& xi) {
  std::map<Label, Rational> mass;
  for (std::size_t i = 0; i < xi.gap_count(); ++i) mass[xi.labels()[i]] += xi.gap_length(i);
  std::vector<Rational> out;
  for (auto& [label, m] : mass) out.push_back(std::move(m));
  return ProbabilityVector(std::move(out));
}

inline ProbabilityVector partition_measures(const RectanglePartition& xi) {
  std::map<Label, Rational> mass;
  for (const auto& a : xi.atoms()) mass[a.label] += a.rect.area();
  std::vector<Rational> out;
  for (auto& [label, m] : mass) out.push_back(std::move(m));
  return ProbabilityVector(std::move(out));
}

inline double partition_entropy(const IntervalPartition& xi) {
  return shannon_entropy(partition_measures(xi));
}
inline double partition_entropy(const RectanglePartition& xi) {
  return shannon_entropy(partition_measures(xi));
}

// Join of two interval partitions. Each distinct (xi-label, eta-label) pair
// becomes one label, numbered in lexicographic order of the pair; adjacent
// gaps with the same pair are merged.
inline IntervalPartition common_refinement(const IntervalPartition& xi, const IntervalPartition& eta) {
  std::vector<Rational> cuts;
  cuts.reserve(xi.gap_count() + eta.gap_count());
  std::merge(xi.cuts().begin(), xi.cuts().end(), eta.cuts().begin(), eta.cuts().end(),
             std::back_inserter(cuts));
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<std::pair<Label, Label>> pairs;
  pairs.reserve(cuts.size());
  std::size_t a = 0;
  std::size_t b = 0;
  for (const auto& c : cuts) {
    while (a + 1 < xi.gap_count() && !(c < xi.cuts()[a + 1])) ++a;
    while (b + 1 < eta.gap_count() && !(c < eta.cuts()[b + 1])) ++b;
    pairs.emplace_back(xi.labels()[a], eta.labels()[b]);
  }
  std::map<std::pair<Label, Label>, Label> ids;
  for (const auto& p : pairs) ids.emplace(p, 0);
  Label next = 0;
  for (auto& [p, id] : ids) id = next++;

  std::vector<Rational> out_cuts;
  std::vector<Label> out_labels;
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    const Label id = ids.at(pairs[i]);
    if (!out_labels.empty() && out_labels.back() == id) continue;
    out_cuts.push_back(cuts[i]);
    out_labels.push_back(id);
  }
  return {std::move(out_cuts), std::move(out_labels)};
}

}  // namespace seqdyn
