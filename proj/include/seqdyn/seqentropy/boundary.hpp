#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seqdyn/core/budget.hpp"
#include "seqdyn/core/partition.hpp"
#include "seqdyn/systems/rectangle_exchange.hpp"

namespace seqdyn {

// Exact boundary-length ledger of xi^(n+1) = xi v T xi v ... v T^n xi.
//
// The tracked set L_n is a closed superset of the partition boundary:
//   L_0 = bd(xi),   L_{n+1} = bd(xi) u push(L_n) u Disc,
// where push clips segments to the closed source rectangles and translates
// them, and Disc is the interior part of the image rectangles' edges.
struct BoundaryLedger {
  std::vector<Rational> lengths;  // B(0..N)
  Rational discontinuity_length;  // D
  std::vector<std::size_t> segment_counts;

  const Rational& initial() const { return lengths.front(); }

  // B(n) - B(0) <= n D for every step.
  bool within_discontinuity_bound() const {
    for (std::size_t n = 0; n < lengths.size(); ++n) {
      if (Rational(static_cast<std::int64_t>(n)) * discontinuity_length < lengths[n] - initial()) return false;
    }
    return true;
  }

  // B(n) <= B(0) + n (B(0) + D): each step can add at most a translated copy
  // of bd(xi) plus the discontinuity set. Holds for every exchange.
  bool within_linear_bound() const {
    for (std::size_t n = 0; n < lengths.size(); ++n) {
      const Rational slope = initial() + discontinuity_length;
      if (initial() + Rational(static_cast<std::int64_t>(n)) * slope < lengths[n]) return false;
    }
    return true;
  }

  // Steps n >= 1 where B(n) - B(0) == n D exactly.
  std::vector<std::size_t> equality_steps() const {
    std::vector<std::size_t> out;
    for (std::size_t n = 1; n < lengths.size(); ++n) {
      if (lengths[n] - initial() == Rational(static_cast<std::int64_t>(n)) * discontinuity_length) out.push_back(n);
    }
    return out;
  }
};

inline BoundaryLedger boundary_growth(const RectangleExchange& t, const RectanglePartition& xi, std::int64_t steps,
                                      const Budget& budget = {}) {
  if (steps < 0) throw ValidationError("boundary ledger needs N >= 0");
  if (steps > budget.max_ledger_steps) {
    throw BudgetError("boundary ledger length " + std::to_string(steps) + " exceeds budget " +
                      std::to_string(budget.max_ledger_steps));
  }
  const SegmentSet base = xi.boundary();
  const SegmentSet disc = t.image_discontinuities();

  BoundaryLedger ledger;
  ledger.discontinuity_length = disc.length();
  SegmentSet current = base;
  ledger.lengths.push_back(current.length());
  ledger.segment_counts.push_back(current.segment_count());
  for (std::int64_t n = 1; n <= steps; ++n) {
    SegmentSet next = t.push_segments(current);
    next.add(disc);
    next.add(base);
    current = std::move(next);
    if (current.segment_count() > budget.max_pieces) throw BudgetError("boundary ledger exceeds segment budget");
    ledger.lengths.push_back(current.length());
    ledger.segment_counts.push_back(current.segment_count());
  }
  return ledger;
}

}  // namespace seqdyn
