#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "seqdyn/core/budget.hpp"
#include "seqdyn/systems/bernoulli.hpp"
#include "seqdyn/systems/interval_exchange.hpp"
#include "seqdyn/systems/rectangle_exchange.hpp"
#include "seqdyn/weaklimits/test_family.hpp"

namespace seqdyn {

// Sorted disjoint half-open intervals.
using IntervalSet = std::vector<Interval>;

inline Rational measure(const IntervalSet& s) {
  Rational m(0);
  for (const auto& iv : s) m += iv.length();
  return m;
}

inline IntervalSet intersect(const IntervalSet& a, const IntervalSet& b) {
  IntervalSet out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    const Rational lo = max(a[i].lo, b[j].lo);
    const Rational hi = min(a[i].hi, b[j].hi);
    if (lo < hi) out.push_back({lo, hi});
    if (a[i].hi < b[j].hi) ++i;
    else ++j;
  }
  return out;
}

// {x : P x in s} for an exchange P given by its pieces.
inline IntervalSet preimage(const IntervalExchange& p, const IntervalSet& s) {
  IntervalSet out;
  for (const auto& piece : p.pieces()) {
    for (const auto& iv : s) {
      const Rational lo = max(piece.start, iv.lo - piece.shift);
      const Rational hi = min(piece.end(), iv.hi - piece.shift);
      if (lo < hi) out.push_back({lo, hi});
    }
  }
  std::sort(out.begin(), out.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  IntervalSet merged;
  for (auto& iv : out) {
    if (!merged.empty() && merged.back().hi == iv.lo) merged.back().hi = iv.hi;
    else merged.push_back(std::move(iv));
  }
  return merged;
}

// mu(P^-1 A n B) for a fixed power P.
inline Rational correlation_of_power(const IntervalExchange& p, const Interval& a, const Interval& b) {
  Rational total(0);
  for (const auto& piece : p.pieces()) {
    const Rational lo = max(max(piece.start, a.lo - piece.shift), b.lo);
    const Rational hi = min(min(piece.end(), a.hi - piece.shift), b.hi);
    if (lo < hi) total += hi - lo;
  }
  return total;
}

// mu(T^-m A n B).
inline Rational correlation(const IntervalExchange& t, const Interval& a, const Interval& b, std::int64_t m,
                            const Budget& budget = {}) {
  return correlation_of_power(iet_power(t, m, budget), a, b);
}

inline Rational correlation(const BernoulliSystem& system, const Cylinder& a, const Cylinder& b, std::int64_t m) {
  const auto both = a.pulled_back(m).intersect(b);
  return both ? both->measure(system) : Rational(0);
}

inline Rational correlation(const BakerMap&, const Cylinder& a, const Cylinder& b, std::int64_t m) {
  return correlation(BakerMap::symbolic(), a, b, m);
}

inline Rational correlation(const BakerMap& baker, const DyadicCell& a, const DyadicCell& b, std::int64_t m) {
  return correlation(baker, BakerMap::cylinder_of(a.x_level, a.x_index, a.y_level, a.y_index),
                     BakerMap::cylinder_of(b.x_level, b.x_index, b.y_level, b.y_index), m);
}

inline Rational overlap_area(const std::vector<Rect>& set, const Rect& b) {
  Rational total(0);
  for (const auto& r : set) {
    const Rect hit = intersect(r, b);
    if (!hit.empty()) total += hit.area();
  }
  return total;
}

inline Rational correlation(const RectangleExchange& t, const Rect& a, const Rect& b, std::int64_t m,
                            const Budget& budget = {}) {
  return overlap_area(rect_preimage_power(t, {a}, m, budget), b);
}

// Exact correlations mu(T^-m A_i n A_j) over a test family, row-major.
struct CorrelationMatrix {
  std::int64_t m = 0;
  std::size_t n = 0;
  std::vector<Rational> values;

  const Rational& at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
};

namespace detail {

inline std::int64_t floor_scaled(const Rational& x, std::int64_t scale) {
  return (x * Rational(scale)).floor().convert_to<std::int64_t>();
}

}  // namespace detail

// 1D family against a fixed power P. Builds the finest-level matrix
// M[a][b] = mu(P^-1 atom_a n atom_b) by walking each piece across the atom
// grid in both domain and image, then coarsens by summing adjacent atoms.
inline CorrelationMatrix correlation_matrix_of_power(const IntervalExchange& p, const TestFamily& family,
                                                     std::int64_t m = 0) {
  if (family.dimension() != TestFamily::Dimension::k1D) {
    throw ValidationError("interval exchanges need a 1D test family");
  }
  const unsigned depth = family.depth();
  const std::int64_t atoms = std::int64_t{1} << depth;
  const auto na = static_cast<std::size_t>(atoms);
  const Rational step = pow2_inverse(depth);

  std::vector<Rational> fine(na * na);
  for (const auto& piece : p.pieces()) {
    Rational x = piece.start;
    const Rational end = piece.end();
    while (x < end) {
      const std::int64_t b = detail::floor_scaled(x, atoms);
      const std::int64_t a = detail::floor_scaled(x + piece.shift, atoms);
      const Rational next =
          min(end, min(Rational(b + 1) * step, Rational(a + 1) * step - piece.shift));
      fine[static_cast<std::size_t>(a) * na + static_cast<std::size_t>(b)] += next - x;
      x = next;
    }
  }

  // level[la][lb] is a 2^la x 2^lb matrix.
  std::vector<std::vector<std::vector<Rational>>> level(depth + 1, std::vector<std::vector<Rational>>(depth + 1));
  level[depth][depth] = std::move(fine);
  for (unsigned lb = depth; lb-- > 0;) {
    const std::size_t rows = na;
    const std::size_t cols = std::size_t{1} << lb;
    const auto& src = level[depth][lb + 1];
    auto& dst = level[depth][lb];
    dst.resize(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) dst[r * cols + c] = src[r * 2 * cols + 2 * c] + src[r * 2 * cols + 2 * c + 1];
    }
  }
  for (unsigned la = depth; la-- > 0;) {
    const std::size_t rows = std::size_t{1} << la;
    for (unsigned lb = 0; lb <= depth; ++lb) {
      const std::size_t cols = std::size_t{1} << lb;
      const auto& src = level[la + 1][lb];
      auto& dst = level[la][lb];
      dst.resize(rows * cols);
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) dst[r * cols + c] = src[2 * r * cols + c] + src[(2 * r + 1) * cols + c];
      }
    }
  }

  CorrelationMatrix out;
  out.m = m;
  out.n = family.size();
  out.values.resize(out.n * out.n);
  for (std::size_t i = 0; i < out.n; ++i) {
    const DyadicCell& ci = family.cell(i);
    for (std::size_t j = 0; j < out.n; ++j) {
      const DyadicCell& cj = family.cell(j);
      const std::size_t cols = std::size_t{1} << cj.x_level;
      out.values[i * out.n + j] = level[ci.x_level][cj.x_level][ci.x_index * cols + cj.x_index];
    }
  }
  return out;
}

inline CorrelationMatrix correlation_matrix(const IntervalExchange& t, const TestFamily& family, std::int64_t m,
                                            const Budget& budget = {}) {
  return correlation_matrix_of_power(iet_power(t, m, budget), family, m);
}

inline CorrelationMatrix correlation_matrix(const BakerMap& baker, const TestFamily& family, std::int64_t m,
                                            const Budget& budget = {}) {
  if (family.dimension() != TestFamily::Dimension::k2D) throw ValidationError("the baker map needs a 2D test family");
  if ((m < 0 ? -m : m) > budget.max_power) throw BudgetError("power " + std::to_string(m) + " exceeds max_power");
  std::vector<Cylinder> cyl;
  for (const auto& c : family.cells()) cyl.push_back(BakerMap::cylinder_of(c.x_level, c.x_index, c.y_level, c.y_index));
  CorrelationMatrix out;
  out.m = m;
  out.n = family.size();
  out.values.reserve(out.n * out.n);
  for (std::size_t i = 0; i < out.n; ++i) {
    const Cylinder pulled = cyl[i].pulled_back(m);
    for (std::size_t j = 0; j < out.n; ++j) out.values.push_back(correlation(BakerMap::symbolic(), pulled, cyl[j], 0));
  }
  (void)baker;
  return out;
}

// Rectangle exchanges from already computed preimages T^-m A_i.
inline CorrelationMatrix correlation_matrix_from_preimages(const std::vector<std::vector<Rect>>& pre,
                                                           const TestFamily& family, std::int64_t m) {
  CorrelationMatrix out;
  out.m = m;
  out.n = family.size();
  out.values.reserve(out.n * out.n);
  for (std::size_t i = 0; i < out.n; ++i) {
    for (std::size_t j = 0; j < out.n; ++j) out.values.push_back(overlap_area(pre[i], family.cell(j).rect()));
  }
  return out;
}

inline CorrelationMatrix correlation_matrix(const RectangleExchange& t, const TestFamily& family, std::int64_t m,
                                            const Budget& budget = {}) {
  if (family.dimension() != TestFamily::Dimension::k2D) {
    throw ValidationError("rectangle exchanges need a 2D test family");
  }
  std::vector<std::vector<Rect>> pre;
  for (const auto& c : family.cells()) pre.push_back(rect_preimage_power(t, {c.rect()}, m, budget));
  return correlation_matrix_from_preimages(pre, family, m);
}

}  // namespace seqdyn
