#pragma once

#include <cstdint>

#include "seqdyn/weaklimits/correlation.hpp"

namespace seqdyn {

inline void check_triple_times(std::int64_t m, std::int64_t n) {
  if (m == n) throw ValidationError("triple correlation needs m != n");
}

// mu(A n T^-m A n T^-n A).
inline Rational triple_correlation(const IntervalExchange& t, const IntervalSet& a, std::int64_t m, std::int64_t n,
                                   const Budget& budget = {}) {
  check_triple_times(m, n);
  const IntervalSet am = preimage(iet_power(t, m, budget), a);
  const IntervalSet an = preimage(iet_power(t, n, budget), a);
  return measure(intersect(intersect(a, am), an));
}

inline Rational triple_correlation(const IntervalExchange& t, const Interval& a, std::int64_t m, std::int64_t n,
                                   const Budget& budget = {}) {
  return triple_correlation(t, IntervalSet{a}, m, n, budget);
}

inline Rational triple_correlation(const BernoulliSystem& system, const Cylinder& a, std::int64_t m,
                                   std::int64_t n) {
  check_triple_times(m, n);
  const auto am = a.intersect(a.pulled_back(m));
  if (!am) return Rational(0);
  const auto all = am->intersect(a.pulled_back(n));
  return all ? all->measure(system) : Rational(0);
}

inline Rational triple_correlation(const BakerMap&, const Cylinder& a, std::int64_t m, std::int64_t n) {
  return triple_correlation(BakerMap::symbolic(), a, m, n);
}

inline Rational triple_correlation(const BakerMap& baker, const DyadicCell& a, std::int64_t m, std::int64_t n) {
  return triple_correlation(baker, BakerMap::cylinder_of(a.x_level, a.x_index, a.y_level, a.y_index), m, n);
}

inline Rational triple_correlation(const RectangleExchange& t, const Rect& a, std::int64_t m, std::int64_t n,
                                   const Budget& budget = {}) {
  check_triple_times(m, n);
  const std::vector<Rect> am = rect_preimage_power(t, {a}, m, budget);
  const std::vector<Rect> an = rect_preimage_power(t, {a}, n, budget);
  Rational total(0);
  for (const auto& r : am) {
    const Rect ra = intersect(r, a);
    if (!ra.empty()) total += overlap_area(an, ra);
  }
  return total;
}

// Limits of mu(A n T^m_i A n T^n_i A) and mu(A n T^-m_i A n T^-n_i A)
// along the sequences of the asymmetric construction.
inline Rational triple_limit_forward(const Rational& mu) { return (mu + Rational(2) * mu * mu * mu) / Rational(3); }
inline Rational triple_limit_backward(const Rational& mu) { return mu * mu; }

}  // namespace seqdyn
