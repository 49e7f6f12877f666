#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "seqdyn/core/rational.hpp"

namespace seqdyn {

// Atom masses of a finite partition. Entries are nonnegative and sum to
// exactly one; zero entries are allowed here (they contribute 0 log 0 = 0).
class ProbabilityVector {
 public:
  ProbabilityVector() = default;

  explicit ProbabilityVector(std::vector<Rational> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw ValidationError("probability vector is empty");
    Rational total;
    for (const auto& e : entries_) {
      if (e.sign() < 0) throw ValidationError("probability vector has negative entry " + e.str());
      total += e;
    }
    if (total != Rational(1)) {
      throw ValidationError("probability vector sums to " + total.str() + ", not 1");
    }
  }

  const std::vector<Rational>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const Rational& operator[](std::size_t i) const { return entries_[i]; }

 private:
  std::vector<Rational> entries_;
};

namespace detail {

inline long double log2_rational(const Rational& p) {
  if (p.is_small()) {
    return std::log2(static_cast<long double>(p.numerator().convert_to<std::int64_t>())) -
           std::log2(static_cast<long double>(p.denominator().convert_to<std::int64_t>()));
  }
  return std::log2(p.to_long_double());
}

}  // namespace detail

// Shannon entropy in bits of a list of masses that is already known to be a
// probability vector. Masses are summed in ascending order, so the result
// depends only on the multiset of masses.
inline double entropy_bits(std::span<const Rational> masses) {
  std::vector<const Rational*> order;
  order.reserve(masses.size());
  for (const auto& m : masses) {
    if (m.sign() > 0) order.push_back(&m);
  }
  std::sort(order.begin(), order.end(), [](const Rational* a, const Rational* b) { return *a < *b; });
  long double h = 0.0L;
  for (const Rational* m : order) {
    h -= m->to_long_double() * detail::log2_rational(*m);
  }
  return h <= 0.0L ? 0.0 : static_cast<double>(h);
}

inline double shannon_entropy(const ProbabilityVector& p) { return entropy_bits(p.entries()); }

}  // namespace seqdyn
