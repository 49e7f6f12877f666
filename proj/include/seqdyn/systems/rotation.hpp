#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seqdyn/systems/interval_exchange.hpp"

namespace seqdyn {

// A circle rotation by a continued-fraction convergent p/q used in place of
// an irrational angle. The exchange it produces carries an alias guard so
// that no computation iterates far enough to see the period q.
class RotationSpec {
 public:
  // Builds alpha = [a0; a1, a2, ...]. Only a0 may be zero.
  static RotationSpec from_continued_fraction(const std::vector<std::int64_t>& coefficients,
                                              std::int64_t safety = 1000,
                                              const Integer& min_denominator = Integer(1000)) {
    if (coefficients.empty()) throw ValidationError("continued fraction needs coefficients");
    Integer p_prev = 1, q_prev = 0;
    Integer p = coefficients[0], q = 1;
    std::vector<Integer> dens{q};
    for (std::size_t i = 1; i < coefficients.size(); ++i) {
      if (coefficients[i] <= 0) {
        throw ValidationError("continued fraction coefficient " + std::to_string(i) + " must be positive");
      }
      const Integer a = coefficients[i];
      Integer p_next = a * p + p_prev;
      Integer q_next = a * q + q_prev;
      p_prev = p;
      q_prev = q;
      p = p_next;
      q = q_next;
      if (q > dens.back()) dens.push_back(q);
    }
    RotationSpec spec(Rational(p, q), safety, min_denominator);
    spec.convergent_denominators_ = std::move(dens);
    return spec;
  }

  // The golden-mean convergent F_k / F_{k+1} (k ones after the leading 0).
  static RotationSpec golden(int k = 40, std::int64_t safety = 1000) {
    std::vector<std::int64_t> cf(static_cast<std::size_t>(k) + 1, 1);
    cf[0] = 0;
    return from_continued_fraction(cf, safety);
  }

  // Uses the continued fraction of alpha itself for the convergent list.
  RotationSpec(const Rational& alpha, std::int64_t safety = 1000,
               const Integer& min_denominator = Integer(1000))
      : alpha_(alpha), safety_(safety) {
    if (alpha_.sign() <= 0 || !(alpha_ < Rational(1))) {
      throw ValidationError("rotation angle " + alpha_.str() + " must lie in (0,1)");
    }
    if (safety_ <= 0) throw ValidationError("alias safety factor must be positive");
    if (alpha_.denominator() < min_denominator) {
      throw ValidationError("rotation denominator " + alpha_.denominator().str() +
                            " is below the aliasing threshold " + min_denominator.str());
    }
    Integer n = alpha_.numerator(), d = alpha_.denominator();
    Integer q_prev = 0, q = 1;
    convergent_denominators_.push_back(1);
    // Euclid on n/d yields the partial quotients.
    Integer a = n / d;
    Integer r = n % d;
    n = d;
    d = r;
    while (d != 0) {
      a = n / d;
      r = n % d;
      const Integer q_next = a * q + q_prev;
      q_prev = q;
      q = q_next;
      if (q > convergent_denominators_.back()) convergent_denominators_.push_back(q);
      n = d;
      d = r;
    }
  }

  const Rational& alpha() const noexcept { return alpha_; }
  Integer denominator() const { return alpha_.denominator(); }
  std::int64_t safety() const noexcept { return safety_; }
  const std::vector<Integer>& convergent_denominators() const noexcept { return convergent_denominators_; }

  IntervalExchange exchange() const {
    IntervalExchange t = IntervalExchange::rotation(alpha_);
    t.set_alias_guard(AliasGuard{denominator(), safety_});
    return t;
  }

  // Largest iteration time allowed by the alias guard.
  std::int64_t horizon() const { return *exchange().horizon(); }

 private:
  Rational alpha_;
  std::int64_t safety_ = 1000;
  std::vector<Integer> convergent_denominators_;
};

// Fibonacci numbers with F_1 = F_2 = 1.
inline Integer fibonacci(int n) {
  Integer a = 0, b = 1;
  for (int i = 0; i < n; ++i) {
    Integer t = a + b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace seqdyn
