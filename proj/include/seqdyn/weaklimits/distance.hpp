#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "seqdyn/weaklimits/correlation.hpp"

namespace seqdyn {

// Q(T) = a Theta + sum_k a_k T^{i_k}.
struct AdmissibleSpec {
  Rational a;
  std::vector<std::pair<std::int64_t, Rational>> terms;

  static AdmissibleSpec theta() { return {Rational(1), {}}; }
  static AdmissibleSpec identity() { return {Rational(0), {{0, Rational(1)}}}; }
  static AdmissibleSpec power(std::int64_t i) { return {Rational(0), {{i, Rational(1)}}}; }

  void validate() const {
    if (a.sign() < 0) throw ValidationError("admissible coefficient a must be >= 0");
    Rational total = a;
    for (const auto& [i, c] : terms) {
      if (c.sign() < 0) throw ValidationError("admissible coefficient of T^" + std::to_string(i) + " must be >= 0");
      total += c;
    }
    if (total != Rational(1)) throw ValidationError("admissible coefficients sum to " + total.str() + ", not 1");
  }
};

// sum_ij w_ij |corr_ij - target_ij|, accumulated row-major in double from the
// exact differences.
inline double weighted_distance(const TestFamily& family, const std::vector<Rational>& corr,
                                const std::vector<Rational>& target) {
  const std::size_t n = family.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Rational d = corr[i * n + j] - target[i * n + j];
      if (d.sign() == 0) continue;
      sum += family.weight(i, j) * abs(d).to_double();
    }
  }
  return sum;
}

inline double dist_to_theta(const CorrelationMatrix& c, const TestFamily& family) {
  return weighted_distance(family, c.values, family.product_targets());
}

inline double dist_to_identity(const CorrelationMatrix& c, const TestFamily& family) {
  return weighted_distance(family, c.values, family.overlap_targets());
}

template <class System>
double dist_to_theta(const System& t, std::int64_t m, const TestFamily& family, const Budget& budget = {}) {
  return dist_to_theta(correlation_matrix(t, family, m, budget), family);
}

template <class System>
double dist_to_identity(const System& t, std::int64_t m, const TestFamily& family, const Budget& budget = {}) {
  return dist_to_identity(correlation_matrix(t, family, m, budget), family);
}

// Target matrix a mu(A_i) mu(A_j) + sum_k a_k mu(T^-i_k A_i n A_j).
template <class System>
std::vector<Rational> admissible_targets(const System& t, const AdmissibleSpec& q, const TestFamily& family,
                                         const Budget& budget = {}) {
  q.validate();
  std::vector<Rational> target(family.product_targets().size());
  if (q.a.sign() != 0) {
    for (std::size_t k = 0; k < target.size(); ++k) target[k] = q.a * family.product_targets()[k];
  }
  for (const auto& [i, c] : q.terms) {
    if (c.sign() == 0) continue;
    const CorrelationMatrix term = correlation_matrix(t, family, i, budget);
    for (std::size_t k = 0; k < target.size(); ++k) target[k] += c * term.values[k];
  }
  return target;
}

template <class System>
double dist_to_admissible(const System& t, std::int64_t m, const AdmissibleSpec& q, const TestFamily& family,
                          const Budget& budget = {}) {
  const std::vector<Rational> target = admissible_targets(t, q, family, budget);
  return weighted_distance(family, correlation_matrix(t, family, m, budget).values, target);
}

}  // namespace seqdyn
