#pragma once

#include <cstdint>
#include <vector>

#include "seqdyn/seqentropy/join.hpp"

namespace seqdyn {

struct AsymmetryResult {
  double ratio = 0.0;
  double base_entropy_bits = 0.0;    // H(xi^N)
  double triple_entropy_bits = 0.0;  // H(xi^N v T^{+-m} xi^N v T^{+-n} xi^N)
};

// H(xi^N v T^m xi^N v T^n xi^N) / H(xi^N) with xi^N = xi v T xi v ... v T^{N-1} xi;
// the backward direction uses -m and -n.
inline AsymmetryResult asymmetry_ratio(const IntervalExchange& t, const IntervalPartition& xi, std::int64_t N,
                                       std::int64_t m, std::int64_t n, Direction direction,
                                       const Budget& budget = {}) {
  if (N < 1) throw ValidationError("asymmetry ratio needs N >= 1");
  std::vector<std::int64_t> base;
  for (std::int64_t k = 0; k < N; ++k) base.push_back(k);
  const JoinResult base_join = exact_join_times(t, xi, base, budget);
  if (base_join.entropy_bits <= 0.0) {
    throw DegenerateInputError("H(xi^N) = 0; the asymmetry ratio is undefined for this partition");
  }
  const std::int64_t sm = direction == Direction::kForward ? m : -m;
  const std::int64_t sn = direction == Direction::kForward ? n : -n;
  std::vector<std::int64_t> times = base;
  for (std::int64_t k = 0; k < N; ++k) {
    times.push_back(sm + k);
    times.push_back(sn + k);
  }
  const JoinResult triple = exact_join_times(t, xi, times, budget);
  return {triple.entropy_bits / base_join.entropy_bits, base_join.entropy_bits, triple.entropy_bits};
}

}  // namespace seqdyn
