#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "seqdyn/core/budget.hpp"
#include "seqdyn/core/entropy.hpp"
#include "seqdyn/core/partition.hpp"
#include "seqdyn/seqentropy/index_family.hpp"
#include "seqdyn/systems/bernoulli.hpp"
#include "seqdyn/systems/interval_exchange.hpp"

namespace seqdyn {

enum class JoinMethod { kExact, kMonteCarlo };

inline const char* to_string(JoinMethod m) { return m == JoinMethod::kExact ? "exact" : "monte_carlo"; }

// Forward joins label x by the xi-atom of T^p(x); backward uses T^-p(x).
enum class Direction { kForward, kBackward };

inline const char* to_string(Direction d) { return d == Direction::kForward ? "forward" : "backward"; }

struct JoinResult {
  // Present for exact joins on [0, 1): atoms as labelled gaps.
  std::optional<IntervalPartition> partition;
  // Label vector (one xi-label per joined time) of each atom, by atom id.
  std::vector<std::vector<Label>> atom_labels;
  // Atom masses by atom id; absent when there are too many atoms to list.
  std::optional<ProbabilityVector> measures;
  double entropy_bits = 0.0;
  Integer atom_count = 0;
  std::size_t family_size = 0;
  JoinMethod method = JoinMethod::kExact;
  double ci_half_width = 0.0;
  std::size_t cut_count = 0;
  std::size_t samples = 0;

  double per_element() const {
    return family_size == 0 ? 0.0 : entropy_bits / static_cast<double>(family_size);
  }
};

inline std::vector<std::int64_t> signed_times(const IndexFamily& family, Direction direction) {
  std::vector<std::int64_t> times = family.members;
  if (direction == Direction::kBackward)
    for (auto& t : times) t = -t;
  return times;
}

namespace detail {

// Powers T^t for each requested time, computed by walking consecutive
// powers in both directions once.
inline std::vector<IntervalExchange> powers_for(const IntervalExchange& t, const std::vector<std::int64_t>& times,
                                                const Budget& budget) {
  std::vector<std::size_t> order(times.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ma = times[a] < 0 ? -times[a] : times[a];
    const auto mb = times[b] < 0 ? -times[b] : times[b];
    return ma < mb;
  });
  std::vector<IntervalExchange> out(times.size());
  PowerWalker forward(t, false, budget);
  PowerWalker backward(t, true, budget);
  for (std::size_t idx : order) {
    const std::int64_t m = times[idx];
    out[idx] = m >= 0 ? forward.advance_to(m) : backward.advance_to(-m);
  }
  return out;
}

}  // namespace detail

// Exact join of the partitions {x : T^t(x) in a} over the given times (any
// integers, repeated times ignored). Every cut of the join is either a
// discontinuity of some T^t or the pullback of a xi-cut, and labels are
// read at gap midpoints, which are never cuts.
inline JoinResult exact_join_times(const IntervalExchange& t, const IntervalPartition& xi,
                                   std::vector<std::int64_t> times, const Budget& budget = {}) {
  if (times.empty()) throw ValidationError("join over an empty set of times");
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  if (times.size() > budget.max_family) throw BudgetError("join over more times than the family budget");

  const auto powers = detail::powers_for(t, times, budget);

  std::size_t predicted = 0;
  for (const auto& p : powers) predicted += p.interval_count() + xi.gap_count();
  if (predicted > budget.max_cuts) {
    throw BudgetError("exact join needs " + std::to_string(predicted) + " cut points, budget " +
                      std::to_string(budget.max_cuts));
  }

  std::vector<Rational> cuts;
  cuts.reserve(predicted);
  for (const auto& p : powers) {
    for (const auto& piece : p.pieces()) {
      cuts.push_back(piece.start);
      const Rational lo = piece.image_start();
      const Rational hi = piece.image_end();
      auto it = std::upper_bound(xi.cuts().begin(), xi.cuts().end(), lo);
      for (; it != xi.cuts().end() && *it < hi; ++it) cuts.push_back(*it - piece.shift);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const std::size_t gaps = cuts.size();
  const std::size_t width = times.size();
  std::vector<Label> rows(gaps * width);
  std::vector<Rational> mids(gaps);
  for (std::size_t g = 0; g < gaps; ++g) {
    const Rational end = g + 1 < gaps ? cuts[g + 1] : Rational(1);
    mids[g] = (cuts[g] + end) / Rational(2);
  }
  for (std::size_t k = 0; k < width; ++k) {
    const auto& pieces = powers[k].pieces();
    std::size_t pi = 0;
    for (std::size_t g = 0; g < gaps; ++g) {
      while (pi + 1 < pieces.size() && !(mids[g] < pieces[pi + 1].start)) ++pi;
      rows[g * width + k] = xi.label_at(mids[g] + pieces[pi].shift);
    }
  }

  auto row_less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(rows.begin() + a * width, rows.begin() + (a + 1) * width,
                                        rows.begin() + b * width, rows.begin() + (b + 1) * width);
  };
  std::vector<std::size_t> order(gaps);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), row_less);

  std::vector<Label> atom_of(gaps);
  JoinResult out;
  std::vector<Rational> masses;
  for (std::size_t i = 0; i < gaps; ++i) {
    const std::size_t g = order[i];
    if (i == 0 || row_less(order[i - 1], g)) {
      out.atom_labels.emplace_back(rows.begin() + g * width, rows.begin() + (g + 1) * width);
      masses.emplace_back();
    }
    atom_of[g] = static_cast<Label>(masses.size() - 1);
    const Rational end = g + 1 < gaps ? cuts[g + 1] : Rational(1);
    masses.back() += end - cuts[g];
  }

  std::vector<Rational> merged_cuts;
  std::vector<Label> merged_labels;
  for (std::size_t g = 0; g < gaps; ++g) {
    if (!merged_labels.empty() && merged_labels.back() == atom_of[g]) continue;
    merged_cuts.push_back(cuts[g]);
    merged_labels.push_back(atom_of[g]);
  }

  out.partition = IntervalPartition(std::move(merged_cuts), std::move(merged_labels));
  out.entropy_bits = entropy_bits(masses);
  out.atom_count = Integer(masses.size());
  out.measures = ProbabilityVector(std::move(masses));
  out.family_size = width;
  out.cut_count = gaps;
  out.method = JoinMethod::kExact;
  return out;
}

inline JoinResult exact_join(const IntervalExchange& t, const IntervalPartition& xi, const IndexFamily& family,
                             Direction direction = Direction::kForward, const Budget& budget = {}) {
  JoinResult r = exact_join_times(t, xi, signed_times(family, direction), budget);
  r.family_size = family.size();
  return r;
}

// Number of distinct coordinates read by joining the width-`block` cylinder
// partition over the given times.
inline std::size_t covered_coordinates(const std::vector<std::int64_t>& times, std::int64_t block) {
  std::vector<std::int64_t> sorted = times;
  std::sort(sorted.begin(), sorted.end());
  std::size_t covered = 0;
  std::int64_t reach = std::numeric_limits<std::int64_t>::min();
  for (std::int64_t t : sorted) {
    const std::int64_t lo = std::max(t, reach);
    const std::int64_t hi = t + block;
    if (hi > lo) covered += static_cast<std::size_t>(hi - lo);
    reach = std::max(reach, hi);
  }
  return covered;
}

// Join along a family for the Bernoulli shift with the partition by the
// symbols at coordinates 0..block-1 (block = 1 is the generating partition).
// Distinct coordinates are independent, so H = (covered coordinates) x H(p).
inline JoinResult bernoulli_join_entropy(const BernoulliSystem& system, const IndexFamily& family,
                                         std::int64_t block = 1, Direction direction = Direction::kForward,
                                         std::size_t materialize_limit = std::size_t{1} << 16) {
  if (block < 1) throw ValidationError("cylinder block width must be >= 1");
  const auto times = signed_times(family, direction);
  const std::size_t covered = covered_coordinates(times, block);

  std::vector<std::size_t> support;
  for (std::size_t s = 0; s < system.symbol_count(); ++s)
    if (system.symbol_masses()[s].sign() > 0) support.push_back(s);

  JoinResult out;
  out.family_size = family.size();
  out.method = JoinMethod::kExact;
  out.entropy_bits = static_cast<double>(static_cast<long double>(covered) *
                                         static_cast<long double>(system.entropy_per_symbol()));
  out.atom_count = boost::multiprecision::pow(Integer(support.size()), static_cast<unsigned>(covered));

  if (out.atom_count <= Integer(materialize_limit)) {
    const std::size_t n = out.atom_count.convert_to<std::size_t>();
    std::vector<Rational> masses;
    masses.reserve(n);
    std::vector<std::size_t> digits(covered, 0);
    for (std::size_t idx = 0; idx < n; ++idx) {
      Rational m(1);
      std::vector<Label> labels;
      labels.reserve(covered);
      for (std::size_t d = 0; d < covered; ++d) {
        m *= system.symbol_masses()[support[digits[d]]];
        labels.push_back(static_cast<Label>(support[digits[d]]));
      }
      masses.push_back(std::move(m));
      out.atom_labels.push_back(std::move(labels));
      for (std::size_t d = covered; d-- > 0;) {
        if (++digits[d] < support.size()) break;
        digits[d] = 0;
      }
    }
    out.measures = ProbabilityVector(std::move(masses));
  }
  return out;
}

// Exact join on the shift by enumerating intersections of pulled-back
// cylinders. Used as an independent route to the independence identity and
// for the baker model, where dyadic rectangles are cylinders.
inline JoinResult cylinder_join(const BernoulliSystem& system, const std::vector<Cylinder>& atoms,
                                const std::vector<std::int64_t>& times, std::size_t max_atoms = std::size_t{1} << 22) {
  JoinResult out;
  out.family_size = times.size();
  out.method = JoinMethod::kExact;
  std::vector<Rational> masses;
  std::vector<Label> labels;
  // Constraints of the current intersection, undone on the way back up.
  std::map<std::int64_t, int> acc;
  const auto& symbol_mass = system.symbol_masses();

  auto recurse = [&](auto&& self, std::size_t depth, const Rational& mass) -> void {
    if (depth == times.size()) {
      masses.push_back(mass);
      out.atom_labels.push_back(labels);
      if (masses.size() > max_atoms) throw BudgetError("cylinder join exceeds atom budget");
      return;
    }
    std::vector<std::int64_t> added;
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      added.clear();
      Rational m = mass;
      bool consistent = true;
      for (const auto& [coord, s] : atoms[a].constraints()) {
        const auto [it, inserted] = acc.emplace(coord + times[depth], s);
        if (inserted) {
          added.push_back(it->first);
          m *= symbol_mass[static_cast<std::size_t>(s)];
        } else if (it->second != s) {
          consistent = false;
          break;
        }
      }
      if (consistent && m.sign() != 0) {
        labels.push_back(static_cast<Label>(a));
        self(self, depth + 1, m);
        labels.pop_back();
      }
      for (std::int64_t c : added) acc.erase(c);
    }
  };
  recurse(recurse, 0, Rational(1));

  out.entropy_bits = entropy_bits(masses);
  out.atom_count = Integer(masses.size());
  out.measures = ProbabilityVector(std::move(masses));
  return out;
}

// Atoms of the partition by symbols at coordinates offset..offset+block-1.
inline std::vector<Cylinder> block_cylinders(const BernoulliSystem& system, std::int64_t block,
                                             std::int64_t offset = 0) {
  std::vector<Cylinder> out;
  const std::size_t k = system.symbol_count();
  std::vector<int> digits(static_cast<std::size_t>(block), 0);
  while (true) {
    std::map<std::int64_t, int> c;
    for (std::int64_t d = 0; d < block; ++d) c.emplace(offset + d, digits[static_cast<std::size_t>(d)]);
    out.emplace_back(std::move(c));
    std::int64_t d = block - 1;
    for (; d >= 0; --d) {
      if (++digits[static_cast<std::size_t>(d)] < static_cast<int>(k)) break;
      digits[static_cast<std::size_t>(d)] = 0;
    }
    if (d < 0) break;
  }
  return out;
}

}  // namespace seqdyn
