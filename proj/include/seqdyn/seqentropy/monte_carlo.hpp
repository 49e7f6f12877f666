#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include "seqdyn/core/parallel.hpp"
#include "seqdyn/seqentropy/join.hpp"
#include "seqdyn/systems/bernoulli.hpp"
#include "seqdyn/systems/rectangle_exchange.hpp"

namespace seqdyn {

template <class M>
concept PlanarMap = requires(const M& m, const Point& p) {
  { m.apply(p) } -> std::same_as<Point>;
};

struct McOptions {
  std::size_t n_samples = 10'000;
  std::uint64_t seed = 0;
  std::size_t bootstrap_resamples = 200;
  double confidence = 0.95;
  // Sample coordinates are k / 2^resolution_bits with k uniform.
  unsigned resolution_bits = 62;
  std::size_t block_size = 1024;
  std::size_t jobs = 1;
  Direction direction = Direction::kForward;
  Budget budget{};
};

namespace detail {

inline std::function<Point(const Point&)> stepper(const RectangleExchange& t, Direction d) {
  if (d == Direction::kForward) return [t](const Point& p) { return t.apply(p); };
  return [inv = t.inverse()](const Point& p) { return inv.apply(p); };
}

inline std::function<Point(const Point&)> stepper(const BakerMap& b, Direction d) {
  if (d == Direction::kForward) return [b](const Point& p) { return b.apply(p); };
  return [b](const Point& p) { return b.apply_inverse(p); };
}

// Plug-in entropy (bits) of a count vector plus the Miller-Madow term
// (observed_support - 1) / (2 n ln 2).
inline double miller_madow_bits(const std::vector<std::size_t>& counts, std::size_t n) {
  const double nn = static_cast<double>(n);
  double h = 0.0;
  std::size_t support = 0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    ++support;
    const double p = static_cast<double>(c) / nn;
    h -= p * std::log2(p);
  }
  return h + static_cast<double>(support - 1) / (2.0 * nn * std::numbers::ln2);
}

inline double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + (v[hi] - v[lo]) * frac;
}

}  // namespace detail

// Monte Carlo estimate of H(join over F) for a planar map. Labels are exact
// (sample points are dyadic rationals pushed through the exact map), so the
// only error is statistical. Samples come in fixed-size blocks, each with
// its own seeded generator, so the estimate does not depend on `jobs`.
template <PlanarMap Map>
JoinResult mc_join_entropy(const Map& map, const RectanglePartition& xi, const IndexFamily& family,
                           const McOptions& opt) {
  if (opt.n_samples < 1000) throw ValidationError("mc_join_entropy needs at least 1000 samples");
  if (opt.n_samples > opt.budget.max_samples) throw BudgetError("sample count exceeds sample budget");
  if (family.max_member() > opt.budget.max_power) throw BudgetError("family member exceeds max_power");
  if (opt.resolution_bits == 0 || opt.resolution_bits > 62) throw ValidationError("resolution_bits must be in 1..62");

  const auto step = detail::stepper(map, opt.direction);
  const std::vector<std::int64_t>& times = family.members;  // sorted ascending, positive
  const std::int64_t denom = std::int64_t{1} << opt.resolution_bits;
  const std::size_t width = times.size();
  const std::size_t blocks = (opt.n_samples + opt.block_size - 1) / opt.block_size;

  std::vector<std::vector<Label>> block_rows(blocks);
  parallel_for(blocks, opt.jobs, [&](std::size_t b) {
    std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<std::int64_t> coord(0, denom - 1);
    const std::size_t first = b * opt.block_size;
    const std::size_t count = std::min(opt.block_size, opt.n_samples - first);
    auto& rows = block_rows[b];
    rows.reserve(count * width);
    for (std::size_t s = 0; s < count; ++s) {
      const std::int64_t kx = coord(rng);
      const std::int64_t ky = coord(rng);
      Point p{Rational(kx, denom), Rational(ky, denom)};
      std::int64_t now = 0;
      for (std::int64_t t : times) {
        for (; now < t; ++now) p = step(p);
        rows.push_back(xi.label_at(p));
      }
    }
  });

  std::map<std::vector<Label>, std::size_t> ids;
  std::vector<std::size_t> sample_atom;
  sample_atom.reserve(opt.n_samples);
  std::vector<std::vector<Label>> sample_rows;
  for (const auto& rows : block_rows) {
    for (std::size_t off = 0; off < rows.size(); off += width) {
      sample_rows.emplace_back(rows.begin() + static_cast<std::ptrdiff_t>(off),
                               rows.begin() + static_cast<std::ptrdiff_t>(off + width));
      ids.emplace(sample_rows.back(), 0);
    }
  }
  std::size_t next = 0;
  for (auto& [row, id] : ids) id = next++;
  std::vector<std::size_t> counts(ids.size(), 0);
  for (const auto& row : sample_rows) {
    const std::size_t id = ids.at(row);
    sample_atom.push_back(id);
    ++counts[id];
  }
  const std::size_t n = sample_atom.size();

  JoinResult out;
  out.method = JoinMethod::kMonteCarlo;
  out.family_size = family.size();
  out.samples = n;
  out.entropy_bits = detail::miller_madow_bits(counts, n);
  out.atom_count = Integer(ids.size());
  std::vector<Rational> freq;
  for (const auto& [row, id] : ids) {
    out.atom_labels.push_back(row);
    freq.emplace_back(static_cast<std::int64_t>(counts[id]), static_cast<std::int64_t>(n));
  }
  out.measures = ProbabilityVector(std::move(freq));

  if (opt.bootstrap_resamples > 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32), 0xB007u};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<double> estimates;
    estimates.reserve(opt.bootstrap_resamples);
    std::vector<std::size_t> resampled(counts.size());
    for (std::size_t r = 0; r < opt.bootstrap_resamples; ++r) {
      std::fill(resampled.begin(), resampled.end(), 0);
      for (std::size_t s = 0; s < n; ++s) ++resampled[sample_atom[pick(rng)]];
      estimates.push_back(detail::miller_madow_bits(resampled, n));
    }
    const double tail = (1.0 - opt.confidence) / 2.0;
    out.ci_half_width = (detail::quantile(estimates, 1.0 - tail) - detail::quantile(estimates, tail)) / 2.0;
  }
  return out;
}

template <PlanarMap Map>
double h_j(const Map& map, const RectanglePartition& xi, const IndexFamily& family, const McOptions& opt) {
  return mc_join_entropy(map, xi, family, opt).per_element();
}

}  // namespace seqdyn
