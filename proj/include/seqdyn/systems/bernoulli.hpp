#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "seqdyn/core/entropy.hpp"
#include "seqdyn/core/geometry.hpp"

namespace seqdyn {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

// Two-sided shift on k symbols with product measure. The generating
// partition is "symbol at coordinate 0".
class BernoulliSystem {
 public:
  explicit BernoulliSystem(ProbabilityVector masses) : masses_(std::move(masses)) {}

  static BernoulliSystem fair(std::size_t k = 2) {
    return BernoulliSystem(ProbabilityVector(std::vector<Rational>(k, Rational(1, static_cast<std::int64_t>(k)))));
  }

  const ProbabilityVector& symbol_masses() const noexcept { return masses_; }
  std::size_t symbol_count() const noexcept { return masses_.size(); }
  double entropy_per_symbol() const { return shannon_entropy(masses_); }

  // True when the baker map is an exact planar model of this system.
  bool has_planar_realization() const {
    return masses_.size() == 2 && masses_[0] == Rational(1, 2);
  }

  // Maps a uniform 64-bit draw to a symbol by exact comparison of
  // u / 2^64 against the cumulative masses.
  int symbol_for(std::uint64_t u) const {
    const Integer scaled = Integer(u);
    Rational cum;
    for (std::size_t s = 0; s < masses_.size(); ++s) {
      cum += masses_[s];
      if (masses_[s].sign() == 0) continue;
      // u / 2^64 < cum  <=>  u * den < num * 2^64
      if (scaled * cum.denominator() < (cum.numerator() << 64)) return static_cast<int>(s);
    }
    return static_cast<int>(masses_.size()) - 1;
  }

 private:
  ProbabilityVector masses_;
};

// A point of the shift space, generated lazily. Coordinates are drawn from a
// counter-based generator keyed by (seed, t), so the symbol at t does not
// depend on the order in which the window was extended.
class SymbolPoint {
 public:
  static SymbolPoint seeded(std::uint64_t seed) {
    SymbolPoint p;
    p.seed_ = seed;
    return p;
  }
  static SymbolPoint constant(int symbol) {
    SymbolPoint p;
    p.constant_ = symbol;
    return p;
  }

  int symbol(const BernoulliSystem& system, std::int64_t t) const {
    if (constant_) return *constant_;
    auto& side = t >= 0 ? forward_ : backward_;
    const std::size_t idx = static_cast<std::size_t>(t >= 0 ? t : -(t + 1));
    while (side.size() <= idx) {
      const std::int64_t coord = t >= 0 ? static_cast<std::int64_t>(side.size())
                                        : -static_cast<std::int64_t>(side.size()) - 1;
      const std::uint64_t u = detail::splitmix64(seed_ ^ detail::splitmix64(static_cast<std::uint64_t>(coord)));
      side.push_back(static_cast<std::int8_t>(system.symbol_for(u)));
    }
    return side[idx];
  }

  std::size_t materialized() const noexcept { return forward_.size() + backward_.size(); }

 private:
  std::uint64_t seed_ = 0;
  std::optional<int> constant_;
  mutable std::vector<std::int8_t> forward_;
  mutable std::vector<std::int8_t> backward_;
};

// Symbol of the point at time t, i.e. the generating-partition label of T^t(point).
inline int bernoulli_label(const BernoulliSystem& system, const SymbolPoint& point, std::int64_t t) {
  return point.symbol(system, t);
}

// Cylinder set of the shift: constraints coordinate -> symbol.
class Cylinder {
 public:
  Cylinder() = default;
  explicit Cylinder(std::map<std::int64_t, int> constraints) : constraints_(std::move(constraints)) {}

  const std::map<std::int64_t, int>& constraints() const noexcept { return constraints_; }

  // Preimage under T^m of this set: {w : sigma^m w in C}.
  Cylinder pulled_back(std::int64_t m) const {
    std::map<std::int64_t, int> out;
    for (const auto& [coord, s] : constraints_) out.emplace(coord + m, s);
    return Cylinder(std::move(out));
  }

  // Intersection, or nullopt when the constraints conflict.
  std::optional<Cylinder> intersect(const Cylinder& other) const {
    std::map<std::int64_t, int> out = constraints_;
    for (const auto& [coord, s] : other.constraints_) {
      auto [it, inserted] = out.emplace(coord, s);
      if (!inserted && it->second != s) return std::nullopt;
    }
    return Cylinder(std::move(out));
  }

  Rational measure(const BernoulliSystem& system) const {
    Rational m(1);
    for (const auto& [coord, s] : constraints_) m *= system.symbol_masses()[static_cast<std::size_t>(s)];
    return m;
  }

 private:
  std::map<std::int64_t, int> constraints_;
};

// The baker map of the unit square, the invertible planar model of the fair
// 2-shift. With x = .w1 w2 w3 ... and y = .w0 w-1 w-2 ... in binary, the
// map acts as the left shift, so the vertical-halves label of T^t(x, y) is
// the binary digit w_{t+1} of x.
class BakerMap {
 public:
  Point apply(const Point& p) const {
    check(p);
    const Rational two(2);
    const Rational half(1, 2);
    if (p.x < half) return {p.x * two, p.y / two};
    return {p.x * two - Rational(1), (p.y + Rational(1)) / two};
  }

  Point apply_inverse(const Point& p) const {
    check(p);
    const Rational two(2);
    const Rational half(1, 2);
    if (p.y < half) return {p.x / two, p.y * two};
    return {(p.x + Rational(1)) / two, p.y * two - Rational(1)};
  }

  // Cylinder of a dyadic rectangle [i/2^a, (i+1)/2^a) x [k/2^b, (k+1)/2^b).
  static Cylinder cylinder_of(unsigned x_level, std::uint64_t i, unsigned y_level, std::uint64_t k) {
    std::map<std::int64_t, int> c;
    for (unsigned d = 0; d < x_level; ++d) {
      c.emplace(static_cast<std::int64_t>(d) + 1, static_cast<int>((i >> (x_level - 1 - d)) & 1U));
    }
    for (unsigned d = 0; d < y_level; ++d) {
      c.emplace(-static_cast<std::int64_t>(d), static_cast<int>((k >> (y_level - 1 - d)) & 1U));
    }
    return Cylinder(std::move(c));
  }

  static BernoulliSystem symbolic() { return BernoulliSystem::fair(2); }

 private:
  static void check(const Point& p) {
    if (p.x.sign() < 0 || p.y.sign() < 0 || !(p.x < Rational(1)) || !(p.y < Rational(1))) {
      throw DomainError("point (" + p.x.str() + ", " + p.y.str() + ") outside [0,1)^2");
    }
  }
};

// Label of T^t(p) for the vertical-halves partition under the baker map.
inline int baker_label(const BakerMap& baker, Point p, std::int64_t t) {
  if (t < 0) {
    for (std::int64_t k = 0; k < -t; ++k) p = baker.apply_inverse(p);
  } else {
    for (std::int64_t k = 0; k < t; ++k) p = baker.apply(p);
  }
  return p.x < Rational(1, 2) ? 0 : 1;
}

}  // namespace seqdyn
