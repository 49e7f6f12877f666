#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "seqdyn/core/budget.hpp"
#include "seqdyn/core/rational.hpp"

namespace seqdyn {

// Maximal interval on which an exchange acts as a single translation:
// [start, start + length) maps to [start + shift, start + length + shift).
struct IetPiece {
  Rational start;
  Rational length;
  Rational shift;

  Rational end() const { return start + length; }
  Rational image_start() const { return start + shift; }
  Rational image_end() const { return start + length + shift; }

  friend bool operator==(const IetPiece&, const IetPiece&) = default;
};

// Iteration horizon of a rational rotation standing in for an irrational
// one: |m| * interval_count * safety must stay at or below the denominator.
struct AliasGuard {
  Integer denominator;
  std::int64_t safety = 1000;

  friend bool operator==(const AliasGuard&, const AliasGuard&) = default;
};

// Right-continuous piecewise translation of [0, 1) permuting finitely many
// half-open subintervals. Stored as maximal pieces sorted by start, so two
// exchanges that agree pointwise compare equal.
class IntervalExchange {
 public:
  IntervalExchange() : pieces_{{Rational(0), Rational(1), Rational(0)}} {}

  // Interval i (in the given order) is sent to position permutation[i] in
  // the image order.
  IntervalExchange(const std::vector<Rational>& lengths, const std::vector<std::size_t>& permutation) {
    const std::size_t n = lengths.size();
    if (n == 0) throw ValidationError("interval exchange needs at least one interval");
    if (permutation.size() != n) {
      throw ValidationError("permutation has " + std::to_string(permutation.size()) +
                            " entries for " + std::to_string(n) + " intervals");
    }
    std::vector<bool> seen(n, false);
    for (std::size_t p : permutation) {
      if (p >= n || seen[p]) throw ValidationError("permutation is not a bijection on 0.." + std::to_string(n - 1));
      seen[p] = true;
    }
    Rational total;
    for (std::size_t i = 0; i < n; ++i) {
      if (lengths[i].sign() <= 0) throw ValidationError("interval length " + std::to_string(i) + " is not positive");
      total += lengths[i];
    }
    if (total != Rational(1)) throw ValidationError("interval lengths sum to " + total.str() + ", not 1");

    std::vector<std::size_t> by_position(n);
    for (std::size_t i = 0; i < n; ++i) by_position[permutation[i]] = i;
    std::vector<Rational> image_start(n);
    Rational pos;
    for (std::size_t k = 0; k < n; ++k) {
      image_start[by_position[k]] = pos;
      pos += lengths[by_position[k]];
    }
    Rational start;
    std::vector<IetPiece> pieces;
    for (std::size_t i = 0; i < n; ++i) {
      pieces.push_back({start, lengths[i], image_start[i] - start});
      start += lengths[i];
    }
    pieces_ = normalize(std::move(pieces));
  }

  static IntervalExchange identity() { return {}; }

  // x -> x + alpha mod 1, as the two-interval exchange (1 - alpha, alpha).
  static IntervalExchange rotation(const Rational& alpha) {
    const Rational a = frac(alpha);
    if (a.sign() == 0) return identity();
    return IntervalExchange({Rational(1) - a, a}, {1, 0});
  }

  static IntervalExchange from_pieces(std::vector<IetPiece> pieces) {
    IntervalExchange t;
    t.pieces_ = normalize(std::move(pieces));
    t.check_pieces();
    return t;
  }

  const std::vector<IetPiece>& pieces() const noexcept { return pieces_; }
  std::size_t interval_count() const noexcept { return pieces_.size(); }

  std::vector<Rational> lengths() const {
    std::vector<Rational> out;
    for (const auto& p : pieces_) out.push_back(p.length);
    return out;
  }

  std::vector<std::size_t> permutation() const {
    std::vector<std::size_t> order(pieces_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return pieces_[a].image_start() < pieces_[b].image_start();
    });
    std::vector<std::size_t> perm(pieces_.size());
    for (std::size_t k = 0; k < order.size(); ++k) perm[order[k]] = k;
    return perm;
  }

  // Interior discontinuities (piece starts other than 0).
  std::vector<Rational> discontinuities() const {
    std::vector<Rational> out;
    for (std::size_t i = 1; i < pieces_.size(); ++i) out.push_back(pieces_[i].start);
    return out;
  }

  std::size_t piece_index(const Rational& x) const {
    if (x.sign() < 0 || !(x < Rational(1))) throw DomainError("point " + x.str() + " outside [0,1)");
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                               [](const Rational& v, const IetPiece& p) { return v < p.start; });
    return static_cast<std::size_t>(it - pieces_.begin()) - 1;
  }

  Rational apply(const Rational& x) const { return x + pieces_[piece_index(x)].shift; }

  IntervalExchange inverse() const {
    std::vector<IetPiece> inv;
    inv.reserve(pieces_.size());
    for (const auto& p : pieces_) inv.push_back({p.image_start(), p.length, -p.shift});
    std::sort(inv.begin(), inv.end(), [](const IetPiece& a, const IetPiece& b) { return a.start < b.start; });
    IntervalExchange t;
    t.pieces_ = normalize(std::move(inv));
    t.guard_ = guard_;
    return t;
  }

  const std::optional<AliasGuard>& alias_guard() const noexcept { return guard_; }
  void set_alias_guard(std::optional<AliasGuard> guard) { guard_ = std::move(guard); }

  // Throws AliasingError when iterating |m| times would exceed the guard.
  void check_horizon(std::int64_t m) const {
    if (!guard_) return;
    const Integer load = Integer(m < 0 ? -m : m) * Integer(pieces_.size()) * Integer(guard_->safety);
    if (load > guard_->denominator) {
      throw AliasingError("iteration time " + std::to_string(m) + " x " +
                          std::to_string(pieces_.size()) + " intervals exceeds denominator/" +
                          std::to_string(guard_->safety) + " (guard ratio " +
                          std::to_string((load.convert_to<long double>() /
                                          guard_->denominator.convert_to<long double>())) +
                          ")");
    }
  }

  // Largest |m| accepted by check_horizon, or nullopt when unguarded.
  std::optional<std::int64_t> horizon() const {
    if (!guard_) return std::nullopt;
    const Integer h = guard_->denominator / (Integer(pieces_.size()) * Integer(guard_->safety));
    if (h > Integer(std::numeric_limits<std::int64_t>::max())) return std::numeric_limits<std::int64_t>::max();
    return h.convert_to<std::int64_t>();
  }

  friend bool operator==(const IntervalExchange& a, const IntervalExchange& b) {
    return a.pieces_ == b.pieces_;
  }

 private:
  // Merges adjacent pieces that carry the same translation.
  static std::vector<IetPiece> normalize(std::vector<IetPiece> pieces) {
    std::vector<IetPiece> out;
    out.reserve(pieces.size());
    for (auto& p : pieces) {
      if (!out.empty() && out.back().shift == p.shift && out.back().end() == p.start) {
        out.back().length += p.length;
      } else {
        out.push_back(std::move(p));
      }
    }
    return out;
  }

  void check_pieces() const {
    Rational pos;
    std::vector<std::pair<Rational, Rational>> images;
    for (const auto& p : pieces_) {
      if (p.start != pos || p.length.sign() <= 0) throw ValidationError("pieces do not tile [0,1)");
      pos += p.length;
      images.emplace_back(p.image_start(), p.image_end());
    }
    if (pos != Rational(1)) throw ValidationError("pieces do not tile [0,1)");
    std::sort(images.begin(), images.end());
    Rational ipos;
    for (const auto& [a, b] : images) {
      if (a != ipos) throw ValidationError("piece images do not tile [0,1)");
      ipos = b;
    }
    if (ipos != Rational(1)) throw ValidationError("piece images do not tile [0,1)");
  }

  std::vector<IetPiece> pieces_;
  std::optional<AliasGuard> guard_;
};

// Pointwise A o B.
inline IntervalExchange iet_compose(const IntervalExchange& a, const IntervalExchange& b) {
  std::vector<IetPiece> out;
  out.reserve(a.interval_count() + b.interval_count());
  const auto& ap = a.pieces();
  for (const auto& bp : b.pieces()) {
    const Rational lo = bp.image_start();
    const Rational hi = bp.image_end();
    std::size_t k = a.piece_index(lo);
    Rational cursor = lo;
    while (cursor < hi) {
      const Rational stop = min(hi, ap[k].end());
      out.push_back({cursor - bp.shift, stop - cursor, bp.shift + ap[k].shift});
      cursor = stop;
      ++k;
    }
  }
  // Pieces of B appear in domain order, so `out` is sorted by start.
  return IntervalExchange::from_pieces(std::move(out));
}

inline Rational iet_apply(const IntervalExchange& t, const Rational& x) { return t.apply(x); }

// m-fold composition by iteration; negative m iterates the inverse.
inline IntervalExchange iet_power(const IntervalExchange& t, std::int64_t m, const Budget& budget = {}) {
  const std::int64_t mag = m < 0 ? -m : m;
  if (mag > budget.max_power) {
    throw BudgetError("power " + std::to_string(m) + " exceeds max_power " + std::to_string(budget.max_power));
  }
  t.check_horizon(m);
  const IntervalExchange step = m < 0 ? t.inverse() : t;
  IntervalExchange acc;
  for (std::int64_t i = 0; i < mag; ++i) {
    acc = iet_compose(step, acc);
    if (acc.interval_count() > budget.max_pieces) {
      throw BudgetError("power " + std::to_string(m) + " needs more than " +
                        std::to_string(budget.max_pieces) + " pieces");
    }
  }
  acc.set_alias_guard(t.alias_guard());
  return acc;
}

// Sequentially yields T^1, T^2, ... (or inverse powers) without recomputing
// from scratch; used by joins and scans that need many consecutive powers.
class PowerWalker {
 public:
  PowerWalker(const IntervalExchange& t, bool inverse, Budget budget = {})
      : step_(inverse ? t.inverse() : t), budget_(budget), sign_(inverse ? -1 : 1) {
    current_.set_alias_guard(t.alias_guard());
    step_.set_alias_guard(t.alias_guard());
  }

  std::int64_t exponent() const noexcept { return sign_ * steps_; }
  const IntervalExchange& current() const noexcept { return current_; }

  const IntervalExchange& advance_to(std::int64_t steps) {
    if (steps < steps_) throw std::logic_error("PowerWalker cannot move backwards");
    if (steps > budget_.max_power) {
      throw BudgetError("power " + std::to_string(steps) + " exceeds max_power " +
                        std::to_string(budget_.max_power));
    }
    step_.check_horizon(steps);
    while (steps_ < steps) {
      current_ = iet_compose(step_, current_);
      ++steps_;
      if (current_.interval_count() > budget_.max_pieces) {
        throw BudgetError("power " + std::to_string(steps_) + " needs more than " +
                          std::to_string(budget_.max_pieces) + " pieces");
      }
    }
    current_.set_alias_guard(step_.alias_guard());
    return current_;
  }

 private:
  IntervalExchange step_;
  IntervalExchange current_;
  Budget budget_;
  std::int64_t sign_ = 1;
  std::int64_t steps_ = 0;
};

}  // namespace seqdyn
