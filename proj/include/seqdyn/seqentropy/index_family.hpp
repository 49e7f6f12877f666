#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "seqdyn/core/budget.hpp"
#include "seqdyn/core/errors.hpp"

namespace seqdyn {

// Growth rule L(j) for progression families, restricted to a small whitelist.
struct GrowthSpec {
  enum class Kind { kConstant, kLinear, kQuadratic, kScaledLinear };

  Kind kind = Kind::kLinear;
  std::int64_t c = 1;

  static GrowthSpec constant(std::int64_t c) { return {Kind::kConstant, c}; }
  static GrowthSpec linear() { return {Kind::kLinear, 1}; }
  static GrowthSpec quadratic() { return {Kind::kQuadratic, 1}; }
  static GrowthSpec scaled_linear(std::int64_t c) { return {Kind::kScaledLinear, c}; }

  // Accepts "c" style constants ("5"), "j", "j^2", "c*j" ("3*j").
  static GrowthSpec parse(const std::string& text) {
    std::string s;
    for (char ch : text)
      if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s == "j") return linear();
    if (s == "j^2" || s == "j*j") return quadratic();
    auto parse_int = [&](const std::string& v) {
      if (v.empty() || !std::all_of(v.begin(), v.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
        throw ValidationError("growth rule '" + text + "' is not one of c, j, j^2, c*j");
      }
      return std::stoll(v);
    };
    if (s.size() > 2 && s.substr(s.size() - 2) == "*j") return scaled_linear(parse_int(s.substr(0, s.size() - 2)));
    return constant(parse_int(s));
  }

  std::int64_t evaluate(std::int64_t j) const {
    switch (kind) {
      case Kind::kConstant: return c;
      case Kind::kLinear: return j;
      case Kind::kQuadratic: return j * j;
      case Kind::kScaledLinear: return c * j;
    }
    return j;
  }

  std::string str() const {
    switch (kind) {
      case Kind::kConstant: return std::to_string(c);
      case Kind::kLinear: return "j";
      case Kind::kQuadratic: return "j^2";
      case Kind::kScaledLinear: return std::to_string(c) + "*j";
    }
    return "j";
  }

  friend bool operator==(const GrowthSpec&, const GrowthSpec&) = default;
};

// Finite set of positive times P_j along which partitions are joined.
struct IndexFamily {
  enum class Kind { kProgression, kGeometric, kExplicit };

  Kind kind = Kind::kExplicit;
  std::int64_t j = 1;
  std::vector<std::int64_t> members;
  std::optional<GrowthSpec> growth;      // progression
  std::optional<std::int64_t> cap;       // geometric
  bool truncated = false;                // geometric family cut below 2^(j^2)

  std::size_t size() const noexcept { return members.size(); }
  std::int64_t max_member() const { return members.back(); }
};

inline const char* to_string(IndexFamily::Kind k) {
  switch (k) {
    case IndexFamily::Kind::kProgression: return "progression";
    case IndexFamily::Kind::kGeometric: return "geometric";
    case IndexFamily::Kind::kExplicit: return "explicit";
  }
  return "explicit";
}

// {j, 2j, ..., L(j) j}.
inline IndexFamily make_progression_family(std::int64_t j, const GrowthSpec& growth, const Budget& budget = {}) {
  if (j < 1) throw ValidationError("progression index j must be >= 1, got " + std::to_string(j));
  const std::int64_t length = growth.evaluate(j);
  if (length < 1) throw ValidationError("L(" + std::to_string(j) + ") = " + std::to_string(length) + " must be >= 1");
  if (static_cast<std::size_t>(length) > budget.max_family) {
    throw BudgetError("L(" + std::to_string(j) + ") = " + std::to_string(length) + " exceeds family budget " +
                      std::to_string(budget.max_family));
  }
  IndexFamily f;
  f.kind = IndexFamily::Kind::kProgression;
  f.j = j;
  f.growth = growth;
  for (std::int64_t k = 1; k <= length; ++k) f.members.push_back(k * j);
  if (f.max_member() > budget.max_power) {
    throw BudgetError("progression member " + std::to_string(f.max_member()) + " exceeds max_power " +
                      std::to_string(budget.max_power));
  }
  return f;
}

// {2^e : j <= e <= min(j^2, cap)}.
inline IndexFamily make_geometric_family(std::int64_t j, std::int64_t cap, const Budget& budget = {}) {
  if (j < 2) throw ValidationError("geometric index j must be >= 2, got " + std::to_string(j));
  const std::int64_t top = std::min(j * j, cap);
  if (top < j) {
    throw ValidationError("cap " + std::to_string(cap) + " leaves the geometric family for j = " +
                          std::to_string(j) + " empty");
  }
  if (top > 62 || (std::int64_t{1} << top) > budget.max_power) {
    throw BudgetError("geometric member 2^" + std::to_string(top) + " exceeds max_power " +
                      std::to_string(budget.max_power));
  }
  IndexFamily f;
  f.kind = IndexFamily::Kind::kGeometric;
  f.j = j;
  f.cap = cap;
  f.truncated = top < j * j;
  for (std::int64_t e = j; e <= top; ++e) f.members.push_back(std::int64_t{1} << e);
  return f;
}

inline IndexFamily make_explicit_family(std::vector<std::int64_t> members, const Budget& budget = {}) {
  if (members.empty()) throw ValidationError("explicit family is empty");
  std::sort(members.begin(), members.end());
  if (std::adjacent_find(members.begin(), members.end()) != members.end()) {
    throw ValidationError("explicit family has repeated members");
  }
  if (members.front() < 1) throw ValidationError("explicit family members must be positive");
  if (members.size() > budget.max_family) throw BudgetError("explicit family exceeds family budget");
  if (members.back() > budget.max_power) throw BudgetError("explicit family member exceeds max_power");
  IndexFamily f;
  f.kind = IndexFamily::Kind::kExplicit;
  f.j = static_cast<std::int64_t>(members.size());
  f.members = std::move(members);
  return f;
}

}  // namespace seqdyn
