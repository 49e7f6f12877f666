#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "seqdyn/core/parallel.hpp"
#include "seqdyn/systems/rotation.hpp"
#include "seqdyn/weaklimits/distance.hpp"

namespace seqdyn {

struct ScanEvent {
  std::int64_t m = 0;
  double value = 0.0;
};

struct ScanReport {
  std::string metric;  // "dist_to_theta" or "dist_to_identity"
  double threshold = 0.0;
  std::int64_t j = 0;
  std::vector<std::int64_t> ms;
  std::vector<double> values;
  std::vector<ScanEvent> events;  // threshold crossings, ascending m
  std::optional<std::int64_t> first_crossing;
  std::vector<std::int64_t> expected_times;
  std::vector<std::int64_t> expected_hits;
  std::vector<std::int64_t> expected_misses;

  bool is_event(std::int64_t m) const { return std::ranges::binary_search(events, m, {}, &ScanEvent::m); }
};

namespace detail {

// Correlation matrices for consecutive powers m0, m0+1, ... of one system.
template <class System>
class MatrixStream;

template <>
class MatrixStream<IntervalExchange> {
 public:
  MatrixStream(const IntervalExchange& t, std::int64_t m0, const TestFamily& family, const Budget& budget)
      : step_(t), power_(iet_power(t, m0, budget)), m_(m0), family_(family), budget_(budget) {}

  CorrelationMatrix next() {
    CorrelationMatrix c = correlation_matrix_of_power(power_, family_, m_);
    ++m_;
    power_ = iet_compose(step_, power_);
    if (power_.interval_count() > budget_.max_pieces) throw BudgetError("power needs too many pieces");
    return c;
  }

 private:
  IntervalExchange step_;
  IntervalExchange power_;
  std::int64_t m_;
  const TestFamily& family_;
  Budget budget_;
};

template <>
class MatrixStream<BakerMap> {
 public:
  MatrixStream(const BakerMap& t, std::int64_t m0, const TestFamily& family, const Budget& budget)
      : t_(t), m_(m0), family_(family), budget_(budget) {}

  CorrelationMatrix next() { return correlation_matrix(t_, family_, m_++, budget_); }

 private:
  BakerMap t_;
  std::int64_t m_;
  const TestFamily& family_;
  Budget budget_;
};

template <>
class MatrixStream<RectangleExchange> {
 public:
  MatrixStream(const RectangleExchange& t, std::int64_t m0, const TestFamily& family, const Budget& budget)
      : t_(t), m_(m0), family_(family), budget_(budget) {
    if (family.dimension() != TestFamily::Dimension::k2D) {
      throw ValidationError("rectangle exchanges need a 2D test family");
    }
    for (const auto& c : family.cells()) pre_.push_back(rect_preimage_power(t, {c.rect()}, m0, budget));
  }

  CorrelationMatrix next() {
    CorrelationMatrix c = correlation_matrix_from_preimages(pre_, family_, m_);
    ++m_;
    for (auto& set : pre_) set = rect_preimage_power(t_, std::move(set), 1, budget_);
    return c;
  }

 private:
  RectangleExchange t_;
  std::int64_t m_;
  const TestFamily& family_;
  Budget budget_;
  std::vector<std::vector<Rect>> pre_;
};

}  // namespace detail

// Weighted distance of T^m to a fixed target for m = m0..m1, in m-order.
// Contiguous chunks of m run concurrently; values do not depend on `jobs`.
template <class System>
std::vector<double> distance_trace(const System& t, std::int64_t m0, std::int64_t m1, const TestFamily& family,
                                   const std::vector<Rational>& target, std::size_t jobs = 1,
                                   const Budget& budget = {}) {
  if (m0 < 0 || m1 < m0) throw ValidationError("scan range must satisfy 0 <= m0 <= m1");
  if (m1 > budget.max_power) {
    throw BudgetError("scan cap " + std::to_string(m1) + " exceeds max_power " + std::to_string(budget.max_power));
  }
  if constexpr (std::is_same_v<System, IntervalExchange>) t.check_horizon(m1);
  const auto count = static_cast<std::size_t>(m1 - m0 + 1);
  const std::size_t chunks = std::max<std::size_t>(1, std::min(jobs, count));
  std::vector<double> values(count);
  parallel_for(chunks, chunks, [&](std::size_t c) {
    const std::size_t lo = count * c / chunks;
    const std::size_t hi = count * (c + 1) / chunks;
    if (lo == hi) return;
    detail::MatrixStream<System> stream(t, m0 + static_cast<std::int64_t>(lo), family, budget);
    for (std::size_t k = lo; k < hi; ++k) values[k] = weighted_distance(family, stream.next().values, target);
  });
  return values;
}

// Scans m in (j, m_cap] for dist_to_theta > r; the first crossing is the
// smallest m > j with w(T^m, Theta) > r.
template <class System>
ScanReport mixing_time_scan(const System& t, std::int64_t j, double r, std::int64_t m_cap,
                            const TestFamily& family, std::size_t jobs = 1, const Budget& budget = {}) {
  if (j < 0) throw ValidationError("mixing scan needs j >= 0");
  if (!(r >= 0.0)) throw ValidationError("mixing scan threshold must be >= 0");
  ScanReport report;
  report.metric = "dist_to_theta";
  report.threshold = r;
  report.j = j;
  if (m_cap <= j) return report;
  report.values = distance_trace(t, j + 1, m_cap, family, family.product_targets(), jobs, budget);
  for (std::size_t k = 0; k < report.values.size(); ++k) {
    const std::int64_t m = j + 1 + static_cast<std::int64_t>(k);
    report.ms.push_back(m);
    if (report.values[k] > r) report.events.push_back({m, report.values[k]});
  }
  if (!report.events.empty()) report.first_crossing = report.events.front().m;
  return report;
}

// Lists m in [1, m_cap] with dist_to_identity < eps. Optional expected
// rigidity times are split into detected and missed.
template <class System>
ScanReport rigidity_scan(const System& t, std::int64_t m_cap, double eps, const TestFamily& family,
                         std::size_t jobs = 1, const Budget& budget = {},
                         std::vector<std::int64_t> expected_times = {}) {
  if (!(eps > 0.0)) throw ValidationError("rigidity scan threshold must be > 0");
  ScanReport report;
  report.metric = "dist_to_identity";
  report.threshold = eps;
  if (m_cap < 1) return report;
  report.values = distance_trace(t, 1, m_cap, family, family.overlap_targets(), jobs, budget);
  for (std::size_t k = 0; k < report.values.size(); ++k) {
    const auto m = static_cast<std::int64_t>(k) + 1;
    report.ms.push_back(m);
    if (report.values[k] < eps) report.events.push_back({m, report.values[k]});
  }
  if (!report.events.empty()) report.first_crossing = report.events.front().m;
  std::sort(expected_times.begin(), expected_times.end());
  for (std::int64_t m : expected_times) {
    if (m < 1 || m > m_cap) continue;
    report.expected_times.push_back(m);
    (report.is_event(m) ? report.expected_hits : report.expected_misses).push_back(m);
  }
  return report;
}

// Rotation overload: the expected rigidity times are the convergent
// denominators of the angle.
inline ScanReport rigidity_scan(const RotationSpec& rot, std::int64_t m_cap, double eps, const TestFamily& family,
                                std::size_t jobs = 1, const Budget& budget = {}) {
  std::vector<std::int64_t> expected;
  for (const auto& q : rot.convergent_denominators()) {
    if (q <= m_cap) expected.push_back(q.convert_to<std::int64_t>());
  }
  return rigidity_scan(rot.exchange(), m_cap, eps, family, jobs, budget, std::move(expected));
}

}  // namespace seqdyn
