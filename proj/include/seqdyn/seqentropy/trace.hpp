#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "seqdyn/core/parallel.hpp"
#include "seqdyn/seqentropy/join.hpp"

namespace seqdyn {

using JoinFn = std::function<JoinResult(const IndexFamily&)>;
using FamilyGenerator = std::function<IndexFamily(std::int64_t j)>;

// h_j = H(join over P_j) / |P_j|, in bits per family element.
inline double h_j(const IntervalExchange& t, const IntervalPartition& xi, const IndexFamily& family,
                  Direction direction = Direction::kForward, const Budget& budget = {}) {
  return exact_join(t, xi, family, direction, budget).per_element();
}

inline double h_j(const BernoulliSystem& system, const IndexFamily& family, std::int64_t block = 1,
                  Direction direction = Direction::kForward) {
  return bernoulli_join_entropy(system, family, block, direction, 0).per_element();
}

struct TraceRow {
  std::int64_t j = 0;
  std::size_t family_size = 0;
  double entropy_bits = 0.0;
  double h = 0.0;
  JoinMethod method = JoinMethod::kExact;
  double ci_half_width = 0.0;
  Integer atom_count = 0;
  bool truncated = false;
  std::optional<std::string> error;

  bool ok() const noexcept { return !error.has_value(); }
};

// Finite-range summary. max/min over computed rows stand in for limsup and
// liminf; they are reported together with the range they were taken over.
struct TraceSummary {
  std::optional<double> max_h;
  std::optional<double> min_h;
  std::int64_t j_first = 0;
  std::int64_t j_last = 0;
  std::size_t rows_ok = 0;
  std::size_t rows_failed = 0;
};

struct EntropyTrace {
  std::string name;
  std::vector<TraceRow> rows;

  TraceSummary summary() const {
    TraceSummary s;
    if (!rows.empty()) {
      s.j_first = rows.front().j;
      s.j_last = rows.back().j;
    }
    for (const auto& r : rows) {
      if (!r.ok()) {
        ++s.rows_failed;
        continue;
      }
      ++s.rows_ok;
      s.max_h = s.max_h ? std::max(*s.max_h, r.h) : r.h;
      s.min_h = s.min_h ? std::min(*s.min_h, r.h) : r.h;
    }
    return s;
  }
};

// One row per j. A row whose family or join fails (budget, aliasing, ...)
// keeps its j and carries the error message instead of values.
inline EntropyTrace entropy_trace(const JoinFn& join, const FamilyGenerator& families,
                                  const std::vector<std::int64_t>& j_values, std::size_t jobs = 1,
                                  std::string name = {}) {
  EntropyTrace trace;
  trace.name = std::move(name);
  trace.rows.resize(j_values.size());
  parallel_for(j_values.size(), jobs, [&](std::size_t i) {
    TraceRow& row = trace.rows[i];
    row.j = j_values[i];
    try {
      const IndexFamily family = families(j_values[i]);
      const JoinResult r = join(family);
      row.family_size = family.size();
      row.entropy_bits = r.entropy_bits;
      row.h = r.per_element();
      row.method = r.method;
      row.ci_half_width = r.ci_half_width;
      row.atom_count = r.atom_count;
      row.truncated = family.truncated;
    } catch (const Error& e) {
      row.error = e.what();
    }
  });
  return trace;
}

struct NamedJoin {
  std::string name;
  JoinFn join;
};

struct EnvelopeRow {
  std::int64_t j = 0;
  std::optional<double> h;      // max over library partitions (lower bound for sup)
  std::string argmax;
};

struct SupEnvelope {
  std::vector<EntropyTrace> traces;
  std::vector<EnvelopeRow> envelope;
};

// Traces for every partition of a finite library and their pointwise max.
// The max over a finite library only bounds the supremum over all
// partitions from below.
inline SupEnvelope sup_over_partitions(const std::vector<NamedJoin>& library, const FamilyGenerator& families,
                                       const std::vector<std::int64_t>& j_values, std::size_t jobs = 1) {
  SupEnvelope out;
  for (const auto& entry : library) out.traces.push_back(entropy_trace(entry.join, families, j_values, jobs, entry.name));
  for (std::size_t i = 0; i < j_values.size(); ++i) {
    EnvelopeRow row;
    row.j = j_values[i];
    for (const auto& tr : out.traces) {
      const TraceRow& r = tr.rows[i];
      if (!r.ok()) continue;
      if (!row.h || r.h > *row.h) {
        row.h = r.h;
        row.argmax = tr.name;
      }
    }
    out.envelope.push_back(std::move(row));
  }
  return out;
}

// Dyadic libraries: level-1 .. level-depth partitions.
inline std::vector<NamedJoin> dyadic_library(const IntervalExchange& t, unsigned depth,
                                             Direction direction = Direction::kForward, Budget budget = {}) {
  std::vector<NamedJoin> lib;
  for (unsigned d = 1; d <= depth; ++d) {
    lib.push_back({"dyadic-" + std::to_string(d), [t, d, direction, budget](const IndexFamily& f) {
                     return exact_join(t, IntervalPartition::dyadic(d), f, direction, budget);
                   }});
  }
  return lib;
}

inline std::vector<NamedJoin> dyadic_library(const BernoulliSystem& system, unsigned depth,
                                             Direction direction = Direction::kForward) {
  std::vector<NamedJoin> lib;
  for (unsigned d = 1; d <= depth; ++d) {
    lib.push_back({"cylinder-" + std::to_string(d), [system, d, direction](const IndexFamily& f) {
                     return bernoulli_join_entropy(system, f, static_cast<std::int64_t>(d), direction, 0);
                   }});
  }
  return lib;
}

}  // namespace seqdyn
