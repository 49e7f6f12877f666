#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "seqdyn/cli/build.hpp"

namespace seqdyn::cli {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitBudget = 2, kExitInternal = 3 };

struct ValidationReport {
  std::vector<std::string> lines;
  int exit_code = kExitOk;

  void error(int code, const std::string& text) {
    lines.push_back("error: " + text);
    exit_code = std::max(exit_code, code);
  }
  void note(const std::string& text) { lines.push_back(text); }
  bool ok() const noexcept { return exit_code == kExitOk; }
};

namespace detail {

// Largest iteration time the experiment will request.
inline std::int64_t horizon_needed(const ExperimentConfig& c, const std::vector<IndexFamily>& families) {
  std::int64_t t = 0;
  for (const auto& f : families) t = std::max(t, f.max_member());
  auto absmax = [](const std::vector<std::int64_t>& v) {
    std::int64_t r = 0;
    for (auto x : v) r = std::max(r, x < 0 ? -x : x);
    return r;
  };
  switch (c.experiment) {
    case Experiment::kMixingScan:
    case Experiment::kRigidityScan: return c.m_cap;
    case Experiment::kTripleCorrelation: return std::max(absmax(c.m_values), absmax(c.n_values));
    case Experiment::kAsymmetryRatio:
      return std::max(absmax(c.m_values), absmax(c.n_values)) + std::max<std::int64_t>(c.steps - 1, 0);
    default: return t;
  }
}

// Upper bound on pieces of T^p for an n-interval exchange.
inline std::int64_t piece_bound(const IetSystem& s, std::int64_t p) {
  const auto n = static_cast<std::int64_t>(s.map.interval_count());
  if (s.rotation) return 2;
  return p * (n - 1) + 1;
}

}  // namespace detail

// Static validation: parses and builds every object the run would need,
// predicts exact-join cut counts and checks the alias guard, but computes
// no entropy or correlation.
inline ValidationReport validate_experiment(const ExperimentConfig& c) {
  ValidationReport rep;
  auto guarded = [&](auto&& fn) {
    try {
      fn();
      return true;
    } catch (const BudgetError& e) {
      rep.error(kExitBudget, e.what());
    } catch (const ValidationError& e) {
      rep.error(kExitValidation, e.what());
    }
    return false;
  };

  if (!guarded([&] { check_config(c); })) return rep;
  System sys;
  if (!guarded([&] { sys = build_system(c); })) return rep;
  rep.note("system: " + name_of(system_names(), c.system));

  const Domain d = domain_of(c.system);
  guarded([&] {
    if (c.experiment == Experiment::kMixingScan || c.experiment == Experiment::kRigidityScan) {
      rep.note("test family: " + build_test_family(c, d).describe());
      return;
    }
    if (c.experiment == Experiment::kTripleCorrelation || c.experiment == Experiment::kSupEnvelope) return;
    if (d == Domain::kInterval) {
      const auto xi = build_interval_partition(c);
      rep.note("partition: " + std::to_string(xi.gap_count()) + " gaps, " + std::to_string(xi.label_count()) +
               " labels");
    } else if (d == Domain::kPlanar) {
      const auto xi = build_rect_partition(c, sys);
      rep.note("partition: " + std::to_string(xi.atoms().size()) + " rectangles");
    } else {
      rep.note("partition: cylinder of width " + std::to_string(cylinder_block(c)));
    }
  });

  std::vector<IndexFamily> families;
  const bool uses_family = c.experiment == Experiment::kEntropyTrace || c.experiment == Experiment::kMcEntropy ||
                           c.experiment == Experiment::kSupEnvelope;
  if (uses_family) {
    guarded([&] {
      for (std::int64_t j : j_values_of(c)) {
        families.push_back(build_family(c, j));
        if (families.back().truncated) {
          rep.note("warning: j = " + std::to_string(j) + " family truncated by cap " + std::to_string(c.cap));
        }
      }
      rep.note("families: " + std::to_string(families.size()));
    });
  }

  if (const auto* iet = std::get_if<IetSystem>(&sys)) {
    if (uses_family && c.experiment != Experiment::kSupEnvelope) {
      guarded([&] {
        const auto xi = build_interval_partition(c);
        std::int64_t worst = 0;
        for (const auto& f : families) {
          std::int64_t cuts = 0;
          for (std::int64_t p : f.members) cuts += detail::piece_bound(*iet, p) + static_cast<std::int64_t>(xi.gap_count());
          worst = std::max(worst, cuts);
        }
        rep.note("predicted cut points per join <= " + std::to_string(worst) + " (budget " +
                 std::to_string(c.budget.max_cuts) + ")");
        if (static_cast<std::size_t>(worst) > c.budget.max_cuts) {
          throw BudgetError("predicted cut points " + std::to_string(worst) + " exceed max_cuts " +
                            std::to_string(c.budget.max_cuts));
        }
      });
    }
    const std::int64_t need = detail::horizon_needed(c, families);
    if (need > c.budget.max_power) {
      rep.error(kExitBudget, "iteration time " + std::to_string(need) + " exceeds max_power " +
                                 std::to_string(c.budget.max_power));
    }
    if (const auto& guard = iet->map.alias_guard()) {
      const Integer load =
          Integer(need) * Integer(iet->map.interval_count()) * Integer(guard->safety);
      const long double ratio = load.convert_to<long double>() / guard->denominator.convert_to<long double>();
      rep.note("alias guard: horizon " + std::to_string(*iet->map.horizon()) + ", requested " + std::to_string(need) +
               ", guard ratio " + std::to_string(static_cast<double>(ratio)));
      if (load > guard->denominator) {
        rep.error(kExitBudget, "aliasing: iteration time " + std::to_string(need) + " x " +
                                   std::to_string(iet->map.interval_count()) + " intervals x safety " +
                                   std::to_string(guard->safety) + " exceeds denominator " +
                                   guard->denominator.str() + " (guard ratio " + std::to_string(static_cast<double>(ratio)) +
                                   ")");
      }
    }
  } else if (d == Domain::kPlanar) {
    if (c.experiment == Experiment::kEntropyTrace || c.experiment == Experiment::kMcEntropy) {
      if (c.samples < 1000) rep.error(kExitValidation, "samples must be >= 1000");
      if (static_cast<std::size_t>(c.samples) > c.budget.max_samples) {
        rep.error(kExitBudget, "samples " + std::to_string(c.samples) + " exceed max_samples " +
                                   std::to_string(c.budget.max_samples));
      }
      rep.note("Monte Carlo: " + std::to_string(c.samples) + " samples, seed " + std::to_string(c.seed.value_or(0)));
    }
    if (c.experiment == Experiment::kBoundaryGrowth && c.steps > c.budget.max_ledger_steps) {
      rep.error(kExitBudget, "steps " + std::to_string(c.steps) + " exceed max_ledger_steps " +
                                 std::to_string(c.budget.max_ledger_steps));
    }
    const std::int64_t need = detail::horizon_needed(c, families);
    if (need > c.budget.max_power) {
      rep.error(kExitBudget, "iteration time " + std::to_string(need) + " exceeds max_power " +
                                 std::to_string(c.budget.max_power));
    }
  }
  if (rep.ok()) rep.note("ok");
  return rep;
}

}  // namespace seqdyn::cli
