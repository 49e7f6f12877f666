#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "seqdyn/cli/config.hpp"
#include "seqdyn/seqentropy/index_family.hpp"
#include "seqdyn/systems/bernoulli.hpp"
#include "seqdyn/systems/interval_exchange.hpp"
#include "seqdyn/systems/rectangle_exchange.hpp"
#include "seqdyn/systems/rotation.hpp"
#include "seqdyn/weaklimits/test_family.hpp"

namespace seqdyn::cli {

struct IetSystem {
  IntervalExchange map;
  std::optional<RotationSpec> rotation;
};

using System = std::variant<IetSystem, BernoulliSystem, BakerMap, RectangleExchange>;

enum class Domain { kInterval, kSymbolic, kPlanar };

inline Domain domain_of(SystemKind k) {
  switch (k) {
    case SystemKind::kIdentity:
    case SystemKind::kIet:
    case SystemKind::kRotation: return Domain::kInterval;
    case SystemKind::kBernoulli: return Domain::kSymbolic;
    default: return Domain::kPlanar;
  }
}

inline std::vector<std::size_t> to_permutation(const std::vector<std::int64_t>& p) {
  std::vector<std::size_t> out;
  for (auto v : p) {
    if (v < 0) throw ParseError("permutation", 0, "entries must be >= 0");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

inline RotationSpec build_rotation(const ExperimentConfig& c) {
  const int given = (c.alpha ? 1 : 0) + (c.golden ? 1 : 0) + (c.cf.empty() ? 0 : 1);
  if (given != 1) throw ParseError("alpha", 0, "rotation needs exactly one of alpha, golden, cf");
  if (c.golden) {
    if (*c.golden < 2 || *c.golden > 80) throw ParseError("golden", 0, "golden index must be in 2..80");
    return RotationSpec::golden(static_cast<int>(*c.golden), c.safety);
  }
  if (!c.cf.empty()) return RotationSpec::from_continued_fraction(c.cf, c.safety);
  return RotationSpec(*c.alpha, c.safety);
}

inline System build_system(const ExperimentConfig& c) {
  switch (c.system) {
    case SystemKind::kIdentity: return IetSystem{IntervalExchange::identity(), std::nullopt};
    case SystemKind::kIet:
      if (c.lengths.empty()) throw ParseError("lengths", 0, "iet needs interval lengths");
      return IetSystem{IntervalExchange(c.lengths, to_permutation(c.permutation)), std::nullopt};
    case SystemKind::kRotation: {
      RotationSpec spec = build_rotation(c);
      return IetSystem{spec.exchange(), spec};
    }
    case SystemKind::kBernoulli:
      if (c.masses.empty()) return BernoulliSystem::fair(2);
      return BernoulliSystem(ProbabilityVector(c.masses));
    case SystemKind::kBaker: return BakerMap{};
    case SystemKind::kIdentity2d: return RectangleExchange::identity();
    case SystemKind::kVerticalSwap: return RectangleExchange::vertical_swap();
    case SystemKind::kProductRotation:
      if (!c.alpha || !c.beta) throw ParseError("alpha", 0, "product-rotation needs alpha and beta");
      return RectangleExchange::product_rotation(*c.alpha, *c.beta);
    case SystemKind::kRectangle: {
      if (auto issue = rect_validate(c.sources, c.translations)) {
        throw ValidationError(std::string("tiling: ") + to_string(issue->kind) + " (rectangles " +
                              std::to_string(issue->first) + ", " + std::to_string(issue->second) +
                              "): " + issue->message);
      }
      return RectangleExchange(c.sources, c.translations);
    }
  }
  throw ValidationError("unsupported system");
}

inline unsigned checked_depth(std::int64_t d, const char* field, std::int64_t max = 16) {
  if (d < 0 || d > max) throw ParseError(field, 0, "must be in 0.." + std::to_string(max));
  return static_cast<unsigned>(d);
}

inline IntervalPartition build_interval_partition(const ExperimentConfig& c) {
  switch (c.partition) {
    case PartitionKind::kTrivial: return IntervalPartition::trivial();
    case PartitionKind::kHalves: return IntervalPartition::dyadic(1);
    case PartitionKind::kDyadic: return IntervalPartition::dyadic(checked_depth(c.depth, "depth"));
    case PartitionKind::kExplicit: return IntervalPartition(c.cuts, c.labels);
    default:
      throw ParseError("partition", 0,
                       "'" + name_of(partition_names(), c.partition) + "' is not a partition of [0,1)");
  }
}

inline RectanglePartition build_rect_partition(const ExperimentConfig& c, const System& sys) {
  switch (c.partition) {
    case PartitionKind::kTrivial: return RectanglePartition::trivial();
    case PartitionKind::kQuadrants: return RectanglePartition::quadrants();
    case PartitionKind::kVerticalHalves: return RectanglePartition::vertical_halves();
    case PartitionKind::kGrid:
      return RectanglePartition::dyadic_grid(checked_depth(c.depth, "depth", 8), checked_depth(c.y_depth, "y_depth", 8));
    case PartitionKind::kRects: return RectanglePartition(c.rects);
    case PartitionKind::kSources: {
      const auto* t = std::get_if<RectangleExchange>(&sys);
      if (!t) throw ParseError("partition", 0, "'sources' needs a rectangle exchange");
      std::vector<LabeledRect> atoms;
      for (std::size_t i = 0; i < t->sources().size(); ++i) atoms.push_back({t->sources()[i], static_cast<Label>(i)});
      return RectanglePartition(std::move(atoms));
    }
    default:
      throw ParseError("partition", 0,
                       "'" + name_of(partition_names(), c.partition) + "' is not a partition of the unit square");
  }
}

// Width of the cylinder partition for the symbolic system.
inline std::int64_t cylinder_block(const ExperimentConfig& c) {
  switch (c.partition) {
    case PartitionKind::kCylinder: return std::max<std::int64_t>(1, c.depth);
    case PartitionKind::kHalves:
    case PartitionKind::kTrivial:
      throw ParseError("partition", 0, "use 'cylinder' (depth = block width) for the bernoulli system");
    default:
      throw ParseError("partition", 0,
                       "'" + name_of(partition_names(), c.partition) + "' is not a partition of the shift");
  }
}

inline IndexFamily build_family(const ExperimentConfig& c, std::int64_t j) {
  switch (c.family) {
    case FamilyKind::kProgression: return make_progression_family(j, c.growth, c.budget);
    case FamilyKind::kGeometric: return make_geometric_family(j, c.cap, c.budget);
    case FamilyKind::kExplicit: return make_explicit_family(c.members, c.budget);
  }
  throw ValidationError("unsupported family");
}

inline std::vector<std::int64_t> j_values_of(const ExperimentConfig& c) {
  if (c.family == FamilyKind::kExplicit) return c.j_values.empty() ? std::vector<std::int64_t>{1} : c.j_values;
  if (c.j_values.empty()) throw ParseError("j", 0, "needs at least one j value");
  return c.j_values;
}

inline TestFamily build_test_family(const ExperimentConfig& c, Domain d) {
  const unsigned depth = checked_depth(c.test_depth, "test_depth", 10);
  return d == Domain::kInterval ? TestFamily::intervals(depth) : TestFamily::rectangles(depth);
}

// Static checks on budgets and experiment/system compatibility.
inline void check_config(const ExperimentConfig& c) {
  const Budget hard = hard_limits();
  auto over = [](auto v, auto lim, const char* field) {
    if (v > lim) throw ParseError(field, 0, std::to_string(v) + " exceeds the hard limit " + std::to_string(lim));
  };
  over(c.budget.max_family, hard.max_family, "budget.max_family");
  over(c.budget.max_power, hard.max_power, "budget.max_power");
  over(c.budget.max_cuts, hard.max_cuts, "budget.max_cuts");
  over(c.budget.max_pieces, hard.max_pieces, "budget.max_pieces");
  over(c.budget.max_samples, hard.max_samples, "budget.max_samples");
  over(c.budget.max_ledger_steps, hard.max_ledger_steps, "budget.max_ledger_steps");

  const Domain d = domain_of(c.system);
  const auto need = [&](bool ok, const std::string& what) {
    if (!ok) {
      throw ParseError("experiment", 0,
                       name_of(experiment_names(), c.experiment) + " " + what + " (system '" +
                           name_of(system_names(), c.system) + "')");
    }
  };
  switch (c.experiment) {
    case Experiment::kEntropyTrace:
      if (d == Domain::kPlanar) need(c.seed.has_value(), "on a planar system is Monte Carlo and needs a seed");
      break;
    case Experiment::kSupEnvelope: need(d != Domain::kPlanar, "needs an interval or symbolic system"); break;
    case Experiment::kBoundaryGrowth:
      need(d == Domain::kPlanar && c.system != SystemKind::kBaker, "needs a rectangle exchange");
      break;
    case Experiment::kMixingScan:
    case Experiment::kRigidityScan:
      need(d != Domain::kSymbolic, "needs an interval exchange, the baker map or a rectangle exchange");
      break;
    case Experiment::kTripleCorrelation:
      need(!c.m_values.empty() && !c.n_values.empty(), "needs m and n lists");
      break;
    case Experiment::kAsymmetryRatio:
      need(d == Domain::kInterval, "needs an interval exchange");
      need(!c.m_values.empty() && !c.n_values.empty(), "needs m and n lists");
      break;
    case Experiment::kMcEntropy:
      need(d == Domain::kPlanar, "needs a planar system");
      need(c.seed.has_value(), "needs a seed");
      break;
  }
}

}  // namespace seqdyn::cli
