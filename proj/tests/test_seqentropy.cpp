#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support/generators.hpp"

using namespace seqdyn;

namespace {

Rational r(std::int64_t n, std::int64_t d = 1) { return Rational(n, d); }

const IntervalPartition kHalves = IntervalPartition::dyadic(1);

}  // namespace

TEST(IndexFamily, ProgressionFollowsGrowthRule) {
  EXPECT_EQ(make_progression_family(3, GrowthSpec::parse("j")).members, (std::vector<std::int64_t>{3, 6, 9}));
  EXPECT_EQ(make_progression_family(2, GrowthSpec::parse("j^2")).members, (std::vector<std::int64_t>{2, 4, 6, 8}));
  EXPECT_EQ(make_progression_family(5, GrowthSpec::parse("2*j")).size(), 10u);
  EXPECT_EQ(make_progression_family(5, GrowthSpec::parse("4")).members, (std::vector<std::int64_t>{5, 10, 15, 20}));
  EXPECT_THROW(GrowthSpec::parse("j^3"), ValidationError);
  EXPECT_THROW(GrowthSpec::parse("log j"), ValidationError);
  EXPECT_THROW(make_progression_family(0, GrowthSpec::parse("j")), ValidationError);
  EXPECT_THROW(make_progression_family(100, GrowthSpec::parse("j"), Budget{.max_family = 50}), BudgetError);
}

TEST(IndexFamily, GrowthSpecRoundTrips) {
  for (const char* text : {"j", "j^2", "7", "3*j"}) EXPECT_EQ(GrowthSpec::parse(GrowthSpec::parse(text).str()), GrowthSpec::parse(text));
}

TEST(IndexFamily, GeometricFamilyWithCap) {
  const auto f2 = make_geometric_family(2, 12);
  EXPECT_EQ(f2.members, (std::vector<std::int64_t>{4, 8, 16}));
  EXPECT_FALSE(f2.truncated);
  const auto f4 = make_geometric_family(4, 12);
  EXPECT_EQ(f4.members.front(), 16);
  EXPECT_EQ(f4.members.back(), 4096);
  EXPECT_TRUE(f4.truncated);
  EXPECT_THROW(make_geometric_family(1, 12), ValidationError);
  EXPECT_THROW(make_geometric_family(5, 4), ValidationError);
}

TEST(IndexFamily, ExplicitFamiliesAreSortedAndDistinct) {
  EXPECT_EQ(make_explicit_family({5, 1, 3}).members, (std::vector<std::int64_t>{1, 3, 5}));
  EXPECT_THROW(make_explicit_family({1, 1}), ValidationError);
  EXPECT_THROW(make_explicit_family({0, 2}), ValidationError);
  EXPECT_THROW(make_explicit_family({}), ValidationError);
}

TEST(ExactJoin, RotationByAQuarterOnHalves) {
  const auto t = IntervalExchange::rotation(r(1, 4));
  const JoinResult j = exact_join(t, kHalves, make_explicit_family({1, 2}));
  // T^-1 halves cuts at 1/4, 3/4; T^-2 halves coincides with halves.
  EXPECT_EQ(j.atom_count, 4);
  EXPECT_EQ(j.entropy_bits, 2.0);
  EXPECT_EQ(j.per_element(), 1.0);
}

TEST(ExactJoin, BackwardDirectionUsesInversePowers) {
  const IntervalExchange t({r(1, 2), r(1, 3), r(1, 6)}, {2, 1, 0});
  const auto f = make_explicit_family({1, 2, 3});
  const JoinResult fwd = exact_join(t, kHalves, f, Direction::kForward);
  const JoinResult bwd = exact_join(t.inverse(), kHalves, f, Direction::kBackward);
  EXPECT_EQ(fwd.measures->entries(), bwd.measures->entries());
}

TEST(ExactJoin, CutBudgetIsEnforced) {
  const auto t = RotationSpec::golden(30).exchange();
  EXPECT_THROW(exact_join(t, IntervalPartition::dyadic(4), make_progression_family(1, GrowthSpec::parse("64")),
                          Direction::kForward, Budget{.max_cuts = 50}),
               BudgetError);
}

TEST(ExactJoin, AliasGuardSurfacesAsError) {
  const auto t = RotationSpec::golden(20).exchange();
  EXPECT_THROW(exact_join(t, kHalves, make_explicit_family({1, 100000})), AliasingError);
}

TEST(ExactJoinProperty, IdentityLaw) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const auto xi = gen::dyadic_partition(rng, 4);
    const auto f = gen::family(rng, 12, 50);
    const JoinResult j = exact_join(IntervalExchange::identity(), xi, f);
    EXPECT_EQ(j.entropy_bits, partition_entropy(xi));
    EXPECT_EQ(j.per_element(), partition_entropy(xi) / static_cast<double>(f.size()));
  }
}

TEST(ExactJoinProperty, MeasuresSumToOneAndEntropyIsSandwiched) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 30; ++trial) {
    const auto t = gen::grid_iet(rng, 4, 210).exchange();
    const auto xi = gen::dyadic_partition(rng, 3);
    const auto f = gen::family(rng, 6, 20);
    const JoinResult j = exact_join(t, xi, f);
    Rational total;
    for (const auto& m : j.measures->entries()) total += m;
    EXPECT_EQ(total, r(1));
    const double single = partition_entropy(xi);
    EXPECT_GE(j.entropy_bits + 1e-12, single);
    EXPECT_LE(j.entropy_bits, single * static_cast<double>(f.size()) + 1e-12);
    EXPECT_LE(j.atom_count, Integer(j.cut_count));
  }
}

TEST(ExactJoinProperty, AddingTimesNeverLowersEntropy) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 30; ++trial) {
    const auto t = gen::grid_iet(rng, 5, 120).exchange();
    auto f = gen::family(rng, 5, 15);
    const double before = exact_join(t, kHalves, f).entropy_bits;
    auto members = f.members;
    members.push_back(f.max_member() + gen::uniform(rng, 1, 5));
    const double after = exact_join(t, kHalves, make_explicit_family(members)).entropy_bits;
    EXPECT_GE(after + 1e-12, before);
  }
}

TEST(ExactJoinProperty, CutCountBoundForRotations) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    const auto t = RotationSpec::golden(static_cast<int>(gen::uniform(rng, 30, 40))).exchange();
    const auto f = make_progression_family(gen::uniform(rng, 1, 3), GrowthSpec::parse("20"));
    const JoinResult j = exact_join(t, kHalves, f);
    EXPECT_LE(j.atom_count, Integer(2 * f.size() + 2));
    EXPECT_LE(j.entropy_bits, std::log2(static_cast<double>(2 * f.size() + 2)) + 1e-12);
  }
}

TEST(Bernoulli, ProgressionFamiliesGiveOneBitPerElement) {
  const auto s = BernoulliSystem::fair(2);
  for (std::int64_t j : {1, 2, 4, 8, 16}) EXPECT_EQ(h_j(s, make_progression_family(j, GrowthSpec::parse("j"))), 1.0);
}

TEST(Bernoulli, BlocksOverlapOnlyWhenTimesAreClose) {
  const auto s = BernoulliSystem::fair(2);
  EXPECT_EQ(bernoulli_join_entropy(s, make_explicit_family({1, 2}), 2).entropy_bits, 3.0);
  EXPECT_EQ(bernoulli_join_entropy(s, make_explicit_family({1, 5}), 2).entropy_bits, 4.0);
  EXPECT_EQ(bernoulli_join_entropy(s, make_explicit_family({1, 2, 3}), 1, Direction::kBackward).entropy_bits, 3.0);
}

TEST(Bernoulli, BiasedSymbolsScaleEntropy) {
  const BernoulliSystem s(ProbabilityVector({r(1, 4), r(3, 4)}));
  const auto j = bernoulli_join_entropy(s, make_explicit_family({2, 7, 9}));
  EXPECT_NEAR(j.entropy_bits, 3 * 0.8112781244591328, 1e-15);
  EXPECT_EQ(j.atom_count, 8);
  EXPECT_EQ(j.measures->size(), 8u);
}

TEST(Bernoulli, CylinderJoinAgreesWithTheClosedForm) {
  const auto s = BernoulliSystem::fair(2);
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = gen::family(rng, 8, 30);
    const std::int64_t block = gen::uniform(rng, 1, 3);
    const auto closed = bernoulli_join_entropy(s, f, block);
    const auto enumerated = cylinder_join(s, block_cylinders(s, block), f.members);
    EXPECT_EQ(closed.entropy_bits, enumerated.entropy_bits);
    EXPECT_EQ(closed.atom_count, enumerated.atom_count);
  }
}

TEST(Baker, VerticalHalvesJoinIsExactlyOneBitPerTime) {
  const auto halves = std::vector<Cylinder>{BakerMap::cylinder_of(1, 0, 0, 0), BakerMap::cylinder_of(1, 1, 0, 0)};
  for (std::int64_t j : {1, 2, 4}) {
    const auto f = make_progression_family(j, GrowthSpec::parse("j"));
    const auto res = cylinder_join(BakerMap::symbolic(), halves, f.members);
    EXPECT_EQ(res.entropy_bits, static_cast<double>(f.size()));
  }
}

TEST(Trace, RowsKeepTheirOrderAndErrors) {
  const auto t = RotationSpec::golden(30).exchange();
  const JoinFn join = [&](const IndexFamily& f) { return exact_join(t, kHalves, f); };
  const FamilyGenerator fam = [](std::int64_t j) { return make_progression_family(j, GrowthSpec::parse("j")); };
  const auto one = entropy_trace(join, fam, {1, 2, 4, 200}, 1);
  const auto many = entropy_trace(join, fam, {1, 2, 4, 200}, 3);
  ASSERT_EQ(one.rows.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(one.rows[i].j, many.rows[i].j);
    EXPECT_EQ(one.rows[i].h, many.rows[i].h);
  }
  EXPECT_FALSE(one.rows[3].ok());
  EXPECT_TRUE(one.rows[0].ok());
  const auto s = one.summary();
  EXPECT_EQ(s.rows_ok, 3u);
  EXPECT_EQ(s.rows_failed, 1u);
  EXPECT_EQ(*s.max_h, 1.0);
}

TEST(Trace, SupEnvelopeTakesTheRowwiseMaximum) {
  const auto s = BernoulliSystem::fair(2);
  const auto env = sup_over_partitions(dyadic_library(s, 3),
                                       [](std::int64_t j) { return make_progression_family(j, GrowthSpec::parse("j")); },
                                       {1, 2, 4});
  ASSERT_EQ(env.envelope.size(), 3u);
  // Blocks at times 2 and 4 share one coordinate.
  const std::vector<double> want{3.0, 2.5, 3.0};
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(*env.envelope[i].h, want[i]);
    EXPECT_EQ(env.envelope[i].argmax, "cylinder-3");
  }
}

TEST(Boundary, VerticalSwapWithQuadrantsIsConstant) {
  const auto ledger = boundary_growth(RectangleExchange::vertical_swap(), RectanglePartition::quadrants(), 10);
  EXPECT_EQ(ledger.discontinuity_length, r(1));
  for (const auto& b : ledger.lengths) EXPECT_EQ(b, r(2));
  EXPECT_TRUE(ledger.within_discontinuity_bound());
  EXPECT_TRUE(ledger.equality_steps().empty());
}

TEST(Boundary, ProductRotationSourcesGrowByDEachStep) {
  const auto t = RectangleExchange::product_rotation(r(610, 987), r(377, 610));
  std::vector<LabeledRect> atoms;
  for (std::size_t i = 0; i < t.size(); ++i) atoms.push_back({t.sources()[i], static_cast<Label>(i)});
  const auto ledger = boundary_growth(t, RectanglePartition(atoms), 20);
  EXPECT_EQ(ledger.discontinuity_length, r(2));
  for (std::size_t n = 0; n <= 20; ++n) EXPECT_EQ(ledger.lengths[n], r(2) + r(2 * static_cast<std::int64_t>(n)));
  EXPECT_EQ(ledger.equality_steps().size(), 20u);
}

TEST(BoundaryProperty, LinearBoundHoldsForRandomExchanges) {
  std::mt19937_64 rng(36);
  for (int trial = 0; trial < 12; ++trial) {
    const Rational a(gen::uniform(rng, 1, 96), 97), b(gen::uniform(rng, 1, 88), 89);
    const auto t = RectangleExchange::product_rotation(a, b);
    const auto xi = RectanglePartition::dyadic_grid(static_cast<unsigned>(gen::uniform(rng, 0, 2)),
                                                    static_cast<unsigned>(gen::uniform(rng, 0, 2)));
    const auto ledger = boundary_growth(t, xi, 12);
    EXPECT_TRUE(ledger.within_linear_bound());
    for (std::size_t n = 1; n < ledger.lengths.size(); ++n) EXPECT_GE(ledger.lengths[n], ledger.lengths[n - 1]);
  }
}

TEST(Boundary, StepBudget) {
  EXPECT_THROW(boundary_growth(RectangleExchange::vertical_swap(), RectanglePartition::quadrants(), 11,
                               Budget{.max_ledger_steps = 10}),
               BudgetError);
}

TEST(Asymmetry, IdentityHasRatioOne) {
  const auto a = asymmetry_ratio(IntervalExchange::identity(), kHalves, 4, 2, 3, Direction::kForward);
  EXPECT_EQ(a.ratio, 1.0);
  EXPECT_THROW(asymmetry_ratio(IntervalExchange::identity(), IntervalPartition::trivial(), 4, 2, 3, Direction::kForward),
               DegenerateInputError);
}

TEST(Asymmetry, RotationRatioAtLeastOne) {
  const auto t = RotationSpec::golden(30).exchange();
  for (auto d : {Direction::kForward, Direction::kBackward}) {
    const auto a = asymmetry_ratio(t, kHalves, 8, 3, 5, d);
    EXPECT_GE(a.ratio, 1.0);
    EXPECT_GE(a.triple_entropy_bits, a.base_entropy_bits);
  }
}

TEST(MonteCarlo, DeterministicInSeedAndIndependentOfJobs) {
  McOptions opt;
  opt.n_samples = 4096;
  opt.seed = 99;
  opt.bootstrap_resamples = 50;
  const auto f = make_explicit_family({1, 2, 3});
  const auto a = mc_join_entropy(BakerMap{}, RectanglePartition::vertical_halves(), f, opt);
  opt.jobs = 4;
  const auto b = mc_join_entropy(BakerMap{}, RectanglePartition::vertical_halves(), f, opt);
  EXPECT_EQ(a.entropy_bits, b.entropy_bits);
  EXPECT_EQ(a.ci_half_width, b.ci_half_width);
  EXPECT_EQ(a.atom_count, 8);
  EXPECT_EQ(a.method, JoinMethod::kMonteCarlo);
  opt.seed = 100;
  EXPECT_NE(mc_join_entropy(BakerMap{}, RectanglePartition::vertical_halves(), f, opt).entropy_bits, a.entropy_bits);
}

TEST(MonteCarlo, EstimateIsCloseToTheExactValue) {
  McOptions opt;
  opt.n_samples = 20000;
  opt.seed = 5;
  const auto id = mc_join_entropy(RectangleExchange::identity(), RectanglePartition::quadrants(),
                                  make_explicit_family({1, 2}), opt);
  EXPECT_NEAR(id.entropy_bits, 2.0, 0.01);
  EXPECT_GT(id.ci_half_width, 0.0);
  const auto bk = mc_join_entropy(BakerMap{}, RectanglePartition::vertical_halves(), make_explicit_family({1, 2, 3, 4}),
                                  opt);
  EXPECT_NEAR(bk.entropy_bits, 4.0, 0.02);
}

TEST(MonteCarlo, RejectsTooFewSamples) {
  McOptions opt;
  opt.n_samples = 999;
  EXPECT_THROW(mc_join_entropy(BakerMap{}, RectanglePartition::vertical_halves(), make_explicit_family({1}), opt),
               ValidationError);
  opt.n_samples = 2000;
  opt.budget.max_samples = 1000;
  EXPECT_THROW(mc_join_entropy(BakerMap{}, RectanglePartition::vertical_halves(), make_explicit_family({1}), opt),
               BudgetError);
}
