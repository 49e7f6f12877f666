#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <limits>
#include <random>

#include "oracles/oracles.hpp"
#include "support/generators.hpp"

using namespace seqdyn;

namespace {

Rational r(std::int64_t n, std::int64_t d = 1) { return Rational(n, d); }

}  // namespace

TEST(Rational, ReducesAndNormalizesSign) {
  EXPECT_EQ(r(6, -4).str(), "-3/2");
  EXPECT_EQ(r(0, -7).str(), "0");
  EXPECT_EQ(r(10, 5), r(2));
  EXPECT_EQ(r(10, 5).denominator(), 1);
}

TEST(Rational, ZeroDenominatorIsDomainError) {
  EXPECT_THROW(r(1, 0), DomainError);
  EXPECT_THROW(Rational::parse("1/0"), ValidationError);
  EXPECT_THROW(r(1) / r(0), DomainError);
}

TEST(Rational, ParseAcceptsIntegersAndFractions) {
  EXPECT_EQ(Rational::parse("13/21"), r(13, 21));
  EXPECT_EQ(Rational::parse(" -4/6 "), r(-2, 3));
  EXPECT_EQ(Rational::parse("7"), r(7));
  EXPECT_THROW(Rational::parse("0.5"), ValidationError);
  EXPECT_THROW(Rational::parse("1/2/3"), ValidationError);
  EXPECT_THROW(Rational::parse(""), ValidationError);
  EXPECT_THROW(Rational::parse("abc"), ValidationError);
}

TEST(Rational, OverflowFallsBackToBigValues) {
  const Rational big(std::numeric_limits<std::int64_t>::max());
  const Rational sq = big * big;
  EXPECT_FALSE(sq.is_small());
  EXPECT_EQ(sq / big, big);
  EXPECT_TRUE((sq / big).is_small());
  const Rational tiny = Rational(1) / big / big;
  EXPECT_EQ(tiny * sq, Rational(1));
  EXPECT_GT(big + Rational(1), big);
  EXPECT_EQ(Rational(std::numeric_limits<std::int64_t>::min()) + big, Rational(-1));
}

TEST(Rational, ToDoubleIsCorrectlyRounded) {
  EXPECT_EQ(r(1, 3).to_double(), 1.0 / 3.0);
  EXPECT_EQ(r(13, 21).to_double(), 13.0 / 21.0);
  EXPECT_EQ(pow2_inverse(80).to_double(), std::ldexp(1.0, -80));
}

TEST(Rational, FloorAndFrac) {
  EXPECT_EQ(r(-1, 3).floor(), -1);
  EXPECT_EQ(frac(r(-1, 3)), r(2, 3));
  EXPECT_EQ(frac(r(7, 2)), r(1, 2));
}

TEST(RationalProperty, FieldAxiomsOnRandomValues) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const Rational a = gen::rational(rng), b = gen::rational(rng), c = gen::rational(rng);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ((a + b) - b, a);
    if (b.sign() != 0) {
      EXPECT_EQ((a / b) * b, a);
    }
    EXPECT_EQ(a < b, a.to_long_double() < b.to_long_double());
    EXPECT_EQ(Rational::parse(a.str()), a);
  }
}

TEST(RationalProperty, BigAndSmallPathsAgree) {
  std::mt19937_64 rng(12);
  const Rational scale = Rational(Integer(1) << 100);
  for (int trial = 0; trial < 500; ++trial) {
    const Rational a = gen::rational(rng), b = gen::rational(rng);
    EXPECT_EQ(((a * scale) + (b * scale)) / scale, a + b);
    EXPECT_EQ(((a * scale) * b) / scale, a * b);
  }
}

TEST(Entropy, MatchesFiftyDigitOracle) {
  struct Case {
    std::vector<std::pair<std::int64_t, std::int64_t>> masses;
    double frozen;
  };
  const std::vector<Case> cases{
      {{{1, 4}, {3, 4}}, 0.8112781244591328},
      {{{1, 3}, {1, 6}, {1, 6}, {1, 3}}, 1.9182958340544895},
      {{{1, 2}, {1, 3}, {1, 6}}, 1.4591479170272448},
      {{{1, 7}, {1, 7}, {1, 7}, {1, 7}, {1, 7}, {1, 7}, {1, 7}}, 2.8073549220576041},
      {{{1, 1000}, {999, 1000}}, 0.011407757737461136},
      {{{13, 21}, {8, 21}}, 0.95871188297713181},
      {{{1, 1024}, {1023, 1024}}, 0.011173818721219526},
  };
  for (const auto& c : cases) {
    const oracle::Float50 ref = oracle::entropy_bits(c.masses);
    EXPECT_LT(boost::multiprecision::abs(ref - oracle::Float50(c.frozen)), 1e-15);
    std::vector<Rational> masses;
    for (const auto& [n, d] : c.masses) masses.emplace_back(n, d);
    EXPECT_NEAR(entropy_bits(masses), c.frozen, 4e-16 * std::max(1.0, c.frozen));
  }
}

TEST(Entropy, DegenerateAndUniform) {
  EXPECT_EQ(shannon_entropy(ProbabilityVector({Rational(1)})), 0.0);
  EXPECT_EQ(shannon_entropy(ProbabilityVector({r(1, 2), r(1, 2)})), 1.0);
  EXPECT_EQ(shannon_entropy(ProbabilityVector({r(1, 4), r(1, 4), r(1, 4), r(1, 4)})), 2.0);
  EXPECT_EQ(shannon_entropy(ProbabilityVector({r(1, 2), r(0), r(1, 2)})), 1.0);
}

TEST(Entropy, ProbabilityVectorMustSumToOne) {
  EXPECT_THROW(ProbabilityVector({r(1, 2), r(1, 3)}), ValidationError);
  EXPECT_THROW(ProbabilityVector({r(3, 2), r(-1, 2)}), ValidationError);
  EXPECT_THROW(ProbabilityVector(std::vector<Rational>{}), ValidationError);
}

TEST(Partition, HalvesJoinThirdsOracle) {
  const IntervalPartition halves({r(0), r(1, 2)}, {0, 1});
  const IntervalPartition thirds({r(0), r(1, 3), r(2, 3)}, {0, 1, 2});
  const IntervalPartition joined = common_refinement(halves, thirds);
  const std::vector<Rational> expected{r(1, 3), r(1, 6), r(1, 6), r(1, 3)};
  EXPECT_EQ(partition_measures(joined).entries(), expected);
  EXPECT_NEAR(partition_entropy(joined), 1.9182958340544895, 4e-16);
}

TEST(Partition, LabelsMergeIntoAtoms) {
  const IntervalPartition xi({r(0), r(1, 4), r(1, 2), r(3, 4)}, {0, 1, 0, 1});
  EXPECT_EQ(xi.label_count(), 2u);
  EXPECT_EQ(partition_entropy(xi), 1.0);
  EXPECT_EQ(xi.label_at(r(5, 8)), 0);
  EXPECT_THROW(IntervalPartition({r(1, 2)}, {0}), ValidationError);
  EXPECT_THROW(IntervalPartition({r(0), r(1)}, {0, 1}), ValidationError);
  EXPECT_THROW(IntervalPartition({r(0), r(1, 2), r(1, 2)}, {0, 1, 2}), ValidationError);
}

TEST(Partition, RectangleGridsCoverTheSquare) {
  const auto q = RectanglePartition::quadrants();
  EXPECT_EQ(q.atoms().size(), 4u);
  EXPECT_EQ(partition_entropy(q), 2.0);
  EXPECT_EQ(q.boundary().length(), r(2));
  EXPECT_EQ(RectanglePartition::vertical_halves().boundary().length(), r(1));
  EXPECT_EQ(RectanglePartition::trivial().boundary().length(), r(0));
  EXPECT_EQ(partition_entropy(RectanglePartition::dyadic_grid(2, 1)), 3.0);
}

TEST(Geometry, SegmentSetMergesOverlaps) {
  SegmentSet s;
  s.add_vertical(r(1, 2), r(0), r(1, 2));
  s.add_vertical(r(1, 2), r(1, 4), r(1));
  s.add_horizontal(r(1, 3), r(0), r(1));
  EXPECT_EQ(s.length(), r(2));
  EXPECT_EQ(s.segment_count(), 2u);
}

TEST(Geometry, RectIntersection) {
  const Rect a{r(0), r(0), r(1, 2), r(1)};
  const Rect b{r(1, 4), r(1, 2), r(1), r(1)};
  EXPECT_EQ(intersect(a, b).area(), r(1, 8));
  EXPECT_FALSE(overlaps(a, Rect{r(1, 2), r(0), r(1), r(1)}));
}

TEST(Parallel, ResultsIndependentOfJobs) {
  std::vector<std::int64_t> one(1000), many(1000);
  parallel_for(one.size(), 1, [&](std::size_t i) { one[i] = static_cast<std::int64_t>(i * i); });
  parallel_for(many.size(), 4, [&](std::size_t i) { many[i] = static_cast<std::int64_t>(i * i); });
  EXPECT_EQ(one, many);
}

TEST(Parallel, RethrowsWorkerErrors) {
  EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) {
                 if (i == 7) throw BudgetError("boom");
               }),
               BudgetError);
}
