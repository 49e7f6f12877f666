#include <gtest/gtest.h>

#include <random>

#include "oracles/oracles.hpp"
#include "support/generators.hpp"

using namespace seqdyn;

namespace {

Rational r(std::int64_t n, std::int64_t d = 1) { return Rational(n, d); }

}  // namespace

TEST(TestFamily, OneDimensionalLayout) {
  const auto f = TestFamily::intervals(6);
  EXPECT_EQ(f.size(), 127u);
  EXPECT_EQ(f.cell(0).x_level, 0u);
  EXPECT_EQ(f.cell((1u << 3) - 1 + 5).x_interval(), (Interval{r(5, 8), r(6, 8)}));
  EXPECT_EQ(f.describe(), "dyadic intervals, depth 6, 127 sets");
  EXPECT_THROW(TestFamily::intervals(13), ValidationError);
}

TEST(TestFamily, TwoDimensionalLayout) {
  const auto f = TestFamily::rectangles(6);
  EXPECT_EQ(f.x_depth(), 3u);
  EXPECT_EQ(f.y_depth(), 3u);
  EXPECT_EQ(f.size(), 225u);  // (1 + 2 + 4 + 8)^2
  for (std::size_t i = 1; i < f.size(); ++i) {
    const auto& a = f.cell(i - 1);
    const auto& b = f.cell(i);
    EXPECT_LE(a.x_level + a.y_level, b.x_level + b.y_level);
  }
  EXPECT_EQ(TestFamily::rectangles(4).size(), 49u);
  EXPECT_EQ(TestFamily::rectangles(3).x_depth(), 2u);
  EXPECT_EQ(TestFamily::rectangles(3).y_depth(), 1u);
}

TEST(TestFamily, WeightsSumToOneExactly) {
  for (const auto& f : {TestFamily::intervals(3), TestFamily::rectangles(2)}) {
    Rational total;
    double approx = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      for (std::size_t j = 0; j < f.size(); ++j) {
        total += f.exact_weight(i, j);
        approx += f.weight(i, j);
        EXPECT_EQ(f.weight(i, j), f.exact_weight(i, j).to_double());
      }
    }
    EXPECT_EQ(total, r(1));
    EXPECT_NEAR(approx, 1.0, 1e-12);
  }
}

TEST(TestFamily, TargetsAreProductsAndOverlaps) {
  const auto f = TestFamily::intervals(2);
  // A_1 = [0,1/2), A_3 = [0,1/4)
  EXPECT_EQ(f.product_targets()[1 * f.size() + 3], r(1, 8));
  EXPECT_EQ(f.overlap_targets()[1 * f.size() + 3], r(1, 4));
  EXPECT_EQ(f.overlap_targets()[1 * f.size() + 2], r(0));
}

TEST(Correlation, RotationHalfIntervalOracle) {
  const auto spec = RotationSpec::golden(40);
  const auto t = spec.exchange();
  const std::int64_t p = spec.alpha().numerator().convert_to<std::int64_t>();
  const std::int64_t q = spec.denominator().convert_to<std::int64_t>();
  const Interval half{r(0), r(1, 2)};
  for (std::int64_t m : {1, 2, 3, 5, 8, 13, 100, 144, 233, 377}) {
    const auto [num, den] = oracle::rotation_half_overlap(p, q, m);
    EXPECT_EQ(correlation(t, half, half, m), r(num, den)) << "m = " << m;
  }
}

TEST(Correlation, IntegerCellOracleOnRandomTriples) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 150; ++trial) {
    const auto s = gen::grid_iet(rng, 5, 240);
    const oracle::GridIet g{s.cells, s.cell_lengths, s.permutation};
    const auto t = s.exchange();
    auto pick = [&] {
      const std::int64_t lo = gen::uniform(rng, 0, s.cells - 1);
      return std::pair{lo, gen::uniform(rng, lo + 1, s.cells)};
    };
    const auto [alo, ahi] = pick();
    const auto [blo, bhi] = pick();
    const std::int64_t m = gen::uniform(rng, 0, 12);
    const Rational expected(oracle::grid_correlation_count(g, alo, ahi, blo, bhi, m), s.cells);
    EXPECT_EQ(correlation(t, Interval{r(alo, s.cells), r(ahi, s.cells)}, Interval{r(blo, s.cells), r(bhi, s.cells)}, m),
              expected);
  }
}

TEST(Correlation, MatrixMatchesPairwiseCorrelations) {
  std::mt19937_64 rng(42);
  const auto fam = TestFamily::intervals(4);
  for (int trial = 0; trial < 8; ++trial) {
    const auto t = gen::grid_iet(rng, 4, 336).exchange();
    const std::int64_t m = gen::uniform(rng, 0, 9);
    const auto mat = correlation_matrix(t, fam, m);
    for (std::size_t i = 0; i < fam.size(); ++i) {
      for (std::size_t j = 0; j < fam.size(); ++j) {
        EXPECT_EQ(mat.at(i, j), correlation(t, fam.cell(i).x_interval(), fam.cell(j).x_interval(), m));
      }
    }
  }
}

TEST(Correlation, BakerMatchesBitEnumerationOracle) {
  const auto fam = TestFamily::rectangles(4);
  const BakerMap b;
  for (std::int64_t m : {0, 1, 2, 3, 5}) {
    const auto mat = correlation_matrix(b, fam, m);
    for (std::size_t i = 0; i < fam.size(); i += 3) {
      for (std::size_t j = 0; j < fam.size(); j += 2) {
        const auto& ci = fam.cell(i);
        const auto& cj = fam.cell(j);
        const auto [hits, total] = oracle::baker_correlation({ci.x_level, ci.x_index, ci.y_level, ci.y_index},
                                                             {cj.x_level, cj.x_index, cj.y_level, cj.y_index},
                                                             static_cast<int>(m));
        EXPECT_EQ(mat.at(i, j), Rational(static_cast<std::int64_t>(hits), static_cast<std::int64_t>(total)));
      }
    }
  }
}

TEST(Correlation, BakerCellsMatchPointwiseImages) {
  // Midpoints of a 1/64 grid stand for whole cells: after at most three
  // steps every image cell is still aligned with the dyadic edges of A.
  const BakerMap b;
  const DyadicCell a{1, 1, 1, 0};
  const DyadicCell c{2, 1, 1, 1};
  for (std::int64_t m = 0; m <= 3; ++m) {
    std::int64_t hits = 0;
    const std::int64_t n = 64;
    for (std::int64_t i = 0; i < n; ++i) {
      for (std::int64_t k = 0; k < n; ++k) {
        Point p{Rational(2 * i + 1, 2 * n), Rational(2 * k + 1, 2 * n)};
        if (!c.rect().contains(p)) continue;
        Point q = p;
        for (std::int64_t s = 0; s < m; ++s) q = b.apply(q);
        if (a.rect().contains(q)) ++hits;
      }
    }
    EXPECT_EQ(correlation(b, a, c, m), Rational(hits, n * n)) << "m = " << m;
  }
}

TEST(Correlation, RectangleExchangeMatchesPointwiseGrid) {
  const auto t = RectangleExchange::product_rotation(r(3, 8), r(5, 8));
  const Rect a{r(1, 8), r(0), r(5, 8), r(1, 2)};
  const Rect c{r(0), r(1, 4), r(1, 2), r(1)};
  for (std::int64_t m = 0; m <= 5; ++m) {
    std::int64_t hits = 0;
    for (std::int64_t i = 0; i < 8; ++i) {
      for (std::int64_t k = 0; k < 8; ++k) {
        Point p{r(i, 8), r(k, 8)};
        if (!c.contains(p)) continue;
        for (std::int64_t s = 0; s < m; ++s) p = t.apply(p);
        if (a.contains(p)) ++hits;
      }
    }
    EXPECT_EQ(correlation(t, a, c, m), Rational(hits, 64));
  }
}

TEST(CorrelationProperty, AtomsOfADyadicPartitionSumToMuB) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = gen::grid_iet(rng, 5, 300).exchange();
    const unsigned depth = static_cast<unsigned>(gen::uniform(rng, 1, 4));
    const Interval b{gen::unit_rational(rng, 64), r(1)};
    const std::int64_t m = gen::uniform(rng, -6, 6);
    Rational total;
    for (std::int64_t i = 0; i < (std::int64_t{1} << depth); ++i) {
      total += correlation(t, Interval{r(i, std::int64_t{1} << depth), r(i + 1, std::int64_t{1} << depth)}, b, m);
    }
    EXPECT_EQ(total, b.length());
  }
}

TEST(Distance, NonNegativeAndZeroOnAgreement) {
  const auto fam = TestFamily::intervals(4);
  const auto id = IntervalExchange::identity();
  EXPECT_EQ(dist_to_identity(id, 5, fam), 0.0);
  const double d = dist_to_theta(id, 0, fam);
  EXPECT_GT(d, 0.0);
  for (std::int64_t m : {1, 7, 100}) EXPECT_EQ(dist_to_theta(id, m, fam), d);
  EXPECT_EQ(dist_to_theta(BakerMap{}, 0, TestFamily::full_space(TestFamily::Dimension::k2D)), 0.0);
}

TEST(Distance, BakerDecorrelatesExactlyAfterDepthSteps) {
  for (unsigned depth : {2u, 4u, 6u}) {
    const auto fam = TestFamily::rectangles(depth);
    EXPECT_GT(dist_to_theta(BakerMap{}, depth - 1, fam), 0.0);
    for (std::int64_t m = depth; m <= depth + 10; ++m) EXPECT_EQ(dist_to_theta(BakerMap{}, m, fam), 0.0);
  }
}

TEST(Distance, GoldenConvergentsApproachTheIdentity) {
  const auto t = RotationSpec::golden(40).exchange();
  const auto fam = TestFamily::intervals(6);
  double prev = 1.0;
  for (int k = 10; k <= 20; k += 2) {
    const double d = dist_to_identity(t, fibonacci(k).convert_to<std::int64_t>(), fam);
    EXPECT_LT(d, prev);
    prev = d;
  }
}

TEST(Distance, AdmissibleTargets) {
  const auto fam = TestFamily::intervals(3);
  const auto t = RotationSpec::golden(30).exchange();
  EXPECT_EQ(dist_to_admissible(t, 5, AdmissibleSpec::theta(), fam), dist_to_theta(t, 5, fam));
  EXPECT_EQ(dist_to_admissible(t, 5, AdmissibleSpec::power(5), fam), 0.0);
  const AdmissibleSpec mix{r(1, 2), {{0, r(1, 2)}}};
  EXPECT_GE(dist_to_admissible(t, 3, mix, fam), 0.0);
  EXPECT_THROW((AdmissibleSpec{r(1, 2), {{0, r(1, 3)}}}.validate()), ValidationError);
}

TEST(Scan, DeterministicAcrossJobs) {
  const auto t = RotationSpec::golden(30).exchange();
  const auto fam = TestFamily::intervals(5);
  const auto a = mixing_time_scan(t, 3, 0.02, 200, fam, 1);
  const auto b = mixing_time_scan(t, 3, 0.02, 200, fam, 4);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.ms.front(), 4);
  EXPECT_EQ(a.ms.back(), 200);
  ASSERT_EQ(a.events.size(), b.events.size());
  if (a.first_crossing) {
    EXPECT_GT(*a.first_crossing, 3);
    EXPECT_TRUE(a.is_event(*a.first_crossing));
  }
}

TEST(Scan, TraceAgreesWithDirectDistances) {
  const auto t = RectangleExchange::product_rotation(r(5, 13), r(3, 11));
  const auto fam = TestFamily::rectangles(2);
  const auto trace = distance_trace(t, 0, 6, fam, fam.product_targets(), 2);
  for (std::int64_t m = 0; m <= 6; ++m) EXPECT_EQ(trace[static_cast<std::size_t>(m)], dist_to_theta(t, m, fam));
}

TEST(Scan, RigidityScanFindsConvergents) {
  const auto spec = RotationSpec::golden(40);
  const auto rep = rigidity_scan(spec, 1000, 0.01, TestFamily::intervals(6));
  for (std::int64_t m : {144, 233, 377, 610, 987}) EXPECT_TRUE(rep.is_event(m)) << m;
  EXPECT_FALSE(rep.expected_hits.empty());
}

TEST(Scan, AliasGuardAndBudgetFireBeforeScanning) {
  const auto fam = TestFamily::intervals(3);
  EXPECT_THROW(rigidity_scan(RotationSpec::golden(20).exchange(), 20000, 0.01, fam), AliasingError);
  EXPECT_THROW(mixing_time_scan(BakerMap{}, 0, 0.1, 50, TestFamily::rectangles(2), 1, Budget{.max_power = 10}),
               BudgetError);
}

TEST(Triple, BakerHalfIsThreeFoldIndependent) {
  const DyadicCell half{1, 0, 0, 0};
  for (std::int64_t m = 1; m <= 6; ++m) {
    for (std::int64_t n = m + 1; n <= 7; ++n) EXPECT_EQ(triple_correlation(BakerMap{}, half, m, n), r(1, 8));
  }
  EXPECT_THROW(triple_correlation(BakerMap{}, half, 3, 3), ValidationError);
}

TEST(Triple, IdentityGivesTheMeasure) {
  const Interval a{r(1, 5), r(3, 4)};
  EXPECT_EQ(triple_correlation(IntervalExchange::identity(), a, 2, 9), a.length());
  const Rect rect{r(0), r(0), r(1, 3), r(1, 2)};
  EXPECT_EQ(triple_correlation(RectangleExchange::identity(), rect, 1, 4), r(1, 6));
}

TEST(Triple, BernoulliCylinders) {
  const BernoulliSystem s(ProbabilityVector({r(1, 3), r(2, 3)}));
  const Cylinder a(std::map<std::int64_t, int>{{0, 1}});
  EXPECT_EQ(triple_correlation(s, a, 1, 2), r(8, 27));
  const Cylinder wide(std::map<std::int64_t, int>{{0, 1}, {1, 1}});
  EXPECT_EQ(triple_correlation(s, wide, 1, 3), r(32, 243));
}

TEST(Triple, RotationMatchesBruteForceGrid) {
  const auto t = IntervalExchange::rotation(r(3, 16));
  const Interval a{r(0), r(5, 16)};
  for (std::int64_t m = 1; m <= 4; ++m) {
    for (std::int64_t n = m + 1; n <= 6; ++n) {
      std::int64_t hits = 0;
      for (std::int64_t c = 0; c < 16; ++c) {
        auto in = [&](std::int64_t k) { return ((c + 3 * k) % 16) < 5; };
        if (in(0) && in(m) && in(n)) ++hits;
      }
      EXPECT_EQ(triple_correlation(t, a, m, n), r(hits, 16));
    }
  }
}

TEST(Triple, LimitFormulas) {
  EXPECT_EQ(triple_limit_forward(r(1, 2)), r(1, 4));
  EXPECT_EQ(triple_limit_backward(r(1, 2)), r(1, 4));
  EXPECT_EQ(triple_limit_forward(r(1, 3)), r(11, 81));
  EXPECT_EQ(triple_limit_backward(r(1, 3)), r(1, 9));
  EXPECT_EQ(triple_limit_forward(r(0)), r(0));
  EXPECT_EQ(triple_limit_forward(r(1)), r(1));
}
