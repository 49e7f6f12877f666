// Acceptance run: one PASS/FAIL line per criterion. Usage: acceptance [N ...]
// with N in 1..10 (default: all). Exit status is 1 if any selected criterion
// fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles/oracles.hpp"
#include "support/generators.hpp"

using namespace seqdyn;

namespace {

// Pinned tolerances and limits.
constexpr double kExactTolerance = 0.0;
constexpr double kDecayCutBits = 0.2;
constexpr double kIetEntropyCap = 0.35;
constexpr double kRigidityCap = 0.02;
constexpr double kMixingFloor = 0.05;
constexpr int kCoverageNeeded = 90;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double time_limit_s;
  std::function<Outcome()> run;
};

Rational r(std::int64_t n, std::int64_t d = 1) { return Rational(n, d); }

std::string fmt(double v, int prec = 6) {
  std::ostringstream s;
  s.precision(prec);
  s << v;
  return s.str();
}

Outcome bernoulli_blow_up() {
  Outcome o;
  const auto s = BernoulliSystem::fair(2);
  const std::vector<Cylinder> halves{BakerMap::cylinder_of(1, 0, 0, 0), BakerMap::cylinder_of(1, 1, 0, 0)};
  std::string rows;
  for (std::int64_t j : {1, 2, 4, 8, 16}) {
    const auto f = make_progression_family(j, GrowthSpec::parse("j"));
    const double symbolic = h_j(s, f);
    const auto baker = cylinder_join(BakerMap::symbolic(), halves, f.members);
    const double planar = baker.per_element();
    if (std::abs(symbolic - 1.0) > kExactTolerance || std::abs(planar - 1.0) > kExactTolerance) o.pass = false;
    rows += " j=" + std::to_string(j) + ":" + fmt(symbolic, 17) + "/" + fmt(planar, 17);
  }
  for (std::int64_t size : {17, 20}) {
    std::vector<std::int64_t> members;
    for (std::int64_t k = 1; k <= size; ++k) members.push_back(3 * k);
    const double planar = cylinder_join(BakerMap::symbolic(), halves, members).per_element();
    if (std::abs(planar - 1.0) > kExactTolerance) o.pass = false;
    rows += " |F|=" + std::to_string(size) + ":" + fmt(planar, 17);
  }
  o.detail = "h_j symbolic/baker" + rows;
  return o;
}

Outcome identity_law() {
  Outcome o;
  std::mt19937_64 rng(2024);
  const auto id = IntervalExchange::identity();
  int checked = 0, bad = 0;
  std::vector<IndexFamily> families;
  for (int k = 0; k < 10; ++k) families.push_back(gen::family(rng, 16, 500));
  for (int p = 0; p < 20; ++p) {
    const auto xi = gen::dyadic_partition(rng, 4);
    const double h = partition_entropy(xi);
    for (const auto& f : families) {
      const double got = h_j(id, xi, f);
      const double want = h / static_cast<double>(f.size());
      ++checked;
      if (std::abs(got - want) > kExactTolerance) ++bad;
    }
  }
  o.pass = bad == 0;
  o.detail = std::to_string(checked - bad) + "/" + std::to_string(checked) + " (xi, F) pairs exact";
  return o;
}

Outcome zero_entropy_decay() {
  Outcome o;
  const auto t = RotationSpec::golden(40).exchange();
  const auto f = make_progression_family(1, GrowthSpec::parse("64"));
  const JoinResult rot = exact_join(t, IntervalPartition::dyadic(1), f);
  const double h = rot.per_element();
  const double cap = std::log2(130.0) / 64.0;
  const bool rot_ok = rot.atom_count <= 130 && h <= cap && h < kDecayCutBits;

  // The reversing 3-IET maps [0, 1/2) onto itself, so halves never refine;
  // quarters give a partition that does.
  const IntervalExchange iet({r(1, 2), r(1, 3), r(1, 6)}, {2, 1, 0});
  bool iet_ok = true;
  std::string iet_detail;
  for (unsigned depth : {1u, 2u}) {
    const auto xi = IntervalPartition::dyadic(depth);
    Integer a1 = 0, a64 = 0;
    bool poly_ok = true;
    double h64 = 0.0;
    for (std::int64_t n = 1; n <= 64; ++n) {
      std::vector<std::int64_t> members;
      for (std::int64_t p = 1; p <= n; ++p) members.push_back(p);
      const JoinResult j = exact_join(iet, xi, make_explicit_family(members));
      if (n == 1) a1 = j.atom_count;
      if (j.atom_count > a1 * Integer(n) * Integer(n)) poly_ok = false;
      if (n == 64) {
        h64 = j.per_element();
        a64 = j.atom_count;
      }
    }
    iet_ok = iet_ok && poly_ok && h64 < kIetEntropyCap;
    iet_detail += std::string(depth == 1 ? "halves" : "; quarters") + " atoms(1) = " + a1.str() +
                  ", atoms(64) = " + a64.str() + ", quadratic bound " + (poly_ok ? "holds" : "fails") +
                  ", H/N = " + fmt(h64);
  }
  o.pass = rot_ok && iet_ok;
  o.detail = "rotation: atoms " + rot.atom_count.str() + " <= 130, h = " + fmt(h) + " <= " + fmt(cap) +
             "; 3-IET " + iet_detail;
  return o;
}

Outcome boundary_ledger() {
  Outcome o;
  const auto swap = boundary_growth(RectangleExchange::vertical_swap(), RectanglePartition::quadrants(), 50);
  const auto pr = RectangleExchange::product_rotation(r(610, 987), r(377, 610));
  std::vector<LabeledRect> atoms;
  for (std::size_t i = 0; i < pr.size(); ++i) atoms.push_back({pr.sources()[i], static_cast<Label>(i)});
  const auto prod = boundary_growth(pr, RectanglePartition(atoms), 50);
  o.pass = swap.within_discontinuity_bound() && prod.within_discontinuity_bound();
  o.detail = "swap: B(50) = " + swap.lengths.back().str() + ", D = " + swap.discontinuity_length.str() +
             ", equality at " + std::to_string(swap.equality_steps().size()) + "/50 steps; product: B(50) = " +
             prod.lengths.back().str() + ", D = " + prod.discontinuity_length.str() + ", equality at " +
             std::to_string(prod.equality_steps().size()) + "/50 steps";
  return o;
}

Outcome rigidity_scan_criterion() {
  Outcome o;
  const auto t = RotationSpec::golden(40).exchange();
  const auto fam = TestFamily::intervals(6);
  std::vector<double> ident;
  for (int k = 10; k <= 24; k += 2) ident.push_back(dist_to_identity(t, fibonacci(k).convert_to<std::int64_t>(), fam));
  bool monotone = true;
  for (std::size_t i = 1; i < ident.size(); ++i) monotone = monotone && ident[i] < ident[i - 1];
  const bool small = ident.back() < kRigidityCap;

  const auto theta = distance_trace(t, 1, 10000, fam, fam.product_targets(), 4);
  std::size_t arg = 0;
  for (std::size_t k = 1; k < theta.size(); ++k)
    if (theta[k] < theta[arg]) arg = k;
  std::size_t below = 0;
  for (double v : theta) below += v <= kMixingFloor ? 1 : 0;
  const bool never_mixes = below == 0;

  o.pass = monotone && small && never_mixes;
  o.detail = std::string("dist_to_identity F10..F24 ") + (monotone ? "decreasing" : "NOT decreasing") +
             ", F24 value " + fmt(ident.back()) + "; dist_to_theta > " + fmt(kMixingFloor) + " at " +
             std::to_string(theta.size() - below) + "/" + std::to_string(theta.size()) + " m (min " +
             fmt(theta[arg]) + " at m = " + std::to_string(arg + 1) + ")";
  return o;
}

Outcome baker_decorrelation() {
  Outcome o;
  const auto fam = TestFamily::rectangles(4);
  const auto trace = distance_trace(BakerMap{}, 4, 100, fam, fam.product_targets(), 2);
  std::size_t zero = 0;
  for (double v : trace) zero += v == 0.0 ? 1 : 0;
  std::size_t triples = 0, eighth = 0;
  const DyadicCell half{1, 0, 0, 0};
  for (std::int64_t m = 1; m <= 20; ++m) {
    for (std::int64_t n = m + 1; n <= 20; ++n) {
      ++triples;
      if (triple_correlation(BakerMap{}, half, m, n) == r(1, 8)) ++eighth;
    }
  }
  o.pass = zero == trace.size() && eighth == triples;
  o.detail = "dist_to_theta = 0 at " + std::to_string(zero) + "/" + std::to_string(trace.size()) +
             " m in [4,100]; triple = 1/8 at " + std::to_string(eighth) + "/" + std::to_string(triples) + " pairs";
  return o;
}

Outcome limit_formulas() {
  Outcome o;
  const bool half = triple_limit_forward(r(1, 2)) == r(1, 4) && triple_limit_backward(r(1, 2)) == r(1, 4);
  const bool third = triple_limit_forward(r(1, 3)) == r(11, 81) && triple_limit_backward(r(1, 3)) == r(1, 9);
  o.pass = half && third;
  o.detail = "mu=1/2: " + triple_limit_forward(r(1, 2)).str() + ", " + triple_limit_backward(r(1, 2)).str() +
             "; mu=1/3: " + triple_limit_forward(r(1, 3)).str() + ", " + triple_limit_backward(r(1, 3)).str();
  return o;
}

Outcome mc_calibration() {
  Outcome o;
  struct Case {
    const char* name;
    std::function<JoinResult(const McOptions&)> run;
    double exact;
  };
  const auto f = make_explicit_family({1, 2, 3});
  const std::vector<Case> cases{
      {"identity/quadrants",
       [&](const McOptions& opt) {
         return mc_join_entropy(RectangleExchange::identity(), RectanglePartition::quadrants(), f, opt);
       },
       2.0},
      {"baker/vertical-halves",
       [&](const McOptions& opt) { return mc_join_entropy(BakerMap{}, RectanglePartition::vertical_halves(), f, opt); },
       3.0},
  };
  std::string detail;
  for (const auto& c : cases) {
    int covered = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      McOptions opt;
      opt.n_samples = 10'000;
      opt.seed = seed;
      const JoinResult res = c.run(opt);
      if (std::abs(res.entropy_bits - c.exact) <= res.ci_half_width) ++covered;
    }
    if (covered < kCoverageNeeded) o.pass = false;
    detail += std::string(detail.empty() ? "" : "; ") + c.name + " covered " + std::to_string(covered) + "/100";
  }
  o.detail = detail;
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  std::mt19937_64 rng(909);
  std::size_t point_checks = 0, point_bad = 0;
  for (int k = 0; k < 25; ++k) {
    const auto a = gen::grid_iet(rng, 5, 2520).exchange();
    const auto b = gen::grid_iet(rng, 5, 2520).exchange();
    const std::int64_t m = gen::uniform(rng, 1, 10);
    const auto comp = iet_compose(a, b);
    const auto pw = iet_power(a, m);
    for (int s = 0; s < 1000; ++s) {
      const Rational x = gen::unit_rational(rng);
      Rational y = x;
      for (std::int64_t i = 0; i < m; ++i) y = a.apply(y);
      point_checks += 2;
      if (comp.apply(x) != a.apply(b.apply(x))) ++point_bad;
      if (pw.apply(x) != y) ++point_bad;
    }
  }
  std::size_t corr_bad = 0;
  for (int k = 0; k < 500; ++k) {
    const auto s = gen::grid_iet(rng, 5, 240);
    const oracle::GridIet g{s.cells, s.cell_lengths, s.permutation};
    const std::int64_t alo = gen::uniform(rng, 0, s.cells - 1), ahi = gen::uniform(rng, alo + 1, s.cells);
    const std::int64_t blo = gen::uniform(rng, 0, s.cells - 1), bhi = gen::uniform(rng, blo + 1, s.cells);
    const std::int64_t m = gen::uniform(rng, 0, 20);
    const Rational want(oracle::grid_correlation_count(g, alo, ahi, blo, bhi, m), s.cells);
    const Rational got = correlation(s.exchange(), Interval{r(alo, s.cells), r(ahi, s.cells)},
                                     Interval{r(blo, s.cells), r(bhi, s.cells)}, m);
    if (got != want) ++corr_bad;
  }
  o.pass = point_bad == 0 && corr_bad == 0;
  o.detail = "pointwise " + std::to_string(point_checks - point_bad) + "/" + std::to_string(point_checks) +
             ", correlations " + std::to_string(500 - corr_bad) + "/500";
  return o;
}

Outcome geometric_family() {
  Outcome o;
  const auto s = BernoulliSystem::fair(2);
  const FamilyGenerator families = [](std::int64_t j) { return make_geometric_family(j, 12); };
  for (std::int64_t j : {2, 3, 4}) {
    std::vector<std::int64_t> want;
    for (std::int64_t e = j; e <= std::min<std::int64_t>(j * j, 12); ++e) want.push_back(std::int64_t{1} << e);
    if (families(j).members != want) o.pass = false;
  }
  const JoinFn join = [&](const IndexFamily& f) { return bernoulli_join_entropy(s, f); };
  const auto trace = entropy_trace(join, families, {2, 3, 4});
  std::string rows;
  for (const auto& row : trace.rows) {
    if (!row.ok() || std::abs(row.h - 1.0) > kExactTolerance) o.pass = false;
    rows += " j=" + std::to_string(row.j) + ": |F|=" + std::to_string(row.family_size) + " h=" + fmt(row.h, 17) +
            (row.truncated ? " (truncated)" : "");
  }
  o.detail = std::string("members ") + (o.pass ? "match;" : "checked;") + rows;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "Bernoulli blow-up", 5, bernoulli_blow_up},
      {2, "identity law", 5, identity_law},
      {3, "zero-entropy decay", 60, zero_entropy_decay},
      {4, "boundary-growth ledger", 30, boundary_ledger},
      {5, "rigidity scan", 120, rigidity_scan_criterion},
      {6, "baker decorrelation", 30, baker_decorrelation},
      {7, "triple-limit formulas", 1, limit_formulas},
      {8, "Monte Carlo calibration", 120, mc_calibration},
      {9, "oracle equivalence", 120, oracle_equivalence},
      {10, "geometric family", 10, geometric_family},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  int failures = 0;
  for (const auto& c : all) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.time_limit_s;
    const bool pass = out.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("%s %2d %s: %s [%.2fs / %.0fs%s]\n", pass ? "PASS" : "FAIL", c.id, c.title, out.detail.c_str(), secs,
                c.time_limit_s, in_time ? "" : " EXCEEDED");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
