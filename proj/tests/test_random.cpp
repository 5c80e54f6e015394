#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "decoupling/numeric.hpp"
#include "decoupling/random.hpp"

using namespace decoupling;

namespace {

// Two-sample Kolmogorov-Smirnov distance with ties handled by comparing the
// empirical CDFs at every observed value.
double ks_distance(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<double> all = a;
  all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  double d = 0.0;
  for (double v : all) {
    const double fa = static_cast<double>(std::upper_bound(a.begin(), a.end(), v) - a.begin()) / a.size();
    const double fb = static_cast<double>(std::upper_bound(b.begin(), b.end(), v) - b.begin()) / b.size();
    d = std::max(d, std::fabs(fa - fb));
  }
  return d;
}

}  // namespace

TEST_CASE("draw_matrix: identical seed paths give identical matrices") {
  const SequenceSpec spec{DistributionSpec::rademacher(), 3, RowStructure::IidRows};
  const SeedPath seed{42, {7, 1}};
  const auto a = draw_matrix(spec, 2, seed);
  const auto b = draw_matrix(spec, 2, seed);
  CHECK(a == b);
  CHECK(a.rows() == 2);
  CHECK(a.length() == 3);
  for (double v : a.data()) CHECK(std::fabs(v) == 1.0);
  CHECK_FALSE(draw_matrix(spec, 2, derive_stream(seed, 1)) == draw_matrix(spec, 2, derive_stream(seed, 2)));
}

TEST_CASE("draw_matrix: bernoulli(1) is all ones") {
  const SequenceSpec spec{DistributionSpec::bernoulli(1.0), 5, RowStructure::IidRows};
  const auto x = draw_matrix(spec, 3, SeedPath{1, {}});
  CHECK(x == SampleMatrix(3, 5, 1.0));
}

TEST_CASE("draw_matrix: interchangeable rows are exchangeable") {
  // Bowker symmetry test on the joint law of (row 1, row 2) at one coordinate.
  const std::vector<double> atoms{0.0, 1.0, 2.0};
  const SequenceSpec spec{DistributionSpec::discrete(atoms, {0.2, 0.3, 0.5}), 1,
                          RowStructure::InterchangeableShuffle};
  double counts[3][3] = {};
  const SeedPath base{2024, {}};
  for (std::uint64_t t = 0; t < 10000; ++t) {
    const auto x = draw_matrix(spec, 3, derive_stream(base, t));
    counts[static_cast<int>(x(0, 0))][static_cast<int>(x(1, 0))] += 1;
  }
  double bowker = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const double s = counts[i][j] + counts[j][i];
      if (s > 0) bowker += (counts[i][j] - counts[j][i]) * (counts[i][j] - counts[j][i]) / s;
    }
  CHECK(bowker < 16.27);  // chi-square, 3 degrees of freedom, level 0.001
}

TEST_CASE("draw_matrix: gaussian and uniform moments") {
  const SeedPath seed{5, {}};
  const auto g = draw_matrix({DistributionSpec::gaussian(), 20000, RowStructure::IidRows}, 1, seed);
  double m = 0.0, v = 0.0;
  for (double x : g.data()) m += x;
  m /= 20000;
  for (double x : g.data()) v += (x - m) * (x - m);
  v /= 20000;
  CHECK(std::fabs(m) < 0.03);
  CHECK(std::fabs(v - 1.0) < 0.04);

  const auto u = draw_matrix({DistributionSpec::uniform(-2.0, 3.0), 20000, RowStructure::IidRows}, 1, seed);
  double um = 0.0;
  for (double x : u.data()) {
    CHECK(x >= -2.0);
    CHECK(x <= 3.0);
    um += x;
  }
  CHECK(std::fabs(um / 20000 - 0.5) < 0.03);
}

TEST_CASE("draw_matrix: symmetric families match their reflections") {
  for (const auto& dist : {DistributionSpec::rademacher(), DistributionSpec::gaussian(), DistributionSpec::uniform(-1, 1),
                           DistributionSpec::discrete({-2.0, 0.0, 2.0}, {0.25, 0.5, 0.25})}) {
    CHECK(dist.symmetric());
    const auto a = draw_matrix({dist, 10000, RowStructure::IidRows}, 1, SeedPath{11, {1}});
    const auto b = draw_matrix({dist, 10000, RowStructure::IidRows}, 1, SeedPath{11, {2}});
    std::vector<double> x(a.data().begin(), a.data().end());
    std::vector<double> y;
    for (double v : b.data()) y.push_back(-v);
    CHECK(ks_distance(x, y) < 1.628 * std::sqrt(2.0 / 10000));  // level 0.01
  }
  CHECK_FALSE(DistributionSpec::bernoulli(0.5).symmetric());
  CHECK_FALSE(DistributionSpec::uniform(0.0, 1.0).symmetric());
}

TEST_CASE("draw_matrix: invalid input") {
  CHECK_THROWS_WITH_AS(draw_matrix({DistributionSpec::rademacher(), 3, RowStructure::IidRows}, 0, SeedPath{}),
                       doctest::Contains("InvalidSpec"), Error);
  CHECK_THROWS_WITH_AS(draw_matrix({DistributionSpec::rademacher(), 0, RowStructure::IidRows}, 1, SeedPath{}),
                       doctest::Contains("InvalidSpec"), Error);
}

TEST_CASE("distribution spec invariants") {
  CHECK_THROWS_AS(DistributionSpec::bernoulli(1.5).validate(), Error);
  CHECK_THROWS_AS(DistributionSpec::uniform(1.0, 1.0).validate(), Error);
  CHECK_THROWS_AS(DistributionSpec::discrete({0.0, 1.0}, {0.5, 0.4}).validate(), Error);
  CHECK_THROWS_AS(DistributionSpec::discrete({0.0, 1.0}, {0.5}).validate(), Error);
  CHECK_NOTHROW(DistributionSpec::discrete({0.0, 1.0}, {0.5, 0.5}).validate());
  CHECK_THROWS_AS(family_from_string("cauchy"), Error);
  CHECK(family_from_string("gaussian") == Family::Gaussian);
  CHECK(DistributionSpec::bernoulli(0.25).mean() == doctest::Approx(0.25));
  CHECK(DistributionSpec::uniform(1.0, 3.0).mean() == doctest::Approx(2.0));
  CHECK(DistributionSpec::discrete({1.0, 4.0}, {0.75, 0.25}).mean() == doctest::Approx(1.75));
}

TEST_CASE("enumerate_support: examples") {
  const auto rad = enumerate_support(DistributionSpec::rademacher(), 1, 2);
  CHECK(rad.size() == 4);
  std::map<std::pair<double, double>, double> seen;
  for (const auto& [x, p] : rad) {
    CHECK(p == doctest::Approx(0.25).epsilon(1e-15));
    seen[{x(0, 0), x(0, 1)}] += p;
  }
  CHECK(seen.size() == 4);

  const auto bern = enumerate_support(DistributionSpec::bernoulli(0.3), 1, 1);
  REQUIRE(bern.size() == 2);
  std::map<double, double> law;
  for (const auto& [x, p] : bern) law[x(0, 0)] += p;
  CHECK(law[1.0] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(law[0.0] == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("enumerate_support: probabilities sum to one") {
  for (const auto& dist : {DistributionSpec::rademacher(), DistributionSpec::bernoulli(1.0 / 3.0),
                           DistributionSpec::discrete({-1.0, 0.5, 2.0}, {0.1, 0.6, 0.3})}) {
    for (int k = 1; k <= 2; ++k)
      for (std::size_t n = 1; n <= 4; ++n) {
        CompensatedSum total;
        std::size_t count = 0;
        for (const auto& [x, p] : enumerate_support(dist, k, n)) {
          total.add(p);
          ++count;
        }
        CHECK(count == outcome_count(dist, k, n));
        CHECK(std::fabs(total.value() - 1.0) <= 1e-14);
      }
  }
}

TEST_CASE("enumerate_support: errors") {
  CHECK_THROWS_WITH_AS(enumerate_support(DistributionSpec::gaussian(), 1, 2), doctest::Contains("NotFinitelySupported"),
                       Error);
  CHECK_THROWS_WITH_AS(enumerate_support(DistributionSpec::rademacher(), 2, 13), doctest::Contains("BudgetExceeded"),
                       Error);
  CHECK_THROWS_WITH_AS(enumerate_support(DistributionSpec::rademacher(), 1, 5, 16), doctest::Contains("BudgetExceeded"),
                       Error);
}

TEST_CASE("visit_outcomes: chunks reproduce the full enumeration") {
  const auto dist = DistributionSpec::discrete({-1.0, 0.0, 3.0}, {0.2, 0.5, 0.3});
  const auto full = enumerate_support(dist, 2, 2);
  std::vector<std::pair<SampleMatrix, double>> pieces;
  const std::uint64_t total = outcome_count(dist, 2, 2);
  for (std::uint64_t b = 0; b < total; b += 7) {
    visit_outcomes(dist, 2, 2, b, std::min(total, b + 7),
                   [&](const SampleMatrix& x, double p) { pieces.emplace_back(x, p); });
  }
  REQUIRE(pieces.size() == full.size());
  for (std::size_t i = 0; i < full.size(); ++i) {
    CHECK(pieces[i].first == full[i].first);
    CHECK(pieces[i].second == full[i].second);
  }
}

TEST_CASE("derive_stream: distinct, deterministic, independent") {
  const SeedPath s{123, {4}};
  CHECK_FALSE(derive_stream(s, 1) == derive_stream(s, 2));
  CHECK(derive_stream(s, 1).key() != derive_stream(s, 2).key());
  CHECK(derive_stream(s, 1) == derive_stream(s, 1));
  CHECK(derive_stream(s, 1).key() == derive_stream(s, 1).key());

  auto a = make_engine(derive_stream(s, 1));
  auto b = make_engine(derive_stream(s, 2));
  std::uniform_real_distribution<double> u;
  const int n = 1000000;
  double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  for (int i = 0; i < n; ++i) {
    const double x = u(a), y = u(b);
    sa += x;
    sb += y;
    saa += x * x;
    sbb += y * y;
    sab += x * y;
  }
  const double cov = sab / n - (sa / n) * (sb / n);
  const double r = cov / std::sqrt((saa / n - (sa / n) * (sa / n)) * (sbb / n - (sb / n) * (sb / n)));
  CHECK(std::fabs(r) < 0.01);
}

TEST_CASE("random_array: shape and tetrahedral option") {
  std::mt19937_64 rng(1);
  const auto f = random_array(3, 5, 2, NormTag(2.0), 1.0, rng, true);
  CHECK(f.rank() == 3);
  CHECK(f.dim() == 2);
  CHECK(f.support_size() == 10);  // C(5,3)
  for (const auto& [idx, v] : f.entries()) CHECK(std::is_sorted(idx.begin(), idx.end()));
  const auto g = random_array(2, 4, 1, NormTag(2.0), 1.0, rng, false);
  CHECK(g.support_size() == 12);  // 4 * 3 ordered pairs
}
