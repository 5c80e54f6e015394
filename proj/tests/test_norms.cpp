#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "decoupling/norms.hpp"

using namespace decoupling;

namespace {

EmpiricalDist two_step() { return EmpiricalDist::from_weighted({{3.0, 0.5}, {1.0, 0.5}}); }

EmpiricalDist random_law(std::mt19937_64& rng, int max_atoms = 6) {
  std::uniform_int_distribution<int> count(1, max_atoms);
  std::uniform_real_distribution<double> value(0.0, 5.0), weight(0.05, 1.0);
  const int m = count(rng);
  std::vector<EmpiricalDist::Atom> atoms;
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    atoms.push_back({value(rng), weight(rng)});
    total += atoms.back().weight;
  }
  for (auto& a : atoms) a.weight /= total;
  return EmpiricalDist::from_weighted(atoms);
}

// int_0^1 xi*(u)^p du, integrating the step function between breakpoints.
double rearranged_moment(const EmpiricalDist& d, double p) {
  double s = 0.0, prev = 0.0;
  for (double w : d.breakpoints()) {
    const double mid = 0.5 * (prev + w);
    s += (w - prev) * std::pow(decreasing_rearrangement(d, mid), p);
    prev = w;
  }
  return s;
}

}  // namespace

TEST_CASE("empirical dist: construction") {
  const auto d = EmpiricalDist::from_weighted({{1.0, 0.25}, {3.0, 0.5}, {1.0, 0.25}});
  REQUIRE(d.atoms().size() == 2);
  CHECK(d.atoms()[0].value == 3.0);
  CHECK(d.atoms()[1].weight == doctest::Approx(0.5));
  CHECK(d.max_value() == 3.0);
  CHECK_THROWS_AS(EmpiricalDist::from_weighted({{1.0, 0.5}}), Error);
  CHECK_THROWS_AS(EmpiricalDist::from_weighted({{-1.0, 1.0}}), Error);
  CHECK_THROWS_AS(EmpiricalDist::from_weighted({{INFINITY, 1.0}}), Error);

  const std::vector<double> samples{2.0, 0.0, 2.0, 5.0};
  const auto s = EmpiricalDist::from_samples(samples);
  CHECK(empirical_tail(s, 2.0) == doctest::Approx(0.75));

  const std::vector<double> sorted{5.0, 2.0, 2.0, 0.0};
  const std::vector<std::uint32_t> counts{0, 2, 1, 1};
  const auto c = EmpiricalDist::from_sorted_counts(sorted, counts);
  CHECK(c.max_value() == 2.0);
  CHECK(empirical_tail(c, 1.0) == doctest::Approx(0.75));

  const auto scaled = two_step().scaled(2.0);
  CHECK(scaled.max_value() == 6.0);
  const auto bp = two_step().breakpoints();
  REQUIRE(bp.size() == 2);
  CHECK(bp[0] == doctest::Approx(0.5));
  CHECK(bp[1] == doctest::Approx(1.0));
}

TEST_CASE("decreasing_rearrangement: examples") {
  const auto c = EmpiricalDist::point_mass(2.5);
  for (double t : {0.01, 0.3, 0.99}) CHECK(decreasing_rearrangement(c, t) == 2.5);
  const auto d = two_step();
  CHECK(decreasing_rearrangement(d, 0.1) == 3.0);
  CHECK(decreasing_rearrangement(d, 0.4999) == 3.0);
  CHECK(decreasing_rearrangement(d, 0.5) == 1.0);
  CHECK(decreasing_rearrangement(d, 0.9) == 1.0);
  CHECK_THROWS_WITH_AS(decreasing_rearrangement(d, 0.0), doctest::Contains("DomainError"), Error);
  CHECK_THROWS_WITH_AS(decreasing_rearrangement(d, 1.5), doctest::Contains("DomainError"), Error);
}

TEST_CASE("decreasing_rearrangement and double_star: monotone on random laws") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = random_law(rng);
    double prev_star = INFINITY, prev_dstar = INFINITY;
    for (int i = 1; i <= 200; ++i) {
      const double t = i / 200.0;
      const double s = decreasing_rearrangement(d, t);
      const double ds = double_star(d, t);
      CHECK(s <= prev_star);
      CHECK(ds <= prev_dstar + 1e-12);
      CHECK(ds >= s - 1e-12);
      prev_star = s;
      prev_dstar = ds;
    }
  }
}

TEST_CASE("double_star: examples") {
  CHECK(double_star(EmpiricalDist::point_mass(4.0), 0.3) == doctest::Approx(4.0));
  CHECK(double_star(two_step(), 1.0) == doctest::Approx(2.0));
  // (1/t) int_0^t: t = 0.75 gives (3 * 0.5 + 1 * 0.25) / 0.75.
  CHECK(double_star(two_step(), 0.75) == doctest::Approx(1.75 / 0.75));
  CHECK_THROWS_AS(double_star(two_step(), 0.0), Error);
}

TEST_CASE("lp_norm: examples") {
  for (double p : {1.0, 2.0, 7.5, std::numeric_limits<double>::infinity()}) CHECK(lp_norm(EmpiricalDist::point_mass(1.7), p) == doctest::Approx(1.7));
  const auto d = EmpiricalDist::from_weighted({{1.0, 0.5}, {0.0, 0.5}});
  CHECK(lp_norm(d, 2.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(lp_norm(two_step(), INFINITY) == 3.0);
  CHECK_THROWS_WITH_AS(lp_norm(d, 0.5), doctest::Contains("DomainError"), Error);
  CHECK(moment_norm(d, 0.5) == doctest::Approx(0.25));
  CHECK(moment(two_step(), 2.0) == doctest::Approx(5.0));
}

TEST_CASE("lp_norm: large p approaches the largest atom") {
  // max * w_top^(1/p) <= ||xi||_p <= max, so the gap at p is at most
  // max * (1 - w_top^(1/p)).
  std::mt19937_64 rng(2);
  const double p = 1e4;
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = random_law(rng);
    const double top = d.max_value();
    const double w = d.atoms().front().weight;
    const double v = lp_norm(d, p);
    CHECK(v <= top * (1 + 1e-12));
    CHECK(v >= top * std::pow(w, 1.0 / p) * (1 - 1e-12));
    CHECK(top - v <= top * (1.0 - std::pow(w, 1.0 / p)) + 1e-12);
  }
  // A law whose top atom carries almost all the mass is within 1e-6.
  const auto heavy = EmpiricalDist::from_weighted({{2.0, 0.999999}, {1.0, 0.000001}});
  CHECK(std::fabs(lp_norm(heavy, p) - 2.0) <= 1e-6);
}

TEST_CASE("lp_norm: nondecreasing in p and equal to the rearranged moments") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = random_law(rng);
    double prev = 0.0;
    for (double p : {1.0, 1.5, 2.0, 3.0, 5.0, 10.0}) {
      const double v = lp_norm(d, p);
      CHECK(v >= prev * (1 - 1e-12));
      prev = v;
      CHECK(moment(d, p) == doctest::Approx(rearranged_moment(d, p)).epsilon(1e-12));
    }
  }
}

TEST_CASE("orlicz_norm: power functions match lp norms") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = random_law(rng);
    CHECK(orlicz_norm(d, OrliczFunction::power(2.0)) == doctest::Approx(lp_norm(d, 2.0)).epsilon(1e-9));
    CHECK(orlicz_norm(d, OrliczFunction::power(1.0)) == doctest::Approx(lp_norm(d, 1.0)).epsilon(1e-9));
  }
  CHECK(orlicz_norm(EmpiricalDist::point_mass(0.0), OrliczFunction::power(2.0)) == 0.0);
}

TEST_CASE("orlicz_norm: phi_t fixed point") {
  const auto phi = OrliczFunction::phi_t(1.0);
  const double r = orlicz_norm(two_step(), phi);
  const double residual = 0.5 * std::max(3.0 / r - 1.0, 0.0) + 0.5 * std::max(1.0 / r - 1.0, 0.0);
  CHECK(std::fabs(residual - 1.0) <= 1e-9);
  CHECK(r == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(phi(0.0) == 0.0);
  CHECK(phi(0.5) == 0.0);
  CHECK(phi(3.0) == doctest::Approx(2.0));
  CHECK(OrliczFunction::phi_t(0.5)(3.0) == doctest::Approx(4.0));
}

TEST_CASE("orlicz_norm: table functions and iteration cap") {
  const auto phi = OrliczFunction::table({{0.0, 0.0}, {1.0, 1.0}});
  CHECK(phi(2.0) == doctest::Approx(2.0));
  CHECK(orlicz_norm(two_step(), phi) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK_THROWS_AS(OrliczFunction::table({{0.0, 1.0}, {1.0, 2.0}}), Error);
  CHECK_THROWS_WITH_AS(orlicz_norm(two_step(), OrliczFunction::power(2.0), 1e-10, 3),
                       doctest::Contains("NonConvergence"), Error);
}

TEST_CASE("note 8 sandwich on random laws") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = random_law(rng, 5);
    for (double t : {0.01, 0.1, 0.25, 0.5, 0.75, 1.0}) {
      const double g = orlicz_norm(d, OrliczFunction::phi_t(t));
      const double ds = double_star(d, t);
      CHECK(g <= ds + 1e-9);
      CHECK(ds <= 2 * g + 1e-9);
    }
  }
}

TEST_CASE("lorentz_quasinorm: examples") {
  const auto d = two_step();
  CHECK(lorentz_quasinorm(d, WeightFunction::power(0.0), 16) == doctest::Approx(3.0));
  // w(x) = x on a point mass: sup_{x < 1} x c = c.
  CHECK(lorentz_quasinorm(EmpiricalDist::point_mass(2.0), WeightFunction::power(1.0), 8) == doctest::Approx(2.0));
  // w(x) = x on the two-step law: max(0.5 * 3, 1 * 1) = 1.5.
  CHECK(lorentz_quasinorm(d, WeightFunction::power(1.0), 8) == doctest::Approx(1.5));
  // Cut at 0.5: only the step at value 3 on [0, 0.5) remains.
  CHECK(lorentz_quasinorm(d, WeightFunction::power(1.0).with_cutoff(0.5), 8) == doctest::Approx(1.5));
  CHECK(lorentz_quasinorm(d, WeightFunction::power(1.0).with_cutoff(0.25), 8) == doctest::Approx(0.75));
}

TEST_CASE("empirical_tail: examples") {
  const auto d = two_step();
  CHECK(empirical_tail(d, 0.0) == 1.0);
  CHECK(empirical_tail(d, 3.5) == 0.0);
  CHECK(empirical_tail(d, 2.0) == doctest::Approx(0.5));
  CHECK(empirical_tail(d, 3.0) == doctest::Approx(0.5));
  CHECK(strict_tail(d, 3.0) == 0.0);
  CHECK(strict_tail(d, 1.0) == doctest::Approx(0.5));
}

TEST_CASE("mpz_ratio: examples") {
  const std::vector<EmpiricalDist> one{EmpiricalDist::point_mass(3.0)};
  CHECK(mpz_ratio(one, 4.0, 2.0) == doctest::Approx(1.0));
  std::mt19937_64 rng(6);
  std::vector<EmpiricalDist> family;
  for (int i = 0; i < 30; ++i) family.push_back(random_law(rng));
  double expected = 0.0;
  for (const auto& d : family) expected = std::max(expected, lp_norm(d, 3.0) / lp_norm(d, 2.0));
  CHECK(mpz_ratio(family, 3.0, 2.0) == doctest::Approx(expected));
  CHECK(mpz_ratio(family, 3.0, 2.0) >= 1.0);
  family.push_back(EmpiricalDist::point_mass(0.0));
  CHECK(mpz_ratio(family, 3.0, 2.0) == doctest::Approx(expected));
  const std::vector<EmpiricalDist> zeros{EmpiricalDist::point_mass(0.0)};
  CHECK_THROWS_WITH_AS(mpz_ratio(zeros, 3.0, 2.0), doctest::Contains("EmptyFamily"), Error);
  CHECK_THROWS_AS(mpz_ratio(one, 2.0, 3.0), Error);
}
