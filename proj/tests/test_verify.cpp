#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>

#include "decoupling/verify.hpp"

using namespace decoupling;

namespace {

DiagonalFreeArray scalar(int rank, const std::vector<std::pair<MultiIndex, double>>& entries) {
  std::vector<std::pair<MultiIndex, Vector>> e;
  for (const auto& [idx, v] : entries) e.push_back({idx, {v}});
  return DiagonalFreeArray::build(rank, 1, NormTag(2.0), e);
}

McConfig exact_cfg() {
  McConfig c;
  c.mode = EvalMode::Exact;
  return c;
}

double choose(int n, int r) {
  double b = 1.0;
  for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
  return b;
}

double fact(int k) { return k <= 1 ? 1.0 : k * fact(k - 1); }

// E ||Q||^p by brute force over every sign pattern of k rows.
double rademacher_moment(const DiagonalFreeArray& f, std::size_t n, const RowAssignment& assign, int rows, double p) {
  double s = 0.0;
  for (const auto& [x, prob] : enumerate_support(DistributionSpec::rademacher(), rows, n)) {
    s += prob * std::pow(f.norm()(eval_poly(f, x, assign)), p);
  }
  return s;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return ErrorCode::InvalidSpec;
}

EmpiricalDist law(std::vector<EmpiricalDist::Atom> atoms) { return EmpiricalDist::from_weighted(std::move(atoms)); }

}  // namespace

TEST_CASE("decoupling constants: closed forms") {
  for (int k = 1; k <= 10; ++k) {
    double a = 0.0, b = 0.0;
    for (int r = 0; r <= k; ++r) {
      a += choose(k, r) * (r == 0 ? 1.0 : std::pow(2.0 * r, r));
      b += choose(k, r) * std::pow(r, k);
    }
    b /= fact(k);
    const auto c = PaperConstants::for_rank(k);
    CHECK(c.a == doctest::Approx(a).epsilon(1e-12));
    CHECK(c.b == doctest::Approx(b).epsilon(1e-12));
    CHECK(c.a_centered == doctest::Approx(std::pow(k, k)));
    CHECK(c.a <= std::pow(2.0 * k + 1.0, k));
    CHECK(c.b >= 1.0);
  }
  CHECK(PaperConstants::for_rank(1).a == 3.0);
  CHECK(PaperConstants::for_rank(2).a == 21.0);
  CHECK(PaperConstants::for_rank(2).b == 3.0);
  CHECK(PaperConstants::for_rank(3).b == 9.0);
}

TEST_CASE("mc config validation") {
  McConfig c;
  CHECK_NOTHROW(c.validate());
  c.trials = 99;
  CHECK_THROWS_AS(c.validate(), Error);
  c = McConfig{};
  c.bootstrap = 199;
  CHECK_THROWS_AS(c.validate(), Error);
  c = McConfig{};
  c.confidence = 0.5;
  CHECK_THROWS_AS(c.validate(), Error);
  c.confidence = 1.0;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("interchange identity: examples") {
  CHECK(check_interchange_identity(scalar(1, {{{1}, 1.0}, {{2}, -2.0}}), DistributionSpec::rademacher(), 2, 1, {1}) ==
        0.0);
  const auto f = scalar(2, {{{1, 2}, 1.0}});
  CHECK(check_interchange_identity(f, DistributionSpec::rademacher(), 3, 2, {1, 2}) <= 1e-12);
  CHECK(check_interchange_identity(f, DistributionSpec::bernoulli(1.0 / 3.0), 3, 2, {1, 2}) <= 1e-12);
  std::mt19937_64 rng(1);
  const auto g = random_array(2, 3, 2, NormTag(2.0), 1.0, rng);
  CHECK(check_interchange_identity(g, DistributionSpec::discrete({-1.0, 0.5, 2.0}, {0.2, 0.5, 0.3}), 3, 2, {2, 2}) <=
        1e-12);
  CHECK(code_of([&] { check_interchange_identity(f, DistributionSpec::rademacher(), 3, 2, {1, 2}, 10); }) ==
        ErrorCode::BudgetExceeded);
  CHECK(code_of([&] { check_interchange_identity(f, DistributionSpec::rademacher(), 3, 2, {1, 3}); }) ==
        ErrorCode::InvalidCase);
}

TEST_CASE("interchange identity: conditional expectation by hand") {
  // r = 2, n = 2, f = {(1,2) -> 1}, pattern (1,2): E[x_{11} x_{22} | S] with
  // S_i = x_{1i} + x_{2i}. For Rademacher rows, S_i in {-2, 0, 2} and
  // E[x_{1i} | S_i] = S_i / 2, so the cell value is S_1 S_2 / 4.
  std::map<std::pair<double, double>, std::pair<double, double>> cells;
  for (const auto& [x, p] : enumerate_support(DistributionSpec::rademacher(), 2, 2)) {
    auto& c = cells[{x(0, 0) + x(1, 0), x(0, 1) + x(1, 1)}];
    c.first += p * x(0, 0) * x(1, 1);
    c.second += p;
  }
  for (const auto& [s, c] : cells) CHECK(c.first / c.second == doctest::Approx(s.first * s.second / 4.0));
  CHECK(check_interchange_identity(scalar(2, {{{1, 2}, 1.0}}), DistributionSpec::rademacher(), 2, 2, {1, 2}) <= 1e-12);
}

TEST_CASE("polarization summary") {
  const auto s = check_polarization(40, {1, 2, 3}, {1, 2}, 5, SeedPath{3, {}});
  CHECK(s.cases == 40);
  CHECK(s.max_mo_vs_symmetrized <= 1e-10);
  CHECK(s.max_rademacher_vs_mo <= 1e-12);
}

TEST_CASE("moment decoupling: rank one has constant exactly one") {
  const auto f = scalar(1, {{{1}, 1.0}, {{2}, -0.5}, {{3}, 2.0}});
  for (const auto& dist : {DistributionSpec::rademacher(), DistributionSpec::bernoulli(0.3)}) {
    const auto rep = verify_moment_decoupling("k1", MomentCase::AUpper, f, {dist, 3, RowStructure::IidRows},
                                              RiFunctional::lp(2.0), exact_cfg());
    REQUIRE(rep.constant);
    CHECK(rep.constant->value == 1.0);
    CHECK(rep.verdict == Verdict::Pass);
    CHECK(*rep.paper_bound == 3.0);
  }
  McConfig mc;
  mc.mode = EvalMode::MonteCarlo;
  mc.trials = 500;
  const auto g = verify_moment_decoupling("k1-mc", MomentCase::AUpper, f,
                                          {DistributionSpec::gaussian(), 3, RowStructure::IidRows},
                                          RiFunctional::lp(2.0), mc);
  CHECK(g.constant->value == 1.0);
}

TEST_CASE("moment decoupling: rank-two symmetric Rademacher example") {
  const auto f = scalar(2, {{{1, 2}, 1.0}, {{2, 1}, 1.0}});
  const SequenceSpec spec{DistributionSpec::rademacher(), 2, RowStructure::IidRows};
  for (double p : {1.0, 2.0, 4.0}) {
    const double coupled = std::pow(rademacher_moment(f, 2, coupled_assignment(2), 2, p), 1.0 / p);
    const double decoupled = std::pow(rademacher_moment(f, 2, decoupled_assignment(2), 2, p), 1.0 / p);
    const auto b = verify_moment_decoupling("b", MomentCase::BLower, f, spec, RiFunctional::lp(p), exact_cfg());
    CHECK(b.constant->value == doctest::Approx(decoupled / coupled).epsilon(1e-12));
    CHECK(b.constant->value <= 3.0);
    CHECK(b.verdict == Verdict::Pass);
    CHECK(*b.paper_bound == 3.0);
    const auto a = verify_moment_decoupling("a", MomentCase::AUpper, f, spec, RiFunctional::lp(p), exact_cfg());
    CHECK(a.constant->value == doctest::Approx(coupled / decoupled).epsilon(1e-12));
    CHECK(*a.paper_bound == 21.0);
    CHECK(a.method == "exact");
  }
  // p = 2: coupled 2 e1 e2 has second moment 4; decoupled e11 e22 + e12 e21 has 2.
  const auto b2 = verify_moment_decoupling("b2", MomentCase::BLower, f, spec, RiFunctional::lp(2.0), exact_cfg());
  CHECK(b2.constant->value == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("moment decoupling: centering counterexample") {
  const DiagonalFreeArray ones = scalar(1, {{{1}, 1.0}, {{2}, 1.0}, {{3}, 1.0}, {{4}, 1.0}});
  const auto rep = verify_moment_decoupling("note1", MomentCase::Centering, ones,
                                            {DistributionSpec::bernoulli(0.5), 4, RowStructure::IidRows},
                                            RiFunctional::lp(2.0), exact_cfg());
  const double n = 4.0;
  CHECK(std::fabs(rep.details["lhs_moment"].get<double>() - n / 4) <= 1e-12);
  CHECK(std::fabs(rep.details["rhs_moment"].get<double>() - (n + n * n) / 4) <= 1e-12);
  CHECK(rep.verdict == Verdict::Pass);
  // The reverse ratio is sqrt(5), so no constant reverses centering uniformly in n.
  CHECK(rep.rhs->value / rep.lhs->value == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("moment decoupling: preconditions") {
  const auto f = scalar(2, {{{1, 2}, 1.0}});
  CHECK(code_of([&] {
          verify_moment_decoupling("x", MomentCase::AUpper, f,
                                   {DistributionSpec::rademacher(), 2, RowStructure::InterchangeableShuffle},
                                   RiFunctional::lp(2.0), exact_cfg());
        }) == ErrorCode::InvalidCase);
  CHECK(code_of([&] {
          verify_moment_decoupling("x", MomentCase::AUpper, f, {DistributionSpec::gaussian(), 2, RowStructure::IidRows},
                                   RiFunctional::lp(2.0), exact_cfg());
        }) == ErrorCode::NotFinitelySupported);
  McConfig small = exact_cfg();
  small.enumeration_budget = 8;
  CHECK(code_of([&] {
          verify_moment_decoupling("x", MomentCase::AUpper, f, {DistributionSpec::rademacher(), 2, RowStructure::IidRows},
                                   RiFunctional::lp(2.0), small);
        }) == ErrorCode::BudgetExceeded);
  small.mode = EvalMode::Auto;
  const auto fallback = verify_moment_decoupling(
      "x", MomentCase::AUpper, f, {DistributionSpec::rademacher(), 2, RowStructure::IidRows}, RiFunctional::lp(2.0), small);
  CHECK(fallback.method == "monte_carlo");
}

TEST_CASE("moment decoupling: other functionals and triangle case") {
  std::mt19937_64 rng(2);
  const auto f = random_array(2, 4, 1, NormTag(2.0), 0.7, rng);
  const SequenceSpec spec{DistributionSpec::rademacher(), 4, RowStructure::IidRows};
  for (const auto& norm : {RiFunctional::luxemburg(OrliczFunction::phi_t(0.5)), RiFunctional::double_star_at(0.25),
                           RiFunctional::lorentz_power(0.5), RiFunctional::lp(3.0)}) {
    const auto rep = verify_moment_decoupling("r", MomentCase::BLower, f, spec, norm, exact_cfg());
    CHECK(rep.verdict == Verdict::Pass);
  }
  const auto tri = verify_moment_decoupling("t", MomentCase::Triangle, f, spec, RiFunctional::lp(2.0), exact_cfg());
  CHECK(tri.constant->value <= 1.0 + 1e-12);
  CHECK(*tri.paper_bound == 1.0);
  const auto cen = verify_moment_decoupling("c", MomentCase::Centering, f,
                                            {DistributionSpec::bernoulli(0.3), 4, RowStructure::IidRows},
                                            RiFunctional::lp(2.0), exact_cfg());
  CHECK(*cen.paper_bound == 4.0);
  CHECK(cen.verdict == Verdict::Pass);
}

TEST_CASE("moment decoupling: Monte Carlo CI covers the exact value") {
  // rhs = ||Q(f; xi_1, xi_2)||_2 estimated by Monte Carlo with a bootstrap
  // interval; over 100 seeds coverage must reach the nominal level up to
  // three binomial standard errors.
  const auto f = scalar(2, {{{1, 2}, 1.0}, {{2, 3}, -1.0}, {{3, 1}, 0.5}});
  const SequenceSpec spec{DistributionSpec::rademacher(), 3, RowStructure::IidRows};
  const auto exact = verify_moment_decoupling("e", MomentCase::AUpper, f, spec, RiFunctional::lp(2.0), exact_cfg());
  const double truth = exact.rhs->value;
  McConfig mc;
  mc.mode = EvalMode::MonteCarlo;
  mc.trials = 1000;
  int covered = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    mc.master_seed = seed;
    const auto rep = verify_moment_decoupling("cov", MomentCase::AUpper, f, spec, RiFunctional::lp(2.0), mc);
    REQUIRE(rep.rhs);
    if (rep.rhs->lo <= truth && truth <= rep.rhs->hi) ++covered;
  }
  const double gamma = mc.confidence;
  CHECK(covered / 100.0 >= gamma - 3.0 * std::sqrt(gamma * (1 - gamma) / 100.0));
}

TEST_CASE("moment decoupling: results do not depend on the worker count") {
  std::mt19937_64 rng(3);
  const auto f = random_array(2, 5, 2, NormTag(2.0), 0.6, rng);
  McConfig mc;
  mc.mode = EvalMode::MonteCarlo;
  mc.trials = 3000;
  mc.master_seed = 77;
  const SequenceSpec spec{DistributionSpec::gaussian(), 5, RowStructure::IidRows};
  mc.workers = 1;
  const auto a = verify_moment_decoupling("w", MomentCase::AUpper, f, spec, RiFunctional::lp(2.0), mc);
  mc.workers = 4;
  const auto b = verify_moment_decoupling("w", MomentCase::AUpper, f, spec, RiFunctional::lp(2.0), mc);
  CHECK(a.constant->value == b.constant->value);
  CHECK(a.constant->lo == b.constant->lo);
  CHECK(a.constant->hi == b.constant->hi);
  CHECK(a.verdict == b.verdict);
  CHECK(a.details == b.details);

  McConfig ex = exact_cfg();
  const SequenceSpec rad{DistributionSpec::rademacher(), 5, RowStructure::IidRows};
  ex.workers = 1;
  const auto c = verify_moment_decoupling("w", MomentCase::BLower, f, rad, RiFunctional::lp(2.0), ex);
  ex.workers = 3;
  const auto d = verify_moment_decoupling("w", MomentCase::BLower, f, rad, RiFunctional::lp(2.0), ex);
  CHECK(c.constant->value == d.constant->value);
}

TEST_CASE("ustat decoupling: product kernels reduce to the polynomial case") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_array(2, 4, 1 + trial % 2, NormTag(2.0), 0.6, rng);
    const auto kernel = kernel_from_array(f, KernelShape{"product"});
    const SequenceSpec spec{DistributionSpec::rademacher(), 4, RowStructure::IidRows};
    const auto norm = RiFunctional::lp(1.0 + trial % 3);
    const auto ua = verify_ustat_decoupling("u", UStatCase::APrime, kernel, spec, norm, exact_cfg());
    const auto ma = verify_moment_decoupling("m", MomentCase::AUpper, f, spec, norm, exact_cfg());
    CHECK(std::fabs(ua.constant->value - ma.constant->value) <= 1e-12);
    const auto ub = verify_ustat_decoupling("u", UStatCase::BPrime, kernel, spec, norm, exact_cfg());
    const auto mb = verify_moment_decoupling("m", MomentCase::BLower, f, spec, norm, exact_cfg());
    CHECK(std::fabs(ub.constant->value - mb.constant->value) <= 1e-12);
  }
}

TEST_CASE("ustat decoupling: identity kernel and bounded min kernel") {
  UStatKernel::Table table;
  for (int i = 1; i <= 3; ++i) table[{i}] = [](std::span<const double> x) { return Vector{x[0]}; };
  const auto id = UStatKernel::build(1, 1, NormTag(2.0), table);
  const auto rep = verify_ustat_decoupling("id", UStatCase::APrime, id,
                                           {DistributionSpec::bernoulli(0.5), 3, RowStructure::IidRows},
                                           RiFunctional::lp(2.0), exact_cfg());
  CHECK(rep.constant->value == 1.0);

  std::mt19937_64 rng(5);
  const auto f = random_array(2, 5, 1, NormTag(2.0), 0.7, rng);
  const auto kernel = kernel_from_array(f, KernelShape{"min"});
  const auto b = verify_ustat_decoupling("min", UStatCase::BPrime, kernel,
                                         {DistributionSpec::bernoulli(0.5), 5, RowStructure::IidRows},
                                         RiFunctional::lp(2.0), exact_cfg());
  CHECK(b.constant->value <= 3.0);
  CHECK(b.verdict == Verdict::Pass);
}

TEST_CASE("tail_constant: hand-computed examples") {
  const auto same = law({{2.0, 0.5}, {0.0, 0.5}});
  const std::vector<double> levels{0.5, 1.0, 2.0};
  CHECK(tail_constant(same, same, levels, TailKind::AtLeast) == 1.0);

  // tail_L(C) = 1/2 for C <= 4 and 0 beyond, tail_R(1) = 1/10: C must pass 4.
  const auto left = law({{4.0, 0.5}, {0.0, 0.5}});
  const auto right = law({{1.0, 0.1}, {0.0, 0.9}});
  const std::vector<double> one{1.0};
  CHECK(tail_constant(left, right, one, TailKind::AtLeast) == doctest::Approx(4.0));
  CHECK(tail_constant(left, right, one, TailKind::Greater) == doctest::Approx(4.0));

  // tail_L(C) = 1/2 up to 4, tail_R(1) = 1/4: C = 2 suffices since 1/2 <= 2/4.
  const auto right2 = law({{1.0, 0.25}, {0.0, 0.75}});
  CHECK(tail_constant(left, right2, one, TailKind::AtLeast) == doctest::Approx(2.0));

  const auto zero = EmpiricalDist::point_mass(0.0);
  CHECK(code_of([&] { tail_constant(zero, zero, one, TailKind::AtLeast); }) == ErrorCode::DegenerateTails);
}

TEST_CASE("tail_constant: infimum property on random laws") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> v(0.0, 4.0), w(0.1, 1.0);
  auto random_law = [&] {
    std::vector<EmpiricalDist::Atom> atoms;
    double total = 0.0;
    for (int i = 0; i < 4; ++i) {
      atoms.push_back({v(rng), w(rng)});
      total += atoms.back().weight;
    }
    for (auto& a : atoms) a.weight /= total;
    return law(atoms);
  };
  const std::vector<double> levels{0.25, 0.5, 1.0, 2.0, 3.0};
  for (int trial = 0; trial < 200; ++trial) {
    const auto l = random_law(), r = random_law();
    for (TailKind kind : {TailKind::AtLeast, TailKind::Greater}) {
      auto tail = [kind](const EmpiricalDist& d, double t) {
        return kind == TailKind::AtLeast ? empirical_tail(d, t) : strict_tail(d, t);
      };
      auto feasible = [&](double c) {
        for (double t : levels)
          if (tail(l, c * t) > c * tail(r, t) + 1e-12) return false;
        return true;
      };
      const double c = tail_constant(l, r, levels, kind);
      REQUIRE(std::isfinite(c));
      CHECK(c >= 1.0);
      CHECK(feasible(c * (1 + 1e-9) + 1e-12));
      if (c > 1.0 + 1e-6) CHECK_FALSE(feasible(c * (1 - 1e-6)));
    }
  }
}

TEST_CASE("tail decoupling: examples") {
  const SequenceSpec one{DistributionSpec::rademacher(), 3, RowStructure::IidRows};
  const auto k1 = verify_tail_decoupling("k1", TailCase::ATail, scalar(1, {{{1}, 1.0}, {{2}, 2.0}, {{3}, -1.0}}), one,
                                         {0.5, 1.0, 2.0}, exact_cfg());
  CHECK(k1.constant->value == 1.0);
  CHECK(k1.verdict == Verdict::Pass);

  std::mt19937_64 rng(7);
  const auto f = random_array(2, 6, 1, NormTag(2.0), 0.6, rng);
  const SequenceSpec six{DistributionSpec::rademacher(), 6, RowStructure::IidRows};
  for (TailCase which : {TailCase::ATail, TailCase::BTail}) {
    const auto rep = verify_tail_decoupling("k2", which, f, six, {0.5, 1.0, 2.0, 4.0}, exact_cfg());
    REQUIRE(rep.constant);
    CHECK(std::isfinite(rep.constant->value));
    CHECK(rep.verdict == Verdict::Pass);
  }

  CHECK(code_of([&] {
          verify_tail_decoupling("zero", TailCase::ATail, DiagonalFreeArray::zero(2, 1, NormTag(2.0)), six, {1.0},
                                 exact_cfg());
        }) == ErrorCode::DegenerateTails);
  CHECK_THROWS_AS(verify_tail_decoupling("asym", TailCase::ATail, f,
                                         {DistributionSpec::bernoulli(0.5), 6, RowStructure::IidRows}, {1.0},
                                         exact_cfg()),
                  Error);
}

TEST_CASE("tail decoupling: Monte Carlo stability across seeds") {
  std::mt19937_64 rng(8);
  const auto f = random_array(2, 5, 1, NormTag(2.0), 0.6, rng);
  McConfig mc;
  mc.mode = EvalMode::MonteCarlo;
  mc.trials = 5000;
  mc.stability_seeds = 4;
  const auto rep = verify_tail_decoupling("mc", TailCase::ATail, f,
                                          {DistributionSpec::rademacher(), 5, RowStructure::IidRows},
                                          {0.5, 1.0, 2.0}, mc);
  CHECK(rep.method == "monte_carlo");
  CHECK(rep.details["stability_constants"].size() == 4);
  CHECK(rep.details["stability_ratio"].get<double>() <= 2.0);
  CHECK(rep.verdict == Verdict::Pass);
}

TEST_CASE("contraction: multiplier examples") {
  std::mt19937_64 rng(9);
  const auto f = random_array(2, 5, 1, NormTag(2.0), 0.7, rng);
  const SequenceSpec spec{DistributionSpec::rademacher(), 5, RowStructure::IidRows};
  const std::vector<double> grid{0.5, 1.0, 2.0, 4.0};
  ContractionAux aux;
  aux.multipliers.assign(5, 1.0);
  CHECK(verify_contraction("ones", ContractionCase::Multiplier, f, spec, aux, grid, exact_cfg()).constant->value == 1.0);
  aux.multipliers.assign(5, 0.0);
  const auto zero = verify_contraction("zeros", ContractionCase::Multiplier, f, spec, aux, grid, exact_cfg());
  CHECK(zero.constant->value == 1.0);
  CHECK(zero.verdict == Verdict::Pass);
  aux.multipliers = {0.5, -0.5, 0.5, -0.5, 0.5};
  const auto alt = verify_contraction("alt", ContractionCase::Multiplier, f, spec, aux, grid, exact_cfg());
  CHECK(std::isfinite(alt.constant->value));
  CHECK(alt.verdict == Verdict::Pass);
  aux.multipliers = {1.5, 0, 0, 0, 0};
  CHECK(code_of([&] { verify_contraction("big", ContractionCase::Multiplier, f, spec, aux, grid, exact_cfg()); }) ==
        ErrorCode::PreconditionViolated);
  aux.multipliers = {1.0, 1.0};
  CHECK(code_of([&] { verify_contraction("short", ContractionCase::Multiplier, f, spec, aux, grid, exact_cfg()); }) ==
        ErrorCode::LengthMismatch);
}

TEST_CASE("contraction: maximal and comparison") {
  std::mt19937_64 rng(10);
  const auto f = random_array(2, 5, 1, NormTag(2.0), 0.7, rng);
  const SequenceSpec spec{DistributionSpec::rademacher(), 5, RowStructure::IidRows};
  const std::vector<double> grid{0.5, 1.0, 2.0, 4.0};
  const auto max = verify_contraction("max", ContractionCase::Maximal, f, spec, {}, grid, exact_cfg());
  CHECK(max.constant->value >= 1.0);
  CHECK(max.verdict == Verdict::Pass);

  ContractionAux aux;
  aux.comparison_law = DistributionSpec::discrete({-2.0, -1.0, 1.0, 2.0}, {0.25, 0.25, 0.25, 0.25});
  aux.domination_constant = 1.0;
  const auto cmp = verify_contraction("cmp", ContractionCase::Comparison, f, spec, aux, grid, exact_cfg());
  CHECK(cmp.verdict == Verdict::Pass);

  // A Rademacher coordinate is not dominated by a law that never exceeds 1/2.
  aux.comparison_law = DistributionSpec::discrete({-0.5, 0.5}, {0.5, 0.5});
  CHECK(code_of([&] { verify_contraction("cmp", ContractionCase::Comparison, f, spec, aux, grid, exact_cfg()); }) ==
        ErrorCode::PreconditionViolated);
}

TEST_CASE("abs_tail: closed forms") {
  CHECK(abs_tail(DistributionSpec::rademacher(), 0.5) == 1.0);
  CHECK(abs_tail(DistributionSpec::rademacher(), 1.0) == 0.0);
  CHECK(abs_tail(DistributionSpec::gaussian(), 1.0) == doctest::Approx(std::erfc(1.0 / std::sqrt(2.0))));
  CHECK(abs_tail(DistributionSpec::uniform(-1.0, 1.0), 0.5) == doctest::Approx(0.5));
  CHECK(abs_tail(DistributionSpec::uniform(0.0, 2.0), 0.5) == doctest::Approx(0.75));
  CHECK(abs_tail(DistributionSpec::bernoulli(0.3), 0.5) == doctest::Approx(0.3));
  CHECK(abs_tail(DistributionSpec::discrete({-3.0, 1.0}, {0.4, 0.6}), 2.0) == doctest::Approx(0.4));
}

TEST_CASE("max lemmas: law of the maximum and spec example") {
  const auto x = abs_law(DistributionSpec::bernoulli(0.5));
  const auto z = max_of_iid(x, 2);
  CHECK(empirical_tail(z, 1.0) == doctest::Approx(0.75));  // 1 - (1 - 1/2)^2
  CHECK(0.75 >= 1.0 / (1.0 + 1.0));

  const auto y = abs_law(DistributionSpec::discrete({-1.0, 2.0, 3.0}, {0.5, 0.3, 0.2}));
  for (std::size_t n : {1u, 3u, 7u}) {
    const auto m = max_of_iid(y, n);
    for (double t : {0.5, 1.0, 2.0, 2.5, 3.0, 3.5}) {
      CHECK(empirical_tail(m, t) == doctest::Approx(1.0 - std::pow(1.0 - empirical_tail(y, t), n)).epsilon(1e-12));
    }
  }
}

TEST_CASE("max lemmas: zero violations on two-atom laws") {
  for (const auto& dist : {DistributionSpec::bernoulli(0.5), DistributionSpec::discrete({1.0, 3.0}, {0.7, 0.3}),
                           DistributionSpec::discrete({0.5, 4.0}, {0.9, 0.1})}) {
    for (std::size_t n : {2u, 4u, 8u}) {
      for (double frac : {0.0, 0.25, 0.5, 1.0}) {
        for (const auto& [p, q] : {std::pair{1.0, 2.0}, std::pair{2.0, 4.0}}) {
          for (const auto& check : check_max_lemmas(dist, n, frac * n, p, q, 0.0)) {
            CHECK(check.violations == 0);
          }
        }
      }
    }
  }
  const auto rep = verify_max_lemmas("lem", DistributionSpec::bernoulli(0.5), {2, 4, 8}, {0, 0.25, 0.5, 1}, 1, 2, 0);
  CHECK(rep.verdict == Verdict::Pass);
  CHECK(rep.details["violations"].get<std::size_t>() == 0);
  CHECK_THROWS_AS(check_max_lemmas(DistributionSpec::bernoulli(0.5), 2, 3.0, 1, 2, 0), Error);
  CHECK_THROWS_AS(check_max_lemmas(DistributionSpec::gaussian(), 2, 1.0, 1, 2, 0), Error);
}

TEST_CASE("lp implies tail: examples") {
  const auto two = DistributionSpec::discrete({1.0, 3.0}, {0.7, 0.3});
  const auto same = verify_lp_implies_tail("same", two, two, 1.0, 2.0, 0.0, 0.0);
  CHECK(same.verdict == Verdict::Pass);
  CHECK(same.details["c2"].get<double>() == doctest::Approx(1.0));

  const auto doubled = verify_lp_implies_tail("double", DistributionSpec::bernoulli(0.5),
                                              DistributionSpec::discrete({0.0, 2.0}, {0.5, 0.5}), 1.0, 2.0, 0.0, 0.0);
  CHECK(doubled.verdict == Verdict::Pass);
  CHECK(doubled.details["violations"].get<std::size_t>() == 0);

  const auto dominated = verify_lp_implies_tail("below", two, DistributionSpec::discrete({0.5, 1.0}, {0.5, 0.5}), 1.0,
                                                2.0, 0.0, 0.0);
  CHECK(dominated.verdict == Verdict::Pass);

  CHECK(code_of([&] { verify_lp_implies_tail("small", two, two, 1.0, 2.0, 0.5, 0.0); }) ==
        ErrorCode::HypothesisFailed);
  CHECK(code_of([&] { verify_lp_implies_tail("small", two, two, 1.0, 2.0, 0.0, 0.5); }) ==
        ErrorCode::HypothesisFailed);
}

TEST_CASE("note 8: examples") {
  const auto eta = law({{3.0, 0.2}, {1.0, 0.5}, {0.5, 0.3}});
  const std::vector<double> grid{0.1, 0.3, 0.5, 0.9};
  const auto same = note8_pair(eta, eta, grid);
  CHECK(same.c2 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(same.c3 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(same.sandwich_ok);
  CHECK(same.chain_ok);

  const auto twice = note8_pair(eta.scaled(2.0), eta, grid);
  CHECK(twice.c2 == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(twice.c3 == doctest::Approx(2.0).epsilon(1e-12));

  const auto levels = note8_levels(eta, law({{1.0, 0.4}, {0.0, 0.6}}), grid);
  for (double t : {0.2, 0.4, 0.7, 1.0}) CHECK(std::find(levels.begin(), levels.end(), t) != levels.end());

  // eta vanishes beyond t = 0.4: those cells are skipped and counted.
  const auto sparse = law({{1.0, 0.4}, {0.0, 0.6}});
  const auto r = note8_pair(eta, sparse, std::vector<double>{0.2, 0.9});
  CHECK(r.chain_ok);
  CHECK(r.skipped == 0);
  CHECK_THROWS_AS(note8_pair(eta, EmpiricalDist::point_mass(0.0), grid), Error);
}

TEST_CASE("note 8: random pairs satisfy sandwich and chain") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> m(2, 5);
  std::uniform_real_distribution<double> v(0.05, 5.0), w(0.05, 1.0);
  auto random_law = [&] {
    std::vector<EmpiricalDist::Atom> atoms;
    double total = 0.0;
    const int count = m(rng);
    for (int i = 0; i < count; ++i) {
      atoms.push_back({v(rng), w(rng)});
      total += atoms.back().weight;
    }
    for (auto& a : atoms) a.weight /= total;
    return law(atoms);
  };
  std::vector<std::pair<EmpiricalDist, EmpiricalDist>> pairs;
  for (int i = 0; i < 100; ++i) pairs.emplace_back(random_law(), random_law());
  const std::vector<double> grid{0.01, 0.1, 0.25, 0.5, 0.75, 1.0};
  for (const auto& [a, b] : pairs) {
    const auto r = note8_pair(a, b, grid);
    CHECK(r.sandwich_ok);
    CHECK(r.chain_ok);
    CHECK(r.c2 <= r.c3 * (1 + 1e-9));
    CHECK(r.c3 <= 2 * r.c2 * (1 + 1e-9));
  }
  const auto rep = verify_note8_chain("n8", pairs, grid);
  CHECK(rep.verdict == Verdict::Pass);
  CHECK(rep.details["sandwich_failures"].get<std::size_t>() == 0);
  CHECK(rep.details["chain_failures"].get<std::size_t>() == 0);
}

TEST_CASE("weighted limsup surrogate") {
  const auto a = law({{1.0, 0.5}, {2.0, 0.5}});
  const std::vector<double> grid{0.5, 1.0, 2.0};
  const auto same = verify_weighted_limsup("same", a, a, 2.0, {1.0}, grid);
  CHECK(same.verdict == Verdict::Pass);
  CHECK(same.constant->value == 1.0);
  CHECK(same.lhs->value == doctest::Approx(same.rhs->value));
  CHECK(same.method == "surrogate");

  const auto big = law({{10.0, 1.0}});
  const auto tiny = law({{0.1, 1.0}});
  const auto fail = verify_weighted_limsup("none", big, tiny, 2.0, {1.0, 2.0, 4.0}, std::vector<double>{1.0, 5.0});
  CHECK(fail.verdict == Verdict::Inconclusive);
  CHECK(fail.details["surrogate_failure"].get<bool>());
  CHECK_FALSE(fail.constant);
}

TEST_CASE("mpz: constants and Khintchine moments") {
  CHECK(rademacher_mpz_constant(1, 2.0, 4.0) == doctest::Approx(6.0));
  CHECK(rademacher_mpz_constant(2, 2.0, 3.0) == doctest::Approx(16.0));
  CHECK_THROWS_AS(rademacher_mpz_constant(1, 1.0, 2.0), Error);

  // Sum of n signs: E S^2 = n, E S^4 = 3n^2 - 2n.
  const auto ones = scalar(1, {{{1}, 1.0}, {{2}, 1.0}, {{3}, 1.0}, {{4}, 1.0}});
  const auto s = rademacher_chaos_law(ones, 4);
  CHECK(moment(s, 2.0) == doctest::Approx(4.0));
  CHECK(moment(s, 4.0) == doctest::Approx(3 * 16.0 - 8.0));

  std::mt19937_64 rng(12);
  std::vector<DiagonalFreeArray> family;
  for (int i = 0; i < 10; ++i) family.push_back(random_array(2, 6, 1, NormTag(2.0), 0.5, rng));
  const auto rep = verify_mpz_bound("mpz", family, 6, 2.0, 4.0);
  CHECK(rep.verdict == Verdict::Pass);
  CHECK(*rep.paper_bound == doctest::Approx(36.0));
  CHECK(rep.constant->value <= 36.0);
  CHECK(rep.constant->value >= 1.0);
  CHECK(code_of([] { verify_mpz_bound("e", {}, 3, 2.0, 4.0); }) == ErrorCode::EmptyFamily);
}

TEST_CASE("verdict and case names") {
  CHECK(to_string(Verdict::Pass) == "PASS");
  CHECK(to_string(Verdict::Fail) == "FAIL");
  CHECK(to_string(Verdict::Inconclusive) == "INCONCLUSIVE");
  CHECK(moment_case_from_string("A_upper") == MomentCase::AUpper);
  CHECK(to_string(TailCase::BTail) == "B_tail");
  CHECK(contraction_case_from_string("comparison") == ContractionCase::Comparison);
  CHECK(eval_mode_from_string("monte_carlo") == EvalMode::MonteCarlo);
  CHECK_THROWS_AS(moment_case_from_string("C"), Error);
}
