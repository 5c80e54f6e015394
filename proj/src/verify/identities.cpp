#include <chrono>
#include <cmath>
#include <map>
#include <random>

#include "decoupling/numeric.hpp"
#include "decoupling/verify.hpp"
#include "verify/engine.hpp"

namespace decoupling {

namespace {

// Row sums as the conditioning key; rounding absorbs summation-order noise.
std::vector<long long> sum_key(std::span<const double> s) {
  std::vector<long long> key(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) key[i] = std::llround(s[i] * 1e9);
  return key;
}

struct Cell {
  CompensatedSum mass;
  CompensatedVectorSum weighted;
  Vector target;
};

}  // namespace

double check_interchange_identity(const DiagonalFreeArray& f, const DistributionSpec& dist, std::size_t n,
                                  int r, const std::vector<int>& j_pattern, std::uint64_t budget) {
  dist.validate();
  const int k = f.rank();
  if (r < 1) throw Error(ErrorCode::InvalidCase, "r must be >= 1");
  if (static_cast<int>(j_pattern.size()) != k) throw Error(ErrorCode::RankMismatch, "pattern length must equal the rank");
  for (int j : j_pattern) {
    if (j < 1 || j > r) throw Error(ErrorCode::InvalidCase, "pattern entries must lie in 1..r");
  }
  if (f.max_index() > static_cast<int>(n)) throw Error(ErrorCode::IndexOutOfRange, "array exceeds length");
  if (!dist.finitely_supported()) throw Error(ErrorCode::NotFinitelySupported, "identity check needs finite support");
  const auto total = outcome_count(dist, r, n);
  if (total == 0 || total > budget) throw Error(ErrorCode::BudgetExceeded, "sample space exceeds the budget");

  const double scale = 1.0 / ipow(static_cast<double>(r), k);
  const auto dim = static_cast<std::size_t>(f.dim());
  std::map<std::vector<long long>, Cell> cells;
  Vector sums(n);
  visit_outcomes(dist, r, n, 0, total, [&](const SampleMatrix& x, double prob) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < x.rows(); ++j) s += x(j, i);
      sums[i] = s;
    }
    auto key = sum_key(sums);
    auto it = cells.find(key);
    if (it == cells.end()) {
      Cell cell{CompensatedSum{}, CompensatedVectorSum(dim), eval_coupled(f, sums)};
      for (auto& v : cell.target) v *= scale;
      it = cells.emplace(std::move(key), std::move(cell)).first;
    }
    it->second.mass.add(prob);
    it->second.weighted.add(eval_poly(f, x, j_pattern), prob);
  });

  double worst = 0.0;
  for (const auto& [key, cell] : cells) {
    const double mass = cell.mass.value();
    const Vector acc = cell.weighted.value();
    for (std::size_t d = 0; d < dim; ++d) {
      worst = std::max(worst, std::fabs(acc[d] / mass - cell.target[d]));
    }
  }
  return worst;
}

PolarizationSummary check_polarization(std::size_t cases, const std::vector<int>& ranks,
                                       const std::vector<int>& dims, int n, const SeedPath& seed) {
  if (ranks.empty() || dims.empty()) throw Error(ErrorCode::DomainError, "empty rank or dimension list");
  for (int k : ranks) {
    if (k < 1 || k > n) throw Error(ErrorCode::DomainError, "ranks must lie in 1..n");
  }
  PolarizationSummary out;
  out.cases = cases;
  for (std::size_t c = 0; c < cases; ++c) {
    auto rng = make_engine(derive_stream(seed, c));
    const int k = ranks[c % ranks.size()];
    const int dim = dims[(c / ranks.size()) % dims.size()];
    const auto f = random_array(k, n, dim, NormTag(2.0), 0.6, rng);
    SampleMatrix x(static_cast<std::size_t>(k), static_cast<std::size_t>(n));
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t j = 0; j < x.rows(); ++j) {
      for (auto& v : x.row(j)) v = gauss(rng);
    }
    const Vector mo = polarize_mazur_orlicz(f, x);
    const Vector sym = eval_poly(symmetrize(f), x, decoupled_assignment(k));
    const Vector rad = polarize_rademacher(f, x);
    out.max_mo_vs_symmetrized = std::max(out.max_mo_vs_symmetrized, relative_error(mo, sym));
    out.max_rademacher_vs_mo = std::max(out.max_rademacher_vs_mo, relative_error(rad, mo));
  }
  return out;
}

EmpiricalDist rademacher_chaos_law(const DiagonalFreeArray& f, std::size_t n, std::uint64_t budget) {
  if (f.max_index() > static_cast<int>(n)) throw Error(ErrorCode::IndexOutOfRange, "array exceeds length");
  const NormTag tag = f.norm();
  const auto coupled = coupled_assignment(f.rank());
  detail::Side side{DistributionSpec::rademacher(), RowStructure::IidRows, 1,
                    [&f, tag, coupled](const SampleMatrix& x) { return tag(eval_poly(f, x, coupled)); }};
  McConfig cfg;
  cfg.enumeration_budget = budget;
  return detail::exact_law(side, n, cfg);
}

double rademacher_mpz_constant(int degree, double p, double q) {
  if (degree < 1) throw Error(ErrorCode::DomainError, "degree must be >= 1");
  if (!(p > 1.0 && q > p)) throw Error(ErrorCode::DomainError, "need 1 < p < q");
  return std::pow(2.0 * (q - 1.0) / (p - 1.0), degree);
}

VerificationReport verify_mpz_bound(const std::string& case_id, const std::vector<DiagonalFreeArray>& family,
                                    std::size_t n, double p, double q) {
  const auto start = std::chrono::steady_clock::now();
  if (family.empty()) throw Error(ErrorCode::EmptyFamily, "no arrays");
  const int degree = family.front().rank();
  std::vector<EmpiricalDist> laws;
  laws.reserve(family.size());
  for (const auto& f : family) {
    if (f.rank() != degree) throw Error(ErrorCode::RankMismatch, "family members must share a degree");
    laws.push_back(rademacher_chaos_law(f, n));
  }
  const double ratio = mpz_ratio(laws, q, p);
  const double bound = rademacher_mpz_constant(degree, p, q);

  VerificationReport rep;
  rep.case_id = case_id;
  rep.check = "mpz_bound";
  rep.theorem = "rademacher_mpz";
  rep.method = "exact";
  rep.constant = Estimate{ratio, ratio, ratio};
  rep.paper_bound = bound;
  rep.details["degree"] = degree;
  rep.details["n"] = n;
  rep.details["p"] = p;
  rep.details["q"] = q;
  rep.details["family_size"] = family.size();
  rep.verdict = ratio <= bound * (1.0 + 1e-12) ? Verdict::Pass : Verdict::Fail;
  rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace decoupling
