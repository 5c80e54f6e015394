#include <chrono>
#include <cmath>

#include "decoupling/numeric.hpp"
#include "decoupling/verify.hpp"
#include "verify/engine.hpp"

namespace decoupling {

namespace {

struct Setup {
  detail::Side lhs;
  detail::Side rhs;
  double bound = 0.0;
  std::string check;
  std::string theorem;
  nlohmann::json details = nlohmann::json::object();
};

double side_ratio(double lhs, double rhs) {
  if (rhs > 0.0) return lhs / rhs;
  return lhs == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
}

VerificationReport run_moment_setup(const std::string& case_id, Setup setup, std::size_t n,
                                    const RiFunctional& norm, const McConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.case_id = case_id;
  rep.check = setup.check;
  rep.theorem = setup.theorem;
  rep.paper_bound = setup.bound;
  rep.master_seed = cfg.master_seed;
  const SeedPath base = detail::case_seed(case_id, cfg.master_seed, detail::kPurposeCases);
  rep.seed_path = base.path;
  rep.details = std::move(setup.details);
  rep.details["functional"] = norm.label();

  const bool exact = detail::use_exact(setup.lhs, setup.rhs, n, cfg);
  const auto laws = detail::collect_laws(setup.lhs, setup.rhs, n, cfg, base, exact);
  const double lhs = norm(laws.lhs);
  const double rhs = norm(laws.rhs);
  const double constant = side_ratio(lhs, rhs);
  if (norm.kind == RiFunctional::Kind::Lp && std::isfinite(norm.p)) {
    rep.details["lhs_moment"] = moment(laws.lhs, norm.p);
    rep.details["rhs_moment"] = moment(laws.rhs, norm.p);
  }

  if (exact) {
    rep.method = "exact";
    rep.details["outcomes"] = laws.outcomes;
    rep.lhs = Estimate{lhs, lhs, lhs};
    rep.rhs = Estimate{rhs, rhs, rhs};
    rep.constant = detail::finite_estimate(constant, constant, constant);
    rep.verdict = constant <= setup.bound * (1.0 + 1e-12) ? Verdict::Pass : Verdict::Fail;
  } else {
    rep.method = "monte_carlo";
    rep.trials = cfg.trials;
    const auto ci = detail::paired_bootstrap(
        laws.lhs_values, laws.rhs_values,
        [&](const EmpiricalDist& a, const EmpiricalDist& b) {
          const double x = norm(a);
          const double y = norm(b);
          return std::vector<double>{x, y, side_ratio(x, y)};
        },
        cfg, derive_stream(base, detail::kPurposeBootstrap));
    rep.lhs = Estimate{lhs, ci[0].first, ci[0].second};
    rep.rhs = Estimate{rhs, ci[1].first, ci[1].second};
    rep.constant = detail::finite_estimate(constant, ci[2].first, ci[2].second);
    if (ci[2].second <= setup.bound) {
      rep.verdict = Verdict::Pass;
    } else if (ci[0].first > setup.bound * ci[1].second) {
      rep.verdict = Verdict::Fail;
    } else {
      rep.verdict = Verdict::Inconclusive;
    }
  }
  rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

SampleMatrix centered(const SampleMatrix& x, double mean) {
  SampleMatrix out = x;
  for (std::size_t j = 0; j < out.rows(); ++j) {
    for (auto& v : out.row(j)) v -= mean;
  }
  return out;
}

void require_length(int max_index, std::size_t n) {
  if (max_index > static_cast<int>(n)) {
    throw Error(ErrorCode::IndexOutOfRange, "array index " + std::to_string(max_index) +
                                                " exceeds sequence length " + std::to_string(n));
  }
}

}  // namespace

VerificationReport verify_moment_decoupling(const std::string& case_id, MomentCase which,
                                            const DiagonalFreeArray& f, const SequenceSpec& spec,
                                            const RiFunctional& norm, const McConfig& cfg) {
  spec.dist.validate();
  require_length(f.max_index(), spec.length);
  const int k = f.rank();
  const auto consts = PaperConstants::for_rank(k);
  const NormTag tag = f.norm();
  auto norm_of = [tag](const Vector& v) { return tag(v); };

  Setup s;
  s.check = "moment_decoupling";
  s.details["case"] = to_string(which);
  s.details["k"] = k;
  s.details["n"] = spec.length;
  s.details["structure"] = to_string(spec.structure);
  s.details["family"] = to_string(spec.dist.family);

  const auto coupled = coupled_assignment(k);
  const auto decoupled = decoupled_assignment(k);
  auto poly = [norm_of](const DiagonalFreeArray* g, RowAssignment assign) -> detail::Statistic {
    return [g, assign, norm_of](const SampleMatrix& x) { return norm_of(eval_poly(*g, x, assign)); };
  };
  // Keeps the symmetrized array alive for the statistics below.
  auto fhat = std::make_shared<DiagonalFreeArray>(symmetrize(f));

  switch (which) {
    case MomentCase::AUpper:
      if (spec.structure != RowStructure::IidRows) {
        throw Error(ErrorCode::InvalidCase, "A_upper needs i.i.d. rows");
      }
      s.theorem = "AB(A)";
      s.bound = consts.a;
      s.details["a_k"] = consts.a;
      s.details["a_k_centered"] = consts.a_centered;
      s.details["a_k_growth_bound"] = ipow(2.0 * k + 1.0, k);
      s.details["mean_zero"] = spec.dist.mean() == 0.0;
      s.lhs = {spec.dist, spec.structure, k, poly(&f, coupled)};
      s.rhs = {spec.dist, spec.structure, k, poly(&f, decoupled)};
      break;
    case MomentCase::BLower:
      s.theorem = "AB(B)";
      s.bound = consts.b;
      s.details["b_k"] = consts.b;
      s.lhs = {spec.dist, spec.structure, k, [fhat, decoupled, norm_of](const SampleMatrix& x) {
                 return norm_of(eval_poly(*fhat, x, decoupled));
               }};
      s.rhs = {spec.dist, spec.structure, k, poly(&f, coupled)};
      break;
    case MomentCase::Triangle:
      s.theorem = "symmetrization_contracts";
      s.bound = 1.0;
      s.lhs = {spec.dist, spec.structure, k, [fhat, decoupled, norm_of](const SampleMatrix& x) {
                 return norm_of(eval_poly(*fhat, x, decoupled));
               }};
      s.rhs = {spec.dist, spec.structure, k, poly(&f, decoupled)};
      break;
    case MomentCase::Centering: {
      s.theorem = "centering";
      s.bound = ipow(2.0, k);
      const double mean = spec.dist.mean();
      s.details["mean"] = mean;
      s.lhs = {spec.dist, spec.structure, k, [&f, mean, decoupled, norm_of](const SampleMatrix& x) {
                 return norm_of(eval_poly(f, centered(x, mean), decoupled));
               }};
      s.rhs = {spec.dist, spec.structure, k, poly(&f, decoupled)};
      break;
    }
  }
  return run_moment_setup(case_id, std::move(s), spec.length, norm, cfg);
}

VerificationReport verify_ustat_decoupling(const std::string& case_id, UStatCase which,
                                           const UStatKernel& kernel, const SequenceSpec& spec,
                                           const RiFunctional& norm, const McConfig& cfg) {
  spec.dist.validate();
  require_length(kernel.max_index(), spec.length);
  const int k = kernel.rank();
  const auto consts = PaperConstants::for_rank(k);
  const NormTag tag = kernel.norm();
  const auto coupled = coupled_assignment(k);
  const auto decoupled = decoupled_assignment(k);

  Setup s;
  s.check = "ustat_decoupling";
  s.details["case"] = to_string(which);
  s.details["k"] = k;
  s.details["n"] = spec.length;
  s.details["structure"] = to_string(spec.structure);
  s.details["family"] = to_string(spec.dist.family);

  auto ustat = [tag](UStatKernel g, RowAssignment assign) -> detail::Statistic {
    return [g = std::move(g), assign = std::move(assign), tag](const SampleMatrix& x) {
      return tag(eval_ustat(g, x, assign));
    };
  };

  if (which == UStatCase::APrime) {
    if (spec.structure != RowStructure::IidRows) throw Error(ErrorCode::InvalidCase, "A_prime needs i.i.d. rows");
    s.theorem = "F(A')";
    s.bound = consts.a;
    s.details["a_k"] = consts.a;
    s.lhs = {spec.dist, spec.structure, k, ustat(kernel, coupled)};
    s.rhs = {spec.dist, spec.structure, k, ustat(kernel, decoupled)};
  } else {
    s.theorem = "F(B')";
    s.bound = consts.b;
    s.details["b_k"] = consts.b;
    s.lhs = {spec.dist, spec.structure, k, ustat(symmetrize_kernel(kernel), decoupled)};
    s.rhs = {spec.dist, spec.structure, k, ustat(kernel, coupled)};
  }
  return run_moment_setup(case_id, std::move(s), spec.length, norm, cfg);
}

}  // namespace decoupling
