#include <chrono>

#include "decoupling/numeric.hpp"
#include "decoupling/suite.hpp"
#include "verify/engine.hpp"

namespace decoupling {

namespace {

constexpr double kPolarizationTol = 1e-10;
constexpr double kRademacherTol = 1e-12;
constexpr double kIdentityTol = 1e-12;

VerificationReport polarization_report(const CaseSpec& c, const McConfig& mc) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.case_id = c.id;
  rep.check = c.op;
  rep.theorem = "mazur_orlicz_polarization";
  rep.method = "exact";
  rep.master_seed = mc.master_seed;
  const SeedPath seed = detail::case_seed(c.id, c.seed.value_or(mc.master_seed), detail::kPurposeCases);
  rep.seed_path = seed.path;
  const auto s = check_polarization(c.count, c.ranks, c.dims, c.n, seed);
  rep.constant = Estimate{s.max_mo_vs_symmetrized, s.max_mo_vs_symmetrized, s.max_mo_vs_symmetrized};
  rep.paper_bound = kPolarizationTol;
  rep.details["cases"] = s.cases;
  rep.details["max_rel_error_vs_symmetrized"] = s.max_mo_vs_symmetrized;
  rep.details["max_rel_error_sign_form"] = s.max_rademacher_vs_mo;
  rep.details["sign_form_tolerance"] = kRademacherTol;
  rep.verdict = s.max_mo_vs_symmetrized <= kPolarizationTol && s.max_rademacher_vs_mo <= kRademacherTol
                    ? Verdict::Pass
                    : Verdict::Fail;
  rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

VerificationReport interchange_report(const CaseSpec& c, const McConfig& mc) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.case_id = c.id;
  rep.check = c.op;
  rep.theorem = "interchange_identity";
  rep.method = "exact";
  rep.master_seed = mc.master_seed;
  const double err =
      check_interchange_identity(*c.array, c.sequence->dist, c.sequence->length, c.r, c.pattern, mc.enumeration_budget);
  rep.constant = Estimate{err, err, err};
  rep.paper_bound = kIdentityTol;
  rep.details["r"] = c.r;
  rep.details["pattern"] = c.pattern;
  rep.details["n"] = c.sequence->length;
  rep.details["family"] = to_string(c.sequence->dist.family);
  rep.details["max_abs_error"] = err;
  rep.verdict = err <= kIdentityTol ? Verdict::Pass : Verdict::Fail;
  rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

VerificationReport limsup_report(const CaseSpec& c, const McConfig& mc) {
  if (!c.pairs.empty()) {
    return verify_weighted_limsup(c.id, c.pairs.front().first, c.pairs.front().second, c.exponent, c.c_grid, c.t_grid);
  }
  const DiagonalFreeArray& f = *c.array;
  const int k = f.rank();
  const NormTag tag = f.norm();
  const auto coupled = coupled_assignment(k);
  const auto decoupled = decoupled_assignment(k);
  const SequenceSpec& seq = *c.sequence;
  detail::Side lhs{seq.dist, seq.structure, k, [&](const SampleMatrix& x) { return tag(eval_poly(f, x, coupled)); }};
  detail::Side rhs{seq.dist, seq.structure, k, [&](const SampleMatrix& x) { return tag(eval_poly(f, x, decoupled)); }};
  McConfig exact = mc;
  exact.mode = EvalMode::Exact;
  detail::use_exact(lhs, rhs, seq.length, exact);
  const auto laws = detail::collect_laws(lhs, rhs, seq.length, exact, SeedPath{mc.master_seed, {}}, true);
  auto rep = verify_weighted_limsup(c.id, laws.lhs, laws.rhs, c.exponent, c.c_grid, c.t_grid);
  rep.details["left"] = "coupled chaos";
  rep.details["right"] = "decoupled chaos";
  rep.details["k"] = k;
  rep.details["n"] = seq.length;
  rep.master_seed = mc.master_seed;
  return rep;
}

VerificationReport dispatch(const CaseSpec& c, const McConfig& mc) {
  const std::string& op = c.op;
  if (op == "polarization") return polarization_report(c, mc);
  if (op == "interchange_identity") return interchange_report(c, mc);
  if (op == "moment_decoupling") {
    return verify_moment_decoupling(c.id, moment_case_from_string(c.variant), *c.array, *c.sequence, *c.norm, mc);
  }
  if (op == "ustat_decoupling") {
    const UStatKernel kernel = kernel_from_array(*c.array, *c.kernel);
    auto rep = verify_ustat_decoupling(c.id, ustat_case_from_string(c.variant), kernel, *c.sequence, *c.norm, mc);
    rep.details["kernel"] = c.kernel->name;
    return rep;
  }
  if (op == "tail_decoupling") {
    return verify_tail_decoupling(c.id, tail_case_from_string(c.variant), *c.array, *c.sequence, c.t_grid, mc);
  }
  if (op == "contraction") {
    ContractionAux aux;
    aux.multipliers = c.multipliers;
    aux.comparison_law = c.comparison;
    aux.domination_constant = c.domination_constant;
    return verify_contraction(c.id, contraction_case_from_string(c.variant), *c.array, *c.sequence, aux, c.t_grid, mc);
  }
  if (op == "max_lemmas") return verify_max_lemmas(c.id, *c.law_x, c.n_grid, c.theta_fractions, c.p, c.q, c.c);
  if (op == "lp_implies_tail") return verify_lp_implies_tail(c.id, *c.law_x, *c.law_y, c.p, c.q, c.c1, c.c2, c.n_max);
  if (op == "note8_chain") return verify_note8_chain(c.id, c.pairs, c.t_grid);
  if (op == "weighted_limsup") return limsup_report(c, mc);
  if (op == "mpz_bound") return verify_mpz_bound(c.id, c.family, static_cast<std::size_t>(c.n), c.p, c.q);
  throw Error(ErrorCode::InvalidCase, "unknown operation '" + op + "'");
}

}  // namespace

VerificationReport run_case(const CaseSpec& spec, std::uint64_t master_seed, unsigned workers) {
  McConfig mc = spec.mc;
  mc.master_seed = master_seed;
  mc.workers = workers;
  try {
    auto rep = dispatch(spec, mc);
    rep.master_seed = master_seed;
    return rep;
  } catch (const std::exception& e) {
    VerificationReport rep;
    rep.case_id = spec.id;
    rep.check = spec.op;
    rep.method = "none";
    rep.master_seed = master_seed;
    rep.verdict = Verdict::Inconclusive;
    rep.error = e.what();
    return rep;
  }
}

std::vector<VerificationReport> run_suite(const ExperimentConfig& cfg, const RunOptions& opts) {
  std::vector<VerificationReport> out;
  out.reserve(cfg.cases.size());
  const std::uint64_t seed = opts.seed.value_or(cfg.master_seed);
  for (const auto& c : cfg.cases) {
    if (opts.trials) {
      CaseSpec copy = c;
      copy.mc.trials = *opts.trials;
      out.push_back(run_case(copy, seed, opts.workers));
    } else {
      out.push_back(run_case(c, seed, opts.workers));
    }
  }
  return out;
}

}  // namespace decoupling
