#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>

#include "decoupling/verify.hpp"
#include "verify/engine.hpp"

namespace decoupling {

namespace {

double side_tail(const EmpiricalDist& d, double t, TailKind kind) {
  return kind == TailKind::AtLeast ? empirical_tail(d, t) : strict_tail(d, t);
}

// Smallest C >= 1 with tail_L(C t) <= C r. Between consecutive atoms of L
// above t the left tail is constant, so each piece (x_a, x_b] of x = C t
// contributes the candidate max(x_a / t, s / r) when that stays below x_b / t.
double level_constant(const EmpiricalDist& left, double t, double r) {
  const auto& atoms = left.atoms();
  std::vector<EmpiricalDist::Atom> above;  // atoms > t, ascending
  double s = 0.0;                          // P(L > t): the left tail just right of t
  for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) {
    if (it->value > t) {
      above.push_back(*it);
      s += it->weight;
    }
  }
  auto needed = [&](double mass) {
    if (mass <= 0.0) return 0.0;
    return r > 0.0 ? mass / r : std::numeric_limits<double>::infinity();
  };
  double xa = t;
  for (std::size_t i = 0; i <= above.size(); ++i) {
    const double xb = i < above.size() ? above[i].value : std::numeric_limits<double>::infinity();
    const double candidate = std::max({1.0, xa / t, needed(s)});
    if (candidate <= xb / t) return candidate;
    if (i < above.size()) {
      s -= above[i].weight;
      if (s < 1e-15) s = 0.0;
      xa = xb;
    }
  }
  return std::max(1.0, xa / t);
}

std::vector<double> checked_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw Error(ErrorCode::DomainError, "t grid is empty");
  std::vector<double> out;
  for (double t : grid) {
    if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorCode::DomainError, "t grid values must be positive");
    out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct TailSetup {
  detail::Side lhs;
  detail::Side rhs;
  TailKind kind = TailKind::AtLeast;
  std::string check;
  std::string theorem;
  nlohmann::json details = nlohmann::json::object();
};

nlohmann::json tail_curve(const EmpiricalDist& d, const std::vector<double>& grid, TailKind kind) {
  auto arr = nlohmann::json::array();
  for (double t : grid) arr.push_back(side_tail(d, t, kind));
  return arr;
}

VerificationReport run_tail_setup(const std::string& case_id, TailSetup setup, std::size_t n,
                                  const std::vector<double>& t_grid, const McConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto grid = checked_grid(t_grid);
  VerificationReport rep;
  rep.case_id = case_id;
  rep.check = setup.check;
  rep.theorem = setup.theorem;
  rep.master_seed = cfg.master_seed;
  const SeedPath base = detail::case_seed(case_id, cfg.master_seed, detail::kPurposeCases);
  rep.seed_path = base.path;
  rep.details = std::move(setup.details);
  rep.details["t_grid"] = grid;
  rep.details["tail"] = setup.kind == TailKind::AtLeast ? ">=" : ">";

  const bool exact = detail::use_exact(setup.lhs, setup.rhs, n, cfg);
  const auto laws = detail::collect_laws(setup.lhs, setup.rhs, n, cfg, base, exact);
  rep.details["left_tail"] = tail_curve(laws.lhs, grid, setup.kind);
  rep.details["right_tail"] = tail_curve(laws.rhs, grid, setup.kind);

  if (exact) {
    std::vector<double> levels = grid;
    for (const auto& a : laws.rhs.atoms()) {
      if (a.value > 0.0) levels.push_back(a.value);
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    const double c = tail_constant(laws.lhs, laws.rhs, levels, setup.kind);
    rep.method = "exact";
    rep.details["outcomes"] = laws.outcomes;
    rep.details["levels_examined"] = levels.size();
    rep.constant = detail::finite_estimate(c, c, c);
    rep.verdict = std::isfinite(c) ? Verdict::Pass : Verdict::Fail;
  } else {
    rep.method = "monte_carlo";
    rep.trials = cfg.trials;
    const double c = tail_constant(laws.lhs, laws.rhs, grid, setup.kind);
    const auto ci = detail::paired_bootstrap(
        laws.lhs_values, laws.rhs_values,
        [&](const EmpiricalDist& a, const EmpiricalDist& b) {
          try {
            return std::vector<double>{tail_constant(a, b, grid, setup.kind)};
          } catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateTails) throw;
            return std::vector<double>{1.0};
          }
        },
        cfg, derive_stream(base, detail::kPurposeBootstrap));
    rep.constant = detail::finite_estimate(c, ci[0].first, ci[0].second);

    std::vector<double> per_seed{c};
    for (std::size_t s = 1; s < cfg.stability_seeds; ++s) {
      McConfig other = cfg;
      other.master_seed = cfg.master_seed + s;
      const SeedPath other_base = detail::case_seed(case_id, other.master_seed, detail::kPurposeCases);
      const auto other_laws = detail::collect_laws(setup.lhs, setup.rhs, n, other, other_base, false);
      per_seed.push_back(tail_constant(other_laws.lhs, other_laws.rhs, grid, setup.kind));
    }
    const auto [lo, hi] = std::minmax_element(per_seed.begin(), per_seed.end());
    const double spread = *hi / *lo;
    rep.details["stability_constants"] = per_seed;
    rep.details["stability_ratio"] = spread;
    const bool finite = std::all_of(per_seed.begin(), per_seed.end(), [](double v) { return std::isfinite(v); });
    rep.verdict = finite && spread <= cfg.stability_factor ? Verdict::Pass : Verdict::Inconclusive;
  }
  rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

void require_symmetric(const DistributionSpec& d, const char* what) {
  if (!d.symmetric()) throw Error(ErrorCode::PreconditionViolated, std::string(what) + " must be symmetric");
}

// Points where P(|xi| > t) or P(|eta| > t) can jump, with their left limits,
// plus a uniform sweep for continuous laws.
std::vector<double> domination_points(const DistributionSpec& xi, const DistributionSpec& eta) {
  std::vector<double> pts{0.0};
  double top = 1.0;
  for (const auto* d : {&xi, &eta}) {
    switch (d->family) {
      case Family::Gaussian: top = std::max(top, 12.0); break;
      case Family::Uniform: top = std::max({top, std::fabs(d->params[0]), std::fabs(d->params[1])}); break;
      default:
        for (const auto& [v, p] : d->support()) {
          const double a = std::fabs(v);
          pts.push_back(a);
          if (a > 0.0) pts.push_back(a * (1.0 - 1e-9));
          top = std::max(top, a);
        }
    }
  }
  constexpr int kSweep = 2000;
  for (int i = 1; i <= kSweep; ++i) pts.push_back(top * i / kSweep);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace

double tail_constant(const EmpiricalDist& left, const EmpiricalDist& right, std::span<const double> levels,
                     TailKind kind) {
  bool informative = false;
  double worst = 1.0;
  for (double t : levels) {
    if (!(t > 0.0)) continue;
    const double l = side_tail(left, t, kind);
    const double r = side_tail(right, t, kind);
    if (l > 0.0 || r > 0.0) informative = true;
    worst = std::max(worst, level_constant(left, t, r));
  }
  if (!informative) throw Error(ErrorCode::DegenerateTails, "both tails vanish on every level");
  return worst;
}

double abs_tail(const DistributionSpec& dist, double t) {
  if (t < 0.0) return 1.0;
  switch (dist.family) {
    case Family::Rademacher: return t < 1.0 ? 1.0 : 0.0;
    case Family::Gaussian: return std::erfc(t / std::sqrt(2.0));
    case Family::Uniform: {
      const double a = dist.params[0];
      const double b = dist.params[1];
      const double right = std::max(0.0, b - std::max(a, t));
      const double left = std::max(0.0, std::min(b, -t) - a);
      return (right + left) / (b - a);
    }
    case Family::Bernoulli: return t < 1.0 ? dist.params[0] : 0.0;
    case Family::Discrete: {
      double s = 0.0;
      for (const auto& [v, p] : dist.support()) {
        if (std::fabs(v) > t) s += p;
      }
      return s;
    }
  }
  return 0.0;
}

VerificationReport verify_tail_decoupling(const std::string& case_id, TailCase which, const DiagonalFreeArray& f,
                                          const SequenceSpec& spec, const std::vector<double>& t_grid,
                                          const McConfig& cfg) {
  spec.dist.validate();
  if (f.max_index() > static_cast<int>(spec.length)) throw Error(ErrorCode::IndexOutOfRange, "array exceeds length");
  const int k = f.rank();
  const NormTag tag = f.norm();
  const auto coupled = coupled_assignment(k);
  const auto decoupled = decoupled_assignment(k);

  TailSetup s;
  s.check = "tail_decoupling";
  s.kind = TailKind::AtLeast;
  s.details["case"] = to_string(which);
  s.details["k"] = k;
  s.details["n"] = spec.length;
  s.details["family"] = to_string(spec.dist.family);
  if (which == TailCase::ATail) {
    if (spec.structure != RowStructure::IidRows) throw Error(ErrorCode::PreconditionViolated, "A_tail needs i.i.d. rows");
    require_symmetric(spec.dist, "A_tail coordinate law");
    s.theorem = "ABtail(A'')";
    s.lhs = {spec.dist, spec.structure, k, [&f, tag, coupled](const SampleMatrix& x) { return tag(eval_poly(f, x, coupled)); }};
    s.rhs = {spec.dist, spec.structure, k,
             [&f, tag, decoupled](const SampleMatrix& x) { return tag(eval_poly(f, x, decoupled)); }};
  } else {
    s.theorem = "ABtail(B'')";
    auto fhat = std::make_shared<DiagonalFreeArray>(symmetrize(f));
    s.lhs = {spec.dist, spec.structure, k,
             [fhat, tag, decoupled](const SampleMatrix& x) { return tag(eval_poly(*fhat, x, decoupled)); }};
    s.rhs = {spec.dist, spec.structure, k, [&f, tag, coupled](const SampleMatrix& x) { return tag(eval_poly(f, x, coupled)); }};
  }
  return run_tail_setup(case_id, std::move(s), spec.length, t_grid, cfg);
}

VerificationReport verify_contraction(const std::string& case_id, ContractionCase which, const DiagonalFreeArray& f,
                                      const SequenceSpec& spec, const ContractionAux& aux,
                                      const std::vector<double>& t_grid, const McConfig& cfg) {
  spec.dist.validate();
  if (f.max_index() > static_cast<int>(spec.length)) throw Error(ErrorCode::IndexOutOfRange, "array exceeds length");
  require_symmetric(spec.dist, "coordinate law");
  const int k = f.rank();
  const NormTag tag = f.norm();
  const auto coupled = coupled_assignment(k);
  auto full = [&f, tag, coupled](const SampleMatrix& x) { return tag(eval_poly(f, x, coupled)); };

  TailSetup s;
  s.check = "contraction";
  s.kind = TailKind::Greater;
  s.details["case"] = to_string(which);
  s.details["k"] = k;
  s.details["n"] = spec.length;
  s.details["family"] = to_string(spec.dist.family);
  s.rhs = {spec.dist, spec.structure, 1, full};

  switch (which) {
    case ContractionCase::Multiplier: {
      if (aux.multipliers.size() != spec.length) {
        throw Error(ErrorCode::LengthMismatch, "multipliers must match the sequence length");
      }
      for (double v : aux.multipliers) {
        if (!(std::fabs(v) <= 1.0)) throw Error(ErrorCode::PreconditionViolated, "multipliers must satisfy |s_i| <= 1");
      }
      s.theorem = "contrRad(i)";
      s.details["multipliers"] = aux.multipliers;
      auto mult = std::make_shared<std::vector<double>>(aux.multipliers);
      s.lhs = {spec.dist, spec.structure, 1, [&f, tag, coupled, mult](const SampleMatrix& x) {
                 return tag(eval_poly(f, scale_rows(x, *mult), coupled));
               }};
      break;
    }
    case ContractionCase::Maximal:
      s.theorem = "contrRad(ii)";
      s.lhs = {spec.dist, spec.structure, 1, [&f, k](const SampleMatrix& x) {
                 std::vector<std::span<const double>> slots(static_cast<std::size_t>(k), x.row(0));
                 return max_truncation_norm(f, slots);
               }};
      break;
    case ContractionCase::Comparison: {
      if (!aux.comparison_law) throw Error(ErrorCode::InvalidCase, "comparison case needs a comparison law");
      const DistributionSpec& eta = *aux.comparison_law;
      eta.validate();
      require_symmetric(eta, "comparison law");
      if (!(aux.domination_constant > 0.0)) throw Error(ErrorCode::PreconditionViolated, "domination constant must be positive");
      double worst = 0.0;
      for (double t : domination_points(spec.dist, eta)) {
        const double lx = abs_tail(spec.dist, t);
        const double ly = abs_tail(eta, t);
        if (lx > aux.domination_constant * ly + 1e-12) {
          throw Error(ErrorCode::PreconditionViolated,
                      "P(|xi| > t) <= A P(|eta| > t) fails at t = " + std::to_string(t));
        }
        if (ly > 0.0) worst = std::max(worst, lx / ly);
      }
      s.theorem = "compRad";
      s.details["comparison_family"] = to_string(eta.family);
      s.details["domination_constant"] = aux.domination_constant;
      s.details["observed_domination"] = worst;
      s.lhs = {spec.dist, spec.structure, 1, full};
      s.rhs = {eta, spec.structure, 1, full};
      break;
    }
  }
  return run_tail_setup(case_id, std::move(s), spec.length, t_grid, cfg);
}

}  // namespace decoupling
