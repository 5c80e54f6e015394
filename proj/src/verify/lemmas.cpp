#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "decoupling/verify.hpp"

namespace decoupling {

namespace {

constexpr double kTol = 1e-12;

void require_orders(double p, double q) {
  if (!(p > 0.0 && q > p) || !std::isfinite(q)) throw Error(ErrorCode::DomainError, "need 0 < p < q < inf");
}

// ||Z||_q / ||Z||_p, taken as 1 for the zero law.
double moment_ratio(const EmpiricalDist& z, double p, double q) {
  const double zp = moment_norm(z, p);
  return zp > 0.0 ? moment_norm(z, q) / zp : 1.0;
}

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

EmpiricalDist max_of_iid(const EmpiricalDist& x, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::DomainError, "n must be positive");
  const auto& atoms = x.atoms();
  const auto cum = x.breakpoints();
  std::vector<EmpiricalDist::Atom> out;
  out.reserve(atoms.size());
  double below_prev = 1.0;  // P(X < v_{j-1}) ^ n
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    const double below = std::pow(std::max(0.0, 1.0 - cum[j]), static_cast<double>(n));
    out.push_back({atoms[j].value, below_prev - below});
    below_prev = below;
  }
  return EmpiricalDist::from_weighted(std::move(out));
}

EmpiricalDist abs_law(const DistributionSpec& dist) {
  dist.validate();
  std::vector<EmpiricalDist::Atom> atoms;
  for (const auto& [v, p] : dist.support()) atoms.push_back({std::fabs(v), p});
  return EmpiricalDist::from_weighted(std::move(atoms));
}

std::vector<LemmaCheck> check_max_lemmas(const DistributionSpec& dist, std::size_t n, double theta, double p,
                                         double q, double c) {
  if (n == 0) throw Error(ErrorCode::DomainError, "n must be positive");
  if (!(theta >= 0.0 && theta <= static_cast<double>(n))) throw Error(ErrorCode::DomainError, "need 0 <= theta <= n");
  require_orders(p, q);
  const EmpiricalDist x = abs_law(dist);
  const EmpiricalDist z = max_of_iid(x, n);
  const double nn = static_cast<double>(n);

  std::vector<LemmaCheck> out(4);
  out[0].lemma = "max_tail_bounds";
  out[1].lemma = "moment_ratio_small_tail";
  out[2].lemma = "tail_to_max_moment";
  out[3].lemma = "max_moment_to_tail";

  // First lemma: both implications at every level where P(X >= alpha) changes,
  // plus one level above the support.
  std::vector<double> alphas;
  for (const auto& a : x.atoms()) {
    if (a.value > 0.0) alphas.push_back(a.value);
  }
  alphas.push_back(x.max_value() + 1.0);
  for (double alpha : alphas) {
    const double px = empirical_tail(x, alpha);
    const double pmax = 1.0 - std::pow(1.0 - px, nn);
    if (std::fabs(pmax - empirical_tail(z, alpha)) > 1e-9) {
      throw Error(ErrorCode::NonConvergence, "law of the maximum is inconsistent");
    }
    if (px >= theta / nn * (1.0 - kTol)) {
      ++out[0].checks;
      if (pmax < theta / (1.0 + theta) - kTol) ++out[0].violations;
    } else {
      ++out[0].vacuous;
    }
    if (px <= theta / nn * (1.0 + kTol) + kTol) {
      ++out[0].checks;
      if (pmax > theta + kTol) ++out[0].violations;
    } else {
      ++out[0].vacuous;
    }
  }

  const double c_auto = moment_ratio(z, p, q);
  const double cc = c > 0.0 ? c : c_auto;
  const bool hypothesis = moment_norm(z, q) <= cc * moment_norm(z, p) * (1.0 + kTol);
  const double threshold = std::pow(2.0 * std::pow(cc, p), q / (p - q));
  const double root2 = std::pow(2.0, 1.0 / p);
  const double zp = moment_norm(z, p);
  const double zq = moment_norm(z, q);

  std::vector<double> levels{0.0};
  for (const auto& a : z.atoms()) levels.push_back(a.value);

  // Second lemma, applied to Z = max of n copies.
  for (double t : levels) {
    if (!hypothesis) {
      ++out[1].vacuous;
      continue;
    }
    if (strict_tail(z, t) <= threshold) {
      ++out[1].checks;
      const bool ok = zp <= root2 * t * (1.0 + kTol) + 1e-300 && zq <= root2 * cc * t * (1.0 + kTol) + 1e-300;
      if (!ok) ++out[1].violations;
    } else {
      ++out[1].vacuous;
    }
  }

  // Third lemma: a small tail of X bounds the p-th moment of the maximum.
  std::vector<double> x_levels{0.0};
  for (const auto& a : x.atoms()) x_levels.push_back(a.value);
  for (double t : x_levels) {
    for (double tail : {empirical_tail(x, t), strict_tail(x, t)}) {
      if (!hypothesis || tail > threshold / nn * (1.0 + kTol)) {
        ++out[2].vacuous;
        continue;
      }
      ++out[2].checks;
      if (zp > root2 * t * (1.0 + kTol) + 1e-300) ++out[2].violations;
    }
  }

  // Fourth lemma at its tightest level t = ||Z||_p.
  if (zp > 0.0) {
    ++out[3].checks;
    if (empirical_tail(x, root2 * zp * (1.0 - kTol)) > 1.0 / nn + kTol) ++out[3].violations;
  } else {
    ++out[3].vacuous;
  }
  return out;
}

VerificationReport verify_max_lemmas(const std::string& case_id, const DistributionSpec& dist,
                                     const std::vector<std::size_t>& ns, const std::vector<double>& theta_fractions,
                                     double p, double q, double c) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.case_id = case_id;
  rep.check = "max_lemmas";
  rep.theorem = "maximal_lemmas";
  rep.method = "exact";
  if (ns.empty() || theta_fractions.empty()) throw Error(ErrorCode::DomainError, "empty n or theta grid");
  std::vector<LemmaCheck> totals;
  for (std::size_t n : ns) {
    for (double frac : theta_fractions) {
      if (!(frac >= 0.0 && frac <= 1.0)) throw Error(ErrorCode::DomainError, "theta fractions must lie in [0, 1]");
      const auto part = check_max_lemmas(dist, n, frac * static_cast<double>(n), p, q, c);
      if (totals.empty()) {
        totals = part;
      } else {
        for (std::size_t i = 0; i < part.size(); ++i) {
          totals[i].checks += part[i].checks;
          totals[i].violations += part[i].violations;
          totals[i].vacuous += part[i].vacuous;
        }
      }
    }
  }
  std::size_t violations = 0;
  auto lemmas = nlohmann::json::array();
  for (const auto& t : totals) {
    violations += t.violations;
    lemmas.push_back({{"lemma", t.lemma}, {"checks", t.checks}, {"violations", t.violations}, {"vacuous", t.vacuous}});
  }
  rep.details["lemmas"] = lemmas;
  rep.details["n_grid"] = ns;
  rep.details["theta_fractions"] = theta_fractions;
  rep.details["p"] = p;
  rep.details["q"] = q;
  rep.details["violations"] = violations;
  rep.verdict = violations == 0 ? Verdict::Pass : Verdict::Fail;
  rep.runtime_seconds = elapsed(start);
  return rep;
}

VerificationReport verify_lp_implies_tail(const std::string& case_id, const DistributionSpec& x_law,
                                          const DistributionSpec& y_law, double p, double q, double c1, double c2,
                                          std::size_t n_max) {
  const auto start = std::chrono::steady_clock::now();
  require_orders(p, q);
  const EmpiricalDist x = abs_law(x_law);
  const EmpiricalDist y = abs_law(y_law);

  // The argument uses the hypotheses at mu = ceil(1 / (2 P(Y >= a))) for each atom a.
  std::size_t horizon = std::max<std::size_t>(n_max, 1);
  for (const auto& a : y.atoms()) {
    const double tail = empirical_tail(y, a.value);
    if (a.value > 0.0 && tail > 0.0) {
      horizon = std::max(horizon, static_cast<std::size_t>(std::ceil(1.0 / (2.0 * tail))));
    }
  }

  double c1_needed = 1.0;
  double c2_needed = 0.0;
  for (std::size_t n = 1; n <= horizon; ++n) {
    const EmpiricalDist zx = max_of_iid(x, n);
    const EmpiricalDist zy = max_of_iid(y, n);
    const double xp = moment_norm(zx, p);
    const double yp = moment_norm(zy, p);
    c1_needed = std::max(c1_needed, moment_ratio(zx, p, q));
    if (yp > 0.0) {
      c2_needed = std::max(c2_needed, xp > 0.0 ? yp / xp : std::numeric_limits<double>::infinity());
    }
  }
  if (!std::isfinite(c2_needed)) throw Error(ErrorCode::HypothesisFailed, "Y is not dominated by a zero X");
  const double c1_used = c1 > 0.0 ? c1 : c1_needed;
  const double c2_used = c2 > 0.0 ? c2 : std::max(c2_needed, 1e-300);
  if (c1_used < c1_needed * (1.0 - kTol)) {
    throw Error(ErrorCode::HypothesisFailed, "c1 = " + std::to_string(c1) + " is below the required " +
                                                 std::to_string(c1_needed));
  }
  if (c2_used < c2_needed * (1.0 - kTol)) {
    throw Error(ErrorCode::HypothesisFailed, "c2 = " + std::to_string(c2) + " is below the required " +
                                                 std::to_string(c2_needed));
  }

  const double shrink = 1.0 / (std::pow(6.0, 1.0 / p) * c2_used);
  const double factor = std::pow(2.0 * std::pow(c1_used, p), q / (p - q));
  std::size_t checks = 0;
  std::size_t violations = 0;
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& a : y.atoms()) {
    if (a.value <= 0.0) continue;
    const double py = empirical_tail(y, a.value);
    if (py <= 0.0) continue;
    ++checks;
    const double lhs = empirical_tail(x, a.value * shrink);
    const double rhs = factor * py;
    margin = std::min(margin, lhs / rhs);
    if (lhs < rhs * (1.0 - kTol)) ++violations;
  }

  VerificationReport rep;
  rep.case_id = case_id;
  rep.check = "lp_implies_tail";
  rep.theorem = "lp_to_tail";
  rep.method = "exact";
  rep.details["p"] = p;
  rep.details["q"] = q;
  rep.details["c1"] = c1_used;
  rep.details["c2"] = c2_used;
  rep.details["c1_required"] = c1_needed;
  rep.details["c2_required"] = c2_needed;
  rep.details["n_checked"] = horizon;
  rep.details["level_scale"] = shrink;
  rep.details["probability_factor"] = factor;
  rep.details["checks"] = checks;
  rep.details["violations"] = violations;
  if (std::isfinite(margin)) rep.details["min_margin"] = margin;
  rep.verdict = violations == 0 ? Verdict::Pass : Verdict::Fail;
  rep.runtime_seconds = elapsed(start);
  return rep;
}

}  // namespace decoupling
