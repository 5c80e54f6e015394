#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "decoupling/arrays.hpp"
#include "decoupling/norms.hpp"
#include "decoupling/random.hpp"
#include "decoupling/ustat.hpp"

namespace decoupling {

enum class EvalMode { Auto, Exact, MonteCarlo };

std::string to_string(EvalMode m);
EvalMode eval_mode_from_string(const std::string& s);

/// Monte Carlo and enumeration settings shared by every check.
struct McConfig {
  std::size_t trials = 10000;
  std::uint64_t master_seed = 0;
  std::size_t bootstrap = 200;
  double confidence = 0.95;
  EvalMode mode = EvalMode::Auto;
  std::uint64_t enumeration_budget = kDefaultEnumerationBudget;
  /// Tail checks: number of master seeds (master_seed, master_seed + 1, ...)
  /// whose Monte Carlo constants must agree within `stability_factor`.
  std::size_t stability_seeds = 1;
  double stability_factor = 2.0;
  /// Execution only; never changes results.
  unsigned workers = 1;

  /// Throws InvalidSpec: trials >= 100, bootstrap >= 200, confidence in (0.5, 1).
  void validate() const;
};

/// Constants read off the displayed sums in the moment decoupling proofs.
struct PaperConstants {
  int k = 1;
  double a = 0.0;           ///< sum_r C(k,r) (2r)^r, 0^0 = 1
  double a_centered = 0.0;  ///< k^k
  double b = 0.0;           ///< (1/k!) sum_r C(k,r) r^k

  static PaperConstants for_rank(int k);
};

/// A rearrangement-invariant functional of the law of ||.||.
struct RiFunctional {
  enum class Kind { Lp, Orlicz, DoubleStar, Lorentz };
  Kind kind = Kind::Lp;
  double p = 2.0;  ///< Lp order, or phi_t / double-star t, or Lorentz exponent
  std::optional<OrliczFunction> orlicz;
  int lorentz_grid = 256;

  static RiFunctional lp(double p);
  static RiFunctional luxemburg(OrliczFunction phi);
  static RiFunctional double_star_at(double t);
  static RiFunctional lorentz_power(double exponent, int grid = 256);

  double operator()(const EmpiricalDist& d) const;
  std::string label() const;
};

struct Estimate {
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

enum class Verdict { Pass, Fail, Inconclusive };
std::string to_string(Verdict v);

struct VerificationReport {
  std::string case_id;
  std::string check;     ///< operation name, e.g. "moment_decoupling"
  std::string theorem;   ///< statement checked, e.g. "AB(A)"
  std::string method;    ///< "exact" | "monte_carlo" | "surrogate"
  std::optional<Estimate> lhs;
  std::optional<Estimate> rhs;
  std::optional<Estimate> constant;
  std::optional<double> paper_bound;
  Verdict verdict = Verdict::Inconclusive;
  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> seed_path;
  std::size_t trials = 0;
  std::optional<std::string> error;
  nlohmann::json details = nlohmann::json::object();
  double runtime_seconds = 0.0;
};

// ---------------------------------------------------------------------------
// Identities

/// Exact E[Q(f; xi_{j_1}, ..., xi_{j_k}) | sum_{j<=r} xi_j] against
/// r^{-k} Q(f; (xi_1 + ... + xi_r)^k), by enumerating the r rows of length n
/// and grouping outcomes by their row-sum vector. Returns the largest norm of
/// the discrepancy over all conditioning cells.
double check_interchange_identity(const DiagonalFreeArray& f, const DistributionSpec& dist, std::size_t n,
                                  int r, const std::vector<int>& j_pattern,
                                  std::uint64_t budget = kDefaultEnumerationBudget);

struct PolarizationSummary {
  std::size_t cases = 0;
  double max_mo_vs_symmetrized = 0.0;   ///< Mazur-Orlicz vs Q(f-hat; X)
  double max_rademacher_vs_mo = 0.0;    ///< Rademacher form vs Mazur-Orlicz
};

/// Random arrays and Gaussian matrices, cycling through the given ranks/dims.
PolarizationSummary check_polarization(std::size_t cases, const std::vector<int>& ranks,
                                       const std::vector<int>& dims, int n, const SeedPath& seed);

// ---------------------------------------------------------------------------
// Moment (r.i. norm) decoupling

enum class MomentCase { AUpper, BLower, Triangle, Centering };
std::string to_string(MomentCase c);
MomentCase moment_case_from_string(const std::string& s);

VerificationReport verify_moment_decoupling(const std::string& case_id, MomentCase which,
                                            const DiagonalFreeArray& f, const SequenceSpec& spec,
                                            const RiFunctional& norm, const McConfig& cfg);

enum class UStatCase { APrime, BPrime };
std::string to_string(UStatCase c);
UStatCase ustat_case_from_string(const std::string& s);

VerificationReport verify_ustat_decoupling(const std::string& case_id, UStatCase which,
                                           const UStatKernel& kernel, const SequenceSpec& spec,
                                           const RiFunctional& norm, const McConfig& cfg);

// ---------------------------------------------------------------------------
// Tail comparisons

enum class TailKind { AtLeast, Greater };

/// Smallest C >= 1 (an infimum) such that tail_L(C t) <= C tail_R(t) for every
/// t in `levels`, with tail(x) = P(. >= x) or P(. > x). Throws DegenerateTails
/// when both tails vanish at every level.
double tail_constant(const EmpiricalDist& left, const EmpiricalDist& right, std::span<const double> levels,
                     TailKind kind);

enum class TailCase { ATail, BTail };
std::string to_string(TailCase c);
TailCase tail_case_from_string(const std::string& s);

VerificationReport verify_tail_decoupling(const std::string& case_id, TailCase which, const DiagonalFreeArray& f,
                                          const SequenceSpec& spec, const std::vector<double>& t_grid,
                                          const McConfig& cfg);

enum class ContractionCase { Multiplier, Maximal, Comparison };
std::string to_string(ContractionCase c);
ContractionCase contraction_case_from_string(const std::string& s);

struct ContractionAux {
  std::vector<double> multipliers;                 ///< multiplier case
  std::optional<DistributionSpec> comparison_law;  ///< eta, comparison case
  double domination_constant = 1.0;                ///< A in P(|xi|>t) <= A P(|eta|>t)
};

/// P(|X| > t) for one coordinate; closed form for every family.
double abs_tail(const DistributionSpec& dist, double t);

VerificationReport verify_contraction(const std::string& case_id, ContractionCase which, const DiagonalFreeArray& f,
                                      const SequenceSpec& spec, const ContractionAux& aux,
                                      const std::vector<double>& t_grid, const McConfig& cfg);

// ---------------------------------------------------------------------------
// Lemmas on maxima of i.i.d. variables and L^p-to-tail transfer

/// Law of max(X_1..X_n) for i.i.d. copies of X.
EmpiricalDist max_of_iid(const EmpiricalDist& x, std::size_t n);

/// Law of |xi| for a finitely supported coordinate law.
EmpiricalDist abs_law(const DistributionSpec& dist);

struct LemmaCheck {
  std::string lemma;
  std::size_t checks = 0;
  std::size_t violations = 0;
  std::size_t vacuous = 0;  ///< hypothesis not met, conclusion not examined
};

/// Exact checks of the four maximal lemmas on X = |xi|. `c <= 0` selects the
/// smallest admissible constant ||max||_q / ||max||_p.
std::vector<LemmaCheck> check_max_lemmas(const DistributionSpec& dist, std::size_t n, double theta, double p,
                                         double q, double c);

VerificationReport verify_max_lemmas(const std::string& case_id, const DistributionSpec& dist,
                                     const std::vector<std::size_t>& ns, const std::vector<double>& theta_fractions,
                                     double p, double q, double c);

/// Checks the hypotheses of the L^p-to-tail theorem for n = 1..n_max
/// (c1, c2 <= 0 select the smallest admissible constants; HypothesisFailed
/// when a given constant is too small), then the conclusion
/// P(X >= a / (6^{1/p} c2)) >= (2 c1^p)^{q/(p-q)} P(Y >= a) at every atom a of Y.
VerificationReport verify_lp_implies_tail(const std::string& case_id, const DistributionSpec& x_law,
                                          const DistributionSpec& y_law, double p, double q, double c1, double c2,
                                          std::size_t n_max = 0);

// ---------------------------------------------------------------------------
// Orlicz / rearrangement comparisons

/// Points of (0, 1] at which both double-star ratios and phi_t ratios are
/// examined: the grid plus the breakpoints of both laws.
std::vector<double> note8_levels(const EmpiricalDist& xi, const EmpiricalDist& eta, std::span<const double> grid);

struct Note8Result {
  double c2 = 0.0;  ///< sup_t ||xi||_{phi_t} / ||eta||_{phi_t}
  double c3 = 0.0;  ///< sup_t xi**(t) / eta**(t)
  bool sandwich_ok = true;
  bool chain_ok = true;
  std::size_t skipped = 0;
};

Note8Result note8_pair(const EmpiricalDist& xi, const EmpiricalDist& eta, std::span<const double> t_grid,
                       double tol = 1e-9);

VerificationReport verify_note8_chain(const std::string& case_id,
                                      const std::vector<std::pair<EmpiricalDist, EmpiricalDist>>& pairs,
                                      const std::vector<double>& t_grid, double tol = 1e-9);

/// Finite-horizon stand-in for the weighted limsup comparison: the smallest C
/// in `c_grid` with sup_t t^exponent P(xi >= t) <= sup_t t^exponent P(eta >= C t).
VerificationReport verify_weighted_limsup(const std::string& case_id, const EmpiricalDist& xi,
                                          const EmpiricalDist& eta, double exponent,
                                          const std::vector<double>& c_grid, const std::vector<double>& t_grid);

/// Exact L^q/L^p ratios over a family of degree-d Rademacher chaoses on n
/// signs, against [2(q-1)/(p-1)]^d.
VerificationReport verify_mpz_bound(const std::string& case_id, const std::vector<DiagonalFreeArray>& family,
                                    std::size_t n, double p, double q);

double rademacher_mpz_constant(int degree, double p, double q);

/// Law of ||Q(f; eps^k)|| for a Rademacher sequence of length n, exactly.
EmpiricalDist rademacher_chaos_law(const DiagonalFreeArray& f, std::size_t n,
                                   std::uint64_t budget = kDefaultEnumerationBudget);

}  // namespace decoupling
