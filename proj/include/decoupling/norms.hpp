#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "decoupling/error.hpp"

namespace decoupling {

/// Law of a nonnegative random variable with finitely many atoms, stored in
/// descending order of value with equal values merged.
class EmpiricalDist {
 public:
  struct Atom {
    double value;
    double weight;
  };

  EmpiricalDist() = default;

  /// Weights must be positive (zeros are dropped) and sum to 1 within 1e-12;
  /// values must be finite and nonnegative.
  static EmpiricalDist from_weighted(std::vector<Atom> atoms);

  /// Equal weights 1/N.
  static EmpiricalDist from_samples(std::span<const double> values);

  /// Multiplicities `counts` over a sample already sorted in descending order;
  /// entries with count 0 are skipped. Used to materialize bootstrap resamples.
  static EmpiricalDist from_sorted_counts(std::span<const double> sorted_desc,
                                          std::span<const std::uint32_t> counts);

  static EmpiricalDist point_mass(double value);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  double max_value() const noexcept { return atoms_.empty() ? 0.0 : atoms_.front().value; }
  bool is_zero() const noexcept { return max_value() == 0.0; }

  /// Law of c * xi for c >= 0.
  EmpiricalDist scaled(double c) const;

  /// Cumulative weights W_j = w_1 + ... + w_j, the breakpoints of xi*.
  std::vector<double> breakpoints() const;

 private:
  explicit EmpiricalDist(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {}
  std::vector<Atom> atoms_;
};

/// xi*(t) = sup{s : P(xi >= s) > t}, the right-continuous inverse of the tail;
/// xi*(1) = 0. Throws DomainError outside (0, 1].
double decreasing_rearrangement(const EmpiricalDist& d, double t);

/// xi**(t) = (1/t) int_0^t xi*(u) du, integrated exactly over the steps.
double double_star(const EmpiricalDist& d, double t);

/// (sum w v^p)^(1/p) for p >= 1; p = inf gives the largest atom.
double lp_norm(const EmpiricalDist& d, double p);

/// Same formula for any p > 0 (a quasi-norm below 1).
double moment_norm(const EmpiricalDist& d, double p);

/// E xi^p, without the root.
double moment(const EmpiricalDist& d, double p);

/// P(xi >= t) for t >= 0.
double empirical_tail(const EmpiricalDist& d, double t);

/// P(xi > t).
double strict_tail(const EmpiricalDist& d, double t);

/// Nondecreasing phi: [0, inf) -> [0, inf) with phi(0) = 0.
class OrliczFunction {
 public:
  enum class Kind { Power, PhiT, Table };

  /// phi(x) = x^p.
  static OrliczFunction power(double p);
  /// phi_t(x) = (x - 1)_+ / t.
  static OrliczFunction phi_t(double t);
  /// Piecewise-linear through (x_i, y_i), extended past the last point with
  /// the last slope. Needs x_0 = 0, y_0 = 0, increasing x, nondecreasing y.
  static OrliczFunction table(std::vector<std::pair<double, double>> points);

  Kind kind() const noexcept { return kind_; }
  double parameter() const noexcept { return param_; }
  double operator()(double x) const;

 private:
  Kind kind_ = Kind::Power;
  double param_ = 1.0;
  std::vector<std::pair<double, double>> points_;
};

inline constexpr int kLuxemburgMaxIterations = 128;

/// Luxemburg gauge inf{lambda > 0 : E phi(xi / lambda) <= 1}, by bisection on
/// lambda to relative tolerance `rel_tol`. Returns the feasible end of the
/// final bracket. Throws NonConvergence past `max_iterations`.
double orlicz_norm(const EmpiricalDist& d, const OrliczFunction& phi, double rel_tol = 1e-10,
                   int max_iterations = kLuxemburgMaxIterations);

/// Increasing weight on [0, 1], optionally cut to zero from x0 on.
class WeightFunction {
 public:
  /// w(x) = x^a.
  static WeightFunction power(double a);
  /// Piecewise-linear through (x_i, w_i) on [0, 1], nondecreasing.
  static WeightFunction table(std::vector<std::pair<double, double>> points);

  WeightFunction with_cutoff(double x0) const;

  /// Value of the uncut weight; continuous, so also its left limit.
  double raw(double x) const;
  std::optional<double> cutoff() const noexcept { return cutoff_; }

 private:
  double exponent_ = 0.0;
  std::vector<std::pair<double, double>> points_;
  std::optional<double> cutoff_;
};

/// sup over x in (0, 1) of w(x) xi*(x). Since xi* is a right-continuous step
/// and w is monotone, the sup over the step [W_{j-1}, W_j) is w(W_j^-) v_j;
/// those values and the uniform grid {g / grid} are both examined.
double lorentz_quasinorm(const EmpiricalDist& d, const WeightFunction& w, int grid);

/// max over nonzero members of ||Z||_q / ||Z||_p for 0 < p < q (q may be inf).
/// Throws EmptyFamily when every member is identically zero.
double mpz_ratio(std::span<const EmpiricalDist> family, double q, double p);

}  // namespace decoupling
