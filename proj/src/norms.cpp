#include "decoupling/norms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "decoupling/numeric.hpp"

namespace decoupling {

namespace {

std::vector<EmpiricalDist::Atom> merge_sorted(std::vector<EmpiricalDist::Atom> atoms) {
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const auto& a, const auto& b) { return a.value > b.value; });
  std::vector<EmpiricalDist::Atom> out;
  out.reserve(atoms.size());
  for (const auto& a : atoms) {
    if (!out.empty() && out.back().value == a.value) {
      out.back().weight += a.weight;
    } else {
      out.push_back(a);
    }
  }
  return out;
}

void check_unit_interval(double t, const char* what) {
  if (!(t > 0.0 && t <= 1.0)) {
    throw Error(ErrorCode::DomainError, std::string(what) + " needs t in (0, 1], got " + std::to_string(t));
  }
}

}  // namespace

EmpiricalDist EmpiricalDist::from_weighted(std::vector<Atom> atoms) {
  CompensatedSum total;
  std::vector<Atom> kept;
  kept.reserve(atoms.size());
  for (const auto& a : atoms) {
    if (!std::isfinite(a.value) || a.value < 0.0) {
      throw Error(ErrorCode::DomainError, "atom values must be finite and nonnegative");
    }
    if (!(a.weight >= 0.0) || !std::isfinite(a.weight)) {
      throw Error(ErrorCode::DomainError, "atom weights must be nonnegative");
    }
    if (a.weight == 0.0) continue;
    total.add(a.weight);
    kept.push_back(a);
  }
  if (kept.empty() || std::fabs(total.value() - 1.0) > 1e-12) {
    throw Error(ErrorCode::DomainError, "weights must sum to 1, got " + std::to_string(total.value()));
  }
  return EmpiricalDist(merge_sorted(std::move(kept)));
}

EmpiricalDist EmpiricalDist::from_samples(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::DomainError, "empty sample");
  const double w = 1.0 / static_cast<double>(values.size());
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted) {
    if (!std::isfinite(v) || v < 0.0) throw Error(ErrorCode::DomainError, "sample values must be finite and >= 0");
  }
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::vector<Atom> atoms;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    atoms.push_back({sorted[i], static_cast<double>(j - i) * w});
    i = j;
  }
  return EmpiricalDist(std::move(atoms));
}

EmpiricalDist EmpiricalDist::from_sorted_counts(std::span<const double> sorted_desc,
                                                std::span<const std::uint32_t> counts) {
  if (sorted_desc.size() != counts.size()) throw Error(ErrorCode::LengthMismatch, "from_sorted_counts");
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw Error(ErrorCode::DomainError, "no mass");
  const double inv = 1.0 / static_cast<double>(total);
  std::vector<Atom> atoms;
  std::uint64_t run = 0;
  for (std::size_t i = 0; i < sorted_desc.size(); ++i) {
    run += counts[i];
    const bool last_of_value = i + 1 == sorted_desc.size() || sorted_desc[i + 1] != sorted_desc[i];
    if (last_of_value && run > 0) {
      atoms.push_back({sorted_desc[i], static_cast<double>(run) * inv});
      run = 0;
    } else if (last_of_value) {
      run = 0;
    }
  }
  return EmpiricalDist(std::move(atoms));
}

EmpiricalDist EmpiricalDist::point_mass(double value) { return from_weighted({{value, 1.0}}); }

EmpiricalDist EmpiricalDist::scaled(double c) const {
  if (!(c >= 0.0) || !std::isfinite(c)) throw Error(ErrorCode::DomainError, "scale must be finite and >= 0");
  std::vector<Atom> out = atoms_;
  for (auto& a : out) a.value *= c;
  return EmpiricalDist(merge_sorted(std::move(out)));
}

std::vector<double> EmpiricalDist::breakpoints() const {
  std::vector<double> out;
  out.reserve(atoms_.size());
  CompensatedSum acc;
  for (const auto& a : atoms_) {
    acc.add(a.weight);
    out.push_back(std::min(acc.value(), 1.0));
  }
  if (!out.empty()) out.back() = 1.0;
  return out;
}

double decreasing_rearrangement(const EmpiricalDist& d, double t) {
  check_unit_interval(t, "decreasing_rearrangement");
  const auto bp = d.breakpoints();
  // First atom whose cumulative weight exceeds t; none at t = 1.
  auto it = std::upper_bound(bp.begin(), bp.end(), t);
  if (it == bp.end()) return 0.0;
  return d.atoms()[static_cast<std::size_t>(it - bp.begin())].value;
}

double double_star(const EmpiricalDist& d, double t) {
  check_unit_interval(t, "double_star");
  const auto bp = d.breakpoints();
  CompensatedSum integral;
  double left = 0.0;
  for (std::size_t j = 0; j < bp.size() && left < t; ++j) {
    const double right = std::min(bp[j], t);
    integral.add(d.atoms()[j].value * (right - left));
    left = bp[j];
  }
  return integral.value() / t;
}

double moment(const EmpiricalDist& d, double p) {
  if (!(p > 0.0)) throw Error(ErrorCode::DomainError, "moment order must be positive");
  CompensatedSum s;
  for (const auto& a : d.atoms()) s.add(a.weight * std::pow(a.value, p));
  return s.value();
}

double moment_norm(const EmpiricalDist& d, double p) {
  if (!(p > 0.0)) throw Error(ErrorCode::DomainError, "norm order must be positive");
  const double mx = d.max_value();
  if (std::isinf(p) || mx == 0.0) return mx;
  // Scaled by the largest atom so large p neither overflows nor underflows.
  CompensatedSum s;
  for (const auto& a : d.atoms()) s.add(a.weight * std::pow(a.value / mx, p));
  return mx * std::pow(s.value(), 1.0 / p);
}

double lp_norm(const EmpiricalDist& d, double p) {
  if (!(p >= 1.0)) throw Error(ErrorCode::DomainError, "lp_norm needs p >= 1");
  return moment_norm(d, p);
}

double empirical_tail(const EmpiricalDist& d, double t) {
  if (!(t >= 0.0)) throw Error(ErrorCode::DomainError, "tail level must be >= 0");
  CompensatedSum s;
  for (const auto& a : d.atoms()) {
    if (a.value < t) break;
    s.add(a.weight);
  }
  return std::min(s.value(), 1.0);
}

double strict_tail(const EmpiricalDist& d, double t) {
  if (!(t >= 0.0)) throw Error(ErrorCode::DomainError, "tail level must be >= 0");
  CompensatedSum s;
  for (const auto& a : d.atoms()) {
    if (a.value <= t) break;
    s.add(a.weight);
  }
  return std::min(s.value(), 1.0);
}

OrliczFunction OrliczFunction::power(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw Error(ErrorCode::DomainError, "power Orlicz function needs p > 0");
  OrliczFunction f;
  f.kind_ = Kind::Power;
  f.param_ = p;
  return f;
}

OrliczFunction OrliczFunction::phi_t(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorCode::DomainError, "phi_t needs t > 0");
  OrliczFunction f;
  f.kind_ = Kind::PhiT;
  f.param_ = t;
  return f;
}

OrliczFunction OrliczFunction::table(std::vector<std::pair<double, double>> points) {
  if (points.size() < 2 || points.front() != std::pair<double, double>{0.0, 0.0}) {
    throw Error(ErrorCode::DomainError, "Orlicz table must start at (0, 0) and have >= 2 points");
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].first > points[i - 1].first) || points[i].second < points[i - 1].second) {
      throw Error(ErrorCode::DomainError, "Orlicz table must be increasing in x and nondecreasing in y");
    }
  }
  OrliczFunction f;
  f.kind_ = Kind::Table;
  f.points_ = std::move(points);
  return f;
}

double OrliczFunction::operator()(double x) const {
  switch (kind_) {
    case Kind::Power:
      return std::pow(x, param_);
    case Kind::PhiT:
      return std::max(x - 1.0, 0.0) / param_;
    case Kind::Table: {
      auto it = std::upper_bound(points_.begin(), points_.end(), x,
                                 [](double v, const auto& p) { return v < p.first; });
      const auto& [x1, y1] = it == points_.end() ? *(it - 1) : *it;
      const auto& [x0, y0] = it == points_.end() ? *(it - 2) : *(it - 1);
      return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    }
  }
  return 0.0;
}

double orlicz_norm(const EmpiricalDist& d, const OrliczFunction& phi, double rel_tol, int max_iterations) {
  if (d.is_zero()) return 0.0;
  auto modular = [&](double lambda) {
    CompensatedSum s;
    for (const auto& a : d.atoms()) s.add(a.weight * phi(a.value / lambda));
    return s.value();
  };
  // The modular is nonincreasing in lambda; bracket the crossing of 1.
  double hi = d.max_value();
  int guard = 0;
  while (modular(hi) > 1.0) {
    hi *= 2.0;
    if (++guard > 2100) throw Error(ErrorCode::NonConvergence, "no feasible upper bracket");
  }
  double lo = hi;
  guard = 0;
  while (modular(lo) <= 1.0) {
    lo *= 0.5;
    if (++guard > 2100 || lo == 0.0) {
      throw Error(ErrorCode::NonConvergence, "modular stays <= 1 as lambda -> 0");
    }
  }
  for (int it = 0; it < max_iterations; ++it) {
    if (hi - lo <= rel_tol * hi) return hi;
    const double mid = 0.5 * (lo + hi);
    if (modular(mid) <= 1.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  if (hi - lo <= rel_tol * hi) return hi;
  throw Error(ErrorCode::NonConvergence, "Luxemburg bisection did not reach tolerance");
}

WeightFunction WeightFunction::power(double a) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw Error(ErrorCode::DomainError, "weight exponent must be >= 0");
  WeightFunction w;
  w.exponent_ = a;
  return w;
}

WeightFunction WeightFunction::table(std::vector<std::pair<double, double>> points) {
  if (points.size() < 2 || points.front().first != 0.0 || points.back().first != 1.0) {
    throw Error(ErrorCode::DomainError, "weight table must span [0, 1]");
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].first > points[i - 1].first) || points[i].second < points[i - 1].second) {
      throw Error(ErrorCode::DomainError, "weight table must be nondecreasing");
    }
  }
  if (points.front().second < 0.0) throw Error(ErrorCode::DomainError, "weights must be >= 0");
  WeightFunction w;
  w.points_ = std::move(points);
  return w;
}

WeightFunction WeightFunction::with_cutoff(double x0) const {
  if (!(x0 > 0.0)) throw Error(ErrorCode::DomainError, "cutoff must be positive");
  WeightFunction w = *this;
  w.cutoff_ = x0;
  return w;
}

double WeightFunction::raw(double x) const {
  if (points_.empty()) return std::pow(x, exponent_);
  auto it = std::upper_bound(points_.begin(), points_.end(), x,
                             [](double v, const auto& p) { return v < p.first; });
  if (it == points_.begin()) return points_.front().second;
  if (it == points_.end()) return points_.back().second;
  const auto& [x0, y0] = *(it - 1);
  const auto& [x1, y1] = *it;
  return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

double lorentz_quasinorm(const EmpiricalDist& d, const WeightFunction& w, int grid) {
  if (grid < 1) throw Error(ErrorCode::DomainError, "grid must be >= 1");
  const double limit = std::min(1.0, w.cutoff().value_or(1.0));
  const auto bp = d.breakpoints();
  double best = 0.0;
  double left = 0.0;
  for (std::size_t j = 0; j < bp.size(); ++j) {
    if (left >= limit) break;
    // sup over [left, min(bp_j, limit)) is reached as x approaches the right end
    best = std::max(best, w.raw(std::min(bp[j], limit)) * d.atoms()[j].value);
    left = bp[j];
  }
  for (int g = 1; g <= grid; ++g) {
    const double x = static_cast<double>(g) / grid;
    if (x >= limit) break;
    best = std::max(best, w.raw(x) * decreasing_rearrangement(d, x));
  }
  return best;
}

double mpz_ratio(std::span<const EmpiricalDist> family, double q, double p) {
  if (!(p > 0.0 && p < q)) throw Error(ErrorCode::DomainError, "mpz_ratio needs 0 < p < q");
  double best = 0.0;
  bool any = false;
  for (const auto& z : family) {
    if (z.is_zero()) continue;
    any = true;
    best = std::max(best, moment_norm(z, q) / moment_norm(z, p));
  }
  if (!any) throw Error(ErrorCode::EmptyFamily, "no nonzero member");
  return best;
}

}  // namespace decoupling
