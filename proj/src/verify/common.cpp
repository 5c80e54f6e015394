#include <cmath>
#include <sstream>

#include "decoupling/numeric.hpp"
#include "decoupling/verify.hpp"

namespace decoupling {

namespace {

std::string format_number(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

std::string to_string(EvalMode m) {
  switch (m) {
    case EvalMode::Auto: return "auto";
    case EvalMode::Exact: return "exact";
    case EvalMode::MonteCarlo: return "monte_carlo";
  }
  return "auto";
}

EvalMode eval_mode_from_string(const std::string& s) {
  if (s == "auto") return EvalMode::Auto;
  if (s == "exact") return EvalMode::Exact;
  if (s == "monte_carlo") return EvalMode::MonteCarlo;
  throw Error(ErrorCode::InvalidSpec, "unknown mode '" + s + "'");
}

void McConfig::validate() const {
  if (trials < 100) throw Error(ErrorCode::InvalidSpec, "trials must be >= 100");
  if (bootstrap < 200) throw Error(ErrorCode::InvalidSpec, "bootstrap resamples must be >= 200");
  if (!(confidence > 0.5 && confidence < 1.0)) throw Error(ErrorCode::InvalidSpec, "confidence must lie in (0.5, 1)");
  if (enumeration_budget == 0) throw Error(ErrorCode::InvalidSpec, "enumeration budget must be positive");
  if (stability_seeds == 0) throw Error(ErrorCode::InvalidSpec, "stability_seeds must be >= 1");
  if (!(stability_factor >= 1.0)) throw Error(ErrorCode::InvalidSpec, "stability_factor must be >= 1");
}

PaperConstants PaperConstants::for_rank(int k) {
  if (k < 1) throw Error(ErrorCode::DomainError, "rank must be >= 1");
  PaperConstants c;
  c.k = k;
  double a = 0.0;
  double b = 0.0;
  for (int r = 0; r <= k; ++r) {
    a += binomial(k, r) * ipow(2.0 * r, r);
    b += binomial(k, r) * ipow(static_cast<double>(r), k);
  }
  c.a = a;
  c.a_centered = ipow(static_cast<double>(k), k);
  c.b = b / factorial(k);
  return c;
}

RiFunctional RiFunctional::lp(double p) {
  if (!(p > 0.0)) throw Error(ErrorCode::DomainError, "Lp order must be positive");
  RiFunctional f;
  f.kind = Kind::Lp;
  f.p = p;
  return f;
}

RiFunctional RiFunctional::luxemburg(OrliczFunction phi) {
  RiFunctional f;
  f.kind = Kind::Orlicz;
  f.p = phi.parameter();
  f.orlicz = std::move(phi);
  return f;
}

RiFunctional RiFunctional::double_star_at(double t) {
  if (!(t > 0.0 && t <= 1.0)) throw Error(ErrorCode::DomainError, "double-star level must lie in (0, 1]");
  RiFunctional f;
  f.kind = Kind::DoubleStar;
  f.p = t;
  return f;
}

RiFunctional RiFunctional::lorentz_power(double exponent, int grid) {
  if (!(exponent > 0.0)) throw Error(ErrorCode::DomainError, "Lorentz exponent must be positive");
  if (grid < 1) throw Error(ErrorCode::DomainError, "Lorentz grid must be positive");
  RiFunctional f;
  f.kind = Kind::Lorentz;
  f.p = exponent;
  f.lorentz_grid = grid;
  return f;
}

double RiFunctional::operator()(const EmpiricalDist& d) const {
  switch (kind) {
    case Kind::Lp: return moment_norm(d, p);
    case Kind::Orlicz: return orlicz_norm(d, *orlicz);
    case Kind::DoubleStar: return double_star(d, p);
    case Kind::Lorentz: return lorentz_quasinorm(d, WeightFunction::power(p), lorentz_grid);
  }
  return 0.0;
}

std::string RiFunctional::label() const {
  switch (kind) {
    case Kind::Lp: return std::isinf(p) ? "L^inf" : "L^" + format_number(p);
    case Kind::Orlicz:
      switch (orlicz->kind()) {
        case OrliczFunction::Kind::Power: return "Orlicz(x^" + format_number(p) + ")";
        case OrliczFunction::Kind::PhiT: return "Orlicz(phi_t, t=" + format_number(p) + ")";
        case OrliczFunction::Kind::Table: return "Orlicz(table)";
      }
      return "Orlicz";
    case Kind::DoubleStar: return "double_star(t=" + format_number(p) + ")";
    case Kind::Lorentz: return "Lorentz(x^" + format_number(p) + ")";
  }
  return "";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

std::string to_string(MomentCase c) {
  switch (c) {
    case MomentCase::AUpper: return "A_upper";
    case MomentCase::BLower: return "B_lower";
    case MomentCase::Triangle: return "triangle";
    case MomentCase::Centering: return "centering";
  }
  return "";
}

MomentCase moment_case_from_string(const std::string& s) {
  if (s == "A_upper") return MomentCase::AUpper;
  if (s == "B_lower") return MomentCase::BLower;
  if (s == "triangle") return MomentCase::Triangle;
  if (s == "centering") return MomentCase::Centering;
  throw Error(ErrorCode::InvalidCase, "unknown moment case '" + s + "'");
}

std::string to_string(UStatCase c) { return c == UStatCase::APrime ? "A_prime" : "B_prime"; }

UStatCase ustat_case_from_string(const std::string& s) {
  if (s == "A_prime") return UStatCase::APrime;
  if (s == "B_prime") return UStatCase::BPrime;
  throw Error(ErrorCode::InvalidCase, "unknown U-statistic case '" + s + "'");
}

std::string to_string(TailCase c) { return c == TailCase::ATail ? "A_tail" : "B_tail"; }

TailCase tail_case_from_string(const std::string& s) {
  if (s == "A_tail") return TailCase::ATail;
  if (s == "B_tail") return TailCase::BTail;
  throw Error(ErrorCode::InvalidCase, "unknown tail case '" + s + "'");
}

std::string to_string(ContractionCase c) {
  switch (c) {
    case ContractionCase::Multiplier: return "multiplier";
    case ContractionCase::Maximal: return "maximal";
    case ContractionCase::Comparison: return "comparison";
  }
  return "";
}

ContractionCase contraction_case_from_string(const std::string& s) {
  if (s == "multiplier") return ContractionCase::Multiplier;
  if (s == "maximal") return ContractionCase::Maximal;
  if (s == "comparison") return ContractionCase::Comparison;
  throw Error(ErrorCode::InvalidCase, "unknown contraction case '" + s + "'");
}

}  // namespace decoupling
