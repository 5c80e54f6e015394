#include "decoupling/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "decoupling/numeric.hpp"

namespace decoupling {

SampleMatrix::SampleMatrix(std::vector<std::vector<double>> rows) {
  rows_ = rows.size();
  length_ = rows.empty() ? 0 : rows.front().size();
  data_.reserve(rows_ * length_);
  for (const auto& r : rows) {
    if (r.size() != length_) throw Error(ErrorCode::LengthMismatch, "rows of unequal length");
    for (double v : r) {
      if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue, "sample entry");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

SampleMatrix::SampleMatrix(std::size_t rows, std::size_t length, double fill)
    : rows_(rows), length_(length), data_(rows * length, fill) {}

RowAssignment decoupled_assignment(int k) {
  RowAssignment a(k);
  std::iota(a.begin(), a.end(), 1);
  return a;
}

RowAssignment coupled_assignment(int k) { return RowAssignment(k, 1); }

Vector evaluate_slots(const DiagonalFreeArray& f, std::span<const std::span<const double>> slots) {
  const int k = f.rank();
  if (static_cast<int>(slots.size()) != k) {
    throw Error(ErrorCode::RankMismatch, "expected " + std::to_string(k) + " slots, got " +
                                             std::to_string(slots.size()));
  }
  const int needed = f.max_index();
  for (const auto& s : slots) {
    if (static_cast<int>(s.size()) < needed) {
      throw Error(ErrorCode::IndexOutOfRange, "row of length " + std::to_string(s.size()) +
                                                  " but array uses index " + std::to_string(needed));
    }
  }
  Vector out(f.dim(), 0.0);
  for (const auto& [idx, v] : f.entries()) {
    double prod = 1.0;
    for (int j = 0; j < k; ++j) prod *= slots[j][idx[j] - 1];
    if (prod == 0.0) continue;
    for (int c = 0; c < f.dim(); ++c) out[c] += v[c] * prod;
  }
  return out;
}

Vector eval_poly(const DiagonalFreeArray& f, const SampleMatrix& x, const RowAssignment& assign) {
  if (static_cast<int>(assign.size()) != f.rank()) {
    throw Error(ErrorCode::RankMismatch, "row assignment length differs from rank");
  }
  std::vector<std::span<const double>> slots;
  slots.reserve(assign.size());
  for (int label : assign) {
    if (label < 1 || static_cast<std::size_t>(label) > x.rows()) {
      throw Error(ErrorCode::IndexOutOfRange, "row label " + std::to_string(label) + " not in sample");
    }
    slots.push_back(x.row(label - 1));
  }
  return evaluate_slots(f, slots);
}

Vector eval_coupled(const DiagonalFreeArray& f, std::span<const double> y) {
  std::vector<std::span<const double>> slots(f.rank(), y);
  return evaluate_slots(f, slots);
}

namespace {

void require_rank_rows(const DiagonalFreeArray& f, const SampleMatrix& x) {
  if (static_cast<int>(x.rows()) != f.rank()) {
    throw Error(ErrorCode::RankMismatch, "polarization needs exactly k = " + std::to_string(f.rank()) +
                                             " rows, got " + std::to_string(x.rows()));
  }
}

}  // namespace

Vector polarize_mazur_orlicz(const DiagonalFreeArray& f, const SampleMatrix& x) {
  require_rank_rows(f, x);
  const int k = f.rank();
  const std::size_t n = x.length();
  CompensatedVectorSum total(f.dim());
  std::vector<double> y(n);
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    std::fill(y.begin(), y.end(), 0.0);
    int ones = 0;
    for (int j = 0; j < k; ++j) {
      if (mask & (1u << j)) {
        ++ones;
        const auto r = x.row(j);
        for (std::size_t i = 0; i < n; ++i) y[i] += r[i];
      }
    }
    const double sign = ((k - ones) % 2 == 0) ? 1.0 : -1.0;
    total.add(eval_coupled(f, y), sign);
  }
  Vector out = total.value();
  const double inv = 1.0 / factorial(k);
  for (double& v : out) v *= inv;
  return out;
}

Vector polarize_rademacher(const DiagonalFreeArray& f, const SampleMatrix& x, int max_rank) {
  require_rank_rows(f, x);
  const int k = f.rank();
  if (k > max_rank || k > 30) {
    throw Error(ErrorCode::RankTooLarge, "2^" + std::to_string(k) + " sign patterns exceed the budget");
  }
  const std::size_t n = x.length();
  CompensatedVectorSum total(f.dim());
  std::vector<double> y(n);
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    // bit j set means eps_j = -1
    std::fill(y.begin(), y.end(), 0.0);
    int negatives = 0;
    for (int j = 0; j < k; ++j) {
      const bool neg = mask & (1u << j);
      negatives += neg;
      const auto r = x.row(j);
      for (std::size_t i = 0; i < n; ++i) y[i] += neg ? -r[i] : r[i];
    }
    total.add(eval_coupled(f, y), negatives % 2 == 0 ? 1.0 : -1.0);
  }
  Vector out = total.value();
  const double scale = 1.0 / (factorial(k) * std::ldexp(1.0, k));
  for (double& v : out) v *= scale;
  return out;
}

DiagonalFreeArray truncate(const DiagonalFreeArray& f, const std::vector<int>& bounds) {
  if (static_cast<int>(bounds.size()) != f.rank()) {
    throw Error(ErrorCode::RankMismatch, "one truncation bound per slot");
  }
  for (int m : bounds) {
    if (m < 1) throw Error(ErrorCode::DomainError, "truncation bounds must be positive");
  }
  DiagonalFreeArray::Entries kept;
  for (const auto& [idx, v] : f.entries()) {
    bool inside = true;
    for (std::size_t j = 0; j < idx.size(); ++j) inside = inside && idx[j] <= bounds[j];
    if (inside) kept.emplace(idx, v);
  }
  return DiagonalFreeArray::from_entries(f.rank(), f.dim(), f.norm(), std::move(kept));
}

SampleMatrix scale_rows(const SampleMatrix& x, std::span<const double> s) {
  if (s.size() != x.length()) {
    throw Error(ErrorCode::LengthMismatch, "multiplier length " + std::to_string(s.size()) +
                                               " vs row length " + std::to_string(x.length()));
  }
  SampleMatrix out = x;
  for (std::size_t j = 0; j < x.rows(); ++j) {
    auto r = out.row(j);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] *= s[i];
  }
  return out;
}

double max_truncation_norm(const DiagonalFreeArray& f, std::span<const std::span<const double>> slots) {
  const int k = f.rank();
  if (static_cast<int>(slots.size()) != k) throw Error(ErrorCode::RankMismatch, "max_truncation_norm");
  const int n = f.max_index();
  if (n == 0) return 0.0;
  for (const auto& s : slots) {
    if (static_cast<int>(s.size()) < n) throw Error(ErrorCode::IndexOutOfRange, "max_truncation_norm");
  }
  const int dim = f.dim();
  std::size_t cells = 1;
  for (int j = 0; j < k; ++j) cells *= static_cast<std::size_t>(n);
  if (cells > (std::size_t{1} << 26)) {
    throw Error(ErrorCode::BudgetExceeded, "n^k truncation grid too large");
  }
  // grid[(i_1-1) + n (i_2-1) + ...] holds the term at that tuple.
  std::vector<double> grid(cells * dim, 0.0);
  for (const auto& [idx, v] : f.entries()) {
    double prod = 1.0;
    std::size_t cell = 0;
    std::size_t stride = 1;
    for (int j = 0; j < k; ++j) {
      prod *= slots[j][idx[j] - 1];
      cell += static_cast<std::size_t>(idx[j] - 1) * stride;
      stride *= n;
    }
    for (int c = 0; c < dim; ++c) grid[cell * dim + c] += v[c] * prod;
  }
  std::size_t stride = 1;
  for (int j = 0; j < k; ++j) {
    for (std::size_t cell = 0; cell < cells; ++cell) {
      if ((cell / stride) % n == 0) continue;
      for (int c = 0; c < dim; ++c) grid[cell * dim + c] += grid[(cell - stride) * dim + c];
    }
    stride *= n;
  }
  double best = 0.0;
  for (std::size_t cell = 0; cell < cells; ++cell) {
    best = std::max(best, f.norm()(std::span<const double>(grid.data() + cell * dim, dim)));
  }
  return best;
}

Vector eval_sum_form(std::span<const SumFormTerm> terms) {
  if (terms.empty()) return {};
  const auto& first = *terms.front().array;
  Vector out(first.dim(), 0.0);
  for (const auto& term : terms) {
    if (term.array->dim() != first.dim() || !(term.array->norm() == first.norm())) {
      throw Error(ErrorCode::DimMismatch, "sum-form terms must share dimension and norm");
    }
    const Vector v = eval_poly(*term.array, term.sample, decoupled_assignment(term.array->rank()));
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += v[c];
  }
  return out;
}

double relative_error(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimMismatch, "relative_error");
  double diff = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff = std::max(diff, std::fabs(a[i] - b[i]));
    scale = std::max({scale, std::fabs(a[i]), std::fabs(b[i])});
  }
  return diff / std::max(scale, 1e-300);
}

}  // namespace decoupling
