#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "decoupling/arrays.hpp"

namespace decoupling {

/// k realizations of real sequences of common length n. Row j holds
/// (x_{j,1}, ..., x_{j,n}); indices are 1-based, storage is not.
class SampleMatrix {
 public:
  SampleMatrix() = default;
  explicit SampleMatrix(std::vector<std::vector<double>> rows);
  SampleMatrix(std::size_t rows, std::size_t length, double fill = 0.0);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t length() const noexcept { return length_; }

  std::span<const double> row(std::size_t j) const { return {data_.data() + j * length_, length_}; }
  std::span<double> row(std::size_t j) { return {data_.data() + j * length_, length_}; }

  double operator()(std::size_t j, std::size_t i) const { return data_[j * length_ + i]; }
  double& operator()(std::size_t j, std::size_t i) { return data_[j * length_ + i]; }

  std::span<const double> data() const noexcept { return data_; }

  friend bool operator==(const SampleMatrix&, const SampleMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t length_ = 0;
  std::vector<double> data_;
};

/// Slot-to-row map, 1-based: [1,2,...,k] is the decoupled form Q(f; xi_1..xi_k),
/// [1,...,1] the coupled form Q(f; xi^k), [1,1,2] the mixed Q(f; xi^2, eta).
using RowAssignment = std::vector<int>;

RowAssignment decoupled_assignment(int k);
RowAssignment coupled_assignment(int k);

/// Q(f; ...) with one explicit row per slot. Throws RankMismatch when the
/// slot count differs from the rank, IndexOutOfRange when a row is too short.
Vector evaluate_slots(const DiagonalFreeArray& f, std::span<const std::span<const double>> slots);

/// Q(f; x_{assign(1)}, ..., x_{assign(k)}).
Vector eval_poly(const DiagonalFreeArray& f, const SampleMatrix& x, const RowAssignment& assign);

/// Q(f; y^k) for a single sequence y.
Vector eval_coupled(const DiagonalFreeArray& f, std::span<const double> y);

/// Mazur-Orlicz polarization: (1/k!) sum_{delta in {0,1}^k} (-1)^{k-|delta|}
/// Q(f; (delta_1 xi_1 + ... + delta_k xi_k)^k). Equals Q(f-hat; xi_1..xi_k).
Vector polarize_mazur_orlicz(const DiagonalFreeArray& f, const SampleMatrix& x);

inline constexpr int kDefaultSignBudgetRank = 16;

/// Rademacher form: (1/k!) E_eps[eps_1...eps_k Q(f; (sum_i eps_i xi_i)^k)],
/// with the expectation taken by exact enumeration of all 2^k sign patterns.
Vector polarize_rademacher(const DiagonalFreeArray& f, const SampleMatrix& x,
                           int max_rank = kDefaultSignBudgetRank);

/// T_{m_1..m_k}: keeps the support tuples with i_j <= m_j for every slot j.
DiagonalFreeArray truncate(const DiagonalFreeArray& f, const std::vector<int>& bounds);

/// Entrywise s_i * x_{j,i} on every row.
SampleMatrix scale_rows(const SampleMatrix& x, std::span<const double> s);

/// sup over all (m_1..m_k) in [1,n]^k of ||T_m Q(f; slots)||, computed with
/// k-dimensional prefix sums over the n^k grid of truncation bounds.
double max_truncation_norm(const DiagonalFreeArray& f, std::span<const std::span<const double>> slots);

struct SumFormTerm {
  const DiagonalFreeArray* array;
  SampleMatrix sample;
};

/// sum_d Q(f^d; X^d), every term in decoupled form. Throws DimMismatch if the
/// arrays disagree in dimension or norm.
Vector eval_sum_form(std::span<const SumFormTerm> terms);

/// Largest coordinate-wise discrepancy relative to the larger of the two
/// vectors' sup-norms (1e-300 floor).
double relative_error(std::span<const double> a, std::span<const double> b);

}  // namespace decoupling
