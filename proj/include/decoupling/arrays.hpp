#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "decoupling/error.hpp"

namespace decoupling {

/// 1-based index tuple (i_1, ..., i_k). Entries must be pairwise distinct
/// when used as a key of a DiagonalFreeArray.
using MultiIndex = std::vector<int>;

/// Point of R^m.
using Vector = std::vector<double>;

/// Selects the l^p norm used on coefficient values, p in [1, inf].
class NormTag {
 public:
  constexpr NormTag() = default;
  explicit NormTag(double p);

  static NormTag infinity();

  double p() const noexcept { return p_; }
  bool is_infinity() const noexcept;

  double operator()(std::span<const double> v) const;

  friend bool operator==(const NormTag&, const NormTag&) = default;

 private:
  double p_ = 2.0;
};

/// Finitely supported coefficient array f = (f_{i_1..i_k}) with values in
/// (R^m, ||.||_p) that vanishes on all diagonals. Immutable once built; zero
/// values never appear in the support.
class DiagonalFreeArray {
 public:
  using Entries = std::map<MultiIndex, Vector>;

  /// Validating constructor. Throws DuplicateIndexWithinTuple, RankMismatch,
  /// DimMismatch or NonFiniteValue. Repeated tuples are summed.
  static DiagonalFreeArray build(int rank, int dim, NormTag norm,
                                 const std::vector<std::pair<MultiIndex, Vector>>& entries);

  /// Same validation as build() for an already-keyed map.
  static DiagonalFreeArray from_entries(int rank, int dim, NormTag norm, Entries entries);

  /// Empty array of the given shape.
  static DiagonalFreeArray zero(int rank, int dim, NormTag norm);

  int rank() const noexcept { return rank_; }
  int dim() const noexcept { return dim_; }
  const NormTag& norm() const noexcept { return norm_; }
  const Entries& entries() const noexcept { return entries_; }
  std::size_t support_size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  /// Largest index used by any support tuple (0 for an empty array).
  int max_index() const noexcept;

  /// Value at a tuple; the zero vector outside the support.
  Vector at(const MultiIndex& idx) const;

  friend bool operator==(const DiagonalFreeArray&, const DiagonalFreeArray&) = default;

 private:
  DiagonalFreeArray(int rank, int dim, NormTag norm, Entries entries)
      : rank_(rank), dim_(dim), norm_(norm), entries_(std::move(entries)) {}

  int rank_ = 1;
  int dim_ = 1;
  NormTag norm_;
  Entries entries_;
};

/// a*f + b*g for arrays of identical shape.
DiagonalFreeArray linear_combination(double a, const DiagonalFreeArray& f, double b,
                                     const DiagonalFreeArray& g);

/// f-hat: average over all k! index permutations.
DiagonalFreeArray symmetrize(const DiagonalFreeArray& f);

struct Classification {
  bool symmetric = false;
  bool tetrahedral = false;
};

/// `rel_tol` bounds the allowed coordinate mismatch between permuted entries,
/// relative to the largest coordinate of the array.
Classification classify(const DiagonalFreeArray& f, double rel_tol = 1e-12);

/// Max coordinate difference between two arrays of equal shape, divided by
/// max(1e-300, largest coordinate of either).
double relative_distance(const DiagonalFreeArray& f, const DiagonalFreeArray& g);

/// Every permutation of a tuple, in lexicographic order of positions.
std::vector<MultiIndex> permutations_of(const MultiIndex& idx);

}  // namespace decoupling
