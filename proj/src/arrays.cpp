#include "decoupling/arrays.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "decoupling/numeric.hpp"

namespace decoupling {

namespace {

std::string describe(const MultiIndex& idx) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i];
  os << ')';
  return os.str();
}

void validate_key(const MultiIndex& idx, int rank) {
  if (static_cast<int>(idx.size()) != rank) {
    throw Error(ErrorCode::RankMismatch,
                "tuple " + describe(idx) + " has length " + std::to_string(idx.size()) +
                    ", expected " + std::to_string(rank));
  }
  for (int i : idx) {
    if (i < 1) throw Error(ErrorCode::IndexOutOfRange, "indices are 1-based: " + describe(idx));
  }
  MultiIndex sorted = idx;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::DuplicateIndexWithinTuple, "diagonal tuple " + describe(idx));
  }
}

bool is_zero(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

}  // namespace

NormTag::NormTag(double p) : p_(p) {
  if (!(p >= 1.0)) throw Error(ErrorCode::DomainError, "l^p norm needs p >= 1");
}

NormTag NormTag::infinity() { return NormTag(std::numeric_limits<double>::infinity()); }

bool NormTag::is_infinity() const noexcept { return std::isinf(p_); }

double NormTag::operator()(std::span<const double> v) const {
  double mx = 0.0;
  for (double x : v) mx = std::max(mx, std::fabs(x));
  if (is_infinity() || mx == 0.0) return mx;
  if (p_ == 1.0) {
    double s = 0.0;
    for (double x : v) s += std::fabs(x);
    return s;
  }
  if (p_ == 2.0) {
    double s = 0.0;
    for (double x : v) s += (x / mx) * (x / mx);
    return mx * std::sqrt(s);
  }
  double s = 0.0;
  for (double x : v) s += std::pow(std::fabs(x) / mx, p_);
  return mx * std::pow(s, 1.0 / p_);
}

DiagonalFreeArray DiagonalFreeArray::build(int rank, int dim, NormTag norm,
                                           const std::vector<std::pair<MultiIndex, Vector>>& entries) {
  if (rank < 1) throw Error(ErrorCode::RankMismatch, "rank must be >= 1");
  if (dim < 1) throw Error(ErrorCode::DimMismatch, "dim must be >= 1");
  Entries map;
  for (const auto& [idx, value] : entries) {
    validate_key(idx, rank);
    if (static_cast<int>(value.size()) != dim) {
      throw Error(ErrorCode::DimMismatch, "value at " + describe(idx) + " has dimension " +
                                              std::to_string(value.size()) + ", expected " +
                                              std::to_string(dim));
    }
    for (double x : value) {
      if (!std::isfinite(x)) throw Error(ErrorCode::NonFiniteValue, "value at " + describe(idx));
    }
    auto [it, inserted] = map.try_emplace(idx, value);
    if (!inserted) {
      for (int c = 0; c < dim; ++c) it->second[c] += value[c];
    }
  }
  return from_entries(rank, dim, norm, std::move(map));
}

DiagonalFreeArray DiagonalFreeArray::from_entries(int rank, int dim, NormTag norm, Entries entries) {
  if (rank < 1) throw Error(ErrorCode::RankMismatch, "rank must be >= 1");
  if (dim < 1) throw Error(ErrorCode::DimMismatch, "dim must be >= 1");
  for (auto it = entries.begin(); it != entries.end();) {
    validate_key(it->first, rank);
    if (static_cast<int>(it->second.size()) != dim) {
      throw Error(ErrorCode::DimMismatch, "value at " + describe(it->first));
    }
    if (is_zero(it->second)) {
      it = entries.erase(it);
    } else {
      ++it;
    }
  }
  return DiagonalFreeArray(rank, dim, norm, std::move(entries));
}

DiagonalFreeArray DiagonalFreeArray::zero(int rank, int dim, NormTag norm) {
  return from_entries(rank, dim, norm, {});
}

int DiagonalFreeArray::max_index() const noexcept {
  int mx = 0;
  for (const auto& [idx, v] : entries_) mx = std::max(mx, *std::max_element(idx.begin(), idx.end()));
  return mx;
}

Vector DiagonalFreeArray::at(const MultiIndex& idx) const {
  auto it = entries_.find(idx);
  return it == entries_.end() ? Vector(dim_, 0.0) : it->second;
}

DiagonalFreeArray linear_combination(double a, const DiagonalFreeArray& f, double b,
                                     const DiagonalFreeArray& g) {
  if (f.rank() != g.rank()) throw Error(ErrorCode::RankMismatch, "linear_combination");
  if (f.dim() != g.dim() || !(f.norm() == g.norm())) {
    throw Error(ErrorCode::DimMismatch, "linear_combination");
  }
  DiagonalFreeArray::Entries out;
  for (const auto& [idx, v] : f.entries()) {
    Vector w(v.size());
    for (std::size_t c = 0; c < v.size(); ++c) w[c] = a * v[c];
    out.emplace(idx, std::move(w));
  }
  for (const auto& [idx, v] : g.entries()) {
    auto [it, inserted] = out.try_emplace(idx, Vector(v.size(), 0.0));
    for (std::size_t c = 0; c < v.size(); ++c) it->second[c] += b * v[c];
  }
  return DiagonalFreeArray::from_entries(f.rank(), f.dim(), f.norm(), std::move(out));
}

std::vector<MultiIndex> permutations_of(const MultiIndex& idx) {
  std::vector<int> pos(idx.size());
  std::iota(pos.begin(), pos.end(), 0);
  std::vector<MultiIndex> out;
  do {
    MultiIndex p(idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) p[j] = idx[pos[j]];
    out.push_back(std::move(p));
  } while (std::next_permutation(pos.begin(), pos.end()));
  return out;
}

DiagonalFreeArray symmetrize(const DiagonalFreeArray& f) {
  // f-hat at j sums f over every permutation of j; since the entries of a
  // support tuple are distinct, each support tuple t feeds each permutation
  // of itself exactly once with weight 1/k!.
  const double inv = 1.0 / factorial(f.rank());
  std::map<MultiIndex, CompensatedVectorSum> acc;
  for (const auto& [idx, v] : f.entries()) {
    for (auto& perm : permutations_of(idx)) {
      auto it = acc.try_emplace(std::move(perm), CompensatedVectorSum(f.dim())).first;
      it->second.add(v, inv);
    }
  }
  DiagonalFreeArray::Entries out;
  for (auto& [idx, sum] : acc) out.emplace(idx, sum.value());
  return DiagonalFreeArray::from_entries(f.rank(), f.dim(), f.norm(), std::move(out));
}

Classification classify(const DiagonalFreeArray& f, double rel_tol) {
  Classification c;
  c.tetrahedral = std::all_of(f.entries().begin(), f.entries().end(), [](const auto& e) {
    return std::adjacent_find(e.first.begin(), e.first.end(), std::greater_equal<>()) == e.first.end();
  });

  double scale = 0.0;
  for (const auto& [idx, v] : f.entries()) {
    for (double x : v) scale = std::max(scale, std::fabs(x));
  }
  const double tol = rel_tol * scale;
  c.symmetric = true;
  for (const auto& [idx, v] : f.entries()) {
    for (const auto& perm : permutations_of(idx)) {
      const Vector w = f.at(perm);
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (std::fabs(w[i] - v[i]) > tol) {
          c.symmetric = false;
          return c;
        }
      }
    }
  }
  return c;
}

double relative_distance(const DiagonalFreeArray& f, const DiagonalFreeArray& g) {
  if (f.rank() != g.rank()) throw Error(ErrorCode::RankMismatch, "relative_distance");
  if (f.dim() != g.dim()) throw Error(ErrorCode::DimMismatch, "relative_distance");
  std::set<MultiIndex> keys;
  double scale = 0.0;
  for (const auto* a : {&f, &g}) {
    for (const auto& [idx, v] : a->entries()) {
      keys.insert(idx);
      for (double x : v) scale = std::max(scale, std::fabs(x));
    }
  }
  double diff = 0.0;
  for (const auto& idx : keys) {
    const Vector a = f.at(idx);
    const Vector b = g.at(idx);
    for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::fabs(a[i] - b[i]));
  }
  return diff / std::max(scale, 1e-300);
}

}  // namespace decoupling
