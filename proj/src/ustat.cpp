#include "decoupling/ustat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "decoupling/numeric.hpp"

namespace decoupling {

UStatKernel UStatKernel::build(int rank, int dim, NormTag norm, Table kernels) {
  if (rank < 1) throw Error(ErrorCode::RankMismatch, "rank must be >= 1");
  if (dim < 1) throw Error(ErrorCode::DimMismatch, "dim must be >= 1");
  for (const auto& [idx, fn] : kernels) {
    if (static_cast<int>(idx.size()) != rank) throw Error(ErrorCode::RankMismatch, "kernel index length");
    MultiIndex sorted = idx;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() < 1) throw Error(ErrorCode::IndexOutOfRange, "kernel indices are 1-based");
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error(ErrorCode::DuplicateIndexWithinTuple, "kernel on a diagonal");
    }
    if (!fn) throw Error(ErrorCode::InvalidSpec, "empty kernel callable");
  }
  return UStatKernel(rank, dim, norm, std::make_shared<const Table>(std::move(kernels)));
}

int UStatKernel::max_index() const noexcept {
  int mx = 0;
  for (const auto& [idx, fn] : *table_) mx = std::max(mx, *std::max_element(idx.begin(), idx.end()));
  return mx;
}

Vector UStatKernel::evaluate(const MultiIndex& idx, std::span<const double> args) const {
  auto it = table_->find(idx);
  if (it == table_->end()) return Vector(dim_, 0.0);
  Vector v = it->second(args);
  if (static_cast<int>(v.size()) != dim_) throw Error(ErrorCode::DimMismatch, "kernel output dimension");
  for (double c : v) {
    if (!std::isfinite(c)) throw Error(ErrorCode::KernelEvaluationFailure, "non-finite kernel output");
  }
  return v;
}

const std::vector<std::string>& registered_kernels() {
  static const std::vector<std::string> names{"product", "sum", "min", "indicator-box"};
  return names;
}

bool is_registered_kernel(const std::string& name) {
  const auto& names = registered_kernels();
  return std::find(names.begin(), names.end(), name) != names.end();
}

namespace {

std::function<double(std::span<const double>)> scalar_shape(const KernelShape& shape) {
  if (shape.name == "product") {
    return [](std::span<const double> x) {
      double p = 1.0;
      for (double v : x) p *= v;
      return p;
    };
  }
  if (shape.name == "sum") {
    return [](std::span<const double> x) { return std::accumulate(x.begin(), x.end(), 0.0); };
  }
  if (shape.name == "min") {
    return [](std::span<const double> x) { return *std::min_element(x.begin(), x.end()); };
  }
  if (shape.name == "indicator-box") {
    if (!(shape.lo <= shape.hi)) throw Error(ErrorCode::InvalidSpec, "indicator-box needs lo <= hi");
    return [lo = shape.lo, hi = shape.hi](std::span<const double> x) {
      return std::all_of(x.begin(), x.end(), [&](double v) { return lo <= v && v <= hi; }) ? 1.0 : 0.0;
    };
  }
  throw Error(ErrorCode::InvalidSpec, "unknown kernel '" + shape.name + "'");
}

}  // namespace

UStatKernel kernel_from_array(const DiagonalFreeArray& f, const KernelShape& shape) {
  auto g = scalar_shape(shape);
  UStatKernel::Table table;
  for (const auto& [idx, coeff] : f.entries()) {
    table.emplace(idx, [g, coeff](std::span<const double> x) {
      const double s = g(x);
      Vector out(coeff.size());
      for (std::size_t c = 0; c < coeff.size(); ++c) out[c] = coeff[c] * s;
      return out;
    });
  }
  return UStatKernel::build(f.rank(), f.dim(), f.norm(), std::move(table));
}

Vector eval_ustat(const UStatKernel& kernel, const SampleMatrix& x, const RowAssignment& assign,
                  std::optional<std::span<const double>> signs) {
  const int k = kernel.rank();
  if (static_cast<int>(assign.size()) != k) throw Error(ErrorCode::RankMismatch, "row assignment length");
  for (int label : assign) {
    if (label < 1 || static_cast<std::size_t>(label) > x.rows()) {
      throw Error(ErrorCode::IndexOutOfRange, "row label " + std::to_string(label));
    }
  }
  const int needed = kernel.max_index();
  if (static_cast<int>(x.length()) < needed) {
    throw Error(ErrorCode::IndexOutOfRange, "rows shorter than kernel support");
  }
  if (signs && static_cast<int>(signs->size()) < needed) {
    throw Error(ErrorCode::IndexOutOfRange, "sign sequence shorter than kernel support");
  }
  Vector out(kernel.dim(), 0.0);
  std::vector<double> args(k);
  for (const auto& [idx, fn] : kernel.kernels()) {
    for (int j = 0; j < k; ++j) args[j] = x(assign[j] - 1, idx[j] - 1);
    double weight = 1.0;
    if (signs) {
      for (int j = 0; j < k; ++j) weight *= (*signs)[idx[j] - 1];
    }
    const Vector v = kernel.evaluate(idx, args);
    for (int c = 0; c < kernel.dim(); ++c) out[c] += weight * v[c];
  }
  for (double c : out) {
    if (!std::isfinite(c)) throw Error(ErrorCode::KernelEvaluationFailure, "non-finite U-statistic");
  }
  return out;
}

UStatKernel symmetrize_kernel(const UStatKernel& kernel) {
  const int k = kernel.rank();
  std::vector<std::vector<int>> perms;
  {
    std::vector<int> pos(k);
    std::iota(pos.begin(), pos.end(), 0);
    do perms.push_back(pos);
    while (std::next_permutation(pos.begin(), pos.end()));
  }
  const double inv = 1.0 / factorial(k);

  UStatKernel::Table table;
  for (const auto& [idx, fn] : kernel.kernels()) {
    for (const auto& perm : permutations_of(idx)) {
      if (table.count(perm)) continue;
      table.emplace(perm, [kernel, perms, inv, at = perm](std::span<const double> x) {
        const int rank = static_cast<int>(at.size());
        CompensatedVectorSum acc(kernel.dim());
        MultiIndex permuted(rank);
        std::vector<double> args(rank);
        for (const auto& sigma : perms) {
          for (int j = 0; j < rank; ++j) {
            permuted[j] = at[sigma[j]];
            args[j] = x[sigma[j]];
          }
          if (!kernel.kernels().count(permuted)) continue;
          acc.add(kernel.evaluate(permuted, args));
        }
        Vector out = acc.value();
        for (double& v : out) v *= inv;
        return out;
      });
    }
  }
  return UStatKernel::build(k, kernel.dim(), kernel.norm(), std::move(table));
}

std::vector<SumFormTerm> IndicatorExpansion::terms() const {
  std::vector<SumFormTerm> out;
  out.reserve(arrays.size());
  for (std::size_t d = 0; d < arrays.size(); ++d) out.push_back({&arrays[d], samples[d]});
  return out;
}

IndicatorExpansion expand_over_atoms(const UStatKernel& kernel, std::span<const double> atoms,
                                     const SampleMatrix& x) {
  const int k = kernel.rank();
  if (static_cast<int>(x.rows()) != k) throw Error(ErrorCode::RankMismatch, "expand_over_atoms needs k rows");
  if (atoms.empty()) throw Error(ErrorCode::InvalidSpec, "no atoms");
  for (double v : x.data()) {
    if (std::find(atoms.begin(), atoms.end(), v) == atoms.end()) {
      throw Error(ErrorCode::NotFinitelySupported, "sample value outside the atom set");
    }
  }
  const std::size_t m = atoms.size();
  std::size_t combos = 1;
  for (int j = 0; j < k; ++j) combos *= m;

  IndicatorExpansion out;
  std::vector<std::size_t> pick(k, 0);
  std::vector<double> args(k);
  for (std::size_t d = 0; d < combos; ++d) {
    std::size_t rest = d;
    for (int j = 0; j < k; ++j) {
      pick[j] = rest % m;
      rest /= m;
      args[j] = atoms[pick[j]];
    }
    DiagonalFreeArray::Entries coeffs;
    for (const auto& [idx, fn] : kernel.kernels()) coeffs.emplace(idx, kernel.evaluate(idx, args));
    out.arrays.push_back(DiagonalFreeArray::from_entries(k, kernel.dim(), kernel.norm(), std::move(coeffs)));

    SampleMatrix ind(k, x.length());
    for (int s = 0; s < k; ++s) {
      for (std::size_t i = 0; i < x.length(); ++i) ind(s, i) = x(s, i) == atoms[pick[s]] ? 1.0 : 0.0;
    }
    out.samples.push_back(std::move(ind));
  }
  return out;
}

}  // namespace decoupling
