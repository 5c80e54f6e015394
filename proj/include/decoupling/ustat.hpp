#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "decoupling/arrays.hpp"
#include "decoupling/chaos.hpp"

namespace decoupling {

/// One kernel F_{i_1..i_k}: R^k -> R^m.
using KernelFn = std::function<Vector(std::span<const double>)>;

/// Array of kernels F = (F_{i_1..i_k}) vanishing on diagonals and outside a
/// finite support. Immutable; copies share the kernel table.
class UStatKernel {
 public:
  using Table = std::map<MultiIndex, KernelFn>;

  static UStatKernel build(int rank, int dim, NormTag norm, Table kernels);

  int rank() const noexcept { return rank_; }
  int dim() const noexcept { return dim_; }
  const NormTag& norm() const noexcept { return norm_; }
  const Table& kernels() const noexcept { return *table_; }
  int max_index() const noexcept;

  /// F_idx(args), or zero when idx is outside the support.
  Vector evaluate(const MultiIndex& idx, std::span<const double> args) const;

 private:
  UStatKernel(int rank, int dim, NormTag norm, std::shared_ptr<const Table> table)
      : rank_(rank), dim_(dim), norm_(norm), table_(std::move(table)) {}

  int rank_ = 1;
  int dim_ = 1;
  NormTag norm_;
  std::shared_ptr<const Table> table_;
};

/// Named scalar shapes g: R^k -> R used to turn a coefficient array into a
/// kernel F_t(x) = f_t * g(x).
///   product        g(x) = x_1 * ... * x_k
///   sum            g(x) = x_1 + ... + x_k
///   min            g(x) = min_j x_j
///   indicator-box  g(x) = 1 if lo <= x_j <= hi for all j, else 0
struct KernelShape {
  std::string name = "product";
  double lo = 0.0;
  double hi = 1.0;
};

bool is_registered_kernel(const std::string& name);
const std::vector<std::string>& registered_kernels();

/// F_t(x) = f_t * shape(x) on the support of f.
UStatKernel kernel_from_array(const DiagonalFreeArray& f, const KernelShape& shape);

/// sum_t F_t(x_{assign(1),t_1}, ..., x_{assign(k),t_k}), each term multiplied by
/// eps_{t_1}...eps_{t_k} when signs are given.
Vector eval_ustat(const UStatKernel& kernel, const SampleMatrix& x, const RowAssignment& assign,
                  std::optional<std::span<const double>> signs = std::nullopt);

/// F-hat_{i}(x) = (1/k!) sum_sigma F_{i o sigma}(x o sigma): kernel indices and
/// arguments are permuted jointly.
UStatKernel symmetrize_kernel(const UStatKernel& kernel);

/// Rewrites the decoupled U-statistic of a kernel over rows taking values in
/// a finite atom set as a sum of decoupled polynomials in indicator rows:
/// xi_{s,i} = sum_m atoms[m] 1{xi_{s,i} = atoms[m]}. The d-th term is indexed
/// by an atom tuple (m_1..m_k) with coefficients F_t(atoms[m_1..m_k]) and rows
/// I_{s,i} = 1{x_{s,i} = atoms[m_s]}.
struct IndicatorExpansion {
  std::vector<DiagonalFreeArray> arrays;
  std::vector<SampleMatrix> samples;

  std::vector<SumFormTerm> terms() const;
};

IndicatorExpansion expand_over_atoms(const UStatKernel& kernel, std::span<const double> atoms,
                                     const SampleMatrix& x);

}  // namespace decoupling
