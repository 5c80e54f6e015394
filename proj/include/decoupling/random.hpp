#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "decoupling/arrays.hpp"
#include "decoupling/chaos.hpp"

namespace decoupling {

enum class Family { Rademacher, Gaussian, Uniform, Bernoulli, Discrete };

std::string to_string(Family f);
Family family_from_string(const std::string& name);

/// Law of one coordinate xi_{j,i}.
struct DistributionSpec {
  Family family = Family::Rademacher;
  std::vector<double> params;  ///< uniform: {a, b}; bernoulli: {p}; others empty
  std::vector<double> atoms;   ///< discrete only
  std::vector<double> probs;   ///< discrete only

  static DistributionSpec rademacher();
  static DistributionSpec gaussian();
  static DistributionSpec uniform(double a, double b);
  static DistributionSpec bernoulli(double p);
  static DistributionSpec discrete(std::vector<double> atoms, std::vector<double> probs);

  /// Throws InvalidSpec on a violated parameter invariant.
  void validate() const;

  bool finitely_supported() const noexcept;
  bool symmetric() const;
  double mean() const;

  /// Atoms with positive probability, in the order they were declared.
  /// Throws NotFinitelySupported for continuous families.
  std::vector<std::pair<double, double>> support() const;

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;
};

enum class RowStructure { IidRows, InterchangeableShuffle };

std::string to_string(RowStructure s);
RowStructure structure_from_string(const std::string& name);

struct SequenceSpec {
  DistributionSpec dist;
  std::size_t length = 1;
  RowStructure structure = RowStructure::IidRows;
};

/// (master seed, path) naming an independent random stream. The stream key
/// is a pure function of both, so trials can be generated in any order.
struct SeedPath {
  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> path;

  std::uint64_t key() const noexcept;

  friend bool operator==(const SeedPath&, const SeedPath&) = default;
};

SeedPath derive_stream(const SeedPath& seed, std::uint64_t child);

/// Engine for one stream. mt19937_64 is fully specified by the standard.
std::mt19937_64 make_engine(const SeedPath& seed);

double sample(const DistributionSpec& dist, std::mt19937_64& rng);

/// k rows of length spec.length. Identical inputs give identical matrices.
SampleMatrix draw_matrix(const SequenceSpec& spec, int k, const SeedPath& seed);

inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 24;

/// Number of outcomes of k*n independent cells, or 0 when it overflows.
std::uint64_t outcome_count(const DistributionSpec& dist, int k, std::size_t n);

/// Visits outcomes [begin, end) of the product space in mixed-radix order
/// (cell 0 of row 0 varies fastest). The callback sees the matrix and its
/// exact probability.
void visit_outcomes(const DistributionSpec& dist, int k, std::size_t n, std::uint64_t begin,
                    std::uint64_t end, const std::function<void(const SampleMatrix&, double)>& visit);

/// Full finite sample space. Throws NotFinitelySupported or BudgetExceeded.
std::vector<std::pair<SampleMatrix, double>> enumerate_support(
    const DistributionSpec& dist, int k, std::size_t n,
    std::uint64_t budget = kDefaultEnumerationBudget);

/// Random diagonal-free array with Gaussian coefficients on indices 1..n.
/// `density` is the chance that a given distinct tuple is in the support.
DiagonalFreeArray random_array(int rank, int n, int dim, NormTag norm, double density,
                               std::mt19937_64& rng, bool tetrahedral = false);

}  // namespace decoupling
