#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

#include "decoupling/chaos.hpp"
#include "decoupling/norms.hpp"
#include "decoupling/random.hpp"
#include "decoupling/verify.hpp"

namespace decoupling::detail {

/// Runs fn(i) for i in [0, count) on up to `workers` threads. Each index is
/// handled exactly once; results must be written to per-index slots. When
/// several indices throw, the exception of the smallest index is rethrown.
template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
  if (count == 0) return;
  const std::size_t threads = std::min<std::size_t>(workers == 0 ? 1 : workers, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex guard;
  std::size_t failed_index = count;
  std::exception_ptr failure;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(guard);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(body);
  body();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

using Statistic = std::function<double(const SampleMatrix&)>;

/// One side of an inequality: the law of stat(X) for X with `rows` rows of
/// the given coordinate law and structure.
struct Side {
  DistributionSpec dist;
  RowStructure structure = RowStructure::IidRows;
  int rows = 1;
  Statistic stat;
};

struct PairedLaws {
  bool exact = false;
  EmpiricalDist lhs;
  EmpiricalDist rhs;
  std::vector<double> lhs_values;  ///< Monte Carlo only, paired by trial
  std::vector<double> rhs_values;
  std::uint64_t outcomes = 0;
};

/// Whether both sides are enumerated. Throws for EvalMode::Exact when a side
/// is not finitely supported or exceeds the budget.
bool use_exact(const Side& lhs, const Side& rhs, std::size_t n, const McConfig& cfg);

/// Exact law of stat over the full product space.
EmpiricalDist exact_law(const Side& side, std::size_t n, const McConfig& cfg);

PairedLaws collect_laws(const Side& lhs, const Side& rhs, std::size_t n, const McConfig& cfg,
                        const SeedPath& base, bool exact);

using PairStatistic = std::function<std::vector<double>(const EmpiricalDist&, const EmpiricalDist&)>;

/// Percentile intervals of each component of `stat` over `cfg.bootstrap`
/// resamples of the trial index (the pairing is kept).
std::vector<std::pair<double, double>> paired_bootstrap(const std::vector<double>& lhs,
                                                        const std::vector<double>& rhs,
                                                        const PairStatistic& stat, const McConfig& cfg,
                                                        const SeedPath& seed);

/// Percentile interval of `values` at the given confidence (sorts a copy).
std::pair<double, double> percentile_interval(std::vector<double> values, double confidence);

/// Seed path of a case: (master seed, [hash of id, purpose]).
SeedPath case_seed(const std::string& case_id, std::uint64_t master_seed, std::uint64_t purpose);

/// Estimate, or nothing when the point value is not finite.
std::optional<Estimate> finite_estimate(double value, double lo, double hi);

inline constexpr std::uint64_t kPurposeTrials = 1;
inline constexpr std::uint64_t kPurposeBootstrap = 2;
inline constexpr std::uint64_t kPurposeCases = 3;

}  // namespace decoupling::detail
