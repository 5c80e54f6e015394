#include "verify/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "decoupling/numeric.hpp"

namespace decoupling::detail {

namespace {

constexpr std::uint64_t kChunk = 4096;

bool within_budget(const Side& s, std::size_t n, const McConfig& cfg) {
  const auto count = outcome_count(s.dist, s.rows, n);
  return count != 0 && count <= cfg.enumeration_budget;
}

bool share_sample(const Side& a, const Side& b) { return a.dist == b.dist && a.structure == b.structure; }

// Sorts by value (descending) and merges equal values; deterministic for a given input order.
std::vector<EmpiricalDist::Atom> compact(std::vector<EmpiricalDist::Atom> atoms) {
  std::stable_sort(atoms.begin(), atoms.end(), [](const auto& x, const auto& y) { return x.value > y.value; });
  std::vector<EmpiricalDist::Atom> out;
  for (const auto& a : atoms) {
    if (!out.empty() && out.back().value == a.value) {
      out.back().weight += a.weight;
    } else {
      out.push_back(a);
    }
  }
  return out;
}

struct ChunkResult {
  std::vector<EmpiricalDist::Atom> lhs;
  std::vector<EmpiricalDist::Atom> rhs;
};

std::vector<ChunkResult> enumerate_chunks(const DistributionSpec& dist, int rows, std::size_t n,
                                          const Statistic& first, const Statistic* second, unsigned workers) {
  const std::uint64_t total = outcome_count(dist, rows, n);
  const std::size_t chunks = static_cast<std::size_t>((total + kChunk - 1) / kChunk);
  std::vector<ChunkResult> results(chunks);
  parallel_for(chunks, workers, [&](std::size_t c) {
    const std::uint64_t begin = c * kChunk;
    const std::uint64_t end = std::min(total, begin + kChunk);
    ChunkResult& out = results[c];
    out.lhs.reserve(end - begin);
    if (second) out.rhs.reserve(end - begin);
    visit_outcomes(dist, rows, n, begin, end, [&](const SampleMatrix& x, double prob) {
      out.lhs.push_back({first(x), prob});
      if (second) out.rhs.push_back({(*second)(x), prob});
    });
    out.lhs = compact(std::move(out.lhs));
    if (second) out.rhs = compact(std::move(out.rhs));
  });
  return results;
}

EmpiricalDist gather(std::vector<ChunkResult>& chunks, bool rhs) {
  std::vector<EmpiricalDist::Atom> all;
  for (auto& c : chunks) {
    auto& part = rhs ? c.rhs : c.lhs;
    all.insert(all.end(), part.begin(), part.end());
  }
  return EmpiricalDist::from_weighted(std::move(all));
}

}  // namespace

bool use_exact(const Side& lhs, const Side& rhs, std::size_t n, const McConfig& cfg) {
  if (cfg.mode == EvalMode::MonteCarlo) return false;
  const bool finite = lhs.dist.finitely_supported() && rhs.dist.finitely_supported();
  if (!finite) {
    if (cfg.mode == EvalMode::Exact) {
      throw Error(ErrorCode::NotFinitelySupported, "exact mode needs finitely supported laws");
    }
    return false;
  }
  const bool fits = within_budget(lhs, n, cfg) && within_budget(rhs, n, cfg);
  if (!fits && cfg.mode == EvalMode::Exact) {
    throw Error(ErrorCode::BudgetExceeded, "sample space exceeds the enumeration budget");
  }
  return fits;
}

EmpiricalDist exact_law(const Side& side, std::size_t n, const McConfig& cfg) {
  if (!within_budget(side, n, cfg)) throw Error(ErrorCode::BudgetExceeded, "sample space exceeds the budget");
  auto chunks = enumerate_chunks(side.dist, side.rows, n, side.stat, nullptr, cfg.workers);
  return gather(chunks, false);
}

PairedLaws collect_laws(const Side& lhs, const Side& rhs, std::size_t n, const McConfig& cfg,
                        const SeedPath& base, bool exact) {
  PairedLaws out;
  out.exact = exact;
  if (exact) {
    if (lhs.dist == rhs.dist) {
      const int rows = std::max(lhs.rows, rhs.rows);
      Side joint{lhs.dist, lhs.structure, rows, lhs.stat};
      if (!within_budget(joint, n, cfg)) throw Error(ErrorCode::BudgetExceeded, "sample space exceeds the budget");
      auto chunks = enumerate_chunks(lhs.dist, rows, n, lhs.stat, &rhs.stat, cfg.workers);
      out.lhs = gather(chunks, false);
      out.rhs = gather(chunks, true);
      out.outcomes = outcome_count(lhs.dist, rows, n);
    } else {
      out.lhs = exact_law(lhs, n, cfg);
      out.rhs = exact_law(rhs, n, cfg);
      out.outcomes = outcome_count(lhs.dist, lhs.rows, n) + outcome_count(rhs.dist, rhs.rows, n);
    }
    return out;
  }

  const std::size_t trials = cfg.trials;
  out.lhs_values.assign(trials, 0.0);
  out.rhs_values.assign(trials, 0.0);
  const bool shared = share_sample(lhs, rhs);
  const SeedPath trial_root = derive_stream(base, kPurposeTrials);
  const std::size_t blocks = (trials + kChunk - 1) / kChunk;
  parallel_for(blocks, cfg.workers, [&](std::size_t b) {
    const std::size_t end = std::min<std::size_t>(trials, (b + 1) * kChunk);
    for (std::size_t t = b * kChunk; t < end; ++t) {
      const SeedPath seed = derive_stream(trial_root, t);
      if (shared) {
        const SampleMatrix x = draw_matrix({lhs.dist, n, lhs.structure}, std::max(lhs.rows, rhs.rows), seed);
        out.lhs_values[t] = lhs.stat(x);
        out.rhs_values[t] = rhs.stat(x);
      } else {
        out.lhs_values[t] = lhs.stat(draw_matrix({lhs.dist, n, lhs.structure}, lhs.rows, derive_stream(seed, 0)));
        out.rhs_values[t] = rhs.stat(draw_matrix({rhs.dist, n, rhs.structure}, rhs.rows, derive_stream(seed, 1)));
      }
    }
  });
  out.lhs = EmpiricalDist::from_samples(out.lhs_values);
  out.rhs = EmpiricalDist::from_samples(out.rhs_values);
  out.outcomes = trials;
  return out;
}

std::pair<double, double> percentile_interval(std::vector<double> values, double confidence) {
  if (values.empty()) throw Error(ErrorCode::DomainError, "no values for an interval");
  std::sort(values.begin(), values.end());
  auto at = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    const std::size_t j = std::min(i + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(i);
    if (frac == 0.0 || values[i] == values[j]) return values[i];
    return values[i] + frac * (values[j] - values[i]);
  };
  const double tail = (1.0 - confidence) / 2.0;
  return {at(tail), at(1.0 - tail)};
}

std::vector<std::pair<double, double>> paired_bootstrap(const std::vector<double>& lhs,
                                                        const std::vector<double>& rhs,
                                                        const PairStatistic& stat, const McConfig& cfg,
                                                        const SeedPath& seed) {
  const std::size_t n = lhs.size();
  if (n == 0 || rhs.size() != n) throw Error(ErrorCode::LengthMismatch, "paired bootstrap needs equal samples");

  auto order_desc = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
    return idx;
  };
  const auto order_l = order_desc(lhs);
  const auto order_r = order_desc(rhs);
  std::vector<double> sorted_l(n), sorted_r(n);
  for (std::size_t j = 0; j < n; ++j) {
    sorted_l[j] = lhs[order_l[j]];
    sorted_r[j] = rhs[order_r[j]];
  }

  const std::size_t reps = cfg.bootstrap;
  std::vector<std::vector<double>> results(reps);
  parallel_for(reps, cfg.workers, [&](std::size_t b) {
    auto rng = make_engine(derive_stream(seed, b));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<std::uint32_t> counts(n, 0);
    for (std::size_t i = 0; i < n; ++i) ++counts[pick(rng)];
    std::vector<std::uint32_t> cl(n), cr(n);
    for (std::size_t j = 0; j < n; ++j) {
      cl[j] = counts[order_l[j]];
      cr[j] = counts[order_r[j]];
    }
    results[b] = stat(EmpiricalDist::from_sorted_counts(sorted_l, cl), EmpiricalDist::from_sorted_counts(sorted_r, cr));
  });

  const std::size_t width = results.empty() ? 0 : results.front().size();
  std::vector<std::pair<double, double>> out;
  for (std::size_t c = 0; c < width; ++c) {
    std::vector<double> column;
    column.reserve(reps);
    for (const auto& r : results) {
      if (std::isfinite(r[c])) column.push_back(r[c]);
    }
    if (column.size() < reps) {
      // Resamples with an infinite statistic sit at the top of the distribution.
      const auto missing = reps - column.size();
      column.insert(column.end(), missing, std::numeric_limits<double>::infinity());
    }
    out.push_back(percentile_interval(std::move(column), cfg.confidence));
  }
  return out;
}

SeedPath case_seed(const std::string& case_id, std::uint64_t master_seed, std::uint64_t purpose) {
  return SeedPath{master_seed, {fnv1a(case_id), purpose}};
}

std::optional<Estimate> finite_estimate(double value, double lo, double hi) {
  if (!std::isfinite(value)) return std::nullopt;
  return Estimate{value, lo, hi};
}

}  // namespace decoupling::detail
