#include "decoupling/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace decoupling {

std::string to_string(Family f) {
  switch (f) {
    case Family::Rademacher: return "rademacher";
    case Family::Gaussian: return "gaussian";
    case Family::Uniform: return "uniform";
    case Family::Bernoulli: return "bernoulli";
    case Family::Discrete: return "discrete";
  }
  return "unknown";
}

Family family_from_string(const std::string& name) {
  for (Family f : {Family::Rademacher, Family::Gaussian, Family::Uniform, Family::Bernoulli,
                   Family::Discrete}) {
    if (to_string(f) == name) return f;
  }
  throw Error(ErrorCode::InvalidSpec, "unknown distribution family '" + name + "'");
}

DistributionSpec DistributionSpec::rademacher() { return {Family::Rademacher, {}, {}, {}}; }
DistributionSpec DistributionSpec::gaussian() { return {Family::Gaussian, {}, {}, {}}; }
DistributionSpec DistributionSpec::uniform(double a, double b) { return {Family::Uniform, {a, b}, {}, {}}; }
DistributionSpec DistributionSpec::bernoulli(double p) { return {Family::Bernoulli, {p}, {}, {}}; }
DistributionSpec DistributionSpec::discrete(std::vector<double> atoms, std::vector<double> probs) {
  return {Family::Discrete, {}, std::move(atoms), std::move(probs)};
}

void DistributionSpec::validate() const {
  auto expect_params = [&](std::size_t count) {
    if (params.size() != count) {
      throw Error(ErrorCode::InvalidSpec, to_string(family) + " takes " + std::to_string(count) +
                                              " parameter(s), got " + std::to_string(params.size()));
    }
    for (double v : params) {
      if (!std::isfinite(v)) throw Error(ErrorCode::InvalidSpec, "non-finite parameter");
    }
  };
  switch (family) {
    case Family::Rademacher:
    case Family::Gaussian:
      expect_params(0);
      break;
    case Family::Uniform:
      expect_params(2);
      if (!(params[0] < params[1])) throw Error(ErrorCode::InvalidSpec, "uniform(a, b) needs a < b");
      break;
    case Family::Bernoulli:
      expect_params(1);
      if (!(params[0] >= 0.0 && params[0] <= 1.0)) throw Error(ErrorCode::InvalidSpec, "bernoulli p outside [0,1]");
      break;
    case Family::Discrete: {
      expect_params(0);
      if (atoms.empty() || atoms.size() != probs.size()) {
        throw Error(ErrorCode::InvalidSpec, "discrete law needs matching non-empty atoms and probs");
      }
      double total = 0.0;
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (!std::isfinite(atoms[i])) throw Error(ErrorCode::InvalidSpec, "non-finite atom");
        if (!(probs[i] >= 0.0)) throw Error(ErrorCode::InvalidSpec, "negative probability");
        total += probs[i];
      }
      if (std::fabs(total - 1.0) > 1e-12) throw Error(ErrorCode::InvalidSpec, "probabilities do not sum to 1");
      break;
    }
  }
  if (family != Family::Discrete && (!atoms.empty() || !probs.empty())) {
    throw Error(ErrorCode::InvalidSpec, "atoms/probs only apply to discrete laws");
  }
}

bool DistributionSpec::finitely_supported() const noexcept {
  return family == Family::Rademacher || family == Family::Bernoulli || family == Family::Discrete;
}

bool DistributionSpec::symmetric() const {
  switch (family) {
    case Family::Rademacher:
    case Family::Gaussian:
      return true;
    case Family::Uniform:
      return params[0] == -params[1];
    case Family::Bernoulli:
      return params[0] == 0.0;
    case Family::Discrete: {
      auto atoms_probs = support();
      for (const auto& [v, p] : atoms_probs) {
        double mirrored = 0.0;
        double own = 0.0;
        for (const auto& [w, q] : atoms_probs) {
          if (w == -v) mirrored += q;
          if (w == v) own += q;
        }
        if (std::fabs(mirrored - own) > 1e-12) return false;
      }
      return true;
    }
  }
  return false;
}

double DistributionSpec::mean() const {
  switch (family) {
    case Family::Rademacher:
    case Family::Gaussian:
      return 0.0;
    case Family::Uniform:
      return 0.5 * (params[0] + params[1]);
    case Family::Bernoulli:
      return params[0];
    case Family::Discrete: {
      double m = 0.0;
      for (std::size_t i = 0; i < atoms.size(); ++i) m += atoms[i] * probs[i];
      return m;
    }
  }
  return 0.0;
}

std::vector<std::pair<double, double>> DistributionSpec::support() const {
  std::vector<std::pair<double, double>> out;
  switch (family) {
    case Family::Rademacher:
      out = {{1.0, 0.5}, {-1.0, 0.5}};
      break;
    case Family::Bernoulli:
      out = {{1.0, params.at(0)}, {0.0, 1.0 - params.at(0)}};
      break;
    case Family::Discrete:
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        auto it = std::find_if(out.begin(), out.end(), [&](const auto& a) { return a.first == atoms[i]; });
        if (it == out.end()) {
          out.emplace_back(atoms[i], probs[i]);
        } else {
          it->second += probs[i];
        }
      }
      break;
    default:
      throw Error(ErrorCode::NotFinitelySupported, to_string(family) + " has no finite support");
  }
  std::erase_if(out, [](const auto& a) { return a.second <= 0.0; });
  return out;
}

std::string to_string(RowStructure s) {
  return s == RowStructure::IidRows ? "iid_rows" : "interchangeable_shuffle";
}

RowStructure structure_from_string(const std::string& name) {
  if (name == "iid_rows") return RowStructure::IidRows;
  if (name == "interchangeable_shuffle") return RowStructure::InterchangeableShuffle;
  throw Error(ErrorCode::InvalidSpec, "unknown row structure '" + name + "'");
}

namespace {

constexpr std::uint64_t splitmix(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t SeedPath::key() const noexcept {
  std::uint64_t h = splitmix(master_seed ^ 0x6a09e667f3bcc909ULL);
  for (std::uint64_t p : path) h = splitmix(h ^ splitmix(p + 0x3c6ef372fe94f82bULL));
  return h;
}

SeedPath derive_stream(const SeedPath& seed, std::uint64_t child) {
  SeedPath out = seed;
  out.path.push_back(child);
  return out;
}

std::mt19937_64 make_engine(const SeedPath& seed) {
  return std::mt19937_64(seed.key());
}

double sample(const DistributionSpec& dist, std::mt19937_64& rng) {
  switch (dist.family) {
    case Family::Rademacher:
      return (rng() >> 63) ? 1.0 : -1.0;
    case Family::Gaussian:
      return std::normal_distribution<double>(0.0, 1.0)(rng);
    case Family::Uniform:
      return std::uniform_real_distribution<double>(dist.params[0], dist.params[1])(rng);
    case Family::Bernoulli:
      return std::bernoulli_distribution(dist.params[0])(rng) ? 1.0 : 0.0;
    case Family::Discrete: {
      std::discrete_distribution<std::size_t> pick(dist.probs.begin(), dist.probs.end());
      return dist.atoms[pick(rng)];
    }
  }
  return 0.0;
}

namespace {

std::span<double> pooled_cells(SampleMatrix& x) { return {&x(0, 0), x.rows() * x.length()}; }

}  // namespace

SampleMatrix draw_matrix(const SequenceSpec& spec, int k, const SeedPath& seed) {
  if (k < 1) throw Error(ErrorCode::InvalidSpec, "k must be >= 1");
  if (spec.length < 1) throw Error(ErrorCode::InvalidSpec, "sequence length must be >= 1");
  spec.dist.validate();
  auto rng = make_engine(seed);
  const std::size_t n = spec.length;

  SampleMatrix pooled(k, n);
  if (spec.dist.family == Family::Discrete) {
    std::discrete_distribution<std::size_t> pick(spec.dist.probs.begin(), spec.dist.probs.end());
    for (double& v : pooled_cells(pooled)) v = spec.dist.atoms[pick(rng)];
  } else {
    for (double& v : pooled_cells(pooled)) v = sample(spec.dist, rng);
  }
  if (spec.structure == RowStructure::IidRows) return pooled;

  // One pooled realization of k*n values, handed out to rows by a uniformly
  // random permutation of the k blocks.
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  SampleMatrix out(k, n);
  for (std::size_t j = 0; j < order.size(); ++j) {
    std::copy_n(pooled.row(order[j]).begin(), n, out.row(j).begin());
  }
  return out;
}

std::uint64_t outcome_count(const DistributionSpec& dist, int k, std::size_t n) {
  const std::uint64_t m = dist.support().size();
  std::uint64_t total = 1;
  for (std::size_t c = 0; c < static_cast<std::size_t>(k) * n; ++c) {
    if (total > std::numeric_limits<std::uint64_t>::max() / std::max<std::uint64_t>(m, 1)) return 0;
    total *= m;
  }
  return total;
}

void visit_outcomes(const DistributionSpec& dist, int k, std::size_t n, std::uint64_t begin,
                    std::uint64_t end, const std::function<void(const SampleMatrix&, double)>& visit) {
  const auto atoms = dist.support();
  const std::size_t m = atoms.size();
  const std::size_t cells = static_cast<std::size_t>(k) * n;
  std::vector<std::size_t> digit(cells, 0);
  std::uint64_t rest = begin;
  for (std::size_t c = 0; c < cells; ++c) {
    digit[c] = rest % m;
    rest /= m;
  }
  SampleMatrix x(k, n);
  for (std::uint64_t o = begin; o < end; ++o) {
    double prob = 1.0;
    for (std::size_t c = 0; c < cells; ++c) {
      x(c / n, c % n) = atoms[digit[c]].first;
      prob *= atoms[digit[c]].second;
    }
    visit(x, prob);
    for (std::size_t c = 0; c < cells; ++c) {
      if (++digit[c] < m) break;
      digit[c] = 0;
    }
  }
}

std::vector<std::pair<SampleMatrix, double>> enumerate_support(const DistributionSpec& dist, int k,
                                                               std::size_t n, std::uint64_t budget) {
  dist.validate();
  if (!dist.finitely_supported()) {
    throw Error(ErrorCode::NotFinitelySupported, to_string(dist.family) + " cannot be enumerated");
  }
  const std::uint64_t total = outcome_count(dist, k, n);
  if (total == 0 || total > budget) {
    throw Error(ErrorCode::BudgetExceeded, "product space exceeds the enumeration budget of " +
                                               std::to_string(budget) + " outcomes");
  }
  std::vector<std::pair<SampleMatrix, double>> out;
  out.reserve(total);
  visit_outcomes(dist, k, n, 0, total, [&](const SampleMatrix& x, double p) { out.emplace_back(x, p); });
  return out;
}

DiagonalFreeArray random_array(int rank, int n, int dim, NormTag norm, double density,
                               std::mt19937_64& rng, bool tetrahedral) {
  std::normal_distribution<double> coeff(0.0, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<std::pair<MultiIndex, Vector>> entries;
  MultiIndex idx(rank, 1);
  // Odometer over [1,n]^rank; only distinct tuples are kept.
  while (true) {
    MultiIndex sorted = idx;
    std::sort(sorted.begin(), sorted.end());
    const bool distinct = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
    const bool increasing = std::is_sorted(idx.begin(), idx.end());
    if (distinct && (!tetrahedral || increasing) && coin(rng) < density) {
      Vector v(dim);
      for (double& c : v) c = coeff(rng);
      entries.emplace_back(idx, std::move(v));
    }
    int j = 0;
    while (j < rank && ++idx[j] > n) idx[j++] = 1;
    if (j == rank) break;
  }
  return DiagonalFreeArray::build(rank, dim, norm, entries);
}

}  // namespace decoupling
