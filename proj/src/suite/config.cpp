#include <algorithm>
#include <cmath>
#include <functional>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "decoupling/numeric.hpp"
#include "decoupling/suite.hpp"

namespace decoupling {

using nlohmann::json;

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::string out = std::to_string(issues.size()) + " problem(s) in config";
  for (const auto& i : issues) out += "\n  " + i;
  return out;
}

class Issues {
 public:
  void add(const std::string& path, const std::string& msg) { list_.push_back(path + ": " + msg); }
  bool empty() const { return list_.empty(); }
  std::size_t size() const { return list_.size(); }
  std::vector<std::string> take() { return std::move(list_); }

 private:
  std::vector<std::string> list_;
};

std::string at(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

bool require_object(const json& j, const std::string& path, Issues& issues) {
  if (!j.is_object()) {
    issues.add(path, "expected an object");
    return false;
  }
  return true;
}

void check_fields(const json& j, const std::string& path, const std::set<std::string>& allowed, Issues& issues) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) issues.add(at(path, key), "unknown field");
  }
}

const json* field(const json& j, const std::string& key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

std::optional<double> get_number(const json& j, const std::string& key, const std::string& path, Issues& issues,
                                 bool required) {
  const json* v = field(j, key);
  if (!v) {
    if (required) issues.add(at(path, key), "required field missing");
    return std::nullopt;
  }
  if (v->is_number()) return v->get<double>();
  if (v->is_string() && (v->get<std::string>() == "inf" || v->get<std::string>() == "infinity")) {
    return std::numeric_limits<double>::infinity();
  }
  issues.add(at(path, key), "expected a number");
  return std::nullopt;
}

std::optional<std::int64_t> get_integer(const json& j, const std::string& key, const std::string& path,
                                        Issues& issues, bool required) {
  const json* v = field(j, key);
  if (!v) {
    if (required) issues.add(at(path, key), "required field missing");
    return std::nullopt;
  }
  if (v->is_number_integer()) return v->get<std::int64_t>();
  issues.add(at(path, key), "expected an integer");
  return std::nullopt;
}

std::optional<std::uint64_t> get_seed(const json& j, const std::string& key, const std::string& path,
                                      Issues& issues, bool required) {
  const json* v = field(j, key);
  if (!v) {
    if (required) issues.add(at(path, key), "required field missing");
    return std::nullopt;
  }
  if (v->is_number_unsigned()) return v->get<std::uint64_t>();
  if (v->is_number_integer() && v->get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v->get<std::int64_t>());
  issues.add(at(path, key), "expected a nonnegative integer");
  return std::nullopt;
}

std::optional<std::string> get_string(const json& j, const std::string& key, const std::string& path,
                                      Issues& issues, bool required) {
  const json* v = field(j, key);
  if (!v) {
    if (required) issues.add(at(path, key), "required field missing");
    return std::nullopt;
  }
  if (v->is_string()) return v->get<std::string>();
  issues.add(at(path, key), "expected a string");
  return std::nullopt;
}

std::optional<bool> get_bool(const json& j, const std::string& key, const std::string& path, Issues& issues) {
  const json* v = field(j, key);
  if (!v) return std::nullopt;
  if (v->is_boolean()) return v->get<bool>();
  issues.add(at(path, key), "expected true or false");
  return std::nullopt;
}

std::optional<std::vector<double>> get_numbers(const json& j, const std::string& key, const std::string& path,
                                               Issues& issues, bool required) {
  const json* v = field(j, key);
  if (!v) {
    if (required) issues.add(at(path, key), "required field missing");
    return std::nullopt;
  }
  if (!v->is_array()) {
    issues.add(at(path, key), "expected a list of numbers");
    return std::nullopt;
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < v->size(); ++i) {
    if (!(*v)[i].is_number()) {
      issues.add(at(at(path, key), i), "expected a number");
      return std::nullopt;
    }
    out.push_back((*v)[i].get<double>());
  }
  return out;
}

std::optional<std::vector<int>> get_ints(const json& j, const std::string& key, const std::string& path,
                                         Issues& issues, bool required) {
  const json* v = field(j, key);
  if (!v) {
    if (required) issues.add(at(path, key), "required field missing");
    return std::nullopt;
  }
  if (!v->is_array()) {
    issues.add(at(path, key), "expected a list of integers");
    return std::nullopt;
  }
  std::vector<int> out;
  for (std::size_t i = 0; i < v->size(); ++i) {
    if (!(*v)[i].is_number_integer()) {
      issues.add(at(at(path, key), i), "expected an integer");
      return std::nullopt;
    }
    out.push_back((*v)[i].get<int>());
  }
  return out;
}

// Runs `build`, turning a library Error into an issue at `path`.
template <class Fn>
auto guarded(const std::string& path, Issues& issues, Fn&& build) -> std::optional<decltype(build())> {
  try {
    return build();
  } catch (const Error& e) {
    issues.add(path, e.what());
    return std::nullopt;
  }
}

std::optional<NormTag> parse_norm_tag(const json& j, const std::string& path, Issues& issues) {
  if (!field(j, "norm")) return NormTag();
  const auto p = get_number(j, "norm", path, issues, true);
  if (!p) return std::nullopt;
  return guarded(at(path, "norm"), issues, [&] { return std::isinf(*p) ? NormTag::infinity() : NormTag(*p); });
}

std::optional<DiagonalFreeArray> parse_array(const json& j, const std::string& path, const std::string& case_id,
                                             Issues& issues) {
  if (!require_object(j, path, issues)) return std::nullopt;
  check_fields(j, path, {"rank", "dim", "norm", "entries", "random", "all_ones"}, issues);
  const int forms = static_cast<int>(field(j, "entries") != nullptr) + static_cast<int>(field(j, "random") != nullptr) +
                    static_cast<int>(field(j, "all_ones") != nullptr);
  if (forms != 1) {
    issues.add(path, "give exactly one of 'entries', 'random', 'all_ones'");
    return std::nullopt;
  }
  const auto tag = parse_norm_tag(j, path, issues);
  if (!tag) return std::nullopt;

  if (const json* entries = field(j, "entries")) {
    const auto rank = get_integer(j, "rank", path, issues, true);
    const auto dim = get_integer(j, "dim", path, issues, false).value_or(1);
    if (!rank) return std::nullopt;
    const std::string epath = at(path, "entries");
    if (!entries->is_array()) {
      issues.add(epath, "expected a list");
      return std::nullopt;
    }
    std::vector<std::pair<MultiIndex, Vector>> list;
    bool ok = true;
    for (std::size_t i = 0; i < entries->size(); ++i) {
      const json& e = (*entries)[i];
      const std::string ip = at(epath, i);
      if (!require_object(e, ip, issues)) {
        ok = false;
        continue;
      }
      check_fields(e, ip, {"index", "value"}, issues);
      const auto idx = get_ints(e, "index", ip, issues, true);
      std::optional<std::vector<double>> value;
      if (const json* v = field(e, "value"); v && v->is_number()) {
        value = std::vector<double>{v->get<double>()};
      } else {
        value = get_numbers(e, "value", ip, issues, true);
      }
      if (!idx || !value) {
        ok = false;
        continue;
      }
      list.emplace_back(*idx, *value);
    }
    if (!ok) return std::nullopt;
    return guarded(path, issues, [&] {
      return DiagonalFreeArray::build(static_cast<int>(*rank), static_cast<int>(dim), *tag, list);
    });
  }

  if (const json* r = field(j, "random")) {
    const std::string rp = at(path, "random");
    if (!require_object(*r, rp, issues)) return std::nullopt;
    check_fields(*r, rp, {"rank", "n", "dim", "density", "seed", "tetrahedral"}, issues);
    const auto rank = get_integer(*r, "rank", rp, issues, true);
    const auto n = get_integer(*r, "n", rp, issues, true);
    const auto dim = get_integer(*r, "dim", rp, issues, false).value_or(1);
    const auto density = get_number(*r, "density", rp, issues, false).value_or(1.0);
    const auto seed = get_seed(*r, "seed", rp, issues, false).value_or(fnv1a(case_id));
    const auto tetra = get_bool(*r, "tetrahedral", rp, issues).value_or(false);
    if (!rank || !n) return std::nullopt;
    return guarded(rp, issues, [&] {
      auto rng = make_engine(SeedPath{seed, {}});
      return random_array(static_cast<int>(*rank), static_cast<int>(*n), static_cast<int>(dim), *tag, density, rng,
                          tetra);
    });
  }

  const json& ones = *field(j, "all_ones");
  const std::string op = at(path, "all_ones");
  if (!require_object(ones, op, issues)) return std::nullopt;
  check_fields(ones, op, {"rank", "n", "dim"}, issues);
  const auto rank = get_integer(ones, "rank", op, issues, true);
  const auto n = get_integer(ones, "n", op, issues, true);
  const auto dim = get_integer(ones, "dim", op, issues, false).value_or(1);
  if (!rank || !n) return std::nullopt;
  return guarded(op, issues, [&] {
    if (*rank < 1 || *rank > *n) throw Error(ErrorCode::DomainError, "need 1 <= rank <= n");
    std::vector<std::pair<MultiIndex, Vector>> list;
    MultiIndex idx(static_cast<std::size_t>(*rank), 1);
    // Every tuple of distinct indices in 1..n.
    std::function<void(std::size_t)> fill = [&](std::size_t slot) {
      if (slot == idx.size()) {
        list.emplace_back(idx, Vector(static_cast<std::size_t>(dim), 1.0));
        return;
      }
      for (int i = 1; i <= *n; ++i) {
        if (std::find(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(slot), i) !=
            idx.begin() + static_cast<std::ptrdiff_t>(slot)) {
          continue;
        }
        idx[slot] = i;
        fill(slot + 1);
      }
    };
    fill(0);
    return DiagonalFreeArray::build(static_cast<int>(*rank), static_cast<int>(dim), *tag, list);
  });
}

const std::set<std::string> kDistributionFields{"family", "p", "a", "b", "atoms", "probs"};

std::optional<DistributionSpec> parse_distribution_fields(const json& j, const std::string& path, Issues& issues) {
  const auto family = get_string(j, "family", path, issues, true);
  if (!family) return std::nullopt;
  const std::size_t before = issues.size();
  auto spec = guarded(at(path, "family"), issues, [&] { return family_from_string(*family); });
  if (!spec) return std::nullopt;
  DistributionSpec d;
  switch (*spec) {
    case Family::Rademacher: d = DistributionSpec::rademacher(); break;
    case Family::Gaussian: d = DistributionSpec::gaussian(); break;
    case Family::Uniform: {
      const auto a = get_number(j, "a", path, issues, true);
      const auto b = get_number(j, "b", path, issues, true);
      if (!a || !b) return std::nullopt;
      d = DistributionSpec::uniform(*a, *b);
      break;
    }
    case Family::Bernoulli: {
      const auto p = get_number(j, "p", path, issues, true);
      if (!p) return std::nullopt;
      d = DistributionSpec::bernoulli(*p);
      break;
    }
    case Family::Discrete: {
      const auto atoms = get_numbers(j, "atoms", path, issues, true);
      const auto probs = get_numbers(j, "probs", path, issues, true);
      if (!atoms || !probs) return std::nullopt;
      d = DistributionSpec::discrete(*atoms, *probs);
      break;
    }
  }
  const std::map<Family, std::set<std::string>> used{{Family::Rademacher, {}},
                                                     {Family::Gaussian, {}},
                                                     {Family::Uniform, {"a", "b"}},
                                                     {Family::Bernoulli, {"p"}},
                                                     {Family::Discrete, {"atoms", "probs"}}};
  for (const char* key : {"p", "a", "b", "atoms", "probs"}) {
    if (field(j, key) && !used.at(*spec).count(key)) issues.add(at(path, key), "not a parameter of " + *family);
  }
  if (issues.size() != before) return std::nullopt;
  if (!guarded(path, issues, [&] {
        d.validate();
        return true;
      })) {
    return std::nullopt;
  }
  return d;
}

std::optional<DistributionSpec> parse_distribution(const json& j, const std::string& path, Issues& issues) {
  if (!require_object(j, path, issues)) return std::nullopt;
  check_fields(j, path, kDistributionFields, issues);
  return parse_distribution_fields(j, path, issues);
}

std::optional<SequenceSpec> parse_sequence(const json& j, const std::string& path, Issues& issues) {
  if (!require_object(j, path, issues)) return std::nullopt;
  auto allowed = kDistributionFields;
  allowed.insert({"length", "structure"});
  check_fields(j, path, allowed, issues);
  const auto dist = parse_distribution_fields(j, path, issues);
  const auto length = get_integer(j, "length", path, issues, true);
  const auto structure = get_string(j, "structure", path, issues, false).value_or("iid_rows");
  const auto s = guarded(at(path, "structure"), issues, [&] { return structure_from_string(structure); });
  if (length && *length < 1) issues.add(at(path, "length"), "must be >= 1");
  if (!dist || !length || *length < 1 || !s) return std::nullopt;
  return SequenceSpec{*dist, static_cast<std::size_t>(*length), *s};
}

std::optional<RiFunctional> parse_functional(const json& j, const std::string& path, Issues& issues) {
  if (!require_object(j, path, issues)) return std::nullopt;
  check_fields(j, path, {"kind", "p", "t", "exponent", "grid"}, issues);
  const auto kind = get_string(j, "kind", path, issues, false).value_or("lp");
  if (kind == "lp") {
    const auto p = get_number(j, "p", path, issues, true);
    if (!p) return std::nullopt;
    return guarded(path, issues, [&] { return RiFunctional::lp(*p); });
  }
  if (kind == "orlicz_power") {
    const auto p = get_number(j, "p", path, issues, true);
    if (!p) return std::nullopt;
    return guarded(path, issues, [&] { return RiFunctional::luxemburg(OrliczFunction::power(*p)); });
  }
  if (kind == "phi_t") {
    const auto t = get_number(j, "t", path, issues, true);
    if (!t) return std::nullopt;
    return guarded(path, issues, [&] { return RiFunctional::luxemburg(OrliczFunction::phi_t(*t)); });
  }
  if (kind == "double_star") {
    const auto t = get_number(j, "t", path, issues, true);
    if (!t) return std::nullopt;
    return guarded(path, issues, [&] { return RiFunctional::double_star_at(*t); });
  }
  if (kind == "lorentz") {
    const auto e = get_number(j, "exponent", path, issues, true);
    const auto grid = get_integer(j, "grid", path, issues, false).value_or(256);
    if (!e) return std::nullopt;
    return guarded(path, issues, [&] { return RiFunctional::lorentz_power(*e, static_cast<int>(grid)); });
  }
  issues.add(at(path, "kind"), "unknown functional '" + kind + "' (lp, orlicz_power, phi_t, double_star, lorentz)");
  return std::nullopt;
}

std::optional<McConfig> parse_mc(const json& j, const std::string& path, McConfig base, Issues& issues) {
  if (!require_object(j, path, issues)) return std::nullopt;
  check_fields(j, path,
               {"trials", "bootstrap", "confidence", "mode", "budget", "stability_seeds", "stability_factor"}, issues);
  const std::size_t before = issues.size();
  if (auto v = get_integer(j, "trials", path, issues, false)) base.trials = static_cast<std::size_t>(std::max<std::int64_t>(0, *v));
  if (auto v = get_integer(j, "bootstrap", path, issues, false)) base.bootstrap = static_cast<std::size_t>(std::max<std::int64_t>(0, *v));
  if (auto v = get_number(j, "confidence", path, issues, false)) base.confidence = *v;
  if (auto v = get_string(j, "mode", path, issues, false)) {
    if (auto m = guarded(at(path, "mode"), issues, [&] { return eval_mode_from_string(*v); })) base.mode = *m;
  }
  if (auto v = get_seed(j, "budget", path, issues, false)) base.enumeration_budget = *v;
  if (auto v = get_integer(j, "stability_seeds", path, issues, false)) {
    base.stability_seeds = static_cast<std::size_t>(std::max<std::int64_t>(0, *v));
  }
  if (auto v = get_number(j, "stability_factor", path, issues, false)) base.stability_factor = *v;
  if (issues.size() != before) return std::nullopt;
  if (!guarded(path, issues, [&] {
        base.validate();
        return true;
      })) {
    return std::nullopt;
  }
  return base;
}

std::optional<EmpiricalDist> parse_law(const json& j, const std::string& path, Issues& issues) {
  if (!require_object(j, path, issues)) return std::nullopt;
  check_fields(j, path, {"values", "weights"}, issues);
  const auto values = get_numbers(j, "values", path, issues, true);
  const auto weights = get_numbers(j, "weights", path, issues, true);
  if (!values || !weights) return std::nullopt;
  if (values->size() != weights->size()) {
    issues.add(path, "values and weights differ in length");
    return std::nullopt;
  }
  return guarded(path, issues, [&] {
    std::vector<EmpiricalDist::Atom> atoms;
    for (std::size_t i = 0; i < values->size(); ++i) atoms.push_back({(*values)[i], (*weights)[i]});
    return EmpiricalDist::from_weighted(std::move(atoms));
  });
}

EmpiricalDist random_law(std::mt19937_64& rng, int atoms) {
  std::uniform_real_distribution<double> value(0.05, 5.0);
  std::uniform_real_distribution<double> weight(0.05, 1.0);
  std::vector<EmpiricalDist::Atom> out;
  double total = 0.0;
  for (int i = 0; i < atoms; ++i) {
    out.push_back({value(rng), weight(rng)});
    total += out.back().weight;
  }
  for (auto& a : out) a.weight /= total;
  return EmpiricalDist::from_weighted(std::move(out));
}

std::vector<std::string> ops_list() {
  return {"polarization",  "interchange_identity", "moment_decoupling", "ustat_decoupling",
          "tail_decoupling", "contraction",        "max_lemmas",        "lp_implies_tail",
          "note8_chain",   "weighted_limsup",      "mpz_bound"};
}

std::set<std::string> op_fields(const std::string& op) {
  static const std::map<std::string, std::set<std::string>> table{
      {"polarization", {"count", "ranks", "dims", "n", "seed"}},
      {"interchange_identity", {"array", "sequence", "r", "pattern"}},
      {"moment_decoupling", {"case", "array", "sequence", "norm"}},
      {"ustat_decoupling", {"case", "kernel", "sequence", "norm"}},
      {"tail_decoupling", {"case", "array", "sequence", "t_grid"}},
      {"contraction", {"case", "array", "sequence", "t_grid", "multipliers", "comparison", "domination_constant"}},
      {"max_lemmas", {"distribution", "n_grid", "theta_fractions", "p", "q", "c"}},
      {"lp_implies_tail", {"x", "y", "p", "q", "c1", "c2", "n_max"}},
      {"note8_chain", {"pairs", "random_pairs", "t_grid"}},
      {"weighted_limsup", {"laws", "array", "sequence", "exponent", "c_grid", "t_grid"}},
      {"mpz_bound", {"degree", "n", "p", "q", "family"}},
  };
  auto fields = table.at(op);
  fields.insert({"id", "op", "mc", "description"});
  return fields;
}

void parse_case_body(const json& j, const std::string& path, CaseSpec& c, Issues& issues) {
  auto need = [&](const char* key) -> const json* {
    const json* v = field(j, key);
    if (!v) issues.add(at(path, key), "required field missing");
    return v;
  };
  auto array_field = [&](const char* key) {
    if (const json* a = need(key)) c.array = parse_array(*a, at(path, key), c.id, issues);
  };
  auto sequence_field = [&] {
    if (const json* s = need("sequence")) c.sequence = parse_sequence(*s, at(path, "sequence"), issues);
  };
  auto norm_field = [&] {
    if (const json* n = need("norm")) c.norm = parse_functional(*n, at(path, "norm"), issues);
  };
  auto t_grid_field = [&] {
    if (auto g = get_numbers(j, "t_grid", path, issues, true)) {
      if (g->empty()) issues.add(at(path, "t_grid"), "must not be empty");
      c.t_grid = *g;
    }
  };
  auto variant = [&](const std::vector<std::string>& allowed) {
    if (auto v = get_string(j, "case", path, issues, true)) {
      if (std::find(allowed.begin(), allowed.end(), *v) == allowed.end()) {
        std::string list;
        for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
        issues.add(at(path, "case"), "unknown case '" + *v + "' (" + list + ")");
      }
      c.variant = *v;
    }
  };

  const std::string& op = c.op;
  if (op == "polarization") {
    c.count = static_cast<std::size_t>(get_integer(j, "count", path, issues, true).value_or(0));
    c.ranks = get_ints(j, "ranks", path, issues, true).value_or(std::vector<int>{});
    c.dims = get_ints(j, "dims", path, issues, false).value_or(std::vector<int>{1});
    c.n = static_cast<int>(get_integer(j, "n", path, issues, false).value_or(6));
    for (int k : c.ranks) {
      if (k < 1 || k > c.n) issues.add(at(path, "ranks"), "ranks must lie in 1..n");
    }
    for (int d : c.dims) {
      if (d < 1) issues.add(at(path, "dims"), "dimensions must be >= 1");
    }
    c.seed = get_seed(j, "seed", path, issues, false);
  } else if (op == "interchange_identity") {
    array_field("array");
    sequence_field();
    c.r = static_cast<int>(get_integer(j, "r", path, issues, true).value_or(0));
    c.pattern = get_ints(j, "pattern", path, issues, true).value_or(std::vector<int>{});
    if (c.sequence && !c.sequence->dist.finitely_supported()) {
      issues.add(at(path, "sequence.family"), "interchange identity needs a finitely supported law");
    }
  } else if (op == "moment_decoupling") {
    variant({"A_upper", "B_lower", "triangle", "centering"});
    array_field("array");
    sequence_field();
    norm_field();
  } else if (op == "ustat_decoupling") {
    variant({"A_prime", "B_prime"});
    sequence_field();
    norm_field();
    if (const json* k = need("kernel")) {
      const std::string kp = at(path, "kernel");
      if (require_object(*k, kp, issues)) {
        check_fields(*k, kp, {"shape", "lo", "hi", "array"}, issues);
        KernelShape shape;
        if (auto s = get_string(*k, "shape", kp, issues, true)) {
          if (!is_registered_kernel(*s)) {
            std::string names;
            for (const auto& n : registered_kernels()) names += (names.empty() ? "" : ", ") + n;
            issues.add(at(kp, "shape"), "unknown kernel '" + *s + "' (registered: " + names + ")");
          }
          shape.name = *s;
        }
        shape.lo = get_number(*k, "lo", kp, issues, false).value_or(shape.lo);
        shape.hi = get_number(*k, "hi", kp, issues, false).value_or(shape.hi);
        c.kernel = shape;
        if (const json* a = field(*k, "array")) {
          c.array = parse_array(*a, at(kp, "array"), c.id, issues);
        } else {
          issues.add(at(kp, "array"), "required field missing");
        }
      }
    }
  } else if (op == "tail_decoupling") {
    variant({"A_tail", "B_tail"});
    array_field("array");
    sequence_field();
    t_grid_field();
  } else if (op == "contraction") {
    variant({"multiplier", "maximal", "comparison"});
    array_field("array");
    sequence_field();
    t_grid_field();
    if (c.variant == "multiplier") {
      c.multipliers = get_numbers(j, "multipliers", path, issues, true).value_or(std::vector<double>{});
    }
    if (c.variant == "comparison") {
      if (const json* d = need("comparison")) c.comparison = parse_distribution(*d, at(path, "comparison"), issues);
      c.domination_constant = get_number(j, "domination_constant", path, issues, false).value_or(1.0);
    }
  } else if (op == "max_lemmas") {
    if (const json* d = need("distribution")) c.law_x = parse_distribution(*d, at(path, "distribution"), issues);
    const auto ns = get_ints(j, "n_grid", path, issues, true).value_or(std::vector<int>{});
    for (int n : ns) {
      if (n < 1) issues.add(at(path, "n_grid"), "entries must be >= 1");
      c.n_grid.push_back(static_cast<std::size_t>(std::max(n, 1)));
    }
    c.theta_fractions = get_numbers(j, "theta_fractions", path, issues, true).value_or(std::vector<double>{});
    c.p = get_number(j, "p", path, issues, true).value_or(1.0);
    c.q = get_number(j, "q", path, issues, true).value_or(2.0);
    c.c = get_number(j, "c", path, issues, false).value_or(0.0);
    if (c.law_x && !c.law_x->finitely_supported()) {
      issues.add(at(path, "distribution.family"), "lemma checks need a finitely supported law");
    }
  } else if (op == "lp_implies_tail") {
    if (const json* d = need("x")) c.law_x = parse_distribution(*d, at(path, "x"), issues);
    if (const json* d = need("y")) c.law_y = parse_distribution(*d, at(path, "y"), issues);
    c.p = get_number(j, "p", path, issues, true).value_or(1.0);
    c.q = get_number(j, "q", path, issues, true).value_or(2.0);
    c.c1 = get_number(j, "c1", path, issues, false).value_or(0.0);
    c.c2 = get_number(j, "c2", path, issues, false).value_or(0.0);
    c.n_max = static_cast<std::size_t>(get_integer(j, "n_max", path, issues, false).value_or(0));
    for (const auto* d : {&c.law_x, &c.law_y}) {
      if (*d && !(*d)->finitely_supported()) issues.add(path, "laws must be finitely supported");
    }
  } else if (op == "note8_chain") {
    t_grid_field();
    if (const json* pairs = field(j, "pairs")) {
      const std::string pp = at(path, "pairs");
      if (!pairs->is_array()) {
        issues.add(pp, "expected a list");
      } else {
        for (std::size_t i = 0; i < pairs->size(); ++i) {
          const json& pr = (*pairs)[i];
          const std::string ip = at(pp, i);
          if (!require_object(pr, ip, issues)) continue;
          check_fields(pr, ip, {"xi", "eta"}, issues);
          std::optional<EmpiricalDist> xi, eta;
          if (const json* x = field(pr, "xi")) xi = parse_law(*x, at(ip, "xi"), issues);
          else issues.add(at(ip, "xi"), "required field missing");
          if (const json* e = field(pr, "eta")) eta = parse_law(*e, at(ip, "eta"), issues);
          else issues.add(at(ip, "eta"), "required field missing");
          if (xi && eta) c.pairs.emplace_back(*xi, *eta);
        }
      }
    } else if (const json* rp = field(j, "random_pairs")) {
      const std::string rpp = at(path, "random_pairs");
      if (require_object(*rp, rpp, issues)) {
        check_fields(*rp, rpp, {"count", "min_atoms", "max_atoms", "seed"}, issues);
        const auto count = get_integer(*rp, "count", rpp, issues, true).value_or(0);
        const auto lo = get_integer(*rp, "min_atoms", rpp, issues, false).value_or(2);
        const auto hi = get_integer(*rp, "max_atoms", rpp, issues, false).value_or(5);
        const auto seed = get_seed(*rp, "seed", rpp, issues, false).value_or(fnv1a(c.id));
        if (lo < 1 || hi < lo) {
          issues.add(rpp, "need 1 <= min_atoms <= max_atoms");
        } else {
          auto rng = make_engine(SeedPath{seed, {}});
          std::uniform_int_distribution<int> size(static_cast<int>(lo), static_cast<int>(hi));
          for (std::int64_t i = 0; i < count; ++i) {
            auto xi = random_law(rng, size(rng));
            auto eta = random_law(rng, size(rng));
            c.pairs.emplace_back(std::move(xi), std::move(eta));
          }
        }
      }
    } else {
      issues.add(path, "give 'pairs' or 'random_pairs'");
    }
  } else if (op == "weighted_limsup") {
    c.exponent = get_number(j, "exponent", path, issues, true).value_or(2.0);
    c.c_grid = get_numbers(j, "c_grid", path, issues, true).value_or(std::vector<double>{});
    t_grid_field();
    if (const json* laws = field(j, "laws")) {
      const std::string lp = at(path, "laws");
      if (require_object(*laws, lp, issues)) {
        check_fields(*laws, lp, {"xi", "eta"}, issues);
        std::optional<EmpiricalDist> xi, eta;
        if (const json* x = field(*laws, "xi")) xi = parse_law(*x, at(lp, "xi"), issues);
        else issues.add(at(lp, "xi"), "required field missing");
        if (const json* e = field(*laws, "eta")) eta = parse_law(*e, at(lp, "eta"), issues);
        else issues.add(at(lp, "eta"), "required field missing");
        if (xi && eta) c.pairs.emplace_back(*xi, *eta);
      }
    } else {
      array_field("array");
      sequence_field();
      if (c.sequence && !c.sequence->dist.finitely_supported()) {
        issues.add(at(path, "sequence.family"), "chaos laws are enumerated; use a finitely supported law");
      }
    }
  } else if (op == "mpz_bound") {
    const auto degree = get_integer(j, "degree", path, issues, true).value_or(1);
    c.n = static_cast<int>(get_integer(j, "n", path, issues, true).value_or(1));
    c.p = get_number(j, "p", path, issues, true).value_or(2.0);
    c.q = get_number(j, "q", path, issues, true).value_or(4.0);
    if (!(c.p > 1.0 && c.q > c.p)) issues.add(path, "need 1 < p < q");
    if (const json* fam = need("family")) {
      const std::string fp = at(path, "family");
      if (require_object(*fam, fp, issues)) {
        check_fields(*fam, fp, {"random", "arrays"}, issues);
        if (const json* r = field(*fam, "random")) {
          const std::string rp = at(fp, "random");
          if (require_object(*r, rp, issues)) {
            check_fields(*r, rp, {"count", "density", "seed", "tetrahedral"}, issues);
            const auto count = get_integer(*r, "count", rp, issues, true).value_or(0);
            const auto density = get_number(*r, "density", rp, issues, false).value_or(0.7);
            const auto seed = get_seed(*r, "seed", rp, issues, false).value_or(fnv1a(c.id));
            const auto tetra = get_bool(*r, "tetrahedral", rp, issues).value_or(true);
            guarded(rp, issues, [&] {
              auto rng = make_engine(SeedPath{seed, {}});
              for (std::int64_t i = 0; i < count; ++i) {
                c.family.push_back(random_array(static_cast<int>(degree), c.n, 1, NormTag(), density, rng, tetra));
              }
              return true;
            });
          }
        } else if (const json* arrays = field(*fam, "arrays")) {
          const std::string ap = at(fp, "arrays");
          if (!arrays->is_array()) {
            issues.add(ap, "expected a list");
          } else {
            for (std::size_t i = 0; i < arrays->size(); ++i) {
              if (auto a = parse_array((*arrays)[i], at(ap, i), c.id, issues)) {
                if (a->rank() != degree) issues.add(at(ap, i), "rank differs from degree");
                c.family.push_back(std::move(*a));
              }
            }
          }
        } else {
          issues.add(fp, "give 'random' or 'arrays'");
        }
      }
    }
  }
}

}  // namespace

ValidationFailure::ValidationFailure(std::vector<std::string> issues)
    : Error(ErrorCode::ValidationError, join_issues(issues)), issues_(std::move(issues)) {}

const std::vector<std::string>& supported_ops() {
  static const std::vector<std::string> ops = ops_list();
  return ops;
}

ExperimentConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  Issues issues;
  ExperimentConfig cfg;
  if (!doc.is_object()) throw ValidationFailure({"<root>: expected an object"});
  check_fields(doc, "", {"schema", "experiment", "master_seed", "defaults", "outputs", "cases", "description"}, issues);

  if (const auto schema = get_integer(doc, "schema", "", issues, true); schema && *schema != kConfigSchema) {
    issues.add("schema", "unsupported schema " + std::to_string(*schema) + " (expected " +
                             std::to_string(kConfigSchema) + ")");
  }
  cfg.experiment = get_string(doc, "experiment", "", issues, true).value_or("");
  cfg.master_seed = get_seed(doc, "master_seed", "", issues, true).value_or(0);

  McConfig defaults;
  defaults.master_seed = cfg.master_seed;
  if (const json* d = field(doc, "defaults")) {
    if (auto parsed = parse_mc(*d, "defaults", defaults, issues)) defaults = *parsed;
  }

  if (const json* out = field(doc, "outputs")) {
    if (require_object(*out, "outputs", issues)) {
      check_fields(*out, "outputs", {"json", "csv", "text"}, issues);
      if (auto p = get_string(*out, "json", "outputs", issues, false)) cfg.outputs.json = *p;
      if (auto p = get_string(*out, "csv", "outputs", issues, false)) cfg.outputs.csv = *p;
      if (auto p = get_string(*out, "text", "outputs", issues, false)) cfg.outputs.text = *p;
    }
  }

  const json* cases = field(doc, "cases");
  if (!cases) {
    issues.add("cases", "required field missing");
  } else if (!cases->is_array()) {
    issues.add("cases", "expected a list");
  } else {
    std::map<std::string, std::size_t> seen;
    for (std::size_t i = 0; i < cases->size(); ++i) {
      const json& cj = (*cases)[i];
      const std::string path = at("cases", i);
      if (!require_object(cj, path, issues)) continue;
      CaseSpec c;
      c.mc = defaults;
      c.id = get_string(cj, "id", path, issues, true).value_or("");
      if (!c.id.empty()) {
        if (auto [it, fresh] = seen.emplace(c.id, i); !fresh) {
          issues.add(at(path, "id"), "duplicate case id '" + c.id + "' (also cases[" + std::to_string(it->second) + "])");
        }
      }
      const auto op = get_string(cj, "op", path, issues, true);
      if (!op) continue;
      const auto& ops = supported_ops();
      if (std::find(ops.begin(), ops.end(), *op) == ops.end()) {
        issues.add(at(path, "op"), "unknown operation '" + *op + "'");
        continue;
      }
      c.op = *op;
      check_fields(cj, path, op_fields(c.op), issues);
      if (const json* mc = field(cj, "mc")) {
        if (auto parsed = parse_mc(*mc, at(path, "mc"), defaults, issues)) c.mc = *parsed;
      }
      parse_case_body(cj, path, c, issues);
      cfg.cases.push_back(std::move(c));
    }
  }
  if (!issues.empty()) throw ValidationFailure(issues.take());
  return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace decoupling
