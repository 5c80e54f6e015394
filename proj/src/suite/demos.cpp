#include <map>

#include "decoupling/suite.hpp"

namespace decoupling {

namespace {

const std::map<std::string, std::string>& demo_table() {
  static const std::map<std::string, std::string> table{
      {"note1", R"({
  "schema": 1,
  "experiment": "note1",
  "master_seed": 1,
  "description": "Centering cannot be reversed: Bernoulli(1/2), f = 1 on n = 4 coordinates.",
  "cases": [
    {"id": "note1-centering", "op": "moment_decoupling", "case": "centering",
     "array": {"all_ones": {"rank": 1, "n": 4}},
     "sequence": {"family": "bernoulli", "p": 0.5, "length": 4},
     "norm": {"kind": "lp", "p": 2},
     "mc": {"mode": "exact"}}
  ]
})"},
      {"polarization", R"({
  "schema": 1,
  "experiment": "polarization",
  "master_seed": 11,
  "cases": [
    {"id": "polarization-500", "op": "polarization", "count": 500, "ranks": [1, 2, 3, 4], "dims": [1, 3], "n": 6}
  ]
})"},
      {"interchange", R"({
  "schema": 1,
  "experiment": "interchange",
  "master_seed": 3,
  "cases": [
    {"id": "interchange-rademacher", "op": "interchange_identity",
     "array": {"rank": 2, "entries": [{"index": [1, 2], "value": 1}]},
     "sequence": {"family": "rademacher", "length": 3}, "r": 2, "pattern": [1, 2]},
    {"id": "interchange-bernoulli", "op": "interchange_identity",
     "array": {"rank": 2, "entries": [{"index": [1, 2], "value": 1}]},
     "sequence": {"family": "bernoulli", "p": 0.3333333333333333, "length": 3}, "r": 2, "pattern": [1, 2]},
    {"id": "interchange-bernoulli-repeated", "op": "interchange_identity",
     "array": {"random": {"rank": 2, "n": 3, "density": 1.0, "seed": 5}},
     "sequence": {"family": "bernoulli", "p": 0.3333333333333333, "length": 3}, "r": 2, "pattern": [1, 1]},
    {"id": "interchange-rademacher-r3", "op": "interchange_identity",
     "array": {"random": {"rank": 2, "n": 3, "density": 1.0, "seed": 6, "tetrahedral": false}},
     "sequence": {"family": "rademacher", "length": 3}, "r": 3, "pattern": [3, 1]}
  ]
})"},
      {"decoupling-k2", R"({
  "schema": 1,
  "experiment": "decoupling-k2",
  "master_seed": 5,
  "defaults": {"mode": "exact"},
  "cases": [
    {"id": "AB-A-sym-p1", "op": "moment_decoupling", "case": "A_upper",
     "array": {"rank": 2, "entries": [{"index": [1, 2], "value": 1}, {"index": [2, 1], "value": 1}]},
     "sequence": {"family": "rademacher", "length": 4}, "norm": {"kind": "lp", "p": 1}},
    {"id": "AB-A-sym-p2", "op": "moment_decoupling", "case": "A_upper",
     "array": {"rank": 2, "entries": [{"index": [1, 2], "value": 1}, {"index": [2, 1], "value": 1}]},
     "sequence": {"family": "rademacher", "length": 4}, "norm": {"kind": "lp", "p": 2}},
    {"id": "AB-A-sym-p4", "op": "moment_decoupling", "case": "A_upper",
     "array": {"rank": 2, "entries": [{"index": [1, 2], "value": 1}, {"index": [2, 1], "value": 1}]},
     "sequence": {"family": "rademacher", "length": 4}, "norm": {"kind": "lp", "p": 4}},
    {"id": "AB-B-sym-p1", "op": "moment_decoupling", "case": "B_lower",
     "array": {"rank": 2, "entries": [{"index": [1, 2], "value": 1}, {"index": [2, 1], "value": 1}]},
     "sequence": {"family": "rademacher", "length": 4}, "norm": {"kind": "lp", "p": 1}},
    {"id": "AB-B-sym-p2", "op": "moment_decoupling", "case": "B_lower",
     "array": {"rank": 2, "entries": [{"index": [1, 2], "value": 1}, {"index": [2, 1], "value": 1}]},
     "sequence": {"family": "rademacher", "length": 4}, "norm": {"kind": "lp", "p": 2}},
    {"id": "AB-B-sym-p4", "op": "moment_decoupling", "case": "B_lower",
     "array": {"rank": 2, "entries": [{"index": [1, 2], "value": 1}, {"index": [2, 1], "value": 1}]},
     "sequence": {"family": "rademacher", "length": 4}, "norm": {"kind": "lp", "p": 4}},
    {"id": "AB-A-rand-n8-p1", "op": "moment_decoupling", "case": "A_upper",
     "array": {"random": {"rank": 2, "n": 8, "density": 0.5, "seed": 21}},
     "sequence": {"family": "rademacher", "length": 8}, "norm": {"kind": "lp", "p": 1}},
    {"id": "AB-A-rand-n8-p2", "op": "moment_decoupling", "case": "A_upper",
     "array": {"random": {"rank": 2, "n": 8, "density": 0.5, "seed": 21}},
     "sequence": {"family": "rademacher", "length": 8}, "norm": {"kind": "lp", "p": 2}},
    {"id": "AB-A-rand-n8-p4", "op": "moment_decoupling", "case": "A_upper",
     "array": {"random": {"rank": 2, "n": 8, "density": 0.5, "seed": 21}},
     "sequence": {"family": "rademacher", "length": 8}, "norm": {"kind": "lp", "p": 4}},
    {"id": "AB-B-rand-n8-p1", "op": "moment_decoupling", "case": "B_lower",
     "array": {"random": {"rank": 2, "n": 8, "density": 0.5, "seed": 22}},
     "sequence": {"family": "rademacher", "length": 8}, "norm": {"kind": "lp", "p": 1}},
    {"id": "AB-B-rand-n8-p2", "op": "moment_decoupling", "case": "B_lower",
     "array": {"random": {"rank": 2, "n": 8, "density": 0.5, "seed": 22}},
     "sequence": {"family": "rademacher", "length": 8}, "norm": {"kind": "lp", "p": 2}},
    {"id": "AB-B-rand-n8-p4", "op": "moment_decoupling", "case": "B_lower",
     "array": {"random": {"rank": 2, "n": 8, "density": 0.5, "seed": 22}},
     "sequence": {"family": "rademacher", "length": 8}, "norm": {"kind": "lp", "p": 4}},
    {"id": "AB-A-gauss-mc", "op": "moment_decoupling", "case": "A_upper",
     "array": {"random": {"rank": 2, "n": 6, "density": 0.5, "seed": 23}},
     "sequence": {"family": "gaussian", "length": 6}, "norm": {"kind": "lp", "p": 2},
     "mc": {"mode": "monte_carlo", "trials": 20000}}
  ]
})"},
      {"ustat", R"({
  "schema": 1,
  "experiment": "ustat",
  "master_seed": 9,
  "defaults": {"mode": "exact"},
  "cases": [
    {"id": "F-A-product", "op": "ustat_decoupling", "case": "A_prime",
     "kernel": {"shape": "product", "array": {"random": {"rank": 2, "n": 6, "density": 0.5, "seed": 31}}},
     "sequence": {"family": "rademacher", "length": 6}, "norm": {"kind": "lp", "p": 2}},
    {"id": "F-B-product", "op": "ustat_decoupling", "case": "B_prime",
     "kernel": {"shape": "product", "array": {"random": {"rank": 2, "n": 6, "density": 0.5, "seed": 31}}},
     "sequence": {"family": "rademacher", "length": 6}, "norm": {"kind": "lp", "p": 2}},
    {"id": "F-B-min-bernoulli", "op": "ustat_decoupling", "case": "B_prime",
     "kernel": {"shape": "min", "array": {"random": {"rank": 2, "n": 5, "density": 0.7, "seed": 32}}},
     "sequence": {"family": "bernoulli", "p": 0.5, "length": 5}, "norm": {"kind": "lp", "p": 2}},
    {"id": "F-A-min-bernoulli", "op": "ustat_decoupling", "case": "A_prime",
     "kernel": {"shape": "min", "array": {"random": {"rank": 2, "n": 5, "density": 0.7, "seed": 32}}},
     "sequence": {"family": "bernoulli", "p": 0.5, "length": 5}, "norm": {"kind": "lp", "p": 2}}
  ]
})"},
      {"note8", R"({
  "schema": 1,
  "experiment": "note8",
  "master_seed": 8,
  "cases": [
    {"id": "note8-random-100", "op": "note8_chain",
     "random_pairs": {"count": 100, "min_atoms": 2, "max_atoms": 5, "seed": 8},
     "t_grid": [0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]}
  ]
})"},
      {"lemmas", R"({
  "schema": 1,
  "experiment": "lemmas",
  "master_seed": 2,
  "cases": [
    {"id": "lemmas-bernoulli-p1q2", "op": "max_lemmas", "distribution": {"family": "bernoulli", "p": 0.5},
     "n_grid": [2, 4, 8], "theta_fractions": [0, 0.25, 0.5, 1], "p": 1, "q": 2},
    {"id": "lemmas-two-atom-p1q2", "op": "max_lemmas",
     "distribution": {"family": "discrete", "atoms": [1, 3], "probs": [0.7, 0.3]},
     "n_grid": [2, 4, 8], "theta_fractions": [0, 0.25, 0.5, 1], "p": 1, "q": 2},
    {"id": "lemmas-two-atom-p2q4", "op": "max_lemmas",
     "distribution": {"family": "discrete", "atoms": [0.5, 4], "probs": [0.9, 0.1]},
     "n_grid": [2, 4, 8], "theta_fractions": [0, 0.25, 0.5, 1], "p": 2, "q": 4},
    {"id": "lp-tail-y-equals-x", "op": "lp_implies_tail",
     "x": {"family": "discrete", "atoms": [1, 3], "probs": [0.7, 0.3]},
     "y": {"family": "discrete", "atoms": [1, 3], "probs": [0.7, 0.3]}, "p": 1, "q": 2},
    {"id": "lp-tail-y-twice-x", "op": "lp_implies_tail",
     "x": {"family": "bernoulli", "p": 0.5},
     "y": {"family": "discrete", "atoms": [0, 2], "probs": [0.5, 0.5]}, "p": 1, "q": 2}
  ]
})"},
      {"mpz", R"({
  "schema": 1,
  "experiment": "mpz",
  "master_seed": 4,
  "cases": [
    {"id": "mpz-d1-p2-q4", "op": "mpz_bound", "degree": 1, "n": 8, "p": 2, "q": 4,
     "family": {"random": {"count": 20, "seed": 41}}},
    {"id": "mpz-d1-p2-q3", "op": "mpz_bound", "degree": 1, "n": 8, "p": 2, "q": 3,
     "family": {"random": {"count": 20, "seed": 42}}},
    {"id": "mpz-d2-p2-q4", "op": "mpz_bound", "degree": 2, "n": 8, "p": 2, "q": 4,
     "family": {"random": {"count": 20, "seed": 43}}},
    {"id": "mpz-d2-p2-q3", "op": "mpz_bound", "degree": 2, "n": 8, "p": 2, "q": 3,
     "family": {"random": {"count": 20, "seed": 44}}}
  ]
})"},
      {"tails", R"({
  "schema": 1,
  "experiment": "tails",
  "master_seed": 17,
  "defaults": {"mode": "exact"},
  "cases": [
    {"id": "ABtail-A-exact", "op": "tail_decoupling", "case": "A_tail",
     "array": {"random": {"rank": 2, "n": 6, "density": 0.6, "seed": 51}},
     "sequence": {"family": "rademacher", "length": 6}, "t_grid": [0.5, 1, 2, 4]},
    {"id": "ABtail-B-exact", "op": "tail_decoupling", "case": "B_tail",
     "array": {"random": {"rank": 2, "n": 6, "density": 0.6, "seed": 51}},
     "sequence": {"family": "rademacher", "length": 6}, "t_grid": [0.5, 1, 2, 4]},
    {"id": "contr-multiplier-exact", "op": "contraction", "case": "multiplier",
     "array": {"random": {"rank": 2, "n": 5, "density": 0.7, "seed": 52}},
     "sequence": {"family": "rademacher", "length": 5}, "t_grid": [0.5, 1, 2, 4],
     "multipliers": [0.5, -0.5, 0.5, -0.5, 0.5]},
    {"id": "contr-maximal-exact", "op": "contraction", "case": "maximal",
     "array": {"random": {"rank": 2, "n": 6, "density": 0.6, "seed": 53}},
     "sequence": {"family": "rademacher", "length": 6}, "t_grid": [0.5, 1, 2, 4]},
    {"id": "comp-exact", "op": "contraction", "case": "comparison",
     "array": {"random": {"rank": 2, "n": 5, "density": 0.7, "seed": 54}},
     "sequence": {"family": "rademacher", "length": 5}, "t_grid": [0.5, 1, 2, 4],
     "comparison": {"family": "discrete", "atoms": [-2, -1, 1, 2], "probs": [0.25, 0.25, 0.25, 0.25]},
     "domination_constant": 1},
    {"id": "ABtail-A-mc", "op": "tail_decoupling", "case": "A_tail",
     "array": {"random": {"rank": 2, "n": 6, "density": 0.6, "seed": 51}},
     "sequence": {"family": "rademacher", "length": 6}, "t_grid": [0.5, 1, 2, 4],
     "mc": {"mode": "monte_carlo", "trials": 100000, "stability_seeds": 10}},
    {"id": "ABtail-B-mc", "op": "tail_decoupling", "case": "B_tail",
     "array": {"random": {"rank": 2, "n": 6, "density": 0.6, "seed": 51}},
     "sequence": {"family": "rademacher", "length": 6}, "t_grid": [0.5, 1, 2, 4],
     "mc": {"mode": "monte_carlo", "trials": 100000, "stability_seeds": 10}},
    {"id": "contr-multiplier-mc", "op": "contraction", "case": "multiplier",
     "array": {"random": {"rank": 2, "n": 5, "density": 0.7, "seed": 52}},
     "sequence": {"family": "rademacher", "length": 5}, "t_grid": [0.5, 1, 2, 4],
     "multipliers": [0.5, -0.5, 0.5, -0.5, 0.5],
     "mc": {"mode": "monte_carlo", "trials": 100000, "stability_seeds": 10}},
    {"id": "contr-maximal-mc", "op": "contraction", "case": "maximal",
     "array": {"random": {"rank": 2, "n": 6, "density": 0.6, "seed": 53}},
     "sequence": {"family": "rademacher", "length": 6}, "t_grid": [0.5, 1, 2, 4],
     "mc": {"mode": "monte_carlo", "trials": 100000, "stability_seeds": 10}},
    {"id": "comp-gaussian-mc", "op": "contraction", "case": "comparison",
     "array": {"random": {"rank": 2, "n": 5, "density": 0.7, "seed": 54}},
     "sequence": {"family": "rademacher", "length": 5}, "t_grid": [0.5, 1, 2, 4],
     "comparison": {"family": "gaussian"}, "domination_constant": 3.2,
     "mc": {"mode": "monte_carlo", "trials": 100000, "stability_seeds": 10}}
  ]
})"},
      {"limsup", R"({
  "schema": 1,
  "experiment": "limsup",
  "master_seed": 6,
  "cases": [
    {"id": "limsup-k2-rademacher", "op": "weighted_limsup",
     "array": {"random": {"rank": 2, "n": 5, "density": 0.7, "seed": 61}},
     "sequence": {"family": "rademacher", "length": 5},
     "exponent": 2, "c_grid": [1, 1.25, 1.5, 2, 3, 4, 6, 8], "t_grid": [0.25, 0.5, 1, 1.5, 2, 3, 4]},
    {"id": "limsup-identical", "op": "weighted_limsup",
     "laws": {"xi": {"values": [1, 2], "weights": [0.5, 0.5]}, "eta": {"values": [1, 2], "weights": [0.5, 0.5]}},
     "exponent": 2, "c_grid": [1], "t_grid": [0.5, 1, 2]}
  ]
})"},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& demo_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, text] : demo_table()) out.push_back(name);
    return out;
  }();
  return names;
}

std::string demo_config_text(const std::string& name) {
  const auto& table = demo_table();
  auto it = table.find(name);
  if (it == table.end()) {
    std::string list;
    for (const auto& n : demo_names()) list += (list.empty() ? "" : ", ") + n;
    throw Error(ErrorCode::InvalidCase, "unknown demo '" + name + "' (" + list + ")");
  }
  return it->second;
}

}  // namespace decoupling
