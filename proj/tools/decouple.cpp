#include <cstdlib>
#include <limits>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "decoupling/suite.hpp"

namespace {

using namespace decoupling;

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Flags {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<unsigned> workers;
  std::string format = "text";
  std::string out;
};

unsigned resolve_workers(const Flags& flags) {
  if (flags.workers) return std::max(1u, *flags.workers);
  if (const char* env = std::getenv("DECOUPLE_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::InvalidSpec, std::string("DECOUPLE_WORKERS must be a positive integer, got '") + env + "'");
  }
  return 1;
}

void print_issues(const ValidationFailure& e) {
  std::cerr << "config invalid (" << e.issues().size() << " issue" << (e.issues().size() == 1 ? "" : "s") << "):\n";
  for (const auto& issue : e.issues()) std::cerr << "  " << issue << '\n';
}

int execute(const ExperimentConfig& cfg, const Flags& flags) {
  const ReportFormat format = report_format_from_string(flags.format);
  RunOptions opts;
  opts.seed = flags.seed;
  opts.trials = flags.trials;
  opts.workers = resolve_workers(flags);
  const auto reports = run_suite(cfg, opts);
  emit_outputs(cfg, reports);
  const std::string rendered = render_reports(cfg.experiment, reports, format);
  if (flags.out.empty()) {
    std::cout << rendered;
  } else {
    write_text_file(flags.out, rendered);
  }
  return tally(reports).fail > 0 ? kExitFail : kExitOk;
}

void list_cases(const ExperimentConfig& cfg) {
  std::cout << cfg.experiment << '\n';
  for (const auto& c : cfg.cases) {
    std::cout << "  " << c.id << "  " << c.op;
    if (!c.variant.empty()) std::cout << " (" << c.variant << ')';
    std::cout << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decoupling inequality verification suite"};
  app.require_subcommand(1);
  Flags flags;

  auto add_run_flags = [&](CLI::App* cmd) {
    cmd->add_option("--seed", flags.seed, "Replace the master seed");
    cmd->add_option("--trials", flags.trials, "Replace every case's Monte Carlo trial count")
        ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()));
    cmd->add_option("--workers", flags.workers, "Worker threads (default: DECOUPLE_WORKERS or 1)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--format", flags.format, "Report format")->check(CLI::IsMember({"json", "csv", "text"}));
    cmd->add_option("--out", flags.out, "Write the report here instead of stdout");
  };

  std::string config_path;
  std::string demo_name;

  auto* run = app.add_subcommand("run", "Run every case in a config file");
  run->add_option("config", config_path, "Config file")->required();
  add_run_flags(run);

  auto* demo = app.add_subcommand("demo", "Run a built-in config");
  demo->add_option("name", demo_name, "Demo name")->required();
  add_run_flags(demo);

  auto* list = app.add_subcommand("list-cases", "List demos, or the cases of a config file");
  list->add_option("config", config_path, "Config file");

  auto* validate = app.add_subcommand("validate", "Validate a config file without running it");
  validate->add_option("config", config_path, "Config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run->parsed()) return execute(parse_config(config_path), flags);
    if (demo->parsed()) return execute(parse_config_text(demo_config_text(demo_name)), flags);
    if (validate->parsed()) {
      const auto cfg = parse_config(config_path);
      std::cout << "ok: " << cfg.experiment << " (" << cfg.cases.size() << " case"
                << (cfg.cases.size() == 1 ? "" : "s") << ")\n";
      return kExitOk;
    }
    if (list->parsed()) {
      if (!config_path.empty()) {
        list_cases(parse_config(config_path));
      } else {
        for (const auto& name : demo_names()) list_cases(parse_config_text(demo_config_text(name)));
      }
      return kExitOk;
    }
  } catch (const ValidationFailure& e) {
    print_issues(e);
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
