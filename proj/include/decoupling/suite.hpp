#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "decoupling/verify.hpp"

namespace decoupling {

inline constexpr int kConfigSchema = 1;

/// Raised by parse_config with every problem found, each prefixed by its
/// field path (for example "cases[1].sequence.family").
class ValidationFailure : public Error {
 public:
  explicit ValidationFailure(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  std::vector<std::string> issues_;
};

/// One validated case. Only the fields used by `op` are meaningful.
struct CaseSpec {
  std::string id;
  std::string op;
  std::string variant;  ///< A_upper, B_tail, multiplier, ...
  McConfig mc;

  std::optional<DiagonalFreeArray> array;
  std::optional<KernelShape> kernel;
  std::optional<SequenceSpec> sequence;
  std::optional<RiFunctional> norm;

  std::vector<double> t_grid;
  std::vector<double> c_grid;
  std::vector<double> multipliers;
  std::optional<DistributionSpec> comparison;
  double domination_constant = 1.0;

  // interchange_identity
  int r = 2;
  std::vector<int> pattern;

  // polarization
  std::size_t count = 0;
  std::vector<int> ranks;
  std::vector<int> dims;
  int n = 0;
  std::optional<std::uint64_t> seed;

  // max_lemmas / lp_implies_tail / mpz_bound
  std::optional<DistributionSpec> law_x;
  std::optional<DistributionSpec> law_y;
  std::vector<std::size_t> n_grid;
  std::vector<double> theta_fractions;
  double p = 2.0;
  double q = 4.0;
  double c = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  std::size_t n_max = 0;
  std::vector<DiagonalFreeArray> family;

  // note8_chain / weighted_limsup
  std::vector<std::pair<EmpiricalDist, EmpiricalDist>> pairs;
  double exponent = 2.0;
};

struct OutputPaths {
  std::optional<std::filesystem::path> json;
  std::optional<std::filesystem::path> csv;
  std::optional<std::filesystem::path> text;
};

struct ExperimentConfig {
  std::string experiment;
  std::uint64_t master_seed = 0;
  std::vector<CaseSpec> cases;
  OutputPaths outputs;
};

/// Parses and validates a config document. Throws ParseError for malformed
/// JSON and ValidationFailure (code ValidationError) listing every problem.
ExperimentConfig parse_config_text(const std::string& text);

/// Reads the file, then parse_config_text. IoError when it cannot be read.
ExperimentConfig parse_config(const std::filesystem::path& path);

/// Names of the operations a case may request.
const std::vector<std::string>& supported_ops();

struct RunOptions {
  std::optional<std::uint64_t> seed;    ///< replaces the config master seed
  std::optional<std::size_t> trials;    ///< replaces every case's trial count
  unsigned workers = 1;
};

/// Runs every case in order. Per-case errors land in the report (verdict
/// INCONCLUSIVE); nothing here aborts the suite.
std::vector<VerificationReport> run_suite(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// Runs a single case with the given seed and worker count.
VerificationReport run_case(const CaseSpec& spec, std::uint64_t master_seed, unsigned workers);

enum class ReportFormat { Json, Csv, Text };
ReportFormat report_format_from_string(const std::string& s);

nlohmann::json report_to_json(const VerificationReport& r, bool include_runtime = false);

/// Canonical JSON document: keys sorted, runtime omitted, so identical runs
/// produce identical bytes.
std::string reports_to_json(const std::string& experiment, const std::vector<VerificationReport>& reports,
                            bool include_runtime = false);
std::string reports_to_csv(const std::vector<VerificationReport>& reports);
std::string reports_to_text(const std::string& experiment, const std::vector<VerificationReport>& reports);

std::string render_reports(const std::string& experiment, const std::vector<VerificationReport>& reports,
                           ReportFormat format);

/// Writes `content` to `path`, creating parent directories. IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);

/// Writes each configured output file.
void emit_outputs(const ExperimentConfig& cfg, const std::vector<VerificationReport>& reports);

struct VerdictTally {
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t inconclusive = 0;
  std::size_t errors = 0;
};

VerdictTally tally(const std::vector<VerificationReport>& reports);

/// Built-in configs reproducing the acceptance experiments.
const std::vector<std::string>& demo_names();
std::string demo_config_text(const std::string& name);

}  // namespace decoupling
