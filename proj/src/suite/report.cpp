#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "decoupling/suite.hpp"

namespace decoupling {

using nlohmann::json;

namespace {

json estimate_json(const std::optional<Estimate>& e) {
  if (!e) return nullptr;
  return json{{"value", e->value}, {"lo", e->lo}, {"hi", e->hi}};
}

std::string number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

ReportFormat report_format_from_string(const std::string& s) {
  if (s == "json") return ReportFormat::Json;
  if (s == "csv") return ReportFormat::Csv;
  if (s == "text") return ReportFormat::Text;
  throw Error(ErrorCode::InvalidSpec, "unknown format '" + s + "' (json, csv, text)");
}

json report_to_json(const VerificationReport& r, bool include_runtime) {
  json j;
  j["id"] = r.case_id;
  j["check"] = r.check;
  j["theorem"] = r.theorem;
  j["method"] = r.method;
  j["lhs"] = estimate_json(r.lhs);
  j["rhs"] = estimate_json(r.rhs);
  j["constant"] = estimate_json(r.constant);
  j["bound"] = r.paper_bound ? json(*r.paper_bound) : json(nullptr);
  j["verdict"] = to_string(r.verdict);
  j["master_seed"] = r.master_seed;
  j["seed_path"] = r.seed_path;
  j["trials"] = r.trials;
  j["error"] = r.error ? json(*r.error) : json(nullptr);
  j["details"] = r.details;
  if (include_runtime) j["runtime_seconds"] = r.runtime_seconds;
  return j;
}

std::string reports_to_json(const std::string& experiment, const std::vector<VerificationReport>& reports,
                            bool include_runtime) {
  json doc;
  doc["schema"] = kConfigSchema;
  doc["experiment"] = experiment;
  doc["reports"] = json::array();
  for (const auto& r : reports) doc["reports"].push_back(report_to_json(r, include_runtime));
  const auto t = tally(reports);
  doc["summary"] = {{"pass", t.pass}, {"fail", t.fail}, {"inconclusive", t.inconclusive}, {"errors", t.errors}};
  return doc.dump(2) + "\n";
}

std::string reports_to_csv(const std::vector<VerificationReport>& reports) {
  std::ostringstream os;
  os << "id,lhs,rhs,constant,bound,verdict\n";
  for (const auto& r : reports) {
    os << csv_field(r.case_id) << ',' << (r.lhs ? number(r.lhs->value) : "") << ','
       << (r.rhs ? number(r.rhs->value) : "") << ',' << (r.constant ? number(r.constant->value) : "") << ','
       << (r.paper_bound ? number(*r.paper_bound) : "") << ',' << to_string(r.verdict) << '\n';
  }
  return os.str();
}

std::string reports_to_text(const std::string& experiment, const std::vector<VerificationReport>& reports) {
  std::size_t w_theorem = 7, w_id = 4;
  for (const auto& r : reports) {
    w_theorem = std::max(w_theorem, r.theorem.size());
    w_id = std::max(w_id, r.case_id.size());
  }
  std::ostringstream os;
  os << "experiment: " << experiment << "\n\n";
  os << std::left << std::setw(static_cast<int>(w_theorem)) << "theorem" << "  " << std::setw(static_cast<int>(w_id))
     << "case" << "  " << std::setw(11) << "method" << "  " << std::setw(14) << "constant" << "  " << std::setw(14)
     << "bound" << "  verdict\n";
  for (const auto& r : reports) {
    os << std::setw(static_cast<int>(w_theorem)) << (r.theorem.empty() ? "-" : r.theorem) << "  "
       << std::setw(static_cast<int>(w_id)) << r.case_id << "  " << std::setw(11) << r.method << "  "
       << std::setw(14) << (r.constant ? number(r.constant->value) : "-") << "  " << std::setw(14)
       << (r.paper_bound ? number(*r.paper_bound) : "-") << "  " << to_string(r.verdict);
    if (r.error) os << "  (error: " << *r.error << ")";
    os << '\n';
  }
  const auto t = tally(reports);
  os << "\nPASS " << t.pass << "  FAIL " << t.fail << "  INCONCLUSIVE " << t.inconclusive << "  errors " << t.errors
     << '\n';
  return os.str();
}

std::string render_reports(const std::string& experiment, const std::vector<VerificationReport>& reports,
                           ReportFormat format) {
  switch (format) {
    case ReportFormat::Json: return reports_to_json(experiment, reports);
    case ReportFormat::Csv: return reports_to_csv(reports);
    case ReportFormat::Text: return reports_to_text(experiment, reports);
  }
  return {};
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

void emit_outputs(const ExperimentConfig& cfg, const std::vector<VerificationReport>& reports) {
  if (cfg.outputs.json) write_text_file(*cfg.outputs.json, reports_to_json(cfg.experiment, reports));
  if (cfg.outputs.csv) write_text_file(*cfg.outputs.csv, reports_to_csv(reports));
  if (cfg.outputs.text) write_text_file(*cfg.outputs.text, reports_to_text(cfg.experiment, reports));
}

VerdictTally tally(const std::vector<VerificationReport>& reports) {
  VerdictTally t;
  for (const auto& r : reports) {
    switch (r.verdict) {
      case Verdict::Pass: ++t.pass; break;
      case Verdict::Fail: ++t.fail; break;
      case Verdict::Inconclusive: ++t.inconclusive; break;
    }
    if (r.error) ++t.errors;
  }
  return t;
}

}  // namespace decoupling
