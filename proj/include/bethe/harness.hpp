#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "bethe/config.hpp"

namespace bethe {

/// Whether a checked statement is established or only conjectured.
enum class Status { Proven, Conjectural };

std::string to_string(Status s);

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  std::string comparator; ///< "<=", ">=" or "=="
  Status status = Status::Proven;
  bool pass = false;
};

Check check_le(std::string name, double value, double tol, Status status = Status::Proven);
Check check_ge(std::string name, double value, double tol, Status status = Status::Proven);
Check check_true(std::string name, bool value, Status status = Status::Proven);

struct CaseRecord {
  nlohmann::json inputs = nlohmann::json::object();
  nlohmann::json outputs = nlohmann::json::object();
  std::vector<Check> checks;
  std::string error; ///< non-empty when the case failed to run
};

struct Report {
  std::string experiment;
  std::string label;
  std::string normalization;
  std::string version;
  nlohmann::json metadata = nlohmann::json::object();
  std::vector<CaseRecord> cases;

  /// True iff no case errored and every proven check passes.
  bool passed() const;
  /// Finds a check by case index and name; throws if absent.
  const Check& find(std::size_t case_index, const std::string& name) const;
};

nlohmann::json header_json(const Report& r);
nlohmann::json case_json(const Report& r, std::size_t index);

/// One JSON object per line: the header, then one per case.
void write_jsonl(std::ostream& os, const Report& r);
/// JSON header line, then one CSV row per check.
void write_csv(std::ostream& os, const Report& r);
/// Human-readable table of checks.
void write_summary(std::ostream& os, const Report& r);

/// Squared-sine bump centered at barycentric point c, c_i = 2(i+1)/((n+1)(n+2)):
///   f(v) = prod_{i=0}^{n} g(b_i(v) / (2 c_i)),  g(t) = sin^2(pi t) on [0,1], 0 beyond,
/// where b_i are the alcove barycentric coordinates (b_0 = 1 - <phi,v>,
/// b_i = m_i <alpha_i,v>). It vanishes on every wall and is off-center so
/// that it has no parity with respect to alcove symmetries.
double probe_function(const RootSystem& rs, const Vector& v);

/// Strictly dominant weights requested by the config: explicit `weights`
/// (truncated to `count`), the first `count` weights in list order with the
/// height bound raised as needed, or every weight up to `height`.
std::vector<DominantWeight> config_weights(const RootSystem& rs, const ExperimentConfig& cfg);

Report cmd_solve(const ExperimentConfig& cfg);
Report cmd_verify(const ExperimentConfig& cfg);
Report cmd_norm_check(const ExperimentConfig& cfg);
Report cmd_limit_scan(const ExperimentConfig& cfg);
Report cmd_gram(const ExperimentConfig& cfg);
Report cmd_probe_completeness(const ExperimentConfig& cfg);

/// Dispatches on the CLI subcommand name: solve, verify, norm-check,
/// limit-scan, gram, probe.
Report run_command(const std::string& name, const ExperimentConfig& cfg);

} // namespace bethe
