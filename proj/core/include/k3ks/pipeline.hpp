#pragma once

#include <optional>
#include <string>
#include <vector>

#include "k3ks/serialize.hpp"

namespace k3ks {

enum class PhiSelection { paper_computational, paper_listed, searched, explicit_coords };
std::string to_string(PhiSelection s);
PhiSelection parse_phi_selection(const std::string& s);

struct PipelineConfig {
  Matrix<Integer> a;  // defaults to the reference matrix
  PhiSelection phi = PhiSelection::paper_computational;
  std::array<std::array<Rational, 3>, 3> phi_coords{};  // explicit_coords only
  SearchOptions search;
  std::optional<Rational> t;  // default: default_period_parameter
  std::uint64_t prime = 101;
  std::string policy = "both";  // paper | closure | both | all | custom
  std::vector<WordPolicy> policies;
  RelationConvention convention = RelationConvention::quadratic_coefficients;
  long d = 1;
  unsigned precision = 128;
  bool small_instance = true;
  unsigned threads = 0;
  std::optional<std::string> out;
};

/// Policies for a named choice: paper or restricted (4-fold, last factor in
/// the first four), closure, both (paper + closure), all (adds 3-fold).
std::vector<WordPolicy> policies_for(const std::string& name);

/// Validated config. Missing keys take the defaults; the precision default
/// comes from K3KS_PRECISION when set. Errors: malformed_input,
/// invalid_prime, t_out_of_range (t = 0 or negative).
PipelineConfig parse_config(const Json& j);
PipelineConfig parse_config_file(const std::string& path);  // also io_failure
PipelineConfig default_config();
Json to_json(const PipelineConfig& c);

enum class StageStatus { verified, failed, skipped, error };
std::string to_string(StageStatus s);

struct StageResult {
  std::string name;
  StageStatus status = StageStatus::skipped;
  std::string method;  // exact | interval | mod-p
  std::string detail;
  std::optional<ErrorCode> error;
  Json data = Json::object();
  double seconds = 0;
};

struct PipelineReport {
  PipelineConfig config;
  std::vector<StageResult> stages;

  bool all_verified() const;
  // First stage that did not verify, if any.
  const StageResult* first_failure() const;
  const StageResult* stage(const std::string& name) const;
};

/// field -> phi -> transcendental -> embedding -> period -> hodge -> ranks
/// -> ks. A stage error stops the run; stages reached so far are kept.
PipelineReport run_pipeline(const PipelineConfig& config);

enum class ReportFormat { json, text };

/// JSON without the timing block is byte-identical for identical configs.
std::string emit_report(const PipelineReport& report, ReportFormat format, bool with_timing = true);

/// 0 when every executed stage verified; otherwise the code for the first
/// failing stage (3 precondition, 4 verification, 5 internal).
int exit_code(const PipelineReport& report);
int exit_code(ErrorKind kind);

}  // namespace k3ks
