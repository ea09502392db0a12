#ifndef ACM_CLI_REPORT_HPP
#define ACM_CLI_REPORT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "acm/cli/manifest.hpp"

namespace acm::cli {

inline constexpr const char* kToolName = "acmcheck";
inline constexpr const char* kToolVersion = "0.1.0";

struct RunOptions {
  int samples = 32;
  std::uint64_t seed = 42;
  double tolerance = 1e-7;
  OmegaSource omega_source = OmegaSource::d_eta;
  int threads = 0;
};

RunOptions defaults_from(const Manifest& m);

struct CheckResult {
  nlohmann::json report;
  /// Every hard identity (Levi-Civita oracle, torsion cross-check, the two
  /// Nijenhuis identities) held at every sample.
  bool hard_identities_pass = false;
};

CheckResult run_check(const Manifest& m, const RunOptions& opts);
nlohmann::json classify_report(const Manifest& m, const RunOptions& opts);
nlohmann::json einstein_report(const Manifest& m, const RunOptions& opts);
/// Rank at `at` when given, otherwise at every sample.
nlohmann::json rank_report(const Manifest& m, const RunOptions& opts, const std::optional<Point>& at);

const std::vector<std::string>& tensor_names();
/// Throws SchemaError("--name") for unknown names and DomainError for bad points.
nlohmann::json tensor_report(const Manifest& m, const std::string& name, const Point& at);

/// "x1,...,xn" → Point; throws SchemaError("--at") on malformed input.
Point parse_point(const std::string& text, int dim);

/// Sorted keys, two-space indent, floats with 17 significant digits.
std::string dump_json(const nlohmann::json& j);

/// Plain-text rendering of any report above.
std::string render_human(const nlohmann::json& report);

}  // namespace acm::cli

#endif  // ACM_CLI_REPORT_HPP
