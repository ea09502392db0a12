#ifndef ACM_CLI_MANIFEST_HPP
#define ACM_CLI_MANIFEST_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "acm/curvature.hpp"
#include "acm/error.hpp"
#include "acm/structure.hpp"

namespace acm::cli {

/// Expression in a manifest field failed to parse; `field()` is the JSON path.
class ManifestParseError : public ParseError {
 public:
  ManifestParseError(const std::string& field, const ParseError& e)
      : ParseError(field + ": " + e.message(), e.offset()), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct Manifest {
  std::string name;
  AdaptedStructure structure;
  int samples = 32;
  std::uint64_t seed = 42;
  double tolerance = 1e-7;
  OmegaSource omega_source = OmegaSource::d_eta;

  int dim() const { return structure.dim(); }
};

/// Throws SchemaError naming the offending key, ManifestParseError for bad
/// expressions, and Error when the file cannot be read.
Manifest load_manifest(const std::filesystem::path& path);
Manifest parse_manifest(const nlohmann::json& doc, const std::string& name);

OmegaSource parse_omega_source(const std::string& text);
const char* omega_source_name(OmegaSource s);

}  // namespace acm::cli

#endif  // ACM_CLI_MANIFEST_HPP
