#include "acm/cli/manifest.hpp"

#include <cctype>
#include <fstream>
#include <set>

namespace acm::cli {

namespace {

using nlohmann::json;

const std::set<std::string> kKeys{"dimension", "coordinates", "gamma",   "metric_frame", "phi_frame",
                                  "domain",    "avoid",       "samples", "seed",         "tolerance",
                                  "pseudo",    "omega_source", "name",   "description"};

const std::set<std::string> kReserved{"sin", "cos", "exp", "ln", "sqrt"};

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

const json& require(const json& doc, const std::string& key) {
  if (!doc.contains(key)) throw SchemaError(key, "missing required field");
  return doc.at(key);
}

ScalarField expression(const json& v, const std::string& field, const Coordinates& coords) {
  std::string text;
  if (v.is_string()) {
    text = v.get<std::string>();
  } else if (v.is_number()) {
    return ScalarField::constant(v.get<double>(), coords);
  } else {
    throw SchemaError(field, "expected an expression string");
  }
  try {
    return parse(text, coords);
  } catch (const ParseError& e) {
    throw ManifestParseError(field, e);
  }
}

std::vector<ScalarField> expression_list(const json& v, const std::string& field, const Coordinates& coords,
                                         int expected) {
  if (!v.is_array()) throw SchemaError(field, "expected an array");
  if (expected >= 0 && static_cast<int>(v.size()) != expected) {
    throw SchemaError(field, "expected " + std::to_string(expected) + " entries, got " + std::to_string(v.size()));
  }
  std::vector<ScalarField> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(expression(v[i], field + "[" + std::to_string(i) + "]", coords));
  }
  return out;
}

FieldMatrix expression_matrix(const json& v, const std::string& field, const Coordinates& coords, int m) {
  if (!v.is_array() || static_cast<int>(v.size()) != m) {
    throw SchemaError(field, "expected " + std::to_string(m) + " rows");
  }
  FieldMatrix out(m, m, ScalarField::constant(0.0, coords));
  for (int i = 0; i < m; ++i) {
    const auto row = expression_list(v[i], field + "[" + std::to_string(i) + "]", coords, m);
    for (int j = 0; j < m; ++j) out(i, j) = row[j];
  }
  return out;
}

}  // namespace

OmegaSource parse_omega_source(const std::string& text) {
  if (text == "d_eta") return OmegaSource::d_eta;
  if (text == "fundamental_form") return OmegaSource::fundamental_form;
  throw SchemaError("omega_source", "expected \"d_eta\" or \"fundamental_form\", got \"" + text + "\"");
}

const char* omega_source_name(OmegaSource s) {
  return s == OmegaSource::d_eta ? "d_eta" : "fundamental_form";
}

Manifest parse_manifest(const json& doc, const std::string& name) {
  if (!doc.is_object()) throw SchemaError("<root>", "manifest must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (!kKeys.count(key)) throw SchemaError(key, "unknown field");
  }

  const json& dim_v = require(doc, "dimension");
  if (!dim_v.is_number_integer()) throw SchemaError("dimension", "expected an integer");
  const int n = dim_v.get<int>();
  if (n < 3 || n % 2 == 0) throw SchemaError("dimension", "must be odd and at least 3");
  const int m = n - 1;

  const json& coords_v = require(doc, "coordinates");
  if (!coords_v.is_array() || static_cast<int>(coords_v.size()) != n) {
    throw SchemaError("coordinates", "expected " + std::to_string(n) + " names");
  }
  std::vector<std::string> names;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < coords_v.size(); ++i) {
    const std::string field = "coordinates[" + std::to_string(i) + "]";
    if (!coords_v[i].is_string()) throw SchemaError(field, "expected a string");
    std::string s = coords_v[i].get<std::string>();
    if (!is_identifier(s) || kReserved.count(s)) throw SchemaError(field, "invalid coordinate name \"" + s + "\"");
    if (!seen.insert(s).second) throw SchemaError(field, "duplicate coordinate name \"" + s + "\"");
    names.push_back(std::move(s));
  }
  const Coordinates coords(std::move(names));

  auto gamma = expression_list(require(doc, "gamma"), "gamma", coords, m);

  const json& dom_v = require(doc, "domain");
  if (!dom_v.is_array() || static_cast<int>(dom_v.size()) != n) {
    throw SchemaError("domain", "expected " + std::to_string(n) + " intervals");
  }
  std::vector<Interval> domain;
  for (std::size_t i = 0; i < dom_v.size(); ++i) {
    const std::string field = "domain[" + std::to_string(i) + "]";
    const json& iv = dom_v[i];
    if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number()) {
      throw SchemaError(field, "expected [lo, hi]");
    }
    const double lo = iv[0].get<double>();
    const double hi = iv[1].get<double>();
    if (!(lo <= hi)) throw SchemaError(field, "lo must not exceed hi");
    domain.push_back({lo, hi});
  }

  std::vector<ScalarField> avoid;
  if (doc.contains("avoid")) avoid = expression_list(doc.at("avoid"), "avoid", coords, -1);

  FieldMatrix metric = expression_matrix(require(doc, "metric_frame"), "metric_frame", coords, m);
  FieldMatrix phi = expression_matrix(require(doc, "phi_frame"), "phi_frame", coords, m);

  bool pseudo = false;
  if (doc.contains("pseudo")) {
    if (!doc.at("pseudo").is_boolean()) throw SchemaError("pseudo", "expected a boolean");
    pseudo = doc.at("pseudo").get<bool>();
  }

  Manifest out{name, AdaptedStructure(AdaptedChart(coords, std::move(gamma), std::move(domain), std::move(avoid)),
                                      std::move(metric), std::move(phi), pseudo)};
  if (doc.contains("samples")) {
    const json& v = doc.at("samples");
    if (!v.is_number_integer() || v.get<long long>() < 1) throw SchemaError("samples", "expected a positive integer");
    out.samples = v.get<int>();
  }
  if (doc.contains("seed")) {
    const json& v = doc.at("seed");
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      throw SchemaError("seed", "expected a non-negative integer");
    }
    out.seed = v.get<std::uint64_t>();
  }
  if (doc.contains("tolerance")) {
    const json& v = doc.at("tolerance");
    if (!v.is_number() || !(v.get<double>() > 0.0)) throw SchemaError("tolerance", "expected a positive number");
    out.tolerance = v.get<double>();
  }
  if (doc.contains("omega_source")) {
    const json& v = doc.at("omega_source");
    if (!v.is_string()) throw SchemaError("omega_source", "expected a string");
    out.omega_source = parse_omega_source(v.get<std::string>());
  }
  if (doc.contains("name")) {
    if (!doc.at("name").is_string()) throw SchemaError("name", "expected a string");
    out.name = doc.at("name").get<std::string>();
  }
  return out;
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open manifest " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("<root>", std::string("invalid JSON: ") + e.what());
  }
  return parse_manifest(doc, path.stem().string());
}

}  // namespace acm::cli
