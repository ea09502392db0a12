#include "acm/cli/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "acm/classify.hpp"
#include "acm/connection.hpp"
#include "acm/curvature.hpp"
#include "acm/parallel.hpp"

namespace acm::cli {

using nlohmann::json;

namespace {

struct IdentityRule {
  const char* name;
  bool hard;
  double threshold;  // 0: use the run tolerance
};

constexpr IdentityRule kIdentities[] = {
    {"levi_civita_oracle", true, 1e-8},     {"torsion_crosscheck", true, 1e-9},
    {"nijenhuis_projection", true, 1e-9},   {"nijenhuis_relation", true, 1e-9},
    {"n_connection_formula", false, 1e-9},  {"canonical_torsion_skew", false, 1e-9},
    {"aqs_cov_phi", false, 0.0},            {"quasi_sasakian_cov_phi", false, 0.0},
    {"canonical_cov_phi", false, 0.0},
};

struct SampleCheck {
  std::map<std::string, Residual> identities;
  AxiomResiduals axioms;
  int rank = 0;
  double metricity_max = 0.0;
  double metricity_xi = 0.0;
};

SampleCheck check_sample(const LocalStructure& local) {
  const int n = local.dim();
  const int m = n - 1;
  SampleCheck out;
  out.axioms = validate_axioms(local);

  const ConnectionCoeffs adapted = lc_adapted(local);
  const ConnectionCoeffs oracle = coordinate_to_frame_connection(lc_coordinate(local), local.gamma());
  out.identities["levi_civita_oracle"] = {max_abs_diff(adapted.coeffs, oracle.coeffs), adapted.coeffs.max_abs()};

  const Endomorphism canonical = Endomorphism::canonical();
  const Torsion t = torsion(local, canonical);
  out.identities["torsion_crosscheck"] = {t.crosscheck_residual, t.table.max_abs()};
  out.identities["canonical_torsion_skew"] = {t.antisymmetry_residual, t.scale};

  const ConnectionCoeffs table = n_connection(local, canonical);
  const ConnectionCoeffs formula = n_connection_from_levi_civita(local, canonical);
  out.identities["n_connection_formula"] = {max_abs_diff(table.coeffs, formula.coeffs), table.coeffs.max_abs()};

  const NijenhuisTensors nt = nijenhuis_tensors(local);
  const double nscale = std::max(nt.n_one.max_abs(), nt.n_tilde.max_abs());
  out.identities["nijenhuis_projection"] = {check_projection_identity(local), nscale};
  out.identities["nijenhuis_relation"] = {check_nijenhuis_relation(local), nscale};

  const double lc_phi = cov_phi(local, PhiConnection::levi_civita).max_abs();
  out.identities["aqs_cov_phi"] = {check_aqs_cov_phi(local), lc_phi};
  out.identities["quasi_sasakian_cov_phi"] = {check_quasi_sasakian_cov_phi(local), lc_phi};
  out.identities["canonical_cov_phi"] = {check_canonical_cov_phi(local), 0.0};

  std::vector<double> dn(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a) dn[a] = local.dn_gamma(a).value();
  out.rank = rank_from(local.omega().value(), dn);

  const TensorGrid defect = metricity_defect(local, canonical);
  out.metricity_max = defect.max_abs();
  for (int a = 0; a < m; ++a) out.metricity_xi = std::max(out.metricity_xi, std::abs(defect(m, m, a) - dn[a]));
  return out;
}

json verdict_json(const Verdict& v) {
  return {{"holds", v.holds}, {"max_residual", v.max_residual}, {"samples", v.samples}};
}

json classification_json(const ClassificationReport& rep) {
  json out = json::object();
  for (const auto& [name, v] : rep.verdicts) out[name] = verdict_json(v);
  return out;
}

json conditions_json(const ClassificationReport& rep) {
  json out = json::object();
  for (const auto& [name, v] : rep.quasi_sasakian_conditions) out[name] = verdict_json(v);
  return out;
}

json header(const char* command, const Manifest& m, const RunOptions& opts) {
  return {{"command", command},
          {"tool", {{"name", kToolName}, {"version", kToolVersion}}},
          {"manifest", m.name},
          {"dimension", m.dim()},
          {"seed", opts.seed},
          {"samples", opts.samples},
          {"tolerance", opts.tolerance}};
}

json einstein_json(const EinsteinReport& e, OmegaSource source) {
  return {{"omega_source", omega_source_name(source)},
          {"holds", e.holds},
          {"max_residual", e.max_residual},
          {"parallel_torsion", e.parallel_torsion},
          {"max_parallel_torsion", e.max_parallel_torsion},
          {"samples", e.samples}};
}

json grid_json(const TensorGrid& g) {
  json slots = json::array();
  json shape = json::array();
  for (int s = 0; s < g.rank(); ++s) {
    slots.push_back(slot_name(g.slots()[s]));
    shape.push_back(g.extent(s));
  }
  // nested arrays in slot order
  std::vector<int> idx(static_cast<std::size_t>(g.rank()), 0);
  auto build = [&](auto&& self, int depth) -> json {
    if (depth == g.rank()) return g.at(idx);
    json arr = json::array();
    for (int i = 0; i < g.extent(depth); ++i) {
      idx[depth] = i;
      arr.push_back(self(self, depth + 1));
    }
    return arr;
  };
  return {{"slots", slots}, {"shape", shape}, {"components", build(build, 0)}};
}

TensorGrid matrix_grid(const Eigen::MatrixXd& mat, int dim, Slot row, Slot col) {
  TensorGrid g(dim, {row, col});
  for (int i = 0; i < mat.rows(); ++i) {
    for (int j = 0; j < mat.cols(); ++j) g(i, j) = mat(i, j);
  }
  return g;
}

void dump(std::string& out, const json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + json(it.key()).dump() + ": ";
        dump(out, it.value(), indent + 2);
      }
      out += "\n" + close + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      bool scalar = std::none_of(j.begin(), j.end(), [](const json& e) { return e.is_structured(); });
      if (scalar) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump(out, j[i], indent + 2);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump(out, j[i], indent + 2);
      }
      out += "\n" + close + "]";
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string mark(const json& holds) { return holds.get<bool>() ? "yes" : "no"; }

void verdict_table(std::ostringstream& os, const json& verdicts) {
  for (auto it = verdicts.begin(); it != verdicts.end(); ++it) {
    char line[160];
    std::snprintf(line, sizeof line, "  %-24s %-4s %14s  (%d samples)\n", it.key().c_str(),
                  mark(it.value()["holds"]).c_str(), fmt(it.value()["max_residual"].get<double>()).c_str(),
                  it.value()["samples"].get<int>());
    os << line;
  }
}

void components(std::ostringstream& os, const std::string& label, const json& grid) {
  const json& shape = grid["shape"];
  const int rank = static_cast<int>(shape.size());
  std::vector<int> idx(static_cast<std::size_t>(rank), 0);
  bool any = false;
  auto walk = [&](auto&& self, const json& node, int depth) -> void {
    if (depth == rank) {
      const double v = node.get<double>();
      if (v == 0.0) return;
      any = true;
      os << "  " << label << "[";
      for (int d = 0; d < rank; ++d) os << (d ? "," : "") << idx[d] + 1;
      os << "] = " << fmt(v) << "\n";
      return;
    }
    for (std::size_t i = 0; i < node.size(); ++i) {
      idx[depth] = static_cast<int>(i);
      self(self, node[i], depth + 1);
    }
  };
  walk(walk, grid["components"], 0);
  if (!any) os << "  " << label << " = 0\n";
}

}  // namespace

RunOptions defaults_from(const Manifest& m) {
  RunOptions o;
  o.samples = m.samples;
  o.seed = m.seed;
  o.tolerance = m.tolerance;
  o.omega_source = m.omega_source;
  return o;
}

CheckResult run_check(const Manifest& m, const RunOptions& opts) {
  const AdaptedStructure& s = m.structure;
  const auto points = s.chart().sample(opts.samples, opts.seed);
  const auto per_sample = parallel_map(static_cast<int>(points.size()), opts.threads,
                                       [&](int i) { return check_sample(LocalStructure(s, points[i])); });

  CheckResult res;
  json rep = header("check", m, opts);
  const ClassificationReport cls = classify(s, points, opts.tolerance, opts.threads);
  rep["classification"] = classification_json(cls);
  rep["quasi_sasakian_conditions"] = conditions_json(cls);

  res.hard_identities_pass = true;
  json ids = json::object();
  for (const auto& rule : kIdentities) {
    const double thr = rule.threshold > 0.0 ? rule.threshold : opts.tolerance;
    double worst = 0.0;
    bool passes = true;
    for (const auto& sc : per_sample) {
      const Residual& r = sc.identities.at(rule.name);
      worst = std::max(worst, r.value);
      if (!r.passes(thr)) passes = false;
    }
    if (rule.hard && !passes) res.hard_identities_pass = false;
    ids[rule.name] = {{"hard", rule.hard},
                      {"max_residual", worst},
                      {"threshold", thr},
                      {"passes", passes},
                      {"samples", static_cast<int>(per_sample.size())}};
  }
  rep["identities"] = ids;

  AxiomResiduals ax;
  std::set<int> ranks;
  double met = 0.0, met_xi = 0.0;
  for (const auto& sc : per_sample) {
    ax.phi_squared = std::max(ax.phi_squared, sc.axioms.phi_squared);
    ax.eta_xi = std::max(ax.eta_xi, sc.axioms.eta_xi);
    ax.metric_compatible = std::max(ax.metric_compatible, sc.axioms.metric_compatible);
    ax.phi_xi = std::max(ax.phi_xi, sc.axioms.phi_xi);
    ax.eta_phi = std::max(ax.eta_phi, sc.axioms.eta_phi);
    ax.eta_is_g_xi = std::max(ax.eta_is_g_xi, sc.axioms.eta_is_g_xi);
    ranks.insert(sc.rank);
    met = std::max(met, sc.metricity_max);
    met_xi = std::max(met_xi, sc.metricity_xi);
  }
  rep["axioms"] = {{"phi_squared", ax.phi_squared},
                   {"eta_xi", ax.eta_xi},
                   {"metric_compatible", ax.metric_compatible},
                   {"phi_xi", ax.phi_xi},
                   {"eta_phi", ax.eta_phi},
                   {"eta_is_g_xi", ax.eta_is_g_xi},
                   {"holds", ax.max() < opts.tolerance}};

  json rank_values = json::array();
  bool all_odd = true, all_even = true;
  for (int r : ranks) {
    rank_values.push_back(r);
    (r % 2 ? all_even : all_odd) = false;
  }
  rep["rank"] = {{"values", rank_values}, {"parity", all_odd ? "odd" : all_even ? "even" : "mixed"}};
  rep["metricity"] = {{"max_abs_defect", met}, {"xi_component_residual", met_xi}};

  const EinsteinReport e = einstein_check(s, points, opts.tolerance, opts.omega_source, {}, opts.threads);
  rep["einstein"] = einstein_json(e, opts.omega_source);
  rep["status"] = res.hard_identities_pass ? "pass" : "identity_failure";
  res.report = std::move(rep);
  return res;
}

json classify_report(const Manifest& m, const RunOptions& opts) {
  json rep = header("classify", m, opts);
  const ClassificationReport cls =
      classify(m.structure, SampleOptions{opts.samples, opts.seed, opts.tolerance, opts.threads});
  rep["classification"] = classification_json(cls);
  rep["quasi_sasakian_conditions"] = conditions_json(cls);
  return rep;
}

json einstein_report(const Manifest& m, const RunOptions& opts) {
  json rep = header("einstein", m, opts);
  const EinsteinReport e =
      einstein_check(m.structure, SampleOptions{opts.samples, opts.seed, opts.tolerance, opts.threads},
                     opts.omega_source);
  rep["einstein"] = einstein_json(e, opts.omega_source);
  json per = json::array();
  for (const auto& smp : e.per_sample) {
    json pt = json::array();
    for (double x : smp.point.coords()) pt.push_back(x);
    per.push_back({{"point", pt}, {"residual", smp.residual}, {"parallel_torsion", smp.parallel_torsion}});
  }
  rep["per_sample"] = per;
  return rep;
}

json rank_report(const Manifest& m, const RunOptions& opts, const std::optional<Point>& at) {
  const AdaptedChart& chart = m.structure.chart();
  json rep = {{"command", "rank"}, {"tool", {{"name", kToolName}, {"version", kToolVersion}}}, {"manifest", m.name}};
  auto entry = [&](const Point& p) {
    const int r = rank_at(chart, p);
    json pt = json::array();
    for (double x : p.coords()) pt.push_back(x);
    return json{{"point", pt}, {"rank", r}, {"parity", r % 2 ? "odd" : "even"}};
  };
  if (at) {
    chart.validate_point(*at);
    rep["at"] = entry(*at);
  } else {
    rep["seed"] = opts.seed;
    rep["samples"] = opts.samples;
    json per = json::array();
    for (const auto& p : chart.sample(opts.samples, opts.seed)) per.push_back(entry(p));
    rep["per_sample"] = per;
  }
  return rep;
}

const std::vector<std::string>& tensor_names() {
  static const std::vector<std::string> names{"omega",   "psi",     "C",   "lc-adapted",   "n-connection",
                                              "torsion", "schouten", "K", "ricci-wagner", "ricci-k"};
  return names;
}

json tensor_report(const Manifest& m, const std::string& name, const Point& at) {
  const auto& names = tensor_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    std::string list;
    for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
    throw SchemaError("--name", "unknown tensor \"" + name + "\" (known: " + list + ")");
  }
  const AdaptedStructure& s = m.structure;
  s.chart().validate_point(at);
  const LocalStructure local(s, at);
  const int n = local.dim();

  json blocks = json::object();
  if (name == "omega") {
    blocks["omega"] = grid_json(matrix_grid(local.omega().value(), n, Slot::frame_lower, Slot::frame_lower));
  } else if (name == "psi") {
    blocks["psi"] = grid_json(matrix_grid(local.psi().value(), n, Slot::frame_upper, Slot::frame_lower));
  } else if (name == "C") {
    blocks["C_lower"] = grid_json(matrix_grid(local.c_lower().value(), n, Slot::frame_lower, Slot::frame_lower));
    blocks["C_mixed"] = grid_json(matrix_grid(local.c_mixed().value(), n, Slot::frame_upper, Slot::frame_lower));
  } else if (name == "lc-adapted") {
    blocks["Gamma"] = grid_json(lc_adapted(local).coeffs);
  } else if (name == "n-connection") {
    blocks["G"] = grid_json(canonical_connection(local).coeffs);
  } else if (name == "torsion") {
    blocks["S"] = grid_json(torsion(local, Endomorphism::canonical()).table);
  } else if (name == "schouten") {
    blocks["R"] = grid_json(schouten(local));
  } else if (name == "K") {
    const CurvatureK k = curvature_K(local);
    blocks["K_frame"] = grid_json(k.frame);
    blocks["K_mixed"] = grid_json(k.mixed);
  } else if (name == "ricci-wagner") {
    blocks["r"] = grid_json(ricci_wagner(local));
  } else {
    blocks["k"] = grid_json(ricci_k(local));
  }

  json pt = json::array();
  for (double x : at.coords()) pt.push_back(x);
  return {{"command", "tensor"},
          {"tool", {{"name", kToolName}, {"version", kToolVersion}}},
          {"manifest", m.name},
          {"name", name},
          {"point", pt},
          {"blocks", blocks}};
}

Point parse_point(const std::string& text, int dim) {
  std::vector<double> x;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find(',', pos), text.size());
    std::string item = text.substr(pos, end - pos);
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      throw SchemaError("--at", "malformed coordinate \"" + item + "\"");
    }
    x.push_back(v);
    pos = end + 1;
  }
  if (static_cast<int>(x.size()) != dim) {
    throw SchemaError("--at", "expected " + std::to_string(dim) + " coordinates, got " + std::to_string(x.size()));
  }
  return Point(std::move(x));
}

std::string dump_json(const json& j) {
  std::string out;
  dump(out, j, 0);
  out += "\n";
  return out;
}

std::string render_human(const json& rep) {
  std::ostringstream os;
  const std::string cmd = rep.value("command", "");
  os << rep["tool"]["name"].get<std::string>() << " " << rep["tool"]["version"].get<std::string>() << "  "
     << cmd << "  " << rep.value("manifest", "") << "\n";
  if (rep.contains("seed") && rep.contains("samples")) {
    os << "seed " << rep["seed"].get<std::uint64_t>() << ", " << rep["samples"].get<int>() << " samples";
    if (rep.contains("tolerance")) os << ", tolerance " << fmt(rep["tolerance"].get<double>());
    os << "\n";
  }

  if (rep.contains("classification")) {
    os << "\nclassification\n";
    verdict_table(os, rep["classification"]);
    os << "\nquasi-Sasakian conditions\n";
    verdict_table(os, rep["quasi_sasakian_conditions"]);
  }
  if (rep.contains("identities")) {
    os << "\nidentities\n";
    const json& ids = rep["identities"];
    for (auto it = ids.begin(); it != ids.end(); ++it) {
      char line[160];
      std::snprintf(line, sizeof line, "  %-24s %-4s %14s  < %-8s %s\n", it.key().c_str(),
                    it.value()["passes"].get<bool>() ? "ok" : "FAIL",
                    fmt(it.value()["max_residual"].get<double>()).c_str(),
                    fmt(it.value()["threshold"].get<double>()).c_str(), it.value()["hard"].get<bool>() ? "hard" : "");
      os << line;
    }
  }
  if (rep.contains("axioms")) {
    const json& a = rep["axioms"];
    os << "\naxioms " << (a["holds"].get<bool>() ? "hold" : "FAIL") << ": phi^2 " << fmt(a["phi_squared"])
       << ", metric " << fmt(a["metric_compatible"]) << "\n";
  }
  if (rep.contains("rank") && rep["rank"].contains("values")) {
    os << "rank " << rep["rank"]["values"].dump() << " (" << rep["rank"]["parity"].get<std::string>() << ")\n";
  }
  if (rep.contains("metricity")) {
    os << "canonical metricity defect max " << fmt(rep["metricity"]["max_abs_defect"]) << "\n";
  }
  if (rep.contains("einstein")) {
    const json& e = rep["einstein"];
    os << "einstein (" << e["omega_source"].get<std::string>() << ") " << mark(e["holds"]) << ", max residual "
       << fmt(e["max_residual"]) << "; parallel torsion " << mark(e["parallel_torsion"]) << "\n";
  }
  if (rep.contains("status")) os << "\nstatus: " << rep["status"].get<std::string>() << "\n";

  if (cmd == "rank") {
    auto line = [&](const json& e) {
      os << "  " << e["point"].dump() << "  rank " << e["rank"].get<int>() << " ("
         << e["parity"].get<std::string>() << ")\n";
    };
    if (rep.contains("at")) line(rep["at"]);
    if (rep.contains("per_sample")) {
      for (const auto& e : rep["per_sample"]) line(e);
    }
  }
  if (cmd == "tensor") {
    os << "at " << rep["point"].dump() << "  (1-based indices; index n is xi)\n";
    const json& blocks = rep["blocks"];
    for (auto it = blocks.begin(); it != blocks.end(); ++it) components(os, it.key(), it.value());
  }
  return os.str();
}

}  // namespace acm::cli
