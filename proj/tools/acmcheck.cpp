#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "acm/cli/manifest.hpp"
#include "acm/cli/report.hpp"
#include "acm/error.hpp"

namespace {

enum Exit { kPass = 0, kIdentityFailure = 1, kInputError = 2 };

struct Flags {
  std::string manifest;
  bool json = false;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<std::string> omega_source;
  std::optional<std::string> at;
  std::string name;
  int threads = 0;
};

void emit(const nlohmann::json& rep, bool as_json) {
  std::cout << (as_json ? acm::cli::dump_json(rep) : acm::cli::render_human(rep));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Check almost contact metric structures given in adapted coordinates"};
  app.require_subcommand(1);
  Flags f;

  auto common = [&](CLI::App* sub) {
    sub->add_option("manifest", f.manifest, "structure manifest (JSON)")->required();
    sub->add_flag("--json", f.json, "machine-readable output");
    sub->add_option("--samples", f.samples, "number of sample points")->check(CLI::PositiveNumber);
    sub->add_option("--seed", f.seed, "sampling seed");
    sub->add_option("--tol", f.tol, "verdict tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--omega-source", f.omega_source, "d_eta | fundamental_form");
    sub->add_option("--threads", f.threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  };
  CLI::App* check = app.add_subcommand("check", "run every identity and classification check");
  CLI::App* classify = app.add_subcommand("classify", "classification verdicts only");
  CLI::App* einstein = app.add_subcommand("einstein", "Einstein condition for the canonical connection");
  CLI::App* rank = app.add_subcommand("rank", "rank of the underlying sub-Riemannian structure");
  CLI::App* tensor = app.add_subcommand("tensor", "print a named tensor at a point");
  for (CLI::App* sub : {check, classify, einstein, rank, tensor}) common(sub);
  rank->add_option("--at", f.at, "point x1,...,xn");
  tensor->add_option("--at", f.at, "point x1,...,xn")->required();
  tensor->add_option("--name", f.name, "tensor name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    const acm::cli::Manifest m = acm::cli::load_manifest(f.manifest);
    acm::cli::RunOptions opts = acm::cli::defaults_from(m);
    if (f.samples) opts.samples = *f.samples;
    if (f.seed) opts.seed = *f.seed;
    if (f.tol) opts.tolerance = *f.tol;
    if (f.omega_source) opts.omega_source = acm::cli::parse_omega_source(*f.omega_source);
    opts.threads = f.threads;

    if (check->parsed()) {
      const auto res = acm::cli::run_check(m, opts);
      emit(res.report, f.json);
      return res.hard_identities_pass ? kPass : kIdentityFailure;
    }
    if (classify->parsed()) {
      emit(acm::cli::classify_report(m, opts), f.json);
    } else if (einstein->parsed()) {
      emit(acm::cli::einstein_report(m, opts), f.json);
    } else if (rank->parsed()) {
      std::optional<acm::Point> at;
      if (f.at) at = acm::cli::parse_point(*f.at, m.dim());
      emit(acm::cli::rank_report(m, opts, at), f.json);
    } else {
      emit(acm::cli::tensor_report(m, f.name, acm::cli::parse_point(*f.at, m.dim())), f.json);
    }
    return kPass;
  } catch (const acm::InconsistencyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIdentityFailure;
  } catch (const acm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
}
