#ifndef ACM_TESTS_SUPPORT_HPP
#define ACM_TESTS_SUPPORT_HPP

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "acm/cli/manifest.hpp"
#include "acm/structure.hpp"

namespace acm::test {

inline const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names{"flat", "example1", "example2", "example3-qs", "example3-aqs"};
  return names;
}

inline std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(ACM_FIXTURE_DIR) / (name + ".json");
}

inline cli::Manifest fixture(const std::string& name) { return cli::load_manifest(fixture_path(name)); }

inline Coordinates xyzuv() {
  static const Coordinates c({"x", "y", "z", "u", "v"});
  return c;
}

using StringMatrix = std::vector<std::vector<std::string>>;

inline FieldMatrix field_matrix(const StringMatrix& rows, const Coordinates& c) {
  const int m = static_cast<int>(rows.size());
  FieldMatrix out(m, m, ScalarField::constant(0.0, c));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) out(i, j) = parse(rows[i][j], c);
  }
  return out;
}

/// Five-dimensional structure over (x, y, z, u, v) with the box [lo, hi]^5.
inline AdaptedStructure make_structure(const std::vector<std::string>& gamma, const StringMatrix& metric,
                                       const StringMatrix& phi, double lo = -1.0, double hi = 1.0,
                                       const std::vector<std::string>& avoid = {}, bool pseudo = false) {
  const Coordinates c = xyzuv();
  std::vector<ScalarField> g, a;
  for (const auto& s : gamma) g.push_back(parse(s, c));
  for (const auto& s : avoid) a.push_back(parse(s, c));
  AdaptedChart chart(c, std::move(g), std::vector<Interval>(5, Interval{lo, hi}), std::move(a));
  return AdaptedStructure(std::move(chart), field_matrix(metric, c), field_matrix(phi, c), pseudo);
}

inline const StringMatrix& identity4() {
  static const StringMatrix m{{"1", "0", "0", "0"}, {"0", "1", "0", "0"}, {"0", "0", "1", "0"}, {"0", "0", "0", "1"}};
  return m;
}

inline const StringMatrix& rotation12() {
  static const StringMatrix m{
      {"0", "-1", "0", "0"}, {"1", "0", "0", "0"}, {"0", "0", "0", "-1"}, {"0", "0", "1", "0"}};
  return m;
}

/// Random polynomial of degree <= `degree` in x, y, z, u, v as expression text.
inline std::string random_polynomial(std::mt19937_64& rng, int degree, int terms, double scale = 1.0) {
  static const char* vars[] = {"x", "y", "z", "u", "v"};
  std::uniform_real_distribution<double> coef(-scale, scale);
  std::uniform_int_distribution<int> var(0, 4);
  std::uniform_int_distribution<int> deg(0, degree);
  std::string out = std::to_string(coef(rng));
  for (int t = 0; t < terms; ++t) {
    std::string term = "(" + std::to_string(coef(rng)) + ")";
    const int d = deg(rng);
    for (int k = 0; k < d; ++k) term += std::string("*") + vars[var(rng)];
    out += " + " + term;
  }
  return out;
}

/// Flat fixture with g, φ and Γ perturbed by small random polynomials. g stays
/// symmetric and positive definite on [-1, 1]^5; φ no longer squares to −I.
inline AdaptedStructure perturbed_flat(std::uint64_t seed, double eps = 0.1) {
  std::mt19937_64 rng(seed);
  auto small = [&] { return "(" + std::to_string(eps) + ")*(" + random_polynomial(rng, 2, 3, 0.5) + ")"; };
  std::vector<std::string> gamma;
  for (int a = 0; a < 4; ++a) gamma.push_back(random_polynomial(rng, 2, 3, 0.5));
  StringMatrix g = identity4(), phi = rotation12();
  for (int a = 0; a < 4; ++a) {
    for (int b = a; b < 4; ++b) {
      const std::string p = small();
      g[a][b] = g[b][a] = g[a][b] + " + " + p;
    }
    for (int b = 0; b < 4; ++b) phi[a][b] = phi[a][b] + " + " + small();
  }
  return make_structure(gamma, g, phi);
}

}  // namespace acm::test

#endif  // ACM_TESTS_SUPPORT_HPP
