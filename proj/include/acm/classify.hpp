#ifndef ACM_CLASSIFY_HPP
#define ACM_CLASSIFY_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "acm/structure.hpp"
#include "acm/tensor_grid.hpp"

namespace acm {

/// N(X, Y) over X, Y in the full frame; grid index (X, Y, C) is the Cth frame
/// component of the vector N(E_X, E_Y).
struct NijenhuisTensors {
  TensorGrid n_phi;    // [φX,φY] + φ²[X,Y] − φ[φX,Y] − φ[X,φY]
  TensorGrid n_one;    // N_φ + 2dη ⊗ ξ
  TensorGrid n_tilde;  // N_φ + 2φ*dη ⊗ ξ
};

NijenhuisTensors nijenhuis_tensors(const LocalStructure& local);
NijenhuisTensors nijenhuis_tensors(const AdaptedStructure& s, const Point& p);

/// dη over the full frame assembled from ω and ∂_nΓ (no exterior derivative).
Eigen::MatrixXd d_eta_from_omega(const LocalStructure& local);

/// ‖P N⁽¹⁾ − Ñ‖∞.
double check_projection_identity(const LocalStructure& local);
double check_projection_identity(const AdaptedStructure& s, const Point& p);
/// ‖N⁽¹⁾ − Ñ − 2(dη − φ*dη) ⊗ ξ‖∞, dη taken from ω on the right-hand side.
double check_nijenhuis_relation(const LocalStructure& local);
double check_nijenhuis_relation(const AdaptedStructure& s, const Point& p);
/// ‖(∇̃_Xφ)Y − g(ψφY, X)ξ + η(Y)φψX + η(X)(φψ − ψφ)Y‖∞.
double check_aqs_cov_phi(const LocalStructure& local);
double check_aqs_cov_phi(const AdaptedStructure& s, const Point& p);
/// ‖(∇̃_Xφ)Y − g(AY, X)ξ + η(Y)AX‖∞ with A = φψ.
double check_quasi_sasakian_cov_phi(const LocalStructure& local);
double check_quasi_sasakian_cov_phi(const AdaptedStructure& s, const Point& p);
/// ‖∇ᴺφ‖∞ for the canonical connection.
double check_canonical_cov_phi(const LocalStructure& local);
double check_canonical_cov_phi(const AdaptedStructure& s, const Point& p);

/// A residual and the magnitude of the tensors it was formed from.
struct Residual {
  double value = 0.0;
  double scale = 0.0;

  bool passes(double tol) const { return value < tol * (1.0 + scale); }
};

/// Base criteria at one point: contact_metric, normal, almost_normal,
/// d_Omega_zero, d_eta_xi_zero and the three quasi-Sasakian conditions
/// d_eta_phi_invariant, phi_psi_commute, phi_psi_symmetric.
std::map<std::string, Residual> criterion_residuals(const LocalStructure& local, const FormFields& fundamental);

struct SampleOptions {
  int samples = 32;
  std::uint64_t seed = 42;
  double tolerance = 1e-7;
  int threads = 0;
};

struct Verdict {
  bool holds = false;
  double max_residual = 0.0;
  int samples = 0;
};

struct ClassificationReport {
  /// contact_metric, normal, almost_normal, almost_contact_kahler, aqs,
  /// quasi_sasakian, d_eta_xi_zero, d_Omega_zero.
  std::map<std::string, Verdict> verdicts;
  /// The three equivalent quasi-Sasakian conditions, reported separately.
  std::map<std::string, Verdict> quasi_sasakian_conditions;

  const Verdict& at(const std::string& name) const { return verdicts.at(name); }
};

/// Throws InconsistencyError when the structure is AQS but the quasi-Sasakian
/// conditions disagree.
ClassificationReport classify(const AdaptedStructure& s, const SampleOptions& opts = {});
ClassificationReport classify(const AdaptedStructure& s, std::span<const Point> points, double tol, int threads = 0);

}  // namespace acm

#endif  // ACM_CLASSIFY_HPP
