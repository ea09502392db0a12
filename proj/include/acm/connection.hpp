#ifndef ACM_CONNECTION_HPP
#define ACM_CONNECTION_HPP

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "acm/structure.hpp"
#include "acm/tensor_grid.hpp"

namespace acm {

enum class ConnectionKind { levi_civita, internal, n_connection };

/// Connection coefficients at a point, stored as Γᶜ_ab at grid index (c, a, b)
/// with ∇_{E_a} E_b = Γᶜ_ab E_c. Levi-Civita and N-connections use the full
/// frame (E_{n-1} = ξ); the internal connection uses frame slots only.
struct ConnectionCoeffs {
  ConnectionKind which = ConnectionKind::levi_civita;
  TensorGrid coeffs;

  double operator()(int c, int a, int b) const { return coeffs(c, a, b); }
};

/// Coordinate Christoffel symbols Γᵏ_ij (grid index (k, i, j)) of the full
/// metric g_ab dxᵃdxᵇ + η⊗η. Independent of the adapted-frame formulas.
TensorGrid lc_coordinate(const AdaptedStructure& s, const Point& p);
TensorGrid lc_coordinate(const LocalStructure& local);

/// Γ̃ᶜ_AB = θᶜ_k (E_A(Eᵏ_B) + Eⁱ_A Eʲ_B Γᵏ_ij).
ConnectionCoeffs coordinate_to_frame_connection(const TensorGrid& coordinate, std::span<const Jet> gamma);

/// Levi-Civita connection on the adapted frame from ω, ψ, C, ∂_nΓ and Γᶜ_ab.
ConnectionCoeffs lc_adapted(const LocalStructure& local);
ConnectionCoeffs lc_adapted(const AdaptedStructure& s, const Point& p);

ConnectionCoeffs internal_connection(const LocalStructure& local);

/// Endomorphism N of D (Nξ = 0). Evaluated to Nᵇ_a at matrix entry (b, a).
class Endomorphism {
 public:
  /// N = 2ψ.
  static Endomorphism canonical();
  static Endomorphism zero();
  static Endomorphism constant(Eigen::MatrixXd n);
  static Endomorphism fields(FieldMatrix n);
  /// N = 2ψ + extra.
  static Endomorphism canonical_plus(Eigen::MatrixXd extra);

  Eigen::MatrixXd at(const LocalStructure& local) const;

 private:
  bool with_psi_ = false;
  std::optional<Eigen::MatrixXd> constant_;
  std::optional<FieldMatrix> fields_;
};

/// Coefficient table: Gᵃ_bc = Γᵃ_bc, Gᵇ_na = Nᵇ_a, Gⁿ_na = −∂_nΓ_a, rest 0.
ConnectionCoeffs n_connection(const LocalStructure& local, const Endomorphism& n);
ConnectionCoeffs n_connection(const AdaptedStructure& s, const Endomorphism& n, const Point& p);
ConnectionCoeffs canonical_connection(const LocalStructure& local);

/// ∇ᴺ_XY = ∇̃_XY + (∇̃_Xη)(Y)ξ − η(Y)∇̃_Xξ − η(X)(∇̃_ξη)(Y)ξ − η(X)(C + ψ − N)Y,
/// evaluated from lc_adapted.
ConnectionCoeffs n_connection_from_levi_civita(const LocalStructure& local, const Endomorphism& n);

/// S̃(X, Y, Z) = g(S(X, Y), Z) at grid index (X, Y, Z) over the full frame.
struct Torsion {
  TensorGrid table;                   // closed-form components
  TensorGrid direct;                  // g(∇ᴺ_XY − ∇ᴺ_YX − [X,Y], Z)
  double antisymmetry_residual = 0.0; // max |S̃(X,Y,Z) + S̃(X,Z,Y)|
  double skew_criterion = 0.0;        // max |2ω_ab − g(Ne_a, e_b)|
  double crosscheck_residual = 0.0;   // max |table − direct|
  double scale = 0.0;                 // max |2ω|, |g(N·,·)|
  bool is_skew = false;
};

Torsion torsion(const LocalStructure& local, const Endomorphism& n, double tol = 1e-9);
Torsion torsion(const AdaptedStructure& s, const Endomorphism& n, const Point& p, double tol = 1e-9);

/// (∇ᴺ_A g)_BC at grid index (A, B, C).
TensorGrid metricity_defect(const LocalStructure& local, const Endomorphism& n);
TensorGrid metricity_defect(const AdaptedStructure& s, const Endomorphism& n, const Point& p);

/// Admissible tensor field near a point: frame slots, Dual components row-major.
struct AdmissibleField {
  std::vector<Slot> slots;
  std::vector<Dual> components;
};

AdmissibleField omega_field(const LocalStructure& local);  // ω_ab
AdmissibleField psi_field(const LocalStructure& local);    // ψᵇ_a at (b, a)
/// Frame components given as expressions, slots as listed.
AdmissibleField admissible_from_fields(const LocalStructure& local, std::vector<Slot> slots,
                                       std::span<const ScalarField> components);

/// ∇_c t at grid index (c, t-indices...) under the internal connection.
TensorGrid internal_cov_deriv(const LocalStructure& local, const AdmissibleField& t);

enum class PhiConnection { levi_civita, canonical };

/// (∇_A φ)ᶜ_B at grid index (A, C, B), φ extended by φξ = 0.
TensorGrid cov_phi(const LocalStructure& local, PhiConnection which);
TensorGrid cov_phi(const AdaptedStructure& s, PhiConnection which, const Point& p);

}  // namespace acm

#endif  // ACM_CONNECTION_HPP
