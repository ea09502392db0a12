#ifndef ACM_STRUCTURE_HPP
#define ACM_STRUCTURE_HPP

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "acm/chart.hpp"
#include "acm/expr.hpp"
#include "acm/jet.hpp"
#include "acm/tensor_grid.hpp"

namespace acm {

class FieldMatrix {
 public:
  FieldMatrix() = default;
  FieldMatrix(int rows, int cols, const ScalarField& fill)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  ScalarField& operator()(int i, int j) { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
  const ScalarField& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i * cols_ + j)]; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<ScalarField> data_;
};

/// Almost contact metric structure in an adapted chart.
///
/// `metric(a, b)` = g(e_a, e_b) and `phi(b, a)` = φᵇ_a (so φ e_a = φᵇ_a e_b);
/// g(ξ, ξ) = 1, g(ξ, e_a) = 0 and φξ = 0 are part of the representation.
class AdaptedStructure {
 public:
  AdaptedStructure(AdaptedChart chart, FieldMatrix metric, FieldMatrix phi, bool pseudo = false);

  const AdaptedChart& chart() const { return chart_; }
  const FieldMatrix& metric() const { return metric_; }
  const FieldMatrix& phi() const { return phi_; }
  bool pseudo() const { return pseudo_; }
  int dim() const { return chart_.dim(); }
  int frame_dim() const { return chart_.frame_dim(); }

 private:
  AdaptedChart chart_;
  FieldMatrix metric_;
  FieldMatrix phi_;
  bool pseudo_ = false;
};

/// Everything the other modules need at one point: input jets and the derived
/// frame tensors with first derivatives. Built once per sample.
///
/// Matrix conventions: bilinear forms are M(a, b) = M_ab, endomorphisms are
/// M(b, a) = Mᵇ_a. The internal connection is Γᶜ_ab with ∇_{e_a} e_b = Γᶜ_ab e_c.
class LocalStructure {
 public:
  /// Throws SingularMetricError when g is degenerate (or not positive definite
  /// unless the structure is pseudo-Riemannian), DomainError when p is not a
  /// valid chart point.
  LocalStructure(const AdaptedStructure& s, const Point& p);

  const AdaptedStructure& structure() const { return *structure_; }
  const Point& point() const { return point_; }
  int dim() const { return n_; }
  int frame_dim() const { return n_ - 1; }
  int xi() const { return n_ - 1; }

  std::span<const Jet> gamma() const { return gamma_; }
  const Jet& metric_jet(int a, int b) const { return metric_jets_[a * frame_dim() + b]; }
  const Jet& phi_jet(int b, int a) const { return phi_jets_[b * frame_dim() + a]; }

  const DualMatrix& g() const { return g_; }
  const DualMatrix& g_inv() const { return g_inv_; }
  const DualMatrix& phi() const { return phi_; }
  const DualMatrix& omega() const { return omega_; }
  const DualMatrix& psi() const { return psi_; }
  const DualMatrix& c_lower() const { return c_lower_; }
  const DualMatrix& c_mixed() const { return c_mixed_; }
  const DualMatrix& fundamental() const { return fundamental_; }
  const Dual& dn_gamma(int a) const { return dn_gamma_[a]; }
  const Dual& internal(int c, int a, int b) const {
    const int m = frame_dim();
    return internal_[(c * m + a) * m + b];
  }

  double min_metric_eigenvalue() const { return min_eig_; }

  /// n×n frame matrices extended over ξ: g ⊕ 1, φ ⊕ 0, ψ ⊕ 0.
  Eigen::MatrixXd g_full() const;
  Eigen::MatrixXd phi_full() const;
  Eigen::MatrixXd psi_full() const;

  Dual frame_derivative(int a, const Jet& f) const { return acm::frame_derivative(gamma_, a, f); }
  double frame_derivative(int a, const Dual& f) const { return acm::frame_derivative(gamma_, a, f); }
  /// E_A f for A over the full frame (A = n-1 differentiates along ξ = ∂_n).
  double full_frame_derivative(int A, const Dual& f) const {
    return A == xi() ? f.d(xi()) : frame_derivative(A, f);
  }

 private:
  const AdaptedStructure* structure_;
  Point point_;
  int n_;
  std::vector<Jet> gamma_;
  std::vector<Jet> metric_jets_;
  std::vector<Jet> phi_jets_;
  DualMatrix g_, g_inv_, phi_, omega_, psi_, c_lower_, c_mixed_, fundamental_;
  std::vector<Dual> dn_gamma_;
  std::vector<Dual> internal_;
  double min_eig_ = 0.0;
};

struct AxiomResiduals {
  double phi_squared = 0.0;         // 1) φ² = −I + η⊗ξ
  double eta_xi = 0.0;              // 2) η(ξ) = 1
  double metric_compatible = 0.0;   // 3) g(φX, φY) = g(X, Y) − η(X)η(Y)
  double phi_xi = 0.0;              // 5) φξ = 0
  double eta_phi = 0.0;             // 6) η∘φ = 0
  double eta_is_g_xi = 0.0;         // 7) η(X) = g(X, ξ)

  double max() const;
};

AxiomResiduals validate_axioms(const LocalStructure& local);
AxiomResiduals validate_axioms(const AdaptedStructure& s, const Point& p);

struct DerivedTensors {
  Eigen::MatrixXd fundamental;  // Ω_ab = g(e_a, φ e_b)
  Eigen::MatrixXd omega;        // ω_ab = dη(e_a, e_b)
  Eigen::MatrixXd psi;          // ψᵇ_a = g^{bc} ω_ac
  Eigen::MatrixXd c_lower;      // C_ab = ½ ∂_n g_ab
  Eigen::MatrixXd c_mixed;      // Cᵇ_a = g^{bc} C_ac
  double trace_psi_sq = 0.0;    // ψᵃ_b ψᵇ_a
};

DerivedTensors derived(const LocalStructure& local);
DerivedTensors derived(const AdaptedStructure& s, const Point& p);

/// Coordinate p-form given by n^p component fields, row-major over (i_1..i_p).
struct FormFields {
  int degree = 0;
  std::vector<ScalarField> components;
};

/// η = Γⁿ_a dxᵃ + dxⁿ.
FormFields eta_form(const AdaptedChart& chart);

/// Ω in coordinates: frame components Ω_ab padded with zeros on the ξ slot,
/// valid because (dxᵃ, η) is the coframe dual to (e_a, ∂_n).
FormFields fundamental_form(const AdaptedStructure& s);

/// (dα)_{i_0..i_p} = (p+1)⁻¹ Σ_k (−1)^k ∂_{i_k} α_{i_0..î_k..i_p}; for p = 1
/// this is dη(X,Y) = ½(Xη(Y) − Yη(X) − η([X,Y])). Input components are
/// assumed skew.
TensorGrid exterior_derivative(const FormFields& form, const Point& p);
TensorGrid exterior_derivative(const AdaptedStructure& s, const FormFields& form, const Point& p);

/// Coordinate covariant components → components on the frame (e_a, ξ).
TensorGrid covariant_to_frame(const TensorGrid& coord, std::span<const Jet> gamma);

/// dη on the full frame, computed from the coordinate exterior derivative of η.
Eigen::MatrixXd d_eta_full(const LocalStructure& local);

}  // namespace acm

#endif  // ACM_STRUCTURE_HPP
