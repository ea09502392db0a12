#ifndef ACM_CHART_HPP
#define ACM_CHART_HPP

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "acm/expr.hpp"
#include "acm/jet.hpp"
#include "acm/tensor_grid.hpp"

namespace acm {

struct Interval {
  double lo = -1.0;
  double hi = 1.0;
};

/// Points where an `avoid` field is smaller than this in magnitude are redrawn.
inline constexpr double kAvoidThreshold = 1e-6;
inline constexpr int kMaxRedraws = 1000;

/// Chart adapted to the distribution D: the last coordinate is the ξ-direction
/// and D is spanned by e_a = ∂_a − Γⁿ_a ∂_n, a = 0..n-2. The contact form is
/// η = dxⁿ + Γⁿ_a dxᵃ.
class AdaptedChart {
 public:
  AdaptedChart(Coordinates coords, std::vector<ScalarField> gamma, std::vector<Interval> domain,
               std::vector<ScalarField> avoid = {});

  /// Γ ≡ 0 over coordinates with the box [-1,1]^n.
  static AdaptedChart flat(const Coordinates& coords);

  int dim() const { return coords_.size(); }
  int frame_dim() const { return dim() - 1; }
  int xi() const { return dim() - 1; }
  const Coordinates& coordinates() const { return coords_; }
  const std::vector<ScalarField>& gamma() const { return gamma_; }
  const std::vector<Interval>& domain() const { return domain_; }
  const std::vector<ScalarField>& avoid() const { return avoid_; }

  std::vector<Jet> gamma_jets(const Point& p) const;

  bool in_domain(const Point& p) const;
  /// Throws DomainError when p has the wrong dimension, lies outside the box,
  /// or makes an `avoid` field vanish.
  void validate_point(const Point& p) const;

  /// Deterministic in (seed, index) alone.
  Point sample_point(std::uint64_t seed, int index) const;
  std::vector<Point> sample(int count, std::uint64_t seed) const;

 private:
  Coordinates coords_;
  std::vector<ScalarField> gamma_;
  std::vector<Interval> domain_;
  std::vector<ScalarField> avoid_;
};

/// e_a f = ∂_a f − Γⁿ_a ∂_n f, one order below f.
Dual frame_derivative(std::span<const Jet> gamma, int a, const Jet& f);
double frame_derivative(std::span<const Jet> gamma, int a, const Dual& f);

double frame_apply(const AdaptedChart& chart, int a, const ScalarField& f, const Point& p);

/// ω_ab = ½(e_a Γⁿ_b − e_b Γⁿ_a), row-major (n-1)², with first derivatives.
std::vector<Dual> omega_duals(std::span<const Jet> gamma);

/// ω_ab in frame-lower components; [e_a, e_b] = 2 ω_ba ∂_n.
TensorGrid omega_frame(const AdaptedChart& chart, const Point& p);

/// ∂_n Γⁿ_a = 2 dη(ξ, e_a).
std::vector<double> d_eta_xi(const AdaptedChart& chart, const Point& p);

/// Rank 2p from the matrix rank of ω (singular values above 1e-9·σ_max),
/// 2p+1 when additionally ∂_nΓⁿ_a vanishes.
int rank_from(const Eigen::MatrixXd& omega, std::span<const double> dn_gamma);
int rank_at(const AdaptedChart& chart, const Point& p);

/// Coordinate components of a vector field, each with first derivatives.
using VectorFieldJet = std::vector<Dual>;

/// E_A for A < n-1 is e_A; A = n-1 is ξ = ∂_n.
VectorFieldJet frame_field(std::span<const Jet> gamma, int A);

/// [U, V]^k = U^i ∂_i V^k − V^i ∂_i U^k.
Eigen::VectorXd bracket(const VectorFieldJet& u, const VectorFieldJet& v);

/// Components of a coordinate vector in the frame (e_a, ξ): (V^a, V^n + Γⁿ_a V^a).
Eigen::VectorXd to_frame(std::span<const Jet> gamma, const Eigen::VectorXd& coord_vector);

/// Coordinate components of [E_A, E_B].
Eigen::VectorXd frame_bracket(const AdaptedChart& chart, int A, int B, const Point& p);

/// Adapted coordinate change xᵃ = xᵃ(x′), xⁿ = x′ⁿ + h(x′). All fields are
/// over the primed coordinates and must not depend on x′ⁿ.
struct ChartTransition {
  std::vector<ScalarField> base;
  ScalarField shift;
};

Point transition_image(const ChartTransition& tr, const Point& primed);

/// Aᵃ_{a′} = ∂xᵃ/∂x^{a′} at the primed point; throws SingularJacobianError
/// when its condition number reaches 1e8.
Eigen::MatrixXd transition_jacobian(const ChartTransition& tr, const Point& primed);

/// Components, in the primed chart at `primed`, of the admissible tensor whose
/// components in `chart` at the image point are `t`. Only frame slots allowed.
TensorGrid change_chart(const AdaptedChart& chart, const ChartTransition& tr, const TensorGrid& t,
                        const Point& primed);

/// Inverse of change_chart at the same point.
TensorGrid restore_chart(const AdaptedChart& chart, const ChartTransition& tr, const TensorGrid& t_primed,
                         const Point& primed);

}  // namespace acm

#endif  // ACM_CHART_HPP
