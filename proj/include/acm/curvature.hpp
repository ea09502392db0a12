#ifndef ACM_CURVATURE_HPP
#define ACM_CURVATURE_HPP

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "acm/classify.hpp"
#include "acm/structure.hpp"
#include "acm/tensor_grid.hpp"

namespace acm {

/// Rᵈ_abc = e_aΓᵈ_bc − e_bΓᵈ_ac + Γᵈ_aeΓᵉ_bc − Γᵈ_beΓᵉ_ac at grid index (d, a, b, c).
TensorGrid schouten(const LocalStructure& local);
TensorGrid schouten(const AdaptedStructure& s, const Point& p);

/// Curvature of the canonical connection on its two nonzero blocks.
struct CurvatureK {
  TensorGrid frame;  // Kᵈ_abc = Rᵈ_abc + 4ω_abψᵈ_c at (d, a, b, c)
  TensorGrid mixed;  // Kᵈ_anc = 2∇_aψᵈ_c at (d, a, c)
};

CurvatureK curvature_K(const LocalStructure& local);
CurvatureK curvature_K(const AdaptedStructure& s, const Point& p);

/// r_ac = Rᵇ_abc.
TensorGrid ricci_wagner(const LocalStructure& local);
TensorGrid ricci_wagner(const AdaptedStructure& s, const Point& p);

/// k over the full frame: k_ab = r_ab + 4ω_adψᵈ_b, k_na = −∇_dψᵈ_a, k_an = k_nn = 0.
TensorGrid ricci_k(const LocalStructure& local);
TensorGrid ricci_k(const AdaptedStructure& s, const Point& p);

enum class OmegaSource { d_eta, fundamental_form };

/// 4ω_daψᵈ_b with ω, ψ from dη or from the fundamental form (ψᵇ_a = g^{bc}Ω_ac).
Eigen::MatrixXd einstein_rhs(const LocalStructure& local, OmegaSource source);

struct EinsteinSample {
  Point point;
  double residual = 0.0;        // max |r_ab − 4ω_daψᵈ_b|
  double block_residual = 0.0;  // same, restricted to the requested block
  double scale = 0.0;
  double parallel_torsion = 0.0;  // max |∇ω|
};

struct EinsteinReport {
  bool holds = false;
  double max_residual = 0.0;
  double max_block_residual = 0.0;
  bool block_holds = false;
  bool parallel_torsion = false;
  double max_parallel_torsion = 0.0;
  int samples = 0;
  std::vector<EinsteinSample> per_sample;
};

/// Parallel torsion is reported, not required. `block` restricts the block
/// residual to the listed frame indices (empty: whole frame).
EinsteinReport einstein_check(const AdaptedStructure& s, const SampleOptions& opts, OmegaSource source,
                              std::span<const int> block = {});
EinsteinReport einstein_check(const AdaptedStructure& s, std::span<const Point> points, double tol,
                              OmegaSource source, std::span<const int> block = {}, int threads = 0);

}  // namespace acm

#endif  // ACM_CURVATURE_HPP
