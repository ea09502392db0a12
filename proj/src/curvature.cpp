#include "acm/curvature.hpp"

#include <algorithm>
#include <cmath>

#include "acm/connection.hpp"
#include "acm/error.hpp"
#include "acm/parallel.hpp"

namespace acm {

TensorGrid schouten(const LocalStructure& local) {
  const int m = local.frame_dim();
  TensorGrid R(local.dim(), {Slot::frame_upper, Slot::frame_lower, Slot::frame_lower, Slot::frame_lower});
  for (int d = 0; d < m; ++d) {
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        for (int c = 0; c < m; ++c) {
          double v = local.frame_derivative(a, local.internal(d, b, c)) -
                     local.frame_derivative(b, local.internal(d, a, c));
          for (int e = 0; e < m; ++e) {
            v += local.internal(d, a, e).value() * local.internal(e, b, c).value() -
                 local.internal(d, b, e).value() * local.internal(e, a, c).value();
          }
          R(d, a, b, c) = v;
        }
      }
    }
  }
  return R;
}

TensorGrid schouten(const AdaptedStructure& s, const Point& p) { return schouten(LocalStructure(s, p)); }

CurvatureK curvature_K(const LocalStructure& local) {
  const int m = local.frame_dim();
  CurvatureK k{schouten(local), TensorGrid(local.dim(), {Slot::frame_upper, Slot::frame_lower, Slot::frame_lower})};
  for (int d = 0; d < m; ++d) {
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        for (int c = 0; c < m; ++c) {
          k.frame(d, a, b, c) += 4.0 * local.omega()(a, b).value() * local.psi()(d, c).value();
        }
      }
    }
  }
  const TensorGrid dpsi = internal_cov_deriv(local, psi_field(local));  // (a, d, c)
  for (int d = 0; d < m; ++d) {
    for (int a = 0; a < m; ++a) {
      for (int c = 0; c < m; ++c) k.mixed(d, a, c) = 2.0 * dpsi(a, d, c);
    }
  }
  return k;
}

CurvatureK curvature_K(const AdaptedStructure& s, const Point& p) { return curvature_K(LocalStructure(s, p)); }

namespace {

TensorGrid trace_second(const TensorGrid& R, int m, int dim) {
  TensorGrid r(dim, {Slot::frame_lower, Slot::frame_lower});
  for (int a = 0; a < m; ++a) {
    for (int c = 0; c < m; ++c) {
      double v = 0.0;
      for (int b = 0; b < m; ++b) v += R(b, a, b, c);
      r(a, c) = v;
    }
  }
  return r;
}

}  // namespace

TensorGrid ricci_wagner(const LocalStructure& local) {
  return trace_second(schouten(local), local.frame_dim(), local.dim());
}

TensorGrid ricci_wagner(const AdaptedStructure& s, const Point& p) { return ricci_wagner(LocalStructure(s, p)); }

TensorGrid ricci_k(const LocalStructure& local) {
  const int n = local.dim();
  const int m = n - 1;
  const TensorGrid r = ricci_wagner(local);
  const Eigen::MatrixXd w = local.omega().value();
  const Eigen::MatrixXd psi = local.psi().value();
  const TensorGrid dpsi = internal_cov_deriv(local, psi_field(local));  // (c, d, a) = ∇_c ψᵈ_a
  TensorGrid k(n, {Slot::full_lower, Slot::full_lower});
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      double v = r(a, b);
      for (int d = 0; d < m; ++d) v += 4.0 * w(a, d) * psi(d, b);
      k(a, b) = v;
    }
    double div = 0.0;
    for (int d = 0; d < m; ++d) div += dpsi(d, d, a);
    k(m, a) = -div;
  }
  return k;
}

TensorGrid ricci_k(const AdaptedStructure& s, const Point& p) { return ricci_k(LocalStructure(s, p)); }

Eigen::MatrixXd einstein_rhs(const LocalStructure& local, OmegaSource source) {
  Eigen::MatrixXd w;
  Eigen::MatrixXd psi;
  if (source == OmegaSource::d_eta) {
    w = local.omega().value();
    psi = local.psi().value();
  } else {
    w = local.fundamental().value();
    psi = local.g_inv().value() * w.transpose();  // ψᵇ_a = g^{bc} Ω_ac
  }
  return 4.0 * w.transpose() * psi;  // Σ_d ω_da ψᵈ_b
}

namespace {

EinsteinSample einstein_sample(const LocalStructure& local, OmegaSource source, std::span<const int> block) {
  const int m = local.frame_dim();
  const TensorGrid r = ricci_wagner(local);
  Eigen::MatrixXd rm(m, m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) rm(a, b) = r(a, b);
  }
  const Eigen::MatrixXd rhs = einstein_rhs(local, source);
  const Eigen::MatrixXd diff = (rm - rhs).cwiseAbs();

  EinsteinSample out;
  out.point = local.point();
  if (m > 0) {
    out.residual = diff.maxCoeff();
    out.scale = std::max(rm.cwiseAbs().maxCoeff(), rhs.cwiseAbs().maxCoeff());
  }
  if (block.empty()) {
    out.block_residual = out.residual;
  } else {
    for (int a : block) {
      for (int b : block) {
        if (a < 0 || a >= m || b < 0 || b >= m) throw Error("einstein block index out of range");
        out.block_residual = std::max(out.block_residual, diff(a, b));
      }
    }
  }
  out.parallel_torsion = internal_cov_deriv(local, omega_field(local)).max_abs();
  return out;
}

}  // namespace

EinsteinReport einstein_check(const AdaptedStructure& s, std::span<const Point> points, double tol,
                              OmegaSource source, std::span<const int> block, int threads) {
  if (points.empty()) throw Error("einstein_check needs at least one sample");
  EinsteinReport rep;
  rep.per_sample = parallel_map(static_cast<int>(points.size()), threads, [&](int i) {
    return einstein_sample(LocalStructure(s, points[i]), source, block);
  });
  rep.samples = static_cast<int>(points.size());
  rep.holds = true;
  rep.block_holds = true;
  rep.parallel_torsion = true;
  for (const auto& e : rep.per_sample) {
    const double bound = tol * (1.0 + e.scale);
    rep.max_residual = std::max(rep.max_residual, e.residual);
    rep.max_block_residual = std::max(rep.max_block_residual, e.block_residual);
    rep.max_parallel_torsion = std::max(rep.max_parallel_torsion, e.parallel_torsion);
    if (!(e.residual < bound)) rep.holds = false;
    if (!(e.block_residual < bound)) rep.block_holds = false;
    if (!(e.parallel_torsion < bound)) rep.parallel_torsion = false;
  }
  return rep;
}

EinsteinReport einstein_check(const AdaptedStructure& s, const SampleOptions& opts, OmegaSource source,
                              std::span<const int> block) {
  if (opts.samples < 1) throw Error("einstein_check needs at least one sample");
  const auto points = s.chart().sample(opts.samples, opts.seed);
  return einstein_check(s, points, opts.tolerance, source, block, opts.threads);
}

}  // namespace acm
