#include "acm/structure.hpp"

#include <algorithm>
#include <cmath>

#include "acm/error.hpp"

namespace acm {

AdaptedStructure::AdaptedStructure(AdaptedChart chart, FieldMatrix metric, FieldMatrix phi, bool pseudo)
    : chart_(std::move(chart)), metric_(std::move(metric)), phi_(std::move(phi)), pseudo_(pseudo) {
  const int m = chart_.frame_dim();
  if (metric_.rows() != m || metric_.cols() != m) throw Error("frame metric must be (n-1)x(n-1)");
  if (phi_.rows() != m || phi_.cols() != m) throw Error("phi must be (n-1)x(n-1)");
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (!(metric_(i, j).coordinates() == chart_.coordinates()) ||
          !(phi_(i, j).coordinates() == chart_.coordinates())) {
        throw Error("structure field over foreign coordinates");
      }
    }
  }
}

LocalStructure::LocalStructure(const AdaptedStructure& s, const Point& p)
    : structure_(&s), point_(p), n_(s.dim()) {
  const int n = n_;
  const int m = n - 1;
  s.chart().validate_point(p);
  gamma_ = s.chart().gamma_jets(p);
  metric_jets_.reserve(static_cast<std::size_t>(m * m));
  phi_jets_.reserve(static_cast<std::size_t>(m * m));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      metric_jets_.push_back(s.metric()(i, j).evaluate_jet(p));
      phi_jets_.push_back(s.phi()(i, j).evaluate_jet(p));
    }
  }

  g_ = DualMatrix(m, m, n);
  phi_ = DualMatrix(m, m, n);
  c_lower_ = DualMatrix(m, m, n);
  omega_ = DualMatrix(m, m, n);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      g_(a, b) = metric_jet(a, b).to_dual();
      phi_(a, b) = phi_jet(a, b).to_dual();
      c_lower_(a, b) = 0.5 * metric_jet(a, b).d(xi());
    }
  }

  const Eigen::MatrixXd gv = g_.value();
  const double scale = 1.0 + gv.cwiseAbs().maxCoeff();
  if ((gv - gv.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error("frame metric is not symmetric at the point");
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gv);
  const auto& ev = eig.eigenvalues();
  min_eig_ = ev.minCoeff();
  if (s.pseudo()) {
    if (ev.cwiseAbs().minCoeff() <= 1e-9) throw SingularMetricError("frame metric is degenerate");
  } else if (min_eig_ <= 1e-9) {
    throw SingularMetricError("frame metric is not positive definite");
  }
  g_inv_ = g_.inverse();

  const auto w = omega_duals(gamma_);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) omega_(a, b) = w[a * m + b];
  }

  // ψᵇ_a = g^{bc} ω_ac ,  Cᵇ_a = g^{bc} C_ac ,  Ω_ab = g_ac φᶜ_b
  psi_ = DualMatrix(m, m, n);
  c_mixed_ = DualMatrix(m, m, n);
  for (int b = 0; b < m; ++b) {
    for (int a = 0; a < m; ++a) {
      Dual p_acc = Dual::constant(0.0, n);
      Dual c_acc = Dual::constant(0.0, n);
      for (int c = 0; c < m; ++c) {
        p_acc += g_inv_(b, c) * omega_(a, c);
        c_acc += g_inv_(b, c) * c_lower_(a, c);
      }
      psi_(b, a) = std::move(p_acc);
      c_mixed_(b, a) = std::move(c_acc);
    }
  }
  fundamental_ = g_ * phi_;

  dn_gamma_.reserve(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a) dn_gamma_.push_back(gamma_[a].d(xi()));

  // Γᶜ_ab = ½ g^{cd} (e_a g_bd + e_b g_ad − e_d g_ab)
  std::vector<Dual> eg(static_cast<std::size_t>(m * m * m));  // e_k g_ij at [k][i][j]
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) eg[(k * m + i) * m + j] = frame_derivative(k, metric_jet(i, j));
    }
  }
  auto egat = [&](int k, int i, int j) -> const Dual& { return eg[(k * m + i) * m + j]; };
  internal_.assign(static_cast<std::size_t>(m * m * m), Dual::constant(0.0, n));
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      std::vector<Dual> lowered(m);
      for (int d = 0; d < m; ++d) lowered[d] = 0.5 * (egat(a, b, d) + egat(b, a, d) - egat(d, a, b));
      for (int c = 0; c < m; ++c) {
        Dual acc = Dual::constant(0.0, n);
        for (int d = 0; d < m; ++d) acc += g_inv_(c, d) * lowered[d];
        internal_[(c * m + a) * m + b] = std::move(acc);
      }
    }
  }
}

Eigen::MatrixXd LocalStructure::g_full() const {
  const int m = frame_dim();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n_, n_);
  out.topLeftCorner(m, m) = g_.value();
  out(m, m) = 1.0;
  return out;
}

Eigen::MatrixXd LocalStructure::phi_full() const {
  const int m = frame_dim();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n_, n_);
  out.topLeftCorner(m, m) = phi_.value();
  return out;
}

Eigen::MatrixXd LocalStructure::psi_full() const {
  const int m = frame_dim();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n_, n_);
  out.topLeftCorner(m, m) = psi_.value();
  return out;
}

double AxiomResiduals::max() const {
  return std::max({phi_squared, eta_xi, metric_compatible, phi_xi, eta_phi, eta_is_g_xi});
}

AxiomResiduals validate_axioms(const LocalStructure& local) {
  const int n = local.dim();
  const int m = local.frame_dim();
  const Eigen::MatrixXd phi = local.phi_full();
  const Eigen::MatrixXd g = local.g_full();
  // η and ξ in frame components
  Eigen::VectorXd eta = Eigen::VectorXd::Zero(n);
  eta[m] = 1.0;
  Eigen::VectorXd xi = Eigen::VectorXd::Zero(n);
  xi[m] = 1.0;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);

  AxiomResiduals r;
  r.phi_squared = (phi * phi - (-id + xi * eta.transpose())).cwiseAbs().maxCoeff();
  r.eta_xi = std::abs(eta.dot(xi) - 1.0);
  r.metric_compatible = (phi.transpose() * g * phi - (g - eta * eta.transpose())).cwiseAbs().maxCoeff();
  r.phi_xi = (phi * xi).cwiseAbs().maxCoeff();
  r.eta_phi = (phi.transpose() * eta).cwiseAbs().maxCoeff();
  r.eta_is_g_xi = (g * xi - eta).cwiseAbs().maxCoeff();
  return r;
}

AxiomResiduals validate_axioms(const AdaptedStructure& s, const Point& p) {
  return validate_axioms(LocalStructure(s, p));
}

DerivedTensors derived(const LocalStructure& local) {
  DerivedTensors t;
  t.fundamental = local.fundamental().value();
  t.omega = local.omega().value();
  t.psi = local.psi().value();
  t.c_lower = local.c_lower().value();
  t.c_mixed = local.c_mixed().value();
  t.trace_psi_sq = (t.psi * t.psi).trace();
  return t;
}

DerivedTensors derived(const AdaptedStructure& s, const Point& p) { return derived(LocalStructure(s, p)); }

FormFields eta_form(const AdaptedChart& chart) {
  FormFields f;
  f.degree = 1;
  f.components = chart.gamma();
  f.components.push_back(ScalarField::constant(1.0, chart.coordinates()));
  return f;
}

FormFields fundamental_form(const AdaptedStructure& s) {
  const int n = s.dim();
  const int m = n - 1;
  const auto& coords = s.chart().coordinates();
  FormFields f;
  f.degree = 2;
  f.components.assign(static_cast<std::size_t>(n * n), ScalarField::constant(0.0, coords));
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      ScalarField acc = ScalarField::constant(0.0, coords);
      for (int c = 0; c < m; ++c) acc = acc + s.metric()(a, c) * s.phi()(c, b);
      f.components[a * n + b] = acc;
    }
  }
  return f;
}

namespace {

TensorGrid exterior_derivative_of_jets(int degree, int n, std::span<const Jet> comps) {
  std::vector<Slot> slots(static_cast<std::size_t>(degree + 1), Slot::coord_lower);
  TensorGrid out(n, slots);
  const double norm = 1.0 / (degree + 1);
  std::vector<int> rest(static_cast<std::size_t>(degree));
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto idx = out.unravel(k);
    double acc = 0.0;
    for (int j = 0; j <= degree; ++j) {
      std::size_t flat = 0;
      for (int s = 0, r = 0; s <= degree; ++s) {
        if (s == j) continue;
        flat = flat * static_cast<std::size_t>(n) + static_cast<std::size_t>(idx[s]);
        ++r;
      }
      const double term = comps[flat].grad()[idx[j]];
      acc += (j % 2 == 0) ? term : -term;
    }
    out.data()[k] = norm * acc;
  }
  return out;
}

}  // namespace

TensorGrid exterior_derivative(const FormFields& form, const Point& p) {
  const int n = p.dim();
  std::size_t expected = 1;
  for (int i = 0; i < form.degree; ++i) expected *= static_cast<std::size_t>(n);
  if (form.components.size() != expected) throw Error("form has the wrong number of components");
  std::vector<Jet> jets;
  jets.reserve(expected);
  for (const auto& f : form.components) jets.push_back(f.evaluate_jet(p));
  return exterior_derivative_of_jets(form.degree, n, jets);
}

TensorGrid exterior_derivative(const AdaptedStructure& s, const FormFields& form, const Point& p) {
  if (p.dim() != s.dim()) throw DomainError("point dimension does not match the chart");
  return exterior_derivative(form, p);
}

TensorGrid covariant_to_frame(const TensorGrid& coord, std::span<const Jet> gamma) {
  const int n = coord.dim();
  const int m = n - 1;
  // E_A = Σ_i frame(i, A) ∂_i
  Eigen::MatrixXd frame = Eigen::MatrixXd::Identity(n, n);
  for (int a = 0; a < m; ++a) frame(m, a) = -gamma[a].value();

  std::vector<Slot> slots(coord.slots().size(), Slot::full_lower);
  for (Slot s : coord.slots()) {
    if (s != Slot::coord_lower) throw Error("covariant_to_frame expects coordinate-lower slots");
  }
  TensorGrid cur = coord;
  for (int s = 0; s < coord.rank(); ++s) {
    std::vector<Slot> next_slots = cur.slots();
    next_slots[s] = Slot::full_lower;
    TensorGrid next(n, next_slots);
    for (std::size_t k = 0; k < next.size(); ++k) {
      auto idx = next.unravel(k);
      const int A = idx[s];
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        if (frame(i, A) == 0.0) continue;
        idx[s] = i;
        acc += frame(i, A) * cur.at(idx);
      }
      next.data()[k] = acc;
    }
    cur = std::move(next);
  }
  return cur;
}

Eigen::MatrixXd d_eta_full(const LocalStructure& local) {
  const int n = local.dim();
  std::vector<Jet> comps(local.gamma().begin(), local.gamma().end());
  comps.push_back(Jet::constant(1.0, n));
  const TensorGrid frame = covariant_to_frame(exterior_derivative_of_jets(1, n, comps), local.gamma());
  Eigen::MatrixXd out(n, n);
  for (int A = 0; A < n; ++A) {
    for (int B = 0; B < n; ++B) out(A, B) = frame(A, B);
  }
  return out;
}

}  // namespace acm
