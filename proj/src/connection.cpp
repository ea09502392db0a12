#include "acm/connection.hpp"

#include <algorithm>
#include <cmath>

#include "acm/error.hpp"

namespace acm {

namespace {

TensorGrid full_grid3(int n) { return TensorGrid(n, {Slot::full_upper, Slot::full_lower, Slot::full_lower}); }

}  // namespace

TensorGrid lc_coordinate(const LocalStructure& local) {
  const int n = local.dim();
  const int m = n - 1;
  const auto gamma = local.gamma();
  // G_ab = g_ab + Γ_aΓ_b, G_an = Γ_a, G_nn = 1
  DualMatrix G(n, n, n);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) G(a, b) = local.metric_jet(a, b).to_dual() + gamma[a].to_dual() * gamma[b].to_dual();
    G(a, m) = gamma[a].to_dual();
    G(m, a) = gamma[a].to_dual();
  }
  G(m, m) = Dual::constant(1.0, n);
  const DualMatrix Ginv = G.inverse();

  TensorGrid out(n, {Slot::coord_upper, Slot::coord_lower, Slot::coord_lower});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int l = 0; l < n; ++l) {
          acc += Ginv(k, l).value() * (G(j, l).d(i) + G(i, l).d(j) - G(i, j).d(l));
        }
        out(k, i, j) = 0.5 * acc;
      }
    }
  }
  return out;
}

TensorGrid lc_coordinate(const AdaptedStructure& s, const Point& p) { return lc_coordinate(LocalStructure(s, p)); }

ConnectionCoeffs coordinate_to_frame_connection(const TensorGrid& coordinate, std::span<const Jet> gamma) {
  const int n = coordinate.dim();
  const int m = n - 1;
  Eigen::MatrixXd E = Eigen::MatrixXd::Identity(n, n);      // Eᵏ_B at (k, B)
  Eigen::MatrixXd theta = Eigen::MatrixXd::Identity(n, n);  // θᶜ_k at (C, k)
  for (int a = 0; a < m; ++a) {
    E(m, a) = -gamma[a].value();
    theta(m, a) = gamma[a].value();
  }
  // E_A(Eⁿ_b) = −E_A Γ_b
  Eigen::MatrixXd dE = Eigen::MatrixXd::Zero(n, m);
  for (int A = 0; A < n; ++A) {
    for (int b = 0; b < m; ++b) {
      dE(A, b) = A == m ? -gamma[b].grad()[m] : -frame_derivative(gamma, A, gamma[b]).value();
    }
  }

  ConnectionCoeffs out{ConnectionKind::levi_civita, full_grid3(n)};
  for (int A = 0; A < n; ++A) {
    for (int B = 0; B < n; ++B) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(n);  // coordinate components of ∇_{E_A} E_B
      if (B < m) v[m] += dE(A, B);
      for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
          if (E(i, A) == 0.0) continue;
          for (int j = 0; j < n; ++j) {
            if (E(j, B) == 0.0) continue;
            v[k] += E(i, A) * E(j, B) * coordinate(k, i, j);
          }
        }
      }
      const Eigen::VectorXd f = theta * v;
      for (int C = 0; C < n; ++C) out.coeffs(C, A, B) = f[C];
    }
  }
  return out;
}

ConnectionCoeffs lc_adapted(const LocalStructure& local) {
  const int n = local.dim();
  const int m = n - 1;
  ConnectionCoeffs out{ConnectionKind::levi_civita, full_grid3(n)};
  auto& G = out.coeffs;
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      for (int c = 0; c < m; ++c) G(c, a, b) = local.internal(c, a, b).value();
      G(m, a, b) = local.omega()(b, a).value() - local.c_lower()(a, b).value();
      const double mixed = local.c_mixed()(b, a).value() + local.psi()(b, a).value();
      G(b, a, m) = mixed;
      G(b, m, a) = mixed;
    }
    G(m, m, a) = -local.dn_gamma(a).value();
    double up = 0.0;
    for (int b = 0; b < m; ++b) up += local.g_inv()(a, b).value() * local.dn_gamma(b).value();
    G(a, m, m) = up;
  }
  return out;
}

ConnectionCoeffs lc_adapted(const AdaptedStructure& s, const Point& p) { return lc_adapted(LocalStructure(s, p)); }

ConnectionCoeffs internal_connection(const LocalStructure& local) {
  const int m = local.frame_dim();
  ConnectionCoeffs out{ConnectionKind::internal,
                       TensorGrid(local.dim(), {Slot::frame_upper, Slot::frame_lower, Slot::frame_lower})};
  for (int c = 0; c < m; ++c) {
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) out.coeffs(c, a, b) = local.internal(c, a, b).value();
    }
  }
  return out;
}

Endomorphism Endomorphism::canonical() {
  Endomorphism e;
  e.with_psi_ = true;
  return e;
}

Endomorphism Endomorphism::zero() { return {}; }

Endomorphism Endomorphism::constant(Eigen::MatrixXd n) {
  Endomorphism e;
  e.constant_ = std::move(n);
  return e;
}

Endomorphism Endomorphism::fields(FieldMatrix n) {
  Endomorphism e;
  e.fields_ = std::move(n);
  return e;
}

Endomorphism Endomorphism::canonical_plus(Eigen::MatrixXd extra) {
  Endomorphism e;
  e.with_psi_ = true;
  e.constant_ = std::move(extra);
  return e;
}

Eigen::MatrixXd Endomorphism::at(const LocalStructure& local) const {
  const int m = local.frame_dim();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
  if (with_psi_) out += 2.0 * local.psi().value();
  if (constant_) {
    if (constant_->rows() != m || constant_->cols() != m) throw Error("endomorphism must be (n-1)x(n-1)");
    out += *constant_;
  }
  if (fields_) {
    if (fields_->rows() != m || fields_->cols() != m) throw Error("endomorphism must be (n-1)x(n-1)");
    for (int b = 0; b < m; ++b) {
      for (int a = 0; a < m; ++a) out(b, a) += (*fields_)(b, a).evaluate(local.point());
    }
  }
  return out;
}

ConnectionCoeffs n_connection(const LocalStructure& local, const Endomorphism& n) {
  const int dim = local.dim();
  const int m = dim - 1;
  const Eigen::MatrixXd N = n.at(local);
  ConnectionCoeffs out{ConnectionKind::n_connection, full_grid3(dim)};
  auto& G = out.coeffs;
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      for (int c = 0; c < m; ++c) G(a, b, c) = local.internal(a, b, c).value();
      G(b, m, a) = N(b, a);
    }
    G(m, m, a) = -local.dn_gamma(a).value();
  }
  return out;
}

ConnectionCoeffs n_connection(const AdaptedStructure& s, const Endomorphism& n, const Point& p) {
  return n_connection(LocalStructure(s, p), n);
}

ConnectionCoeffs canonical_connection(const LocalStructure& local) {
  return n_connection(local, Endomorphism::canonical());
}

ConnectionCoeffs n_connection_from_levi_civita(const LocalStructure& local, const Endomorphism& n) {
  const int dim = local.dim();
  const int m = dim - 1;
  const ConnectionCoeffs lc = lc_adapted(local);
  const Eigen::MatrixXd shift = local.c_mixed().value() + local.psi().value() - n.at(local);
  ConnectionCoeffs out{ConnectionKind::n_connection, full_grid3(dim)};
  for (int C = 0; C < dim; ++C) {
    for (int A = 0; A < dim; ++A) {
      for (int B = 0; B < dim; ++B) {
        double v = lc(C, A, B);
        if (C == m) v -= lc(m, A, B);                 // (∇̃_Xη)(Y) ξ, η(E_B) constant
        if (B == m) v -= lc(C, A, m);                 // −η(Y) ∇̃_X ξ
        if (A == m && C == m) v += lc(m, m, B);       // −η(X)(∇̃_ξη)(Y) ξ
        if (A == m && C < m && B < m) v -= shift(C, B);  // −η(X)(C + ψ − N)Y
        out.coeffs(C, A, B) = v;
      }
    }
  }
  return out;
}

Torsion torsion(const LocalStructure& local, const Endomorphism& n, double tol) {
  const int dim = local.dim();
  const int m = dim - 1;
  const Eigen::MatrixXd N = n.at(local);
  const Eigen::MatrixXd g = local.g().value();
  const Eigen::MatrixXd gN = g * N;  // g(Ne_a, e_b) = gN(b, a)
  const Eigen::MatrixXd w = local.omega().value();

  Torsion t;
  const std::vector<Slot> slots{Slot::full_lower, Slot::full_lower, Slot::full_lower};
  t.table = TensorGrid(dim, slots);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      t.table(a, b, m) = 2.0 * w(a, b);
      t.table(a, m, b) = -gN(b, a);
      t.table(m, a, b) = gN(b, a);
    }
  }

  const ConnectionCoeffs G = n_connection(local, n);
  const Eigen::MatrixXd gfull = local.g_full();
  const auto gamma = local.gamma();
  t.direct = TensorGrid(dim, slots);
  for (int A = 0; A < dim; ++A) {
    for (int B = 0; B < dim; ++B) {
      const Eigen::VectorXd br = to_frame(gamma, bracket(frame_field(gamma, A), frame_field(gamma, B)));
      Eigen::VectorXd s(dim);
      for (int C = 0; C < dim; ++C) s[C] = G(C, A, B) - G(C, B, A) - br[C];
      const Eigen::VectorXd lowered = gfull * s;
      for (int D = 0; D < dim; ++D) t.direct(A, B, D) = lowered[D];
    }
  }

  for (int X = 0; X < dim; ++X) {
    for (int Y = 0; Y < dim; ++Y) {
      for (int Z = 0; Z < dim; ++Z) {
        t.antisymmetry_residual = std::max({t.antisymmetry_residual, std::abs(t.table(X, Y, Z) + t.table(X, Z, Y)),
                                            std::abs(t.table(X, Y, Z) + t.table(Y, X, Z))});
      }
    }
  }
  if (m > 0) {
    t.skew_criterion = (2.0 * w - gN.transpose()).cwiseAbs().maxCoeff();
    t.scale = std::max((2.0 * w).cwiseAbs().maxCoeff(), gN.cwiseAbs().maxCoeff());
  }
  t.crosscheck_residual = max_abs_diff(t.table, t.direct);
  t.is_skew = t.antisymmetry_residual < tol * (1.0 + t.scale);
  return t;
}

Torsion torsion(const AdaptedStructure& s, const Endomorphism& n, const Point& p, double tol) {
  return torsion(LocalStructure(s, p), n, tol);
}

TensorGrid metricity_defect(const LocalStructure& local, const Endomorphism& n) {
  const int dim = local.dim();
  const int m = dim - 1;
  const ConnectionCoeffs G = n_connection(local, n);
  const Eigen::MatrixXd g = local.g_full();
  TensorGrid out(dim, {Slot::full_lower, Slot::full_lower, Slot::full_lower});
  for (int A = 0; A < dim; ++A) {
    for (int B = 0; B < dim; ++B) {
      for (int C = 0; C < dim; ++C) {
        double v = (B < m && C < m) ? local.full_frame_derivative(A, local.g()(B, C)) : 0.0;
        for (int D = 0; D < dim; ++D) v -= G(D, A, B) * g(D, C) + G(D, A, C) * g(B, D);
        out(A, B, C) = v;
      }
    }
  }
  return out;
}

TensorGrid metricity_defect(const AdaptedStructure& s, const Endomorphism& n, const Point& p) {
  return metricity_defect(LocalStructure(s, p), n);
}

AdmissibleField omega_field(const LocalStructure& local) {
  const int m = local.frame_dim();
  AdmissibleField f{{Slot::frame_lower, Slot::frame_lower}, {}};
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) f.components.push_back(local.omega()(a, b));
  }
  return f;
}

AdmissibleField psi_field(const LocalStructure& local) {
  const int m = local.frame_dim();
  AdmissibleField f{{Slot::frame_upper, Slot::frame_lower}, {}};
  for (int b = 0; b < m; ++b) {
    for (int a = 0; a < m; ++a) f.components.push_back(local.psi()(b, a));
  }
  return f;
}

AdmissibleField admissible_from_fields(const LocalStructure& local, std::vector<Slot> slots,
                                       std::span<const ScalarField> components) {
  std::size_t expected = 1;
  for (Slot s : slots) {
    if (s != Slot::frame_lower && s != Slot::frame_upper) throw Error("admissible fields use frame slots only");
    expected *= static_cast<std::size_t>(local.frame_dim());
  }
  if (components.size() != expected) throw Error("admissible field has the wrong number of components");
  AdmissibleField f{std::move(slots), {}};
  for (const auto& c : components) f.components.push_back(c.evaluate_jet(local.point()).to_dual());
  return f;
}

TensorGrid internal_cov_deriv(const LocalStructure& local, const AdmissibleField& t) {
  const int m = local.frame_dim();
  const int r = static_cast<int>(t.slots.size());
  std::size_t expected = 1;
  for (int i = 0; i < r; ++i) expected *= static_cast<std::size_t>(m);
  if (t.components.size() != expected) throw Error("admissible field has the wrong number of components");

  std::vector<std::size_t> stride(static_cast<std::size_t>(r), 1);
  for (int s = r - 2; s >= 0; --s) stride[s] = stride[s + 1] * static_cast<std::size_t>(m);

  std::vector<Slot> slots{Slot::frame_lower};
  slots.insert(slots.end(), t.slots.begin(), t.slots.end());
  TensorGrid out(local.dim(), slots);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto idx = out.unravel(k);
    const int c = idx[0];
    std::size_t flat = 0;
    for (int s = 0; s < r; ++s) flat += stride[s] * static_cast<std::size_t>(idx[s + 1]);
    double v = local.frame_derivative(c, t.components[flat]);
    for (int s = 0; s < r; ++s) {
      const int i = idx[s + 1];
      const std::size_t base = flat - stride[s] * static_cast<std::size_t>(i);
      for (int d = 0; d < m; ++d) {
        const double comp = t.components[base + stride[s] * static_cast<std::size_t>(d)].value();
        if (t.slots[s] == Slot::frame_upper) {
          v += local.internal(i, c, d).value() * comp;
        } else {
          v -= local.internal(d, c, i).value() * comp;
        }
      }
    }
    out.data()[k] = v;
  }
  return out;
}

TensorGrid cov_phi(const LocalStructure& local, PhiConnection which) {
  const int dim = local.dim();
  const int m = dim - 1;
  const ConnectionCoeffs G = which == PhiConnection::levi_civita ? lc_adapted(local) : canonical_connection(local);
  const Eigen::MatrixXd phi = local.phi_full();
  TensorGrid out(dim, {Slot::full_lower, Slot::full_upper, Slot::full_lower});
  for (int A = 0; A < dim; ++A) {
    for (int C = 0; C < dim; ++C) {
      for (int B = 0; B < dim; ++B) {
        double v = (C < m && B < m) ? local.full_frame_derivative(A, local.phi()(C, B)) : 0.0;
        for (int D = 0; D < dim; ++D) v += G(C, A, D) * phi(D, B) - G(D, A, B) * phi(C, D);
        out(A, C, B) = v;
      }
    }
  }
  return out;
}

TensorGrid cov_phi(const AdaptedStructure& s, PhiConnection which, const Point& p) {
  return cov_phi(LocalStructure(s, p), which);
}

}  // namespace acm
