#include "acm/classify.hpp"

#include <algorithm>
#include <cmath>

#include "acm/connection.hpp"
#include "acm/error.hpp"
#include "acm/parallel.hpp"

namespace acm {

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// Coordinate components of φE_A with first derivatives.
VectorFieldJet phi_field(const LocalStructure& local, int A) {
  const int n = local.dim();
  const int m = n - 1;
  VectorFieldJet v(n, Dual::constant(0.0, n));
  if (A == m) return v;
  const auto gamma = local.gamma();
  for (int b = 0; b < m; ++b) {
    v[b] = local.phi()(b, A);
    v[m] -= local.phi()(b, A) * gamma[b].to_dual();
  }
  return v;
}

TensorGrid vector_pair_grid(int n) { return TensorGrid(n, {Slot::full_lower, Slot::full_lower, Slot::full_upper}); }

}  // namespace

NijenhuisTensors nijenhuis_tensors(const LocalStructure& local) {
  const int n = local.dim();
  const int m = n - 1;
  const auto gamma = local.gamma();
  const Eigen::MatrixXd phi = local.phi_full();
  const Eigen::MatrixXd phi2 = phi * phi;
  const Eigen::MatrixXd deta = d_eta_full(local);
  const Eigen::MatrixXd pull = phi.transpose() * deta * phi;

  std::vector<VectorFieldJet> e(n), pe(n);
  for (int A = 0; A < n; ++A) {
    e[A] = frame_field(gamma, A);
    pe[A] = phi_field(local, A);
  }
  auto fb = [&](const VectorFieldJet& u, const VectorFieldJet& v) { return to_frame(gamma, bracket(u, v)); };

  NijenhuisTensors out{vector_pair_grid(n), vector_pair_grid(n), vector_pair_grid(n)};
  for (int X = 0; X < n; ++X) {
    for (int Y = 0; Y < n; ++Y) {
      const Eigen::VectorXd v = fb(pe[X], pe[Y]) + phi2 * fb(e[X], e[Y]) - phi * fb(pe[X], e[Y]) - phi * fb(e[X], pe[Y]);
      for (int C = 0; C < n; ++C) {
        out.n_phi(X, Y, C) = v[C];
        out.n_one(X, Y, C) = v[C];
        out.n_tilde(X, Y, C) = v[C];
      }
      out.n_one(X, Y, m) += 2.0 * deta(X, Y);
      out.n_tilde(X, Y, m) += 2.0 * pull(X, Y);
    }
  }
  return out;
}

NijenhuisTensors nijenhuis_tensors(const AdaptedStructure& s, const Point& p) {
  return nijenhuis_tensors(LocalStructure(s, p));
}

Eigen::MatrixXd d_eta_from_omega(const LocalStructure& local) {
  const int n = local.dim();
  const int m = n - 1;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  out.topLeftCorner(m, m) = local.omega().value();
  for (int a = 0; a < m; ++a) {
    out(m, a) = 0.5 * local.dn_gamma(a).value();
    out(a, m) = -out(m, a);
  }
  return out;
}

double check_projection_identity(const LocalStructure& local) {
  const int n = local.dim();
  const NijenhuisTensors t = nijenhuis_tensors(local);
  double r = 0.0;
  for (int X = 0; X < n; ++X) {
    for (int Y = 0; Y < n; ++Y) {
      for (int C = 0; C < n; ++C) {
        const double projected = C == n - 1 ? 0.0 : t.n_one(X, Y, C);
        r = std::max(r, std::abs(projected - t.n_tilde(X, Y, C)));
      }
    }
  }
  return r;
}

double check_projection_identity(const AdaptedStructure& s, const Point& p) { return check_projection_identity(LocalStructure(s, p)); }

double check_nijenhuis_relation(const LocalStructure& local) {
  const int n = local.dim();
  const NijenhuisTensors t = nijenhuis_tensors(local);
  const Eigen::MatrixXd phi = local.phi_full();
  const Eigen::MatrixXd deta = d_eta_from_omega(local);
  const Eigen::MatrixXd diff = deta - phi.transpose() * deta * phi;
  double r = 0.0;
  for (int X = 0; X < n; ++X) {
    for (int Y = 0; Y < n; ++Y) {
      for (int C = 0; C < n; ++C) {
        double rhs = t.n_tilde(X, Y, C);
        if (C == n - 1) rhs += 2.0 * diff(X, Y);
        r = std::max(r, std::abs(t.n_one(X, Y, C) - rhs));
      }
    }
  }
  return r;
}

double check_nijenhuis_relation(const AdaptedStructure& s, const Point& p) { return check_nijenhuis_relation(LocalStructure(s, p)); }

namespace {

// max over (X, C, Y) of |(∇̃_Xφ)ᶜ_Y − rhs(X, C, Y)|
template <class Rhs>
double cov_phi_residual(const LocalStructure& local, Rhs rhs) {
  const int n = local.dim();
  const TensorGrid lhs = cov_phi(local, PhiConnection::levi_civita);
  double r = 0.0;
  for (int X = 0; X < n; ++X) {
    for (int C = 0; C < n; ++C) {
      for (int Y = 0; Y < n; ++Y) r = std::max(r, std::abs(lhs(X, C, Y) - rhs(X, C, Y)));
    }
  }
  return r;
}

}  // namespace

double check_aqs_cov_phi(const LocalStructure& local) {
  const int m = local.frame_dim();
  const Eigen::MatrixXd phi = local.phi_full();
  const Eigen::MatrixXd psi = local.psi_full();
  const Eigen::MatrixXd P = psi * phi;
  const Eigen::MatrixXd Q = phi * psi;
  const Eigen::MatrixXd gP = local.g_full() * P;
  return cov_phi_residual(local, [&](int X, int C, int Y) {
    double v = 0.0;
    if (C == m) v += gP(X, Y);
    if (Y == m) v -= Q(C, X);
    if (X == m) v -= Q(C, Y) - P(C, Y);
    return v;
  });
}

double check_aqs_cov_phi(const AdaptedStructure& s, const Point& p) { return check_aqs_cov_phi(LocalStructure(s, p)); }

double check_quasi_sasakian_cov_phi(const LocalStructure& local) {
  const int m = local.frame_dim();
  const Eigen::MatrixXd A = local.phi_full() * local.psi_full();
  const Eigen::MatrixXd gA = local.g_full() * A;
  return cov_phi_residual(local, [&](int X, int C, int Y) {
    double v = 0.0;
    if (C == m) v += gA(X, Y);
    if (Y == m) v -= A(C, X);
    return v;
  });
}

double check_quasi_sasakian_cov_phi(const AdaptedStructure& s, const Point& p) { return check_quasi_sasakian_cov_phi(LocalStructure(s, p)); }

double check_canonical_cov_phi(const LocalStructure& local) { return cov_phi(local, PhiConnection::canonical).max_abs(); }

double check_canonical_cov_phi(const AdaptedStructure& s, const Point& p) { return check_canonical_cov_phi(LocalStructure(s, p)); }

std::map<std::string, Residual> criterion_residuals(const LocalStructure& local, const FormFields& fundamental) {
  const int n = local.dim();
  const int m = n - 1;
  const Eigen::MatrixXd phi = local.phi_full();
  const Eigen::MatrixXd psi = local.psi_full();
  const Eigen::MatrixXd deta = d_eta_full(local);
  const Eigen::MatrixXd pull = phi.transpose() * deta * phi;
  Eigen::MatrixXd Omega = Eigen::MatrixXd::Zero(n, n);
  Omega.topLeftCorner(m, m) = local.fundamental().value();

  const NijenhuisTensors t = nijenhuis_tensors(local);
  const double n_phi = t.n_phi.max_abs();

  std::map<std::string, Residual> r;
  r["contact_metric"] = {max_abs(Omega - deta), std::max(max_abs(Omega), max_abs(deta))};
  r["normal"] = {t.n_one.max_abs(), std::max(n_phi, 2.0 * max_abs(deta))};
  r["almost_normal"] = {t.n_tilde.max_abs(), std::max(n_phi, 2.0 * max_abs(pull))};
  r["d_Omega_zero"] = {exterior_derivative(fundamental, local.point()).max_abs(), max_abs(Omega)};

  double dn = 0.0, dgamma = 0.0;
  for (int a = 0; a < m; ++a) {
    dn = std::max(dn, std::abs(local.dn_gamma(a).value()));
    dgamma = std::max(dgamma, local.gamma()[a].grad().cwiseAbs().maxCoeff());
  }
  r["d_eta_xi_zero"] = {dn, dgamma};

  const Eigen::MatrixXd fp = phi * psi;
  const Eigen::MatrixXd pf = psi * phi;
  const Eigen::MatrixXd M = local.g_full() * fp;
  r["d_eta_phi_invariant"] = {max_abs(deta - pull), std::max(max_abs(deta), max_abs(pull))};
  r["phi_psi_commute"] = {max_abs(fp - pf), std::max(max_abs(fp), max_abs(pf))};
  r["phi_psi_symmetric"] = {max_abs(M - M.transpose()), max_abs(M)};
  return r;
}

ClassificationReport classify(const AdaptedStructure& s, std::span<const Point> points, double tol, int threads) {
  if (points.empty()) throw Error("classify needs at least one sample");
  const FormFields fundamental = fundamental_form(s);
  const auto per_sample = parallel_map(static_cast<int>(points.size()), threads, [&](int i) {
    return criterion_residuals(LocalStructure(s, points[i]), fundamental);
  });

  const int count = static_cast<int>(points.size());
  auto aggregate = [&](const std::string& name) {
    Verdict v{true, 0.0, count};
    for (const auto& sample : per_sample) {
      const Residual& r = sample.at(name);
      v.max_residual = std::max(v.max_residual, r.value);
      if (!r.passes(tol)) v.holds = false;
    }
    return v;
  };
  auto both = [&](const Verdict& a, const Verdict& b) {
    return Verdict{a.holds && b.holds, std::max(a.max_residual, b.max_residual), count};
  };

  ClassificationReport rep;
  for (const char* name : {"contact_metric", "normal", "almost_normal", "d_Omega_zero", "d_eta_xi_zero"}) {
    rep.verdicts[name] = aggregate(name);
  }
  for (const char* name : {"d_eta_phi_invariant", "phi_psi_commute", "phi_psi_symmetric"}) {
    rep.quasi_sasakian_conditions[name] = aggregate(name);
  }
  rep.verdicts["almost_contact_kahler"] = both(rep.verdicts["almost_normal"], rep.verdicts["d_Omega_zero"]);
  rep.verdicts["aqs"] = both(rep.verdicts["almost_contact_kahler"], rep.verdicts["d_eta_xi_zero"]);

  const auto& c = rep.quasi_sasakian_conditions;
  const Verdict& c1 = c.at("d_eta_phi_invariant");
  const Verdict& c2 = c.at("phi_psi_commute");
  const Verdict& c3 = c.at("phi_psi_symmetric");
  const Verdict& aqs = rep.verdicts["aqs"];
  if (aqs.holds && !(c1.holds == c2.holds && c2.holds == c3.holds)) {
    throw InconsistencyError("quasi-Sasakian conditions disagree on an AQS structure");
  }
  rep.verdicts["quasi_sasakian"] = both(aqs, both(c1, both(c2, c3)));
  return rep;
}

ClassificationReport classify(const AdaptedStructure& s, const SampleOptions& opts) {
  if (opts.samples < 1) throw Error("classify needs at least one sample");
  const auto points = s.chart().sample(opts.samples, opts.seed);
  return classify(s, points, opts.tolerance, opts.threads);
}

}  // namespace acm
