#include "acm/chart.hpp"

#include <cmath>
#include <random>

#include "acm/error.hpp"

namespace acm {

AdaptedChart::AdaptedChart(Coordinates coords, std::vector<ScalarField> gamma, std::vector<Interval> domain,
                           std::vector<ScalarField> avoid)
    : coords_(std::move(coords)), gamma_(std::move(gamma)), domain_(std::move(domain)), avoid_(std::move(avoid)) {
  const int n = coords_.size();
  if (n < 3 || n % 2 == 0) throw Error("adapted chart dimension must be odd and at least 3");
  if (static_cast<int>(gamma_.size()) != n - 1) throw Error("adapted chart needs n-1 gamma entries");
  if (static_cast<int>(domain_.size()) != n) throw Error("adapted chart domain needs n intervals");
  for (const auto& iv : domain_) {
    if (!(iv.lo <= iv.hi)) throw Error("domain interval with lo > hi");
  }
  for (const auto& f : gamma_) {
    if (!(f.coordinates() == coords_)) throw Error("gamma field over foreign coordinates");
  }
  for (const auto& f : avoid_) {
    if (!(f.coordinates() == coords_)) throw Error("avoid field over foreign coordinates");
  }
}

AdaptedChart AdaptedChart::flat(const Coordinates& coords) {
  const int n = coords.size();
  std::vector<ScalarField> gamma(n > 0 ? n - 1 : 0, ScalarField::constant(0.0, coords));
  return {coords, std::move(gamma), std::vector<Interval>(n, Interval{-1.0, 1.0})};
}

std::vector<Jet> AdaptedChart::gamma_jets(const Point& p) const {
  std::vector<Jet> out;
  out.reserve(gamma_.size());
  for (const auto& f : gamma_) out.push_back(f.evaluate_jet(p));
  return out;
}

bool AdaptedChart::in_domain(const Point& p) const {
  if (p.dim() != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    if (p[i] < domain_[i].lo || p[i] > domain_[i].hi) return false;
  }
  return true;
}

void AdaptedChart::validate_point(const Point& p) const {
  if (p.dim() != dim()) {
    throw DomainError("point has " + std::to_string(p.dim()) + " coordinates, chart has " + std::to_string(dim()));
  }
  if (!in_domain(p)) throw DomainError("point outside the chart domain");
  for (const auto& f : avoid_) {
    if (std::abs(f.evaluate(p)) < kAvoidThreshold) {
      throw DomainError("point makes avoided expression " + f.to_string() + " vanish");
    }
  }
}

Point AdaptedChart::sample_point(std::uint64_t seed, int index) const {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  for (int attempt = 0; attempt <= kMaxRedraws; ++attempt) {
    std::vector<double> x(dim());
    for (int i = 0; i < dim(); ++i) {
      std::uniform_real_distribution<double> u(domain_[i].lo, domain_[i].hi);
      x[i] = u(rng);
    }
    Point p(std::move(x));
    bool ok = true;
    for (const auto& f : avoid_) {
      double v = 0.0;
      try {
        v = f.evaluate(p);
      } catch (const DomainError&) {
        ok = false;
        break;
      }
      if (std::abs(v) < kAvoidThreshold) {
        ok = false;
        break;
      }
    }
    if (ok) return p;
  }
  throw DomainError("no admissible sample point after " + std::to_string(kMaxRedraws) + " redraws");
}

std::vector<Point> AdaptedChart::sample(int count, std::uint64_t seed) const {
  std::vector<Point> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) pts.push_back(sample_point(seed, i));
  return pts;
}

Dual frame_derivative(std::span<const Jet> gamma, int a, const Jet& f) {
  const int xi = f.dim() - 1;
  return f.d(a) - gamma[a].to_dual() * f.d(xi);
}

double frame_derivative(std::span<const Jet> gamma, int a, const Dual& f) {
  const int xi = f.dim() - 1;
  return f.d(a) - gamma[a].value() * f.d(xi);
}

double frame_apply(const AdaptedChart& chart, int a, const ScalarField& f, const Point& p) {
  if (a < 0 || a >= chart.frame_dim()) throw Error("frame index out of range");
  const auto gamma = chart.gamma_jets(p);
  const Jet fj = f.evaluate_jet(p);
  return fj.grad()[a] - gamma[a].value() * fj.grad()[chart.xi()];
}

std::vector<Dual> omega_duals(std::span<const Jet> gamma) {
  const int m = static_cast<int>(gamma.size());
  std::vector<Dual> omega(static_cast<std::size_t>(m * m));
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      omega[a * m + b] = 0.5 * (frame_derivative(gamma, a, gamma[b]) - frame_derivative(gamma, b, gamma[a]));
    }
  }
  return omega;
}

TensorGrid omega_frame(const AdaptedChart& chart, const Point& p) {
  const auto gamma = chart.gamma_jets(p);
  const auto omega = omega_duals(gamma);
  const int m = chart.frame_dim();
  TensorGrid out(chart.dim(), {Slot::frame_lower, Slot::frame_lower});
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) out(a, b) = omega[a * m + b].value();
  }
  return out;
}

std::vector<double> d_eta_xi(const AdaptedChart& chart, const Point& p) {
  const auto gamma = chart.gamma_jets(p);
  std::vector<double> out;
  out.reserve(gamma.size());
  for (const auto& g : gamma) out.push_back(g.grad()[chart.xi()]);
  return out;
}

int rank_from(const Eigen::MatrixXd& omega, std::span<const double> dn_gamma) {
  int rank = 0;
  if (omega.size() > 0) {
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(omega);
    const auto& s = svd.singularValues();
    const double cutoff = 1e-9 * s[0];
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s[i] > cutoff && s[i] > 0.0) ++rank;
    }
  }
  bool odd = true;
  for (double v : dn_gamma) {
    if (std::abs(v) > 1e-9) odd = false;
  }
  return odd ? rank + 1 : rank;
}

int rank_at(const AdaptedChart& chart, const Point& p) {
  const TensorGrid omega = omega_frame(chart, p);
  const int m = chart.frame_dim();
  Eigen::MatrixXd w(m, m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) w(a, b) = omega(a, b);
  }
  return rank_from(w, d_eta_xi(chart, p));
}

VectorFieldJet frame_field(std::span<const Jet> gamma, int A) {
  const int m = static_cast<int>(gamma.size());
  const int n = m + 1;
  VectorFieldJet v(n, Dual::constant(0.0, n));
  if (A == m) {
    v[m] = Dual::constant(1.0, n);
  } else {
    v[A] = Dual::constant(1.0, n);
    v[m] = -gamma[A].to_dual();
  }
  return v;
}

Eigen::VectorXd bracket(const VectorFieldJet& u, const VectorFieldJet& v) {
  const int n = static_cast<int>(u.size());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += u[i].value() * v[k].d(i) - v[i].value() * u[k].d(i);
    out[k] = s;
  }
  return out;
}

Eigen::VectorXd to_frame(std::span<const Jet> gamma, const Eigen::VectorXd& coord_vector) {
  const int m = static_cast<int>(gamma.size());
  Eigen::VectorXd out = coord_vector;
  double xi = coord_vector[m];
  for (int a = 0; a < m; ++a) xi += gamma[a].value() * coord_vector[a];
  out[m] = xi;
  return out;
}

Eigen::VectorXd frame_bracket(const AdaptedChart& chart, int A, int B, const Point& p) {
  const auto gamma = chart.gamma_jets(p);
  return bracket(frame_field(gamma, A), frame_field(gamma, B));
}

namespace {

void require_base_only(const ScalarField& f, int xi) {
  for (int v : f.free_variables()) {
    if (v == xi) throw Error("transition field depends on the xi coordinate: " + f.to_string());
  }
}

// new[.., i, ..] = Σ_j M(i, j) old[.., j, ..] along every frame slot.
TensorGrid transform_slots(const TensorGrid& t, const Eigen::MatrixXd& lower, const Eigen::MatrixXd& upper) {
  TensorGrid cur = t;
  for (int s = 0; s < t.rank(); ++s) {
    const Slot slot = t.slots()[s];
    if (slot != Slot::frame_lower && slot != Slot::frame_upper) {
      throw Error("change_chart accepts admissible tensors in frame slots only");
    }
    const Eigen::MatrixXd& M = slot == Slot::frame_lower ? lower : upper;
    TensorGrid next(t.dim(), t.slots());
    for (std::size_t k = 0; k < next.size(); ++k) {
      auto idx = next.unravel(k);
      const int i = idx[s];
      double acc = 0.0;
      for (int j = 0; j < t.extent(s); ++j) {
        idx[s] = j;
        acc += M(i, j) * cur.at(idx);
      }
      next.data()[k] = acc;
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace

Point transition_image(const ChartTransition& tr, const Point& primed) {
  const int n = primed.dim();
  if (static_cast<int>(tr.base.size()) != n - 1) throw Error("transition needs n-1 base fields");
  std::vector<double> x(n);
  for (int a = 0; a < n - 1; ++a) x[a] = tr.base[a].evaluate(primed);
  x[n - 1] = primed[n - 1] + tr.shift.evaluate(primed);
  return Point(std::move(x));
}

Eigen::MatrixXd transition_jacobian(const ChartTransition& tr, const Point& primed) {
  const int n = primed.dim();
  const int m = n - 1;
  if (static_cast<int>(tr.base.size()) != m) throw Error("transition needs n-1 base fields");
  for (const auto& f : tr.base) require_base_only(f, m);
  require_base_only(tr.shift, m);
  Eigen::MatrixXd A(m, m);
  for (int a = 0; a < m; ++a) {
    const Jet j = tr.base[a].evaluate_jet(primed);
    for (int b = 0; b < m; ++b) A(a, b) = j.grad()[b];
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& s = svd.singularValues();
  if (s[m - 1] == 0.0 || s[0] / s[m - 1] >= 1e8) throw SingularJacobianError("transition Jacobian is singular");
  return A;
}

TensorGrid change_chart(const AdaptedChart& chart, const ChartTransition& tr, const TensorGrid& t,
                        const Point& primed) {
  if (t.dim() != chart.dim() || primed.dim() != chart.dim()) throw Error("dimension mismatch in change_chart");
  const Eigen::MatrixXd A = transition_jacobian(tr, primed);
  // t_{b'} = A^b_{b'} t_b,  t^{a'} = (A^{-1})^{a'}_a t^a
  return transform_slots(t, A.transpose(), A.inverse());
}

TensorGrid restore_chart(const AdaptedChart& chart, const ChartTransition& tr, const TensorGrid& t_primed,
                         const Point& primed) {
  if (t_primed.dim() != chart.dim() || primed.dim() != chart.dim()) {
    throw Error("dimension mismatch in restore_chart");
  }
  const Eigen::MatrixXd A = transition_jacobian(tr, primed);
  return transform_slots(t_primed, A.transpose().inverse(), A);
}

}  // namespace acm
