#include <cmath>

#include <gtest/gtest.h>

#include "acm/classify.hpp"
#include "acm/connection.hpp"
#include "support.hpp"

namespace {

using acm::LocalStructure;
using acm::Point;
using acm::test::fixture;
using acm::test::fixture_names;

TEST(Nijenhuis, Example1) {
  const auto m = fixture("example1");
  for (const auto& p : m.structure.chart().sample(8, 42)) {
    const auto t = acm::nijenhuis_tensors(m.structure, p);
    EXPECT_NEAR(t.n_one(0, 1, 4), -1.0, 1e-9);
    for (int c = 0; c < 5; ++c) EXPECT_NEAR(t.n_tilde(0, 1, c), 0.0, 1e-9);
    EXPECT_LT(t.n_tilde.max_abs(), 1e-9);
  }
}

// Oracle: N_φ(X,Y) = (∇_{φX}φ)Y − (∇_{φY}φ)X − φ(∇_Xφ)Y + φ(∇_Yφ)X with Levi-Civita.
TEST(Nijenhuis, MatchesLeviCivitaFormula) {
  auto check = [](const acm::AdaptedStructure& s, const Point& p) {
    const LocalStructure local(s, p);
    const auto t = acm::nijenhuis_tensors(local);
    const auto nabla = acm::cov_phi(local, acm::PhiConnection::levi_civita);
    const Eigen::MatrixXd phi = local.phi_full();
    double worst = 0.0;
    for (int X = 0; X < 5; ++X) {
      for (int Y = 0; Y < 5; ++Y) {
        for (int C = 0; C < 5; ++C) {
          double v = 0.0;
          for (int A = 0; A < 5; ++A) v += phi(A, X) * nabla(A, C, Y) - phi(A, Y) * nabla(A, C, X);
          for (int D = 0; D < 5; ++D) v += -phi(C, D) * nabla(X, D, Y) + phi(C, D) * nabla(Y, D, X);
          worst = std::max(worst, std::abs(v - t.n_phi(X, Y, C)));
        }
      }
    }
    return worst;
  };
  for (const auto& name : fixture_names()) {
    const auto m = fixture(name);
    for (const auto& p : m.structure.chart().sample(4, 42)) EXPECT_LT(check(m.structure, p), 1e-9) << name;
  }
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto s = acm::test::perturbed_flat(seed);
    EXPECT_LT(check(s, s.chart().sample_point(seed, 0)), 1e-9) << seed;
  }
}

TEST(Nijenhuis, DEtaPathsAgree) {
  const auto m = fixture("example2");
  for (const auto& p : m.structure.chart().sample(8, 42)) {
    const LocalStructure local(m.structure, p);
    EXPECT_LT((acm::d_eta_full(local) - acm::d_eta_from_omega(local)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Identities, HoldOnFixtures) {
  for (const auto& name : fixture_names()) {
    const auto m = fixture(name);
    for (const auto& p : m.structure.chart().sample(32, 42)) {
      const LocalStructure local(m.structure, p);
      EXPECT_LT(acm::check_projection_identity(local), 1e-9) << name;
      EXPECT_LT(acm::check_nijenhuis_relation(local), 1e-9) << name;
    }
  }
}

// Property: the identities hold for arbitrary (g, φ, Γ), not only structures.
TEST(Identities, HoldOnPerturbations) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto s = acm::test::perturbed_flat(seed);
    for (const auto& p : s.chart().sample(8, seed)) {
      const LocalStructure local(s, p);
      EXPECT_LT(acm::check_projection_identity(local), 1e-9) << seed;
      EXPECT_LT(acm::check_nijenhuis_relation(local), 1e-9) << seed;
    }
  }
}

TEST(AqsCovPhi, Example1Holds) {
  const auto m = fixture("example1");
  for (const auto& p : m.structure.chart().sample(32, 42)) {
    EXPECT_LT(acm::check_aqs_cov_phi(m.structure, p), 1e-8);
  }
}

TEST(AqsCovPhi, Example2Fails) {
  const auto m = fixture("example2");
  EXPECT_GT(acm::check_aqs_cov_phi(m.structure, Point{0.5, 3, 0.1, -0.2, 1.5}), 0.1);
}

TEST(AqsCovPhi, SmallExactlyOnAqsFixtures) {
  for (const auto& name : fixture_names()) {
    const auto m = fixture(name);
    const auto pts = m.structure.chart().sample(32, 42);
    double worst = 0.0;
    for (const auto& p : pts) worst = std::max(worst, acm::check_aqs_cov_phi(m.structure, p));
    const bool aqs = acm::classify(m.structure, pts, 1e-7).at("aqs").holds;
    EXPECT_EQ(worst < 1e-7, aqs) << name << " residual " << worst;
  }
}

TEST(QuasiSasakianCovPhi, HoldsOnQuasiSasakianFixtures) {
  for (const auto& name : {"flat", "example3-qs"}) {
    const auto m = fixture(name);
    for (const auto& p : m.structure.chart().sample(16, 42)) {
      EXPECT_LT(acm::check_quasi_sasakian_cov_phi(m.structure, p), 1e-8) << name;
      EXPECT_LT(acm::check_canonical_cov_phi(m.structure, p), 1e-8) << name;
    }
  }
  const auto m = fixture("example1");
  EXPECT_GT(acm::check_quasi_sasakian_cov_phi(m.structure, Point{0.5, 1, 0, 0, 0}), 0.1);
}

struct Expected {
  std::string name;
  std::map<std::string, bool> verdicts;
};

TEST(Classify, FixtureVerdicts) {
  const std::vector<Expected> table{
      {"flat",
       {{"contact_metric", false}, {"normal", true}, {"almost_normal", true}, {"almost_contact_kahler", true},
        {"aqs", true}, {"quasi_sasakian", true}, {"d_eta_xi_zero", true}, {"d_Omega_zero", true}}},
      {"example1",
       {{"contact_metric", false}, {"normal", false}, {"almost_normal", true}, {"almost_contact_kahler", true},
        {"aqs", true}, {"quasi_sasakian", false}, {"d_eta_xi_zero", true}, {"d_Omega_zero", true}}},
      {"example2", {{"aqs", false}, {"d_eta_xi_zero", false}, {"quasi_sasakian", false}}},
      {"example3-qs",
       {{"normal", true}, {"almost_normal", true}, {"aqs", true}, {"quasi_sasakian", true}, {"d_Omega_zero", true}}},
      {"example3-aqs", {{"almost_normal", false}, {"d_Omega_zero", false}, {"aqs", false}}},
  };
  for (const auto& e : table) {
    const auto m = fixture(e.name);
    const auto r = acm::classify(m.structure);
    EXPECT_EQ(r.verdicts.size(), 8u);
    for (const auto& [crit, holds] : e.verdicts) {
      EXPECT_EQ(r.at(crit).holds, holds) << e.name << " " << crit << " " << r.at(crit).max_residual;
      EXPECT_EQ(r.at(crit).samples, 32);
    }
  }
}

TEST(Classify, QuasiSasakianConditionsAgree) {
  for (const auto& name : fixture_names()) {
    const auto m = fixture(name);
    const auto r = acm::classify(m.structure);
    if (!r.at("aqs").holds) continue;
    const auto& q = r.quasi_sasakian_conditions;
    ASSERT_EQ(q.size(), 3u);
    const bool first = q.begin()->second.holds;
    for (const auto& [k, v] : q) EXPECT_EQ(v.holds, first) << name << " " << k;
    EXPECT_EQ(r.at("quasi_sasakian").holds, first) << name;
  }
}

TEST(Classify, Example1QuasiSasakianConditionsAllFail) {
  const auto r = acm::classify(fixture("example1").structure);
  for (const auto& [k, v] : r.quasi_sasakian_conditions) {
    EXPECT_FALSE(v.holds) << k;
    EXPECT_GT(v.max_residual, 0.1) << k;
  }
}

// More samples can only turn a verdict from holds to fails.
TEST(Classify, MonotoneInSampleCount) {
  for (const auto& name : fixture_names()) {
    const auto m = fixture(name);
    const auto few = acm::classify(m.structure, {32, 42, 1e-7, 0});
    const auto many = acm::classify(m.structure, {128, 42, 1e-7, 0});
    for (const auto& [k, v] : few.verdicts) {
      if (many.at(k).holds) EXPECT_TRUE(v.holds) << name << " " << k;
      EXPECT_GE(many.at(k).max_residual, v.max_residual) << name << " " << k;
    }
  }
}

TEST(Classify, IndependentOfThreadCount) {
  for (const auto& name : fixture_names()) {
    const auto m = fixture(name);
    const auto a = acm::classify(m.structure, {32, 42, 1e-7, 1});
    const auto b = acm::classify(m.structure, {32, 42, 1e-7, 5});
    for (const auto& [k, v] : a.verdicts) {
      EXPECT_EQ(v.holds, b.at(k).holds);
      EXPECT_EQ(v.max_residual, b.at(k).max_residual);
    }
  }
}

TEST(Classify, ResidualRule) {
  const acm::Residual r{1e-7, 1.0};
  EXPECT_TRUE(r.passes(1e-7));
  EXPECT_FALSE((acm::Residual{2e-7, 0.0}).passes(1e-7));
  EXPECT_TRUE((acm::Residual{2e-7, 10.0}).passes(1e-7));
}

TEST(Classify, CriterionNames) {
  const auto m = fixture("example1");
  const LocalStructure local(m.structure, m.structure.chart().sample_point(42, 0));
  const auto res = acm::criterion_residuals(local, acm::fundamental_form(m.structure));
  for (const char* k : {"contact_metric", "normal", "almost_normal", "d_Omega_zero", "d_eta_xi_zero",
                        "d_eta_phi_invariant", "phi_psi_commute", "phi_psi_symmetric"}) {
    EXPECT_TRUE(res.count(k)) << k;
  }
  EXPECT_DOUBLE_EQ(res.at("normal").value, 1.0);
}

TEST(Classify, SasakianHeisenberg) {
  // η = dv + ½(x dy − y dx) + ½(z du − u dz), ω_01 = ω_23 = ½; with g = ½·I and
  // φe_0 = −e_1, φe_2 = −e_3 we get Ω = dη, and the structure is Sasakian.
  const auto s = acm::test::make_structure(
      {"-y/2", "x/2", "-u/2", "z/2"},
      {{"0.5", "0", "0", "0"}, {"0", "0.5", "0", "0"}, {"0", "0", "0.5", "0"}, {"0", "0", "0", "0.5"}},
      {{"0", "1", "0", "0"}, {"-1", "0", "0", "0"}, {"0", "0", "0", "1"}, {"0", "0", "-1", "0"}});
  const auto r = acm::classify(s, {16, 1, 1e-7, 0});
  for (const char* k : {"contact_metric", "normal", "almost_normal", "aqs", "quasi_sasakian"}) {
    EXPECT_TRUE(r.at(k).holds) << k << " " << r.at(k).max_residual;
  }
  EXPECT_EQ(acm::rank_at(s.chart(), Point{0.1, 0.2, 0.3, 0.4, 0.5}), 5);
}

}  // namespace
