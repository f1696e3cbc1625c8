#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "qalv/alv_dynamics.hpp"
#include "qalv/meanfield_phase.hpp"

using namespace qalv;
using namespace qalv::alv;

namespace {

Mat3 random_antisymmetric(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(-0.99, 0.99);
  Mat3 a = Mat3::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      a(i, j) = u(gen);
      a(j, i) = -a(i, j);
    }
  return a;
}

Vec3 random_simplex(std::mt19937_64& gen) {
  std::exponential_distribution<double> e(1.0);
  Vec3 v(e(gen), e(gen), e(gen));
  return v / v.sum();
}

}  // namespace

TEST(FermiRate, Values) {
  const Temperature t(0.1);
  EXPECT_DOUBLE_EQ(fermi_rate(1.3, 1.3, t), 0.5);
  EXPECT_NEAR(fermi_rate(0.0, 0.2, t), 1.0 / (1.0 + std::exp(-2.0)), 1e-15);
  EXPECT_NEAR(fermi_rate(0.0, 0.2, t), 0.880797, 1e-6);
  EXPECT_EQ(fermi_rate(0.0, 1e6, t), 1.0);
  EXPECT_EQ(fermi_rate(1e6, 0.0, t), 0.0);
  EXPECT_EQ(fermi_rate(0.0, 70.1, t), 1.0);
}

TEST(FermiRate, TemperatureMustBePositive) {
  EXPECT_THROW(Temperature(0.0), std::invalid_argument);
  EXPECT_THROW(Temperature(-1.0), std::invalid_argument);
}

TEST(NetRateMatrix, TanhIdentityAndAntisymmetry) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> pay(-5.0, 5.0);
  std::uniform_real_distribution<double> lt(-3.0, 1.0);
  for (int k = 0; k < 2000; ++k) {
    const Vec3 p(pay(gen), pay(gen), pay(gen));
    const Temperature temp(std::pow(10.0, lt(gen)));
    const Mat3 a = net_rate_matrix(p, temp);
    EXPECT_EQ(a + a.transpose(), Mat3::Zero());
    for (int x = 0; x < 3; ++x)
      for (int y = 0; y < 3; ++y) {
        ASSERT_NEAR(a(x, y), std::tanh((p[y] - p[x]) / (2.0 * temp.value())), 1e-12);
        ASSERT_LT(std::abs(a(x, y)), 1.0 + 1e-15);
      }
  }
}

TEST(NetRateMatrix, Examples) {
  const Temperature t(0.25);
  EXPECT_EQ(net_rate_matrix(Vec3::Constant(0.7), t), Mat3::Zero());
  const Mat3 a = net_rate_matrix(Vec3(0.0, 0.5, 0.0), t);
  EXPECT_NEAR(a(0, 1), std::tanh(1.0), 1e-12);
  EXPECT_NEAR(a(0, 1), 0.761594, 1e-6);
  EXPECT_EQ(a(1, 0), -a(0, 1));
}

TEST(AlvRhs, VerticesAreFixedPoints) {
  std::mt19937_64 gen(3);
  for (int k = 0; k < 100; ++k) {
    const Mat3 g = random_antisymmetric(gen);
    for (Strategy s : kStrategies) EXPECT_EQ(alv_rhs(vertex(s), g), Vec3::Zero());
  }
}

TEST(AlvRhs, Examples) {
  EXPECT_EQ(alv_rhs(Vec3(0.2, 0.3, 0.5), Mat3::Zero()), Vec3::Zero());
  const double g = 0.37;
  Mat3 c = Mat3::Zero();
  c(0, 1) = g;
  c(1, 0) = -g;
  const Vec3 d = alv_rhs(Vec3(0.5, 0.5, 0.0), c);
  EXPECT_DOUBLE_EQ(d[0], g / 4);
  EXPECT_DOUBLE_EQ(d[1], -g / 4);
  EXPECT_EQ(d[2], 0.0);
}

TEST(AlvRhs, ComponentsSumToZero) {
  std::mt19937_64 gen(5);
  for (int k = 0; k < 1000; ++k) EXPECT_LT(std::abs(alv_rhs(random_simplex(gen), random_antisymmetric(gen)).sum()), 1e-14);
}

TEST(Integrate, RejectsBadStepping) {
  auto flat = [](const Vec3&) { return Vec3::Zero().eval(); };
  const Vec3 r0 = Vec3::Constant(1.0 / 3.0);
  EXPECT_THROW(integrate(r0, flat, Temperature(0.1), 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(integrate(r0, flat, Temperature(0.1), 1.0, -0.1), std::invalid_argument);
  EXPECT_THROW(integrate(r0, flat, Temperature(0.1), -1.0, 0.1), std::invalid_argument);
  EXPECT_THROW(integrate(Vec3(0.5, 0.6, 0.0), flat, Temperature(0.1), 1.0, 0.1), std::invalid_argument);
}

TEST(Integrate, VertexStaysPut) {
  const Mat3 m = meanfield::effective_payoff_matrix(PayoffTable::game_family(1.0), Entanglement(0.8));
  IntegrateOptions opts;
  opts.stop_on_convergence = false;
  const auto traj = integrate(vertex(Strategy::C), [&](const Vec3& r) { return Vec3(m * r); }, Temperature(0.1), 5.0,
                              0.01, opts);
  EXPECT_EQ(traj.points.size(), 501u);
  for (const auto& p : traj.points) EXPECT_EQ(p.rho, vertex(Strategy::C));
}

TEST(Integrate, EqualPayoffsAreStationary) {
  const Vec3 r0(0.2, 0.3, 0.5);
  const auto traj = integrate(r0, [](const Vec3&) { return Vec3::Constant(2.0).eval(); }, Temperature(0.1), 10.0, 0.1);
  EXPECT_TRUE(traj.converged);
  for (const auto& p : traj.points) EXPECT_LT((p.rho - r0).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Integrate, TwoSpeciesReductionIsLogistic) {
  // Constant payoffs (a, 0, 0) give the C-over-D coupling g = tanh(a / (2 temp)).
  const double a = 0.05;
  const Temperature temp(0.1);
  const double g = std::tanh(a / (2.0 * temp.value()));
  const double x0 = 0.1;
  IntegrateOptions opts;
  opts.stop_on_convergence = false;
  const auto traj = integrate(Vec3(x0, 1.0 - x0, 0.0), [&](const Vec3&) { return Vec3(a, 0.0, 0.0); }, temp, 30.0, 1e-3,
                              opts);
  double worst = 0.0;
  for (const auto& p : traj.points) {
    const double e = std::exp(g * p.t);
    const double x = x0 * e / (1.0 - x0 + x0 * e);
    worst = std::max({worst, std::abs(p.rho[0] - x), std::abs(p.rho[1] - (1.0 - x))});
  }
  EXPECT_LT(worst, 1e-6);
  EXPECT_GT(traj.final_state()[0], 0.9);
}

TEST(Integrate, OversizedStepIsReported) {
  Mat3 c = Mat3::Zero();
  c(0, 1) = 400.0;
  c(1, 0) = -400.0;
  EXPECT_THROW(integrate_couplings(Vec3(0.5, 0.5, 0.0), [&](const Vec3&) { return c; }, 1.0, 0.1), contract_violation);
}

TEST(Integrate, StepHalvingAgreement) {
  const PayoffTable t = PayoffTable::game_family(1.0);
  for (double gamma : {0.5, 0.9}) {
    const Mat3 m = meanfield::effective_payoff_matrix(t, Entanglement(gamma));
    auto payoffs = [&](const Vec3& r) { return Vec3(m * r); };
    IntegrateOptions opts;
    opts.stop_on_convergence = false;
    const auto coarse = integrate(Vec3::Constant(1.0 / 3.0), payoffs, Temperature(0.1), 200.0, 1e-2, opts);
    const auto fine = integrate(Vec3::Constant(1.0 / 3.0), payoffs, Temperature(0.1), 200.0, 5e-3, opts);
    EXPECT_LT((coarse.final_state() - fine.final_state()).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(Integrate, RecordStrideKeepsEndpoint) {
  IntegrateOptions opts;
  opts.stop_on_convergence = false;
  opts.record_stride = 7;
  const auto traj = integrate(Vec3::Constant(1.0 / 3.0), [](const Vec3& r) { return Vec3(r[1], r[2], r[0]); },
                              Temperature(0.5), 1.0, 0.01, opts);
  EXPECT_EQ(traj.points.front().t, 0.0);
  EXPECT_EQ(traj.points.back().t, 1.0);
  EXPECT_EQ(traj.points.size(), 1u + 14u + 1u);
}

TEST(Integrate, ConvergenceFlag) {
  const Mat3 m = meanfield::effective_payoff_matrix(PayoffTable::game_family(1.0), Entanglement(0.9));
  auto payoffs = [&](const Vec3& r) { return Vec3(m * r); };
  const auto longrun = integrate(Vec3::Constant(1.0 / 3.0), payoffs, Temperature(0.1), 1e3, 1e-2);
  EXPECT_TRUE(longrun.converged);
  EXPECT_LT(longrun.points.back().t, 1e3);
  EXPECT_GT(longrun.final_state()[2], 0.99);
  const auto shortrun = integrate(Vec3::Constant(1.0 / 3.0), payoffs, Temperature(0.1), 1.0, 1e-2);
  EXPECT_FALSE(shortrun.converged);
  EXPECT_EQ(shortrun.points.back().t, 1.0);
}

TEST(VertexEigenvalues, FormulaAndZeroMatrix) {
  EXPECT_EQ(vertex_jacobian_eigenvalues(Mat3::Zero(), Strategy::D), (std::array<double, 3>{0, 0, 0}));
  Mat3 g;
  g << 0, 1, 2,
      -1, 0, 3,
      -2, -3, 0;
  EXPECT_EQ(vertex_jacobian_eigenvalues(g, Strategy::C), (std::array<double, 3>{0, -1, -2}));
  EXPECT_EQ(vertex_jacobian_eigenvalues(g, Strategy::D), (std::array<double, 3>{0, 1, -3}));
  EXPECT_EQ(vertex_jacobian_eigenvalues(g, Strategy::Q), (std::array<double, 3>{0, 2, 3}));
}

TEST(VertexEigenvalues, MatchFiniteDifferenceJacobian) {
  std::mt19937_64 gen(17);
  const double h = 1e-6;
  for (int trial = 0; trial < 50; ++trial) {
    const Mat3 g = random_antisymmetric(gen);
    for (Strategy s : kStrategies) {
      const Vec3 v = vertex(s);
      Mat3 jac;
      for (int k = 0; k < 3; ++k) {
        Vec3 dp = v, dm = v;
        dp[k] += h;
        dm[k] -= h;
        jac.col(k) = (alv_rhs(dp, g) - alv_rhs(dm, g)) / (2.0 * h);
      }
      const Eigen::EigenSolver<Mat3> es(jac);
      std::vector<double> numeric;
      for (int k = 0; k < 3; ++k) {
        ASSERT_LT(std::abs(es.eigenvalues()[k].imag()), 1e-4);
        numeric.push_back(es.eigenvalues()[k].real());
      }
      auto formula = vertex_jacobian_eigenvalues(g, s);
      std::vector<double> expected(formula.begin(), formula.end());
      std::sort(numeric.begin(), numeric.end());
      std::sort(expected.begin(), expected.end());
      for (int k = 0; k < 3; ++k) EXPECT_NEAR(numeric[static_cast<std::size_t>(k)], expected[static_cast<std::size_t>(k)], 1e-4);
    }
  }
}

TEST(ClassifyFixedPoints, OrderedPayoffs) {
  // P_C < P_D < P_Q everywhere.
  Mat3 vp;
  vp.rowwise() = Eigen::RowVector3d(0.0, 1.0, 2.0);
  const auto rep = classify_fixed_points(vp, Temperature(0.3));
  EXPECT_EQ(rep[0].classification, Stability::unstable);
  EXPECT_EQ(rep[1].classification, Stability::saddle);
  EXPECT_EQ(rep[2].classification, Stability::stable);
  EXPECT_LT(rep[2].eigenvalues[1], 0.0);
  EXPECT_LT(rep[2].eigenvalues[2], 0.0);
  for (const auto& r : rep) EXPECT_EQ(r.eigenvalues[0], 0.0);
}

TEST(ClassifyFixedPoints, ExactlyOneOfEachForAnyStrictOrder) {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 500; ++k) {
    Mat3 vp;
    vp.rowwise() = Eigen::RowVector3d(u(gen), u(gen), u(gen));
    const auto rep = classify_fixed_points(vp, Temperature(0.2));
    int stable = 0, unstable = 0, saddle = 0;
    for (const auto& r : rep) {
      stable += r.classification == Stability::stable;
      unstable += r.classification == Stability::unstable;
      saddle += r.classification == Stability::saddle;
    }
    EXPECT_EQ(stable, 1);
    EXPECT_EQ(unstable, 1);
    EXPECT_EQ(saddle, 1);
  }
}

TEST(ClassifyFixedPoints, TiesAreDegenerate) {
  Mat3 vp = Mat3::Constant(0.4);
  for (const auto& r : classify_fixed_points(vp, Temperature(0.1))) EXPECT_EQ(r.classification, Stability::degenerate);
}

TEST(ClassifyFixedPoints, QuantumGameBelowThreshold) {
  const PayoffTable t = PayoffTable::game_family(1.0);
  const Entanglement g(0.4);
  const auto rep = meanfield::classify_game(t, g, Temperature(0.1));
  EXPECT_EQ(rep[1].classification, Stability::stable);
  EXPECT_NE(rep[2].classification, Stability::stable);
  EXPECT_NE(rep[0].classification, Stability::stable);
  const Mat3 m = meanfield::effective_payoff_matrix(t, g);
  const auto traj = integrate(Vec3(0.3, 0.2, 0.5), [&](const Vec3& r) { return Vec3(m * r); }, Temperature(0.1), 1e3, 1e-2);
  EXPECT_GT(traj.final_state()[1], 0.99);
}
