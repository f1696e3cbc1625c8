#pragma once

// Two-qubit entangled prisoner's dilemma evaluated as a circuit:
//
//   |psi_fin> = J^dagger (U_A (x) U_B) J |00>,   J = exp(i gamma/2 sigma_y (x) sigma_y)
//
// followed by a computational-basis measurement. Basis order is
// |00>, |01>, |10>, |11> with player A on the left qubit.

#include <array>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "qalv/common.hpp"

namespace qalv::quantum {

using cplx = std::complex<double>;
using Mat2c = Eigen::Matrix2cd;
using Mat4c = Eigen::Matrix4cd;

struct TwoQubitState {
  Eigen::Vector4cd amplitudes;

  double norm_squared() const { return amplitudes.squaredNorm(); }
};

struct StrategyAngles {
  double theta;
  double phi;
};

constexpr StrategyAngles angles(Strategy s) {
  switch (s) {
    case Strategy::C: return {0.0, 0.0};
    case Strategy::D: return {std::numbers::pi, 0.0};
    case Strategy::Q: return {0.0, std::numbers::pi / 2.0};
  }
  return {0.0, 0.0};
}

inline Mat2c pauli_y() {
  Mat2c y;
  y << cplx(0, 0), cplx(0, -1), cplx(0, 1), cplx(0, 0);
  return y;
}

inline Mat4c kron(const Mat2c& a, const Mat2c& b) {
  Mat4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

/// Entangling operator exp(i gamma/2 sigma_y (x) sigma_y), built from the
/// eigendecomposition of the Hermitian generator.
inline Mat4c entangler(Entanglement gamma) {
  const Mat2c sy = pauli_y();
  const Mat4c generator = kron(sy, sy);
  const Eigen::SelfAdjointEigenSolver<Mat4c> eig(generator);
  const double half = gamma.gamma() / 2.0;
  Eigen::Vector4cd phases;
  for (int k = 0; k < 4; ++k) phases[k] = std::exp(cplx(0.0, half * eig.eigenvalues()[k]));
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

/// U(theta, phi) = [[e^{i phi} cos(theta/2), sin(theta/2)], [-sin(theta/2), e^{-i phi} cos(theta/2)]].
inline Mat2c strategy_unitary(Strategy s) {
  const auto [theta, phi] = angles(s);
  const cplx c = std::polar(std::cos(theta / 2.0), phi);
  const double sn = std::sin(theta / 2.0);
  Mat2c u;
  u << c, cplx(sn, 0.0), cplx(-sn, 0.0), std::conj(c);
  return u;
}

inline TwoQubitState final_state(Entanglement gamma, Strategy a, Strategy b) {
  const Mat4c J = entangler(gamma);
  Eigen::Vector4cd ground = Eigen::Vector4cd::Zero();
  ground[0] = 1.0;
  const Eigen::Vector4cd initial = J * ground;
  return {J.adjoint() * (kron(strategy_unitary(a), strategy_unitary(b)) * initial)};
}

/// Outcome probabilities p00, p01, p10, p11.
inline std::array<double, 4> outcome_probs(const TwoQubitState& state) {
  std::array<double, 4> p{};
  for (int k = 0; k < 4; ++k) p[static_cast<std::size_t>(k)] = std::norm(state.amplitudes[k]);
  return p;
}

/// Row-player (A) payoff R p00 + S p01 + T p10 + P p11. The B-side payoff is
/// pairwise_payoff(gamma, table, b, a).
inline double pairwise_payoff(Entanglement gamma, const PayoffTable& table, Strategy a, Strategy b) {
  const auto p = outcome_probs(final_state(gamma, a, b));
  return table.R() * p[0] + table.S() * p[1] + table.T() * p[2] + table.P() * p[3];
}

/// Row-player payoff for all nine strategy pairs, rows/cols in order C, D, Q.
inline Mat3 payoff_matrix_from_circuit(Entanglement gamma, const PayoffTable& table) {
  Mat3 m;
  for (Strategy a : kStrategies)
    for (Strategy b : kStrategies)
      m(static_cast<Eigen::Index>(index(a)), static_cast<Eigen::Index>(index(b))) =
          pairwise_payoff(gamma, table, a, b);
  return m;
}

}  // namespace qalv::quantum
