#pragma once

// Three-species anti-symmetric Lotka-Volterra dynamics
//
//   d rho_X / dt = rho_X * sum_Y G_XY rho_Y,
//
// where G_XY = w(Y -> X) - w(X -> Y) = tanh((P_X - P_Y) / (2 temp)) is the
// growth coupling of species X due to Y under the Fermi imitation rule.
// Higher-payoff strategies grow. The net rate matrix A_XY = w(X -> Y) - w(Y -> X)
// is the transpose of G.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qalv/common.hpp"

namespace qalv::alv {

/// Probability that a player earning p_from imitates one earning p_to.
inline double fermi_rate(double p_from, double p_to, Temperature temp) {
  const double x = (p_to - p_from) / temp.value();
  if (x > 700.0) return 1.0;
  if (x < -700.0) return 0.0;
  return 1.0 / (1.0 + std::exp(-x));
}

/// A_XY = w(X -> Y) - w(Y -> X); exactly antisymmetric. A_XY > 0 when Y pays more.
inline Mat3 net_rate_matrix(const Vec3& payoffs, Temperature temp) {
  Mat3 a = Mat3::Zero();
  for (int x = 0; x < 3; ++x) {
    for (int y = x + 1; y < 3; ++y) {
      const double v = fermi_rate(payoffs[x], payoffs[y], temp) - fermi_rate(payoffs[y], payoffs[x], temp);
      a(x, y) = v;
      a(y, x) = -v;
    }
  }
  return a;
}

/// G = A^T, the coupling that enters the right-hand side.
inline Mat3 growth_couplings(const Vec3& payoffs, Temperature temp) {
  return net_rate_matrix(payoffs, temp).transpose();
}

/// rho_i * sum_{j != i} G_ij rho_j.
inline Vec3 alv_rhs(const Vec3& rho, const Mat3& couplings) {
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    double s = 0.0;
    for (int j = 0; j < 3; ++j)
      if (j != i) s += couplings(i, j) * rho[j];
    out[i] = rho[i] * s;
  }
  return out;
}

struct TrajectoryPoint {
  double t;
  Vec3 rho;
};

struct IntegrateOptions {
  /// Keep every k-th step (the final state is always kept).
  std::size_t record_stride = 1;
  /// Stop once ||d rho/dt||_inf drops below convergence_tol.
  bool stop_on_convergence = true;
  double convergence_tol = 1e-10;
  /// Largest simplex repair tolerated per step.
  double max_correction = 1e-6;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  /// True if the stationarity test fired before t_end.
  bool converged = false;
  /// Largest per-step renormalization or clamp applied.
  double max_correction = 0.0;

  const Vec3& final_state() const { return points.back().rho; }
};

namespace detail {

// Clamps negatives, renormalizes, and returns the size of the repair.
inline double repair_simplex(Vec3& rho) {
  double correction = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (rho[i] < 0.0) {
      correction = std::max(correction, -rho[i]);
      rho[i] = 0.0;
    }
  }
  const double sum = rho.sum();
  correction = std::max(correction, std::abs(sum - 1.0));
  rho /= sum;
  return correction;
}

}  // namespace detail

/// Fixed-step RK4 for d rho/dt = alv_rhs(rho, couplings(rho)).
///
/// `couplings` maps a state to its 3x3 growth-coupling matrix and is
/// re-evaluated at every stage. Throws std::invalid_argument for dt <= 0 or
/// t_end < 0, and contract_violation if a step needs a simplex repair larger
/// than options.max_correction.
template <class CouplingFn>
Trajectory integrate_couplings(const Vec3& rho0, CouplingFn&& couplings, double t_end, double dt,
                               const IntegrateOptions& options = {}) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be > 0");
  if (!(t_end >= 0.0)) throw std::invalid_argument("integrate: t_end must be >= 0");
  if (!on_simplex(rho0)) throw std::invalid_argument("integrate: initial state is not on the simplex");
  if (options.record_stride == 0) throw std::invalid_argument("integrate: record_stride must be >= 1");

  auto f = [&](const Vec3& r) { return alv_rhs(r, couplings(r)); };

  Trajectory traj;
  Vec3 rho = rho0;
  traj.max_correction = detail::repair_simplex(rho);
  traj.points.push_back({0.0, rho});

  // Steps are counted in integers so t lands exactly on t_end.
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  double t = 0.0;
  for (std::size_t n = 1; n <= steps; ++n) {
    const double h = (n == steps) ? t_end - dt * static_cast<double>(n - 1) : dt;
    const Vec3 k1 = f(rho);
    if (options.stop_on_convergence && k1.cwiseAbs().maxCoeff() < options.convergence_tol) {
      traj.converged = true;
      break;
    }
    const Vec3 k2 = f(rho + 0.5 * h * k1);
    const Vec3 k3 = f(rho + 0.5 * h * k2);
    const Vec3 k4 = f(rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double corr = detail::repair_simplex(rho);
    traj.max_correction = std::max(traj.max_correction, corr);
    if (corr > options.max_correction)
      throw contract_violation("integrate: simplex correction " + std::to_string(corr) +
                               " exceeds tolerance; reduce dt");

    t = (n == steps) ? t_end : dt * static_cast<double>(n);
    if (n % options.record_stride == 0 || n == steps) traj.points.push_back({t, rho});
  }
  if (!traj.converged && options.stop_on_convergence &&
      f(rho).cwiseAbs().maxCoeff() < options.convergence_tol)
    traj.converged = true;
  if (traj.points.back().t != t) traj.points.push_back({t, rho});
  return traj;
}

/// Mean-field integration with state-dependent payoffs: `payoffs` maps rho to
/// (P_C, P_D, P_Q) and the couplings follow the Fermi rule at `temp`.
template <class PayoffFn>
Trajectory integrate(const Vec3& rho0, PayoffFn&& payoffs, Temperature temp, double t_end, double dt,
                     const IntegrateOptions& options = {}) {
  return integrate_couplings(
      rho0, [&](const Vec3& r) { return growth_couplings(payoffs(r), temp); }, t_end, dt, options);
}

enum class Stability { stable, unstable, saddle, degenerate };

constexpr const char* to_string(Stability s) {
  switch (s) {
    case Stability::stable: return "stable";
    case Stability::unstable: return "unstable";
    case Stability::saddle: return "saddle";
    case Stability::degenerate: return "degenerate";
  }
  return "?";
}

/// Spectrum {0, G_ji, G_ki} of the Jacobian at vertex i (j < k the other two species).
inline std::array<double, 3> vertex_jacobian_eigenvalues(const Mat3& couplings, Strategy vertex) {
  const int i = static_cast<int>(index(vertex));
  std::array<double, 3> ev{0.0, 0.0, 0.0};
  std::size_t slot = 1;
  for (int j = 0; j < 3; ++j)
    if (j != i) ev[slot++] = couplings(j, i);
  return ev;
}

struct FixedPointReport {
  Strategy vertex;
  std::array<double, 3> eigenvalues;
  Stability classification;
};

inline constexpr double kDegeneracyTol = 1e-12;

inline Stability classify(const std::array<double, 3>& eigenvalues) {
  const double a = eigenvalues[1];
  const double b = eigenvalues[2];
  if (std::abs(a) <= kDegeneracyTol || std::abs(b) <= kDegeneracyTol) return Stability::degenerate;
  if (a < 0.0 && b < 0.0) return Stability::stable;
  if (a > 0.0 && b > 0.0) return Stability::unstable;
  return Stability::saddle;
}

/// Row v of `vertex_payoffs` holds (P_C, P_D, P_Q) evaluated with rho at vertex v.
inline std::array<FixedPointReport, 3> classify_fixed_points(const Mat3& vertex_payoffs, Temperature temp) {
  std::array<FixedPointReport, 3> out{};
  for (Strategy v : kStrategies) {
    const Vec3 p = vertex_payoffs.row(static_cast<Eigen::Index>(index(v))).transpose();
    const auto ev = vertex_jacobian_eigenvalues(growth_couplings(p, temp), v);
    out[index(v)] = {v, ev, classify(ev)};
  }
  return out;
}

}  // namespace qalv::alv
