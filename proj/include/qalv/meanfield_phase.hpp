#pragma once

// Analytic layer of the entangled game: the effective 3x3 payoff matrix,
// the critical entanglement angles, the phase boundary of the game family
// T = 1 + r, R = 1, P = 0, S = -r, and the mean-field phase-diagram sweep.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qalv/alv_dynamics.hpp"
#include "qalv/common.hpp"
#include "qalv/parallel.hpp"

namespace qalv::meanfield {

/// Closed-form row-player payoffs, rows/cols in order C, D, Q, with
/// lambda = cos^2(gamma):
///
///   [ R    S    R_l ]     R_l = R l + P (1 - l)
///   [ T    P    T_l ]     T_l = T l + S (1 - l)
///   [ R_l  S_l  R   ]     S_l = S l + T (1 - l)
inline Mat3 effective_payoff_matrix(const PayoffTable& t, Entanglement gamma) {
  const double l = gamma.lambda();
  const double r_l = t.R() * l + t.P() * (1.0 - l);
  const double t_l = t.T() * l + t.S() * (1.0 - l);
  const double s_l = t.S() * l + t.T() * (1.0 - l);
  Mat3 m;
  m << t.R(), t.S(), r_l,
       t.T(), t.P(), t_l,
       r_l,   s_l,   t.R();
  return m;
}

/// (P_C, P_D, P_Q) for a well-mixed population at densities rho.
inline Vec3 meanfield_payoffs(const Vec3& rho, const PayoffTable& table, Entanglement gamma) {
  return effective_payoff_matrix(table, gamma) * rho;
}

/// Row v holds the payoffs with the population sitting on vertex v.
inline Mat3 vertex_payoffs(const PayoffTable& table, Entanglement gamma) {
  return effective_payoff_matrix(table, gamma).transpose();
}

inline std::array<alv::FixedPointReport, 3> classify_game(const PayoffTable& table, Entanglement gamma,
                                                          Temperature temp) {
  return alv::classify_fixed_points(vertex_payoffs(table, gamma), temp);
}

struct CriticalGammas {
  /// Above this angle the all-Q vertex is stable.
  double quantum_onset;
  /// Below this angle the all-D vertex is stable.
  double defection_limit;
};

inline CriticalGammas critical_gammas(const PayoffTable& t) {
  const double span = t.T() - t.S();
  return {std::acos(std::sqrt((t.R() - t.S()) / span)), std::acos(std::sqrt((t.T() - t.P()) / span))};
}

/// (T - P) - (R - S); zero exactly when both critical angles coincide.
inline double critical_condition_gap(const PayoffTable& t) { return (t.T() - t.P()) - (t.R() - t.S()); }

/// r* = (1 - cos^2 g) / (2 cos^2 g - 1) for the game family. Defined for
/// 0 <= gamma_star < pi/4 only; throws std::domain_error otherwise.
inline double phase_boundary_r(double gamma_star) {
  if (!(gamma_star >= 0.0 && gamma_star < std::numbers::pi / 4.0))
    throw std::domain_error("phase boundary: gamma* must lie in [0, pi/4)");
  const double c = std::cos(gamma_star);
  const double c2 = c * c;
  return (1.0 - c2) / (2.0 * c2 - 1.0);
}

/// Inverse of phase_boundary_r: the critical angle of GameFamily(r).
inline double critical_gamma_for_family(double r) {
  return critical_gammas(PayoffTable::game_family(r)).quantum_onset;
}

struct PhaseCell {
  Vec3 rho;  // (rho_C, rho_D, rho_Q) at the end of the run
  bool converged = false;
  bool failed = false;
};

struct PhaseGrid {
  std::vector<double> gamma_axis;
  std::vector<double> r_axis;
  /// Row-major in r then gamma: cell(ir, ig) = cells[ir * gamma_axis.size() + ig].
  std::vector<PhaseCell> cells;

  const PhaseCell& cell(std::size_t ir, std::size_t ig) const { return cells[ir * gamma_axis.size() + ig]; }
};

struct SweepConfig {
  Vec3 rho0 = Vec3::Constant(1.0 / 3.0);
  double temp = 0.1;
  double t_end = 1e3;
  double dt = 1e-2;
  std::size_t workers = 1;
};

/// Integrates the mean-field dynamics for every (gamma, r) pair. A cell whose
/// integration throws is marked failed and the sweep continues.
inline PhaseGrid sweep_phase_diagram(std::vector<double> gamma_axis, std::vector<double> r_axis,
                                     const SweepConfig& cfg) {
  if (gamma_axis.empty() || r_axis.empty()) throw std::invalid_argument("phase sweep: axes must be nonempty");
  if (!std::is_sorted(gamma_axis.begin(), gamma_axis.end()) || !std::is_sorted(r_axis.begin(), r_axis.end()))
    throw std::invalid_argument("phase sweep: axes must be sorted");
  if (!(cfg.rho0.minCoeff() > 0.0) || !on_simplex(cfg.rho0))
    throw std::invalid_argument("phase sweep: rho0 must be an interior point of the simplex");
  // Validate parameter ranges before any cell runs.
  for (double g : gamma_axis) (void)Entanglement(g);
  for (double r : r_axis) (void)PayoffTable::game_family(r);
  const Temperature temp(cfg.temp);
  if (!(cfg.dt > 0.0) || !(cfg.t_end >= 0.0)) throw std::invalid_argument("phase sweep: invalid time stepping");

  PhaseGrid grid{std::move(gamma_axis), std::move(r_axis), {}};
  const std::size_t ng = grid.gamma_axis.size();
  grid.cells.resize(ng * grid.r_axis.size());

  alv::IntegrateOptions opts;
  opts.record_stride = std::numeric_limits<std::size_t>::max();

  parallel_for(grid.cells.size(), cfg.workers, [&](std::size_t k) {
    const PayoffTable table = PayoffTable::game_family(grid.r_axis[k / ng]);
    const Entanglement gamma(grid.gamma_axis[k % ng]);
    const Mat3 m = effective_payoff_matrix(table, gamma);
    PhaseCell& cell = grid.cells[k];
    try {
      const auto traj = alv::integrate(cfg.rho0, [&](const Vec3& rho) { return Vec3(m * rho); }, temp, cfg.t_end,
                                       cfg.dt, opts);
      cell.rho = traj.final_state();
      cell.converged = traj.converged;
    } catch (const contract_violation&) {
      cell.rho = Vec3::Constant(std::nan(""));
      cell.failed = true;
    }
  });
  return grid;
}

/// Gamma at which rho_Q first rises through `level` along row ir, by linear
/// interpolation between neighbouring cells.
inline std::optional<double> empirical_crossing(const PhaseGrid& grid, std::size_t ir, double level = 0.5) {
  const std::size_t ng = grid.gamma_axis.size();
  for (std::size_t ig = 0; ig + 1 < ng; ++ig) {
    const double a = grid.cell(ir, ig).rho[2] - level;
    const double b = grid.cell(ir, ig + 1).rho[2] - level;
    if (a <= 0.0 && b > 0.0) {
      const double g0 = grid.gamma_axis[ig];
      const double g1 = grid.gamma_axis[ig + 1];
      return g0 + (g1 - g0) * (-a) / (b - a);
    }
  }
  return std::nullopt;
}

}  // namespace qalv::meanfield
