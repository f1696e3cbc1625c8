#pragma once

// Exact master equation for a well-mixed population of N players:
//
//   dQ(n)/dt = sum_n' [ Q(n') W(n' -> n) - Q(n) W(n -> n') ],
//
// with W(n -> n_{x->y}) = n_x * w_{x->y}(n) * n_y. The pair rate w_{x->y} is the
// Fermi probability that an x-player imitates a y-player, evaluated on the
// mean-field payoffs at the configuration's own densities n / N. Rates carry
// the raw n_x n_y factor, so one unit of time here is not one unit of time of
// the ALV equation.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "qalv/alv_dynamics.hpp"
#include "qalv/common.hpp"
#include "qalv/meanfield_phase.hpp"

namespace qalv::master {

inline constexpr int kMaxPopulation = 40;

struct Configuration {
  std::array<int, 3> n;  // (n_C, n_D, n_Q)

  int size() const { return n[0] + n[1] + n[2]; }
  int operator[](Strategy s) const { return n[index(s)]; }
  bool operator==(const Configuration&) const = default;
};

inline void check_population(int N) {
  if (N < 1 || N > kMaxPopulation)
    throw std::invalid_argument("master equation: N must lie in [1, " + std::to_string(kMaxPopulation) +
                                "], got " + std::to_string(N));
}

/// All (n_C, n_D, n_Q) with sum N, lexicographic in (n_C, n_D).
inline std::vector<Configuration> enumerate_configurations(int N) {
  check_population(N);
  std::vector<Configuration> out;
  out.reserve(static_cast<std::size_t>((N + 1) * (N + 2) / 2));
  for (int c = 0; c <= N; ++c)
    for (int d = 0; d <= N - c; ++d) out.push_back({{c, d, N - c - d}});
  return out;
}

/// Position of n in enumerate_configurations(n.size()).
inline std::size_t configuration_index(const Configuration& n) {
  const int N = n.size();
  // Blocks for n_C = 0 .. c-1 hold N+1, N, ..., N-c+2 entries.
  const int c = n.n[0];
  return static_cast<std::size_t>(c * (N + 1) - c * (c - 1) / 2 + n.n[1]);
}

struct RateModel {
  PayoffTable table;
  Entanglement gamma;
  Temperature temp;
};

/// n_x * w_{x->y}(n) * n_y; zero when n_x = 0. Requires x != y.
inline double configurational_rate(const Configuration& n, Strategy x, Strategy y, const RateModel& model) {
  if (x == y) throw std::invalid_argument("configurational_rate: x and y must differ");
  const int nx = n[x];
  const int ny = n[y];
  if (nx == 0 || ny == 0) return 0.0;
  const double N = n.size();
  const Vec3 rho(n.n[0] / N, n.n[1] / N, n.n[2] / N);
  const Vec3 p = meanfield::meanfield_payoffs(rho, model.table, model.gamma);
  const auto ix = static_cast<Eigen::Index>(index(x));
  const auto iy = static_cast<Eigen::Index>(index(y));
  return nx * alv::fermi_rate(p[ix], p[iy], model.temp) * ny;
}

struct ConfigurationDistribution {
  int N;
  std::vector<double> q;  // aligned with enumerate_configurations(N)

  double total() const {
    double s = 0.0;
    for (double v : q) s += v;
    return s;
  }
};

inline ConfigurationDistribution point_mass(const Configuration& n) {
  ConfigurationDistribution d{n.size(), std::vector<double>(static_cast<std::size_t>((n.size() + 1) * (n.size() + 2) / 2), 0.0)};
  d.q[configuration_index(n)] = 1.0;
  return d;
}

/// <n> / N.
inline Vec3 mean_occupation(const ConfigurationDistribution& d) {
  const auto configs = enumerate_configurations(d.N);
  if (configs.size() != d.q.size()) throw std::invalid_argument("mean_occupation: size mismatch");
  Vec3 m = Vec3::Zero();
  for (std::size_t k = 0; k < configs.size(); ++k)
    for (int x = 0; x < 3; ++x) m[x] += configs[k].n[static_cast<std::size_t>(x)] * d.q[k];
  return m / static_cast<double>(d.N);
}

struct MasterTrajectory {
  std::vector<double> times;
  std::vector<ConfigurationDistribution> states;
  /// Largest |sum Q - 1| seen.
  double max_leak = 0.0;
};

/// The generator of the master equation for fixed (N, game, temperature).
class MasterEquation {
 public:
  struct Transition {
    std::size_t from;
    std::size_t to;
    Strategy x;  // strategy abandoned
    Strategy y;  // strategy adopted
    double rate;
  };

  MasterEquation(int N, RateModel model) : N_(N), model_(model), configs_(enumerate_configurations(N)) {
    outflow_.assign(configs_.size(), 0.0);
    for (std::size_t k = 0; k < configs_.size(); ++k) {
      const Configuration& n = configs_[k];
      for (Strategy x : kStrategies) {
        for (Strategy y : kStrategies) {
          if (x == y || n[x] == 0 || n[y] == 0) continue;
          Configuration m = n;
          --m.n[index(x)];
          ++m.n[index(y)];
          const double rate = configurational_rate(n, x, y, model_);
          transitions_.push_back({k, configuration_index(m), x, y, rate});
          outflow_[k] += rate;
        }
      }
    }
  }

  int population() const { return N_; }
  const std::vector<Configuration>& configurations() const { return configs_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  double outflow(std::size_t k) const { return outflow_[k]; }
  double max_outflow() const { return *std::max_element(outflow_.begin(), outflow_.end()); }

  /// dQ/dt.
  std::vector<double> rhs(const std::vector<double>& q) const {
    std::vector<double> out(q.size(), 0.0);
    for (const auto& tr : transitions_) {
      const double flux = q[tr.from] * tr.rate;
      out[tr.from] -= flux;
      out[tr.to] += flux;
    }
    return out;
  }

  /// d<n_x>/dt as sum_y [ <n_y W_{y->x}> - <n_x W_{x->y}> ], in counts.
  Vec3 moment_rhs(const ConfigurationDistribution& d) const {
    Vec3 out = Vec3::Zero();
    for (const auto& tr : transitions_) {
      const double flux = d.q[tr.from] * tr.rate;
      out[static_cast<Eigen::Index>(index(tr.y))] += flux;
      out[static_cast<Eigen::Index>(index(tr.x))] -= flux;
    }
    return out;
  }

  /// Largest step for which RK4 keeps every probability nonnegative.
  double max_stable_dt() const {
    const double m = max_outflow();
    return m > 0.0 ? 1.0 / m : std::numeric_limits<double>::infinity();
  }

  /// RK4 integration of the master equation. Throws std::invalid_argument if
  /// dt * (largest total outflow) exceeds 1, and contract_violation if total
  /// probability drifts by more than 1e-9 or an entry falls below -1e-12.
  MasterTrajectory evolve(const ConfigurationDistribution& q0, double t_end, double dt,
                          std::size_t record_stride = 1) const {
    if (q0.N != N_ || q0.q.size() != configs_.size())
      throw std::invalid_argument("evolve: distribution does not match population size");
    if (!(dt > 0.0) || !(t_end >= 0.0)) throw std::invalid_argument("evolve: invalid time stepping");
    if (dt > max_stable_dt())
      throw std::invalid_argument("evolve: dt too large, per-step outflow probability reaches " +
                                  std::to_string(dt * max_outflow()));
    if (record_stride == 0) throw std::invalid_argument("evolve: record_stride must be >= 1");
    for (double v : q0.q)
      if (v < 0.0) throw std::invalid_argument("evolve: negative initial probability");
    if (std::abs(q0.total() - 1.0) > 1e-9) throw std::invalid_argument("evolve: initial distribution not normalized");

    MasterTrajectory traj;
    std::vector<double> q = q0.q;
    traj.times.push_back(0.0);
    traj.states.push_back(q0);

    const std::size_t n = q.size();
    std::vector<double> tmp(n);
    auto axpy = [&](const std::vector<double>& k, double a) {
      for (std::size_t i = 0; i < n; ++i) tmp[i] = q[i] + a * k[i];
      return tmp;
    };

    const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    for (std::size_t s = 1; s <= steps; ++s) {
      const double h = (s == steps) ? t_end - dt * static_cast<double>(s - 1) : dt;
      const auto k1 = rhs(q);
      const auto k2 = rhs(axpy(k1, 0.5 * h));
      const auto k3 = rhs(axpy(k2, 0.5 * h));
      const auto k4 = rhs(axpy(k3, h));
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        q[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (q[i] < 0.0) {
          if (q[i] < -1e-12) throw contract_violation("evolve: probability fell below -1e-12");
          q[i] = 0.0;
        }
        total += q[i];
      }
      const double leak = std::abs(total - 1.0);
      traj.max_leak = std::max(traj.max_leak, leak);
      if (leak > 1e-9) throw contract_violation("evolve: total probability drifted by " + std::to_string(leak));
      if (s % record_stride == 0 || s == steps) {
        traj.times.push_back(s == steps ? t_end : dt * static_cast<double>(s));
        traj.states.push_back({N_, q});
      }
    }
    return traj;
  }

 private:
  int N_;
  RateModel model_;
  std::vector<Configuration> configs_;
  std::vector<Transition> transitions_;
  std::vector<double> outflow_;
};

/// Index of the largest component.
inline Strategy dominant(const Vec3& rho) {
  Eigen::Index k = 0;
  rho.maxCoeff(&k);
  return kStrategies[static_cast<std::size_t>(k)];
}

}  // namespace qalv::master
