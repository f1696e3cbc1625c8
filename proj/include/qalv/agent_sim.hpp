#pragma once

// Agent-based Monte Carlo of the entangled game on a graph.
//
// Elementary event: pick a focal node i uniformly, pick a reference j
// uniformly among i's neighbours; if their strategies differ, i copies j with
// probability fermi_rate(P_i, P_j, temp), where P is the node's accumulated
// payoff against its neighbours on the current strategy field. One sweep is
// N elementary events.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qalv/alv_dynamics.hpp"
#include "qalv/common.hpp"
#include "qalv/network.hpp"
#include "qalv/parallel.hpp"
#include "qalv/quantum_game.hpp"
#include "qalv/rng.hpp"

namespace qalv::sim {

enum class PayoffMode { sum, average };

struct SimParams {
  Mat3 pair_payoffs;  // row-player payoff, rows/cols C, D, Q
  Temperature temp{0.1};
  std::size_t steps = 10000;  // sweeps
  PayoffMode payoff_mode = PayoffMode::sum;
  std::size_t measure_window = 1000;

  /// Pair payoffs taken from the two-qubit circuit at this gamma.
  static SimParams quantum(const PayoffTable& table, Entanglement gamma, Temperature temp, std::size_t steps,
                           std::size_t measure_window, PayoffMode mode = PayoffMode::sum) {
    SimParams p{quantum::payoff_matrix_from_circuit(gamma, table), temp, steps, mode, measure_window};
    p.validate();
    return p;
  }

  void validate() const {
    if (steps < 1) throw std::invalid_argument("simulation: steps must be >= 1");
    if (measure_window < 1 || measure_window > steps)
      throw std::invalid_argument("simulation: measure_window must lie in [1, steps]");
  }
};

struct SimState {
  std::vector<Strategy> strategies;
  std::uint64_t rng_seed = 0;
  std::uint64_t step_count = 0;
};

inline double node_payoff(const net::Network& g, const std::vector<Strategy>& strategies, std::size_t node,
                          const SimParams& params) {
  const auto own = static_cast<Eigen::Index>(index(strategies[node]));
  double total = 0.0;
  for (net::NodeId nb : g.neighbors(node)) total += params.pair_payoffs(own, static_cast<Eigen::Index>(index(strategies[nb])));
  if (params.payoff_mode == PayoffMode::average) total /= static_cast<double>(g.degree(node));
  return total;
}

/// Each node independently draws C, D or Q with probabilities rho0.
inline std::vector<Strategy> random_strategies(std::size_t n, const Vec3& rho0, rng::Engine& eng) {
  if (!on_simplex(rho0, 1e-12)) throw std::invalid_argument("initial fractions must lie on the simplex");
  std::vector<Strategy> out(n);
  for (auto& s : out) {
    const double u = rng::uniform01(eng);
    s = u < rho0[0] ? Strategy::C : (u < rho0[0] + rho0[1] ? Strategy::D : Strategy::Q);
    // rho0[2] == 0 must never yield Q through rounding of the partial sums.
    if (s == Strategy::Q && rho0[2] == 0.0) s = rho0[1] > 0.0 ? Strategy::D : Strategy::C;
  }
  return out;
}

class Simulation {
 public:
  Simulation(const net::Network& g, SimParams params, std::vector<Strategy> initial, std::uint64_t seed)
      : g_(&g), params_(std::move(params)), eng_(rng::make_engine(seed)) {
    if (initial.size() != g.num_nodes()) throw std::invalid_argument("simulation: one strategy per node required");
    if (g.num_nodes() == 0 || g.min_degree() == 0)
      throw std::invalid_argument("simulation: every node needs at least one neighbour");
    state_.strategies = std::move(initial);
    state_.rng_seed = seed;
    for (Strategy s : state_.strategies) ++counts_[index(s)];
  }

  const SimState& state() const { return state_; }
  const std::array<std::size_t, 3>& counts() const { return counts_; }

  Vec3 frequencies() const {
    const double n = static_cast<double>(g_->num_nodes());
    return {counts_[0] / n, counts_[1] / n, counts_[2] / n};
  }

  bool monomorphic() const {
    const std::size_t n = g_->num_nodes();
    return counts_[0] == n || counts_[1] == n || counts_[2] == n;
  }

  double payoff(std::size_t node) const { return node_payoff(*g_, state_.strategies, node, params_); }

  /// One elementary event; returns true if the focal node switched strategy.
  bool mc_step() {
    const std::size_t n = g_->num_nodes();
    const auto i = static_cast<std::size_t>(rng::uniform_index(eng_, n));
    const auto nb = g_->neighbors(i);
    const net::NodeId j = nb[static_cast<std::size_t>(rng::uniform_index(eng_, nb.size()))];
    const Strategy si = state_.strategies[i];
    const Strategy sj = state_.strategies[j];
    if (si == sj) return false;
    const double w = alv::fermi_rate(payoff(i), payoff(j), params_.temp);
    if (!(rng::uniform01(eng_) < w)) return false;
    state_.strategies[i] = sj;
    --counts_[index(si)];
    ++counts_[index(sj)];
    return true;
  }

  /// N elementary events.
  void mc_sweep() {
    const std::size_t n = g_->num_nodes();
    for (std::size_t k = 0; k < n; ++k) mc_step();
    ++state_.step_count;
  }

 private:
  const net::Network* g_;
  SimParams params_;
  rng::Engine eng_;
  SimState state_;
  std::array<std::size_t, 3> counts_{0, 0, 0};
};

struct ExperimentResult {
  /// Frequencies after sweep 0 (initial state), 1, ..., steps.
  std::vector<Vec3> series;
  /// Mean over the last measure_window sweeps.
  Vec3 tail_mean;
};

/// Random initial field from rho0 and `steps` sweeps, all driven by one
/// stream seeded with `seed`.
inline ExperimentResult run_experiment(const net::Network& g, const SimParams& params, const Vec3& rho0,
                                       std::uint64_t seed) {
  params.validate();
  auto init_eng = rng::make_engine(rng::derive_seed(seed, 0, 0));
  Simulation sim(g, params, random_strategies(g.num_nodes(), rho0, init_eng), seed);

  ExperimentResult out;
  out.series.reserve(params.steps + 1);
  out.series.push_back(sim.frequencies());
  for (std::size_t s = 1; s <= params.steps; ++s) {
    if (sim.monomorphic()) {
      // Absorbing: nothing can change any more.
      out.series.resize(params.steps + 1, out.series.back());
      break;
    }
    sim.mc_sweep();
    out.series.push_back(sim.frequencies());
  }
  out.tail_mean = Vec3::Zero();
  for (std::size_t s = params.steps + 1 - params.measure_window; s <= params.steps; ++s) out.tail_mean += out.series[s];
  out.tail_mean /= static_cast<double>(params.measure_window);
  return out;
}

struct ScanTemplate {
  PayoffTable table;
  Temperature temp{0.1};
  std::size_t steps = 10000;
  std::size_t measure_window = 1000;
  PayoffMode payoff_mode = PayoffMode::sum;
  Vec3 rho0 = Vec3::Constant(1.0 / 3.0);
};

struct ScanResult {
  std::vector<double> gamma_axis;
  std::size_t replicates = 0;
  std::vector<Vec3> mean;      // per gamma, mean tail frequencies
  std::vector<Vec3> std_error; // per gamma, standard error across replicates
  /// Gamma where mean rho_Q - rho_D first turns positive; empty if it never changes sign.
  std::optional<double> crossing;
  /// Same estimate for each replicate alone.
  std::vector<std::optional<double>> replicate_crossings;
  /// Standard error of the crossing from the replicates that cross.
  double crossing_std_error = 0.0;
};

/// Linear interpolation of the first sign change of rho_Q - rho_D from <= 0 to > 0.
inline std::optional<double> first_crossing(const std::vector<double>& gamma_axis, const std::vector<Vec3>& freq) {
  for (std::size_t k = 0; k + 1 < gamma_axis.size(); ++k) {
    const double a = freq[k][2] - freq[k][1];
    const double b = freq[k + 1][2] - freq[k + 1][1];
    if (a <= 0.0 && b > 0.0) return gamma_axis[k] + (gamma_axis[k + 1] - gamma_axis[k]) * (-a) / (b - a);
  }
  return std::nullopt;
}

/// Reserved stream index for network realizations.
inline constexpr std::uint64_t kNetworkStream = 0xFFFF'FFFF'FFFF'FFFFULL;

using NetworkBuilder = std::function<net::Network(std::uint64_t seed)>;

/// Runs every (gamma, replicate) pair. Replicate k uses the network built from
/// derive_seed(seed, kNetworkStream, k) at every gamma; the dynamics of pair
/// (g, k) use derive_seed(seed, g, k). Results do not depend on `workers`.
inline ScanResult bifurcation_scan(const NetworkBuilder& build, const ScanTemplate& tmpl,
                                   const std::vector<double>& gamma_axis, std::size_t replicates, std::uint64_t seed,
                                   std::size_t workers = 1) {
  if (replicates < 1) throw std::invalid_argument("scan: replicates must be >= 1");
  if (gamma_axis.empty() || !std::is_sorted(gamma_axis.begin(), gamma_axis.end()))
    throw std::invalid_argument("scan: gamma axis must be nonempty and sorted");
  std::vector<SimParams> params;
  for (double g : gamma_axis)
    params.push_back(SimParams::quantum(tmpl.table, Entanglement(g), tmpl.temp, tmpl.steps, tmpl.measure_window,
                                        tmpl.payoff_mode));

  std::vector<net::Network> networks(replicates);
  parallel_for(replicates, workers, [&](std::size_t k) { networks[k] = build(rng::derive_seed(seed, kNetworkStream, k)); });

  const std::size_t ng = gamma_axis.size();
  std::vector<Vec3> tails(ng * replicates);
  parallel_for(tails.size(), workers, [&](std::size_t idx) {
    const std::size_t g = idx / replicates;
    const std::size_t k = idx % replicates;
    tails[idx] = run_experiment(networks[k], params[g], tmpl.rho0, rng::derive_seed(seed, g, k)).tail_mean;
  });

  ScanResult out;
  out.gamma_axis = gamma_axis;
  out.replicates = replicates;
  for (std::size_t g = 0; g < ng; ++g) {
    Vec3 mean = Vec3::Zero();
    for (std::size_t k = 0; k < replicates; ++k) mean += tails[g * replicates + k];
    mean /= static_cast<double>(replicates);
    Vec3 se = Vec3::Zero();
    if (replicates > 1) {
      Vec3 var = Vec3::Zero();
      for (std::size_t k = 0; k < replicates; ++k) var += (tails[g * replicates + k] - mean).cwiseAbs2();
      var /= static_cast<double>(replicates - 1);
      se = (var / static_cast<double>(replicates)).cwiseSqrt();
    }
    out.mean.push_back(mean);
    out.std_error.push_back(se);
  }
  out.crossing = first_crossing(gamma_axis, out.mean);

  std::vector<double> crossings;
  for (std::size_t k = 0; k < replicates; ++k) {
    std::vector<Vec3> own(ng);
    for (std::size_t g = 0; g < ng; ++g) own[g] = tails[g * replicates + k];
    out.replicate_crossings.push_back(first_crossing(gamma_axis, own));
    if (out.replicate_crossings.back()) crossings.push_back(*out.replicate_crossings.back());
  }
  if (crossings.size() > 1) {
    double m = 0.0;
    for (double c : crossings) m += c;
    m /= static_cast<double>(crossings.size());
    double v = 0.0;
    for (double c : crossings) v += (c - m) * (c - m);
    v /= static_cast<double>(crossings.size() - 1);
    out.crossing_std_error = std::sqrt(v / static_cast<double>(crossings.size()));
  }
  return out;
}

}  // namespace qalv::sim
