// qalv: command-line driver for the entangled-game dynamics.
//
// Exit status: 0 success, 1 invalid input, 2 numerical contract breached.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qalv/qalv.hpp"

using namespace qalv;
using json = nlohmann::json;

namespace {

constexpr double kPayoffTolerance = 1e-8;

struct Game {
  double r = 1.0;
  std::optional<double> T, R, P, S;

  void add_to(CLI::App* app) {
    app->add_option("--r", r, "Dilemma strength for the family T=1+r, R=1, P=0, S=-r")->capture_default_str();
    app->add_option("--T", T, "Temptation (give all of T R P S to override --r)");
    app->add_option("--R", R, "Reward");
    app->add_option("--P", P, "Punishment");
    app->add_option("--S", S, "Sucker's payoff");
  }

  PayoffTable table() const {
    const int given = T.has_value() + R.has_value() + P.has_value() + S.has_value();
    if (given == 0) return PayoffTable::game_family(r);
    if (given != 4) throw std::invalid_argument("payoff table: give all of --T --R --P --S or none");
    return PayoffTable(*T, *R, *P, *S);
  }
};

struct Common {
  std::uint64_t seed = 0;
  std::size_t workers = default_workers();
  std::string out;
  std::string config;

  void add_to(CLI::App* app, const std::string& default_out, bool seed_required = false) {
    out = default_out;
    auto* s = app->add_option("--seed", seed, "Base RNG seed");
    if (seed_required) s->required();
    app->add_option("--workers", workers, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--out", out, "Output path")->capture_default_str();
    app->add_option("--config", config, "Flat key=value file; explicit flags take precedence");
  }
};

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::invalid_argument("cannot open '" + path + "' for writing");
  return os;
}

// Number if the text is fully numeric, else string.
json scalar(const std::string& text) {
  if (text.empty()) return nullptr;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (*end == '\0') return v;
  return text;
}

// Effective value of every option after flags, config and defaults.
json effective_config(const CLI::App& app) {
  json cfg = json::object();
  for (const CLI::Option* opt : app.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "config") continue;
    std::vector<std::string> vals = opt->reduced_results();
    if (vals.empty()) {
      const std::string d = opt->get_default_str();
      if (!d.empty()) vals.push_back(d);
    }
    if (vals.empty()) cfg[name] = nullptr;
    else if (vals.size() == 1) cfg[name] = scalar(vals.front());
    else {
      json arr = json::array();
      for (const auto& v : vals) arr.push_back(scalar(v));
      cfg[name] = arr;
    }
  }
  return cfg;
}

void write_sidecar(const CLI::App& sub, const std::string& out, json extra = json::object()) {
  json doc;
  doc["command"] = sub.get_name();
  doc["config"] = effective_config(sub);
  for (auto& [k, v] : extra.items()) doc[k] = v;
  auto os = open_out(out + ".json");
  os << doc.dump(2) << '\n';
}

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "% .10f", v);
  return buf;
}

void print_matrix(const char* title, const Mat3& m) {
  std::cout << title << '\n';
  for (Strategy row : kStrategies) {
    std::cout << "  " << label(row);
    for (Strategy col : kStrategies) std::cout << ' ' << fmt6(m(index(row), index(col)));
    std::cout << '\n';
  }
}

Vec3 parse_simplex(const std::vector<double>& v, const char* what) {
  if (v.size() != 3) throw std::invalid_argument(std::string(what) + ": expected three values");
  const Vec3 rho(v[0], v[1], v[2]);
  if (!on_simplex(rho)) throw std::invalid_argument(std::string(what) + ": must be nonnegative and sum to 1");
  return rho;
}

std::vector<double> axis(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw std::invalid_argument("gamma axis: need step > 0 and max >= min");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> out;
  for (std::size_t k = 0; k <= n; ++k) out.push_back(lo + step * static_cast<double>(k));
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t points) {
  if (points < 1) throw std::invalid_argument("axis: points must be >= 1");
  if (points == 1) return {lo};
  std::vector<double> out(points);
  for (std::size_t k = 0; k < points; ++k) out[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
  return out;
}

// Flat key=value config file turned into "--key value" tokens, read with
// CLI11's own INI reader. Sections are rejected.
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot read config file '" + path + "'");
  std::vector<std::string> tokens;
  for (const auto& item : CLI::ConfigINI().from_config(is)) {
    if (item.name == "++" || item.name == "--") throw std::invalid_argument("config file: sections are not supported");
    if (!item.parents.empty()) throw std::invalid_argument("config file: nested key '" + item.fullname() + "'");
    tokens.push_back("--" + item.name);
    std::string joined;
    for (const auto& in : item.inputs) joined += (joined.empty() ? "" : ",") + in;
    tokens.push_back(joined);
  }
  return tokens;
}

// Config entries go right after the subcommand name so later, explicit flags
// override them under the take-last policy.
std::vector<std::string> expand_config(const std::vector<std::string>& args, const std::vector<std::string>& subcommands) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (!path) return args;
  std::vector<std::string> out;
  bool inserted = false;
  for (const auto& a : args) {
    out.push_back(a);
    if (!inserted && std::find(subcommands.begin(), subcommands.end(), a) != subcommands.end()) {
      const auto extra = config_tokens(*path);
      out.insert(out.end(), extra.begin(), extra.end());
      inserted = true;
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app("Entangled prisoner's dilemma: payoffs, mean-field dynamics, master equation and network simulation");
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  // payoffs
  auto* payoffs = app.add_subcommand("payoffs", "Circuit payoff matrix against the closed form");
  double p_gamma = 0.0;
  Game p_game;
  Common p_common;
  payoffs->add_option("--gamma", p_gamma, "Entanglement angle in [0, pi/2]")->required();
  p_game.add_to(payoffs);
  p_common.add_to(payoffs, "");

  // stability
  auto* stability = app.add_subcommand("stability", "Eigenvalues and labels at the three vertices");
  double s_gamma = 0.0, s_temp = 0.1;
  Game s_game;
  Common s_common;
  stability->add_option("--gamma", s_gamma, "Entanglement angle in [0, pi/2]")->required();
  stability->add_option("--temp", s_temp, "Selection temperature")->capture_default_str();
  s_game.add_to(stability);
  s_common.add_to(stability, "");

  // trajectory
  auto* trajectory = app.add_subcommand("trajectory", "Integrate the mean-field equation");
  double t_gamma = 0.0, t_temp = 0.1, t_end = 100.0, t_dt = 0.01;
  std::vector<double> t_rho0{1.0 / 3, 1.0 / 3, 1.0 / 3};
  std::size_t t_stride = 10;
  Game t_game;
  Common t_common;
  trajectory->add_option("--gamma", t_gamma, "Entanglement angle in [0, pi/2]")->required();
  trajectory->add_option("--temp", t_temp, "Selection temperature")->capture_default_str();
  trajectory->add_option("--rho0", t_rho0, "Initial densities C,D,Q")->delimiter(',')->expected(3);
  trajectory->add_option("--t-end", t_end, "Integration time")->capture_default_str();
  trajectory->add_option("--dt", t_dt, "RK4 step")->capture_default_str();
  trajectory->add_option("--stride", t_stride, "Record every n-th step")->capture_default_str();
  t_game.add_to(trajectory);
  t_common.add_to(trajectory, "trajectory.csv");

  // phase
  auto* phase = app.add_subcommand("phase", "Final quantum density over a (gamma, r) grid");
  double ph_gmin = 0.0, ph_gmax = 1.2, ph_rmax = 3.0, ph_temp = 0.1, ph_tend = 1e3, ph_dt = 1e-2;
  std::size_t ph_gpts = 101, ph_rpts = 101;
  Common ph_common;
  phase->add_option("--gamma-min", ph_gmin, "Smallest gamma")->capture_default_str();
  phase->add_option("--gamma-max", ph_gmax, "Largest gamma")->capture_default_str();
  phase->add_option("--gamma-points", ph_gpts, "Gamma samples")->capture_default_str();
  phase->add_option("--r-max", ph_rmax, "Largest r; r_k = r_max k / points")->capture_default_str();
  phase->add_option("--r-points", ph_rpts, "r samples")->capture_default_str();
  phase->add_option("--temp", ph_temp, "Selection temperature")->capture_default_str();
  phase->add_option("--t-end", ph_tend, "Integration time per cell")->capture_default_str();
  phase->add_option("--dt", ph_dt, "RK4 step")->capture_default_str();
  ph_common.add_to(phase, "phase.csv");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Agent-based imitation dynamics on a network");
  std::string sm_topology = "lattice", sm_mode = "sum", sm_network, sm_save;
  std::size_t sm_side = 50, sm_nodes = 2500, sm_steps = 10000, sm_window = 1000, sm_replicates = 3;
  double sm_avgdeg = 4.0, sm_rewire = 0.01, sm_temp = 0.1, sm_gmin = 0.3, sm_gmax = 1.0, sm_gstep = 0.05;
  std::optional<double> sm_gamma;
  std::vector<double> sm_rho0{1.0 / 3, 1.0 / 3, 1.0 / 3};
  Game sm_game;
  Common sm_common;
  simulate->add_option("--topology", sm_topology, "Network kind")
      ->capture_default_str()
      ->check(CLI::IsMember({"lattice", "smallworld", "er"}));
  simulate->add_option("--side", sm_side, "Lattice / small-world side length")->capture_default_str();
  simulate->add_option("--nodes", sm_nodes, "Erdos-Renyi node count")->capture_default_str();
  simulate->add_option("--avg-degree", sm_avgdeg, "Erdos-Renyi mean degree")->capture_default_str();
  simulate->add_option("--rewire-p", sm_rewire, "Small-world rewiring probability")->capture_default_str();
  simulate->add_option("--network", sm_network, "Read the network from an edge list instead");
  simulate->add_option("--save-network", sm_save, "Write the first replicate's network as an edge list");
  simulate->add_option("--temp", sm_temp, "Selection temperature")->capture_default_str();
  simulate->add_option("--steps", sm_steps, "Sweeps per run")->capture_default_str();
  simulate->add_option("--window", sm_window, "Trailing sweeps averaged")->capture_default_str();
  simulate->add_option("--replicates", sm_replicates, "Independent runs per gamma")->capture_default_str();
  simulate->add_option("--gamma-min", sm_gmin, "Scan start")->capture_default_str();
  simulate->add_option("--gamma-max", sm_gmax, "Scan end")->capture_default_str();
  simulate->add_option("--gamma-step", sm_gstep, "Scan spacing")->capture_default_str();
  simulate->add_option("--gamma", sm_gamma, "Single gamma: write the frequency series instead of a scan");
  simulate->add_option("--rho0", sm_rho0, "Initial fractions C,D,Q")->delimiter(',')->expected(3);
  simulate->add_option("--payoff-mode", sm_mode, "Accumulated or degree-averaged payoff")
      ->capture_default_str()
      ->check(CLI::IsMember({"sum", "average"}));
  sm_game.add_to(simulate);
  sm_common.add_to(simulate, "simulate.csv", true);

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Exact master equation for a small well-mixed population");
  int or_n = 20;
  double or_gamma = 0.0, or_temp = 0.1, or_tend = 5.0;
  std::optional<double> or_dt;
  std::vector<int> or_init;
  std::size_t or_stride = 10;
  Game or_game;
  Common or_common;
  oracle->add_option("--N", or_n, "Population size (1..40)")->capture_default_str();
  oracle->add_option("--gamma", or_gamma, "Entanglement angle in [0, pi/2]")->required();
  oracle->add_option("--temp", or_temp, "Selection temperature")->capture_default_str();
  oracle->add_option("--t-end", or_tend, "Integration time")->capture_default_str();
  oracle->add_option("--dt", or_dt, "RK4 step (default: largest stable step)");
  oracle->add_option("--init", or_init, "Initial counts nC,nD,nQ (default: near-even split)")->delimiter(',')->expected(3);
  oracle->add_option("--stride", or_stride, "Record every n-th step")->capture_default_str();
  or_game.add_to(oracle);
  or_common.add_to(oracle, "oracle.csv");

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(args, {"payoffs", "stability", "trajectory", "phase", "simulate", "oracle"});
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (payoffs->parsed()) {
      const Entanglement g(p_gamma);
      const PayoffTable table = p_game.table();
      const Mat3 circuit = quantum::payoff_matrix_from_circuit(g, table);
      const Mat3 closed = meanfield::effective_payoff_matrix(table, g);
      const double dev = (circuit - closed).cwiseAbs().maxCoeff();
      print_matrix("circuit", circuit);
      print_matrix("closed form", closed);
      std::cout << "max deviation " << dev << '\n';
      if (!p_common.out.empty()) {
        auto os = open_out(p_common.out);
        csv::Writer w(os);
        w.header({"row", "col", "circuit", "closed_form"});
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) w.row(i, j, circuit(i, j), closed(i, j));
        write_sidecar(*payoffs, p_common.out, {{"max_deviation", dev}});
      }
      if (!(dev < kPayoffTolerance)) {
        std::cerr << "error: circuit and closed-form payoffs differ by " << dev << '\n';
        return 2;
      }
      return 0;
    }

    if (stability->parsed()) {
      const PayoffTable table = s_game.table();
      const auto reports = meanfield::classify_game(table, Entanglement(s_gamma), Temperature(s_temp));
      const auto crit = meanfield::critical_gammas(table);
      for (const auto& rep : reports) {
        std::cout << label(rep.vertex) << ':';
        for (double ev : rep.eigenvalues) std::cout << ' ' << fmt6(ev);
        std::cout << "  " << alv::to_string(rep.classification) << '\n';
      }
      std::cout << "quantum onset gamma " << crit.quantum_onset << ", defection limit gamma " << crit.defection_limit
                << '\n';
      if (!s_common.out.empty()) {
        auto os = open_out(s_common.out);
        csv::Writer w(os);
        w.header({"vertex", "ev_0", "ev_1", "ev_2", "classification"});
        json labels = json::object();
        for (const auto& rep : reports) {
          w.row(static_cast<int>(index(rep.vertex)), rep.eigenvalues[0], rep.eigenvalues[1], rep.eigenvalues[2],
                static_cast<int>(rep.classification));
          labels[std::string(1, label(rep.vertex))] = alv::to_string(rep.classification);
        }
        write_sidecar(*stability, s_common.out,
                      {{"labels", labels},
                       {"classification_codes", {"stable", "unstable", "saddle", "degenerate"}},
                       {"quantum_onset", crit.quantum_onset},
                       {"defection_limit", crit.defection_limit}});
      }
      return 0;
    }

    if (trajectory->parsed()) {
      const PayoffTable table = t_game.table();
      const Entanglement g(t_gamma);
      const Temperature temp(t_temp);
      const Vec3 rho0 = parse_simplex(t_rho0, "rho0");
      const Mat3 m = meanfield::effective_payoff_matrix(table, g);
      alv::IntegrateOptions opts;
      opts.record_stride = t_stride;
      opts.stop_on_convergence = false;
      const auto traj = alv::integrate(rho0, [&](const Vec3& rho) { return Vec3(m * rho); }, temp, t_end, t_dt, opts);
      auto os = open_out(t_common.out);
      csv::write_trajectory(os, traj);
      const Vec3 fin = traj.final_state();
      write_sidecar(*trajectory, t_common.out,
                    {{"final", {fin[0], fin[1], fin[2]}}, {"max_correction", traj.max_correction}});
      return 0;
    }

    if (phase->parsed()) {
      if (ph_rpts < 1 || !(ph_rmax > 0.0)) throw std::invalid_argument("r axis: need points >= 1 and r-max > 0");
      const auto gammas = linspace(ph_gmin, ph_gmax, ph_gpts);
      std::vector<double> rs(ph_rpts);
      for (std::size_t k = 0; k < ph_rpts; ++k) rs[k] = ph_rmax * static_cast<double>(k + 1) / static_cast<double>(ph_rpts);
      meanfield::SweepConfig cfg;
      cfg.temp = ph_temp;
      cfg.t_end = ph_tend;
      cfg.dt = ph_dt;
      cfg.workers = ph_common.workers;
      const auto grid = meanfield::sweep_phase_diagram(gammas, rs, cfg);
      auto os = open_out(ph_common.out);
      csv::write_phase_grid(os, grid);

      json boundary = json::array();
      std::size_t omitted = 0;
      for (double g : gammas) {
        if (g < std::numbers::pi / 4.0) boundary.push_back({{"gamma", g}, {"r", meanfield::phase_boundary_r(g)}});
        else ++omitted;
      }
      std::size_t failed = 0, unconverged = 0;
      for (const auto& c : grid.cells) {
        failed += c.failed;
        unconverged += !c.converged;
      }
      json extra{{"boundary", boundary}, {"failed_cells", failed}, {"unconverged_cells", unconverged}};
      if (omitted > 0)
        extra["boundary_note"] = std::to_string(omitted) +
                                 " gamma samples at or above pi/4 omitted: the boundary r diverges there";
      write_sidecar(*phase, ph_common.out, extra);
      return failed > 0 ? 2 : 0;
    }

    if (simulate->parsed()) {
      const PayoffTable table = sm_game.table();
      const Temperature temp(sm_temp);
      const Vec3 rho0 = parse_simplex(sm_rho0, "rho0");
      const auto mode = sm_mode == "average" ? sim::PayoffMode::average : sim::PayoffMode::sum;
      // Validate sizes before building anything.
      sim::SimParams{Mat3::Zero(), temp, sm_steps, mode, sm_window}.validate();
      if (sm_replicates < 1) throw std::invalid_argument("replicates must be >= 1");

      sim::NetworkBuilder build;
      if (!sm_network.empty()) {
        std::ifstream is(sm_network);
        if (!is) throw std::invalid_argument("cannot read network '" + sm_network + "'");
        const net::Network fixed = net::read_edge_list(is);
        build = [fixed](std::uint64_t) { return fixed; };
      } else if (sm_topology == "lattice") {
        const std::size_t side = sm_side;
        if (side < 2) throw std::invalid_argument("square lattice: side must be >= 2");
        build = [side](std::uint64_t) { return net::build_square_lattice(side); };
      } else if (sm_topology == "smallworld") {
        const std::size_t side = sm_side;
        const double p = sm_rewire;
        if (side < 2) throw std::invalid_argument("small world: side must be >= 2");
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("small world: rewire-p must lie in [0, 1]");
        build = [side, p](std::uint64_t s) { return net::build_small_world(side, p, s); };
      } else {
        const std::size_t n = sm_nodes;
        const double k = sm_avgdeg;
        if (!(n >= 2 && k > 0.0 && k < static_cast<double>(n - 1)))
          throw std::invalid_argument("erdos-renyi: need nodes >= 2 and 0 < avg-degree < nodes - 1");
        build = [n, k](std::uint64_t s) { return net::build_erdos_renyi(n, k, s); };
      }

      const std::uint64_t seed = sm_common.seed;
      if (!sm_save.empty()) {
        auto os = open_out(sm_save);
        net::write_edge_list(os, build(rng::derive_seed(seed, sim::kNetworkStream, 0)));
      }

      if (sm_gamma) {
        const auto params = sim::SimParams::quantum(table, Entanglement(*sm_gamma), temp, sm_steps, sm_window, mode);
        const net::Network g = build(rng::derive_seed(seed, sim::kNetworkStream, 0));
        const auto res = sim::run_experiment(g, params, rho0, rng::derive_seed(seed, 0, 0));
        auto os = open_out(sm_common.out);
        csv::write_series(os, res.series);
        write_sidecar(*simulate, sm_common.out,
                      {{"tail_mean", {res.tail_mean[0], res.tail_mean[1], res.tail_mean[2]}},
                       {"nodes", g.num_nodes()},
                       {"edges", g.num_edges()}});
        return 0;
      }

      sim::ScanTemplate tmpl{table, temp, sm_steps, sm_window, mode, rho0};
      const auto gammas = axis(sm_gmin, sm_gmax, sm_gstep);
      for (double g : gammas) (void)Entanglement(g);
      const auto scan = sim::bifurcation_scan(build, tmpl, gammas, sm_replicates, seed, sm_common.workers);
      auto os = open_out(sm_common.out);
      csv::write_scan(os, scan);
      json per = json::array();
      for (const auto& c : scan.replicate_crossings) per.push_back(c ? json(*c) : json(nullptr));
      write_sidecar(*simulate, sm_common.out,
                    {{"crossing", scan.crossing ? json(*scan.crossing) : json(nullptr)},
                     {"crossing_std_error", scan.crossing_std_error},
                     {"replicate_crossings", per}});
      if (scan.crossing) std::cout << "crossing gamma " << *scan.crossing << '\n';
      else std::cout << "no crossing in the scanned range\n";
      return 0;
    }

    if (oracle->parsed()) {
      master::check_population(or_n);
      const PayoffTable table = or_game.table();
      const master::RateModel model{table, Entanglement(or_gamma), Temperature(or_temp)};
      master::Configuration init;
      if (or_init.empty()) init = {{or_n / 3, or_n / 3, or_n - 2 * (or_n / 3)}};
      else {
        init = {{or_init[0], or_init[1], or_init[2]}};
        if (init.size() != or_n || *std::min_element(init.n.begin(), init.n.end()) < 0)
          throw std::invalid_argument("init: counts must be nonnegative and sum to N");
      }
      const master::MasterEquation me(or_n, model);
      double dt = or_dt.value_or(me.max_stable_dt());
      if (!std::isfinite(dt)) dt = or_tend > 0.0 ? or_tend : 1.0;
      const auto traj = me.evolve(master::point_mass(init), or_tend, dt, or_stride);
      auto os = open_out(or_common.out);
      csv::write_occupation(os, traj);

      const Vec3 occ = master::mean_occupation(traj.states.back());
      const Strategy exact = master::dominant(occ);
      // Mean-field reference from the same starting densities.
      const Mat3 m = meanfield::effective_payoff_matrix(table, model.gamma);
      const Vec3 rho_init = Vec3(init.n[0], init.n[1], init.n[2]) / static_cast<double>(or_n);
      alv::IntegrateOptions opts;
      opts.record_stride = std::numeric_limits<std::size_t>::max();
      const auto mf = alv::integrate(rho_init, [&](const Vec3& rho) { return Vec3(m * rho); }, model.temp, 1e3, 1e-2, opts);
      const Strategy mean_field = master::dominant(mf.final_state());
      std::string verdict = std::string(1, label(exact)) + " dominant, ";
      verdict += exact == mean_field ? "agrees with mean field"
                                     : std::string("disagrees with mean field (") + label(mean_field) + " dominant)";
      std::cout << verdict << '\n';
      write_sidecar(*oracle, or_common.out,
                    {{"verdict", verdict},
                     {"dt", dt},
                     {"max_leak", traj.max_leak},
                     {"final_mean_occupation", {occ[0], occ[1], occ[2]}}});
      return 0;
    }
  } catch (const contract_violation& e) {
    std::cerr << "numerical contract breached: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
