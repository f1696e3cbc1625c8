#pragma once

// Comma-separated output with a header row, '.' decimal point and LF line
// endings. Reals are written with 17 significant digits so they read back
// bit-for-bit.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qalv/agent_sim.hpp"
#include "qalv/alv_dynamics.hpp"
#include "qalv/master_oracle.hpp"
#include "qalv/meanfield_phase.hpp"

namespace qalv::csv {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Writer {
 public:
  explicit Writer(std::ostream& os) : os_(os) {}

  Writer& header(std::initializer_list<const char*> cols) {
    bool first = true;
    for (const char* c : cols) {
      if (!first) os_ << ',';
      os_ << c;
      first = false;
    }
    os_ << '\n';
    return *this;
  }

  template <class... Ts>
  Writer& row(const Ts&... values) {
    bool first = true;
    ((os_ << (first ? "" : ",") << cell(values), first = false), ...);
    os_ << '\n';
    return *this;
  }

 private:
  static std::string cell(double v) { return fmt(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(bool v) { return v ? "1" : "0"; }

  std::ostream& os_;
};

/// Parsed table: header names and numeric rows.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw std::invalid_argument("csv: no column named '" + name + "'");
  }
};

inline Table read(std::istream& is) {
  Table t;
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("csv: empty input");
  {
    std::stringstream ss(line);
    std::string name;
    while (std::getline(ss, name, ',')) t.columns.push_back(name);
  }
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      // strtod also accepts "nan", which failed phase cells carry.
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0')
        throw std::invalid_argument("csv: bad number '" + cell + "' on line " + std::to_string(lineno));
      row.push_back(v);
    }
    if (row.size() != t.columns.size())
      throw std::invalid_argument("csv: wrong field count on line " + std::to_string(lineno));
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline void write_trajectory(std::ostream& os, const alv::Trajectory& traj) {
  Writer w(os);
  w.header({"t", "rho_C", "rho_D", "rho_Q"});
  for (const auto& p : traj.points) w.row(p.t, p.rho[0], p.rho[1], p.rho[2]);
}

inline void write_phase_grid(std::ostream& os, const meanfield::PhaseGrid& grid) {
  Writer w(os);
  w.header({"gamma", "r", "rho_C", "rho_D", "rho_Q", "converged"});
  for (std::size_t ir = 0; ir < grid.r_axis.size(); ++ir)
    for (std::size_t ig = 0; ig < grid.gamma_axis.size(); ++ig) {
      const auto& c = grid.cell(ir, ig);
      w.row(grid.gamma_axis[ig], grid.r_axis[ir], c.rho[0], c.rho[1], c.rho[2], c.converged);
    }
}

inline void write_occupation(std::ostream& os, const master::MasterTrajectory& traj) {
  Writer w(os);
  w.header({"t", "mean_C", "mean_D", "mean_Q"});
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const Vec3 m = master::mean_occupation(traj.states[k]);
    w.row(traj.times[k], m[0], m[1], m[2]);
  }
}

inline void write_series(std::ostream& os, const std::vector<Vec3>& series) {
  Writer w(os);
  w.header({"sweep", "rho_C", "rho_D", "rho_Q"});
  for (std::size_t s = 0; s < series.size(); ++s) w.row(s, series[s][0], series[s][1], series[s][2]);
}

inline void write_scan(std::ostream& os, const sim::ScanResult& scan) {
  Writer w(os);
  w.header({"gamma", "mean_rho_C", "mean_rho_D", "mean_rho_Q", "se_rho_Q", "replicates"});
  for (std::size_t g = 0; g < scan.gamma_axis.size(); ++g)
    w.row(scan.gamma_axis[g], scan.mean[g][0], scan.mean[g][1], scan.mean[g][2], scan.std_error[g][2],
          scan.replicates);
}

}  // namespace qalv::csv
