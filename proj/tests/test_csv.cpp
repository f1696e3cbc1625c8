#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "qalv/csv.hpp"

using namespace qalv;

namespace {

csv::Table reparse(const std::string& text) {
  std::istringstream is(text);
  return csv::read(is);
}

}  // namespace

TEST(Csv, RealsRoundTripExactly) {
  std::ostringstream os;
  csv::Writer w(os);
  w.header({"a", "b"});
  const double tricky = 0.1 + 0.2;
  w.row(tricky, std::nextafter(1.0, 2.0));
  const auto t = reparse(os.str());
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0][0], tricky);
  EXPECT_EQ(t.rows[0][1], std::nextafter(1.0, 2.0));
  EXPECT_EQ(os.str().find('\r'), std::string::npos);
}

TEST(Csv, Trajectory) {
  const auto payoff = [](const Vec3&) { return Vec3(0.0, 1.0, 0.5); };
  alv::IntegrateOptions opts;
  opts.record_stride = 10;
  const auto traj = alv::integrate(Vec3::Constant(1.0 / 3), payoff, Temperature(0.1), 2.0, 0.01, opts);
  std::ostringstream os;
  csv::write_trajectory(os, traj);
  const auto t = reparse(os.str());
  EXPECT_EQ(t.columns, (std::vector<std::string>{"t", "rho_C", "rho_D", "rho_Q"}));
  ASSERT_EQ(t.rows.size(), traj.points.size());
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    EXPECT_EQ(t.rows[k][0], traj.points[k].t);
    EXPECT_NEAR(t.rows[k][1] + t.rows[k][2] + t.rows[k][3], 1.0, 1e-12);
    if (k > 0) {
      EXPECT_GT(t.rows[k][0], t.rows[k - 1][0]);
    }
  }
}

TEST(Csv, PhaseGridWithFailedCell) {
  meanfield::PhaseGrid grid;
  grid.gamma_axis = {0.1, 0.2};
  grid.r_axis = {1.0};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  grid.cells = {{Vec3(0, 1, 0), true, false}, {Vec3(nan, nan, nan), false, true}};
  std::ostringstream os;
  csv::write_phase_grid(os, grid);
  const auto t = reparse(os.str());
  EXPECT_EQ(t.columns.back(), "converged");
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][t.column("rho_D")], 1.0);
  EXPECT_EQ(t.rows[0][t.column("converged")], 1.0);
  EXPECT_TRUE(std::isnan(t.rows[1][t.column("rho_Q")]));
  EXPECT_EQ(t.rows[1][t.column("converged")], 0.0);
}

TEST(Csv, PhaseGridRowOrder) {
  const auto grid = meanfield::sweep_phase_diagram({0.2, 1.0}, {0.5, 2.0}, meanfield::SweepConfig{});
  std::ostringstream os;
  csv::write_phase_grid(os, grid);
  const auto t = reparse(os.str());
  ASSERT_EQ(t.rows.size(), 4u);
  // r outer, gamma inner.
  EXPECT_EQ(t.rows[0][0], 0.2);
  EXPECT_EQ(t.rows[1][0], 1.0);
  EXPECT_EQ(t.rows[1][1], 0.5);
  EXPECT_EQ(t.rows[2][1], 2.0);
}

TEST(Csv, Occupation) {
  const master::MasterEquation me(6, {PayoffTable::game_family(1.0), Entanglement(0.9), Temperature(0.1)});
  const auto traj = me.evolve(master::point_mass({{2, 2, 2}}), 1.0, me.max_stable_dt(), 5);
  std::ostringstream os;
  csv::write_occupation(os, traj);
  const auto t = reparse(os.str());
  EXPECT_EQ(t.columns, (std::vector<std::string>{"t", "mean_C", "mean_D", "mean_Q"}));
  ASSERT_EQ(t.rows.size(), traj.times.size());
  for (const auto& row : t.rows) EXPECT_NEAR(row[1] + row[2] + row[3], 1.0, 1e-9);
}

TEST(Csv, SeriesAndScan) {
  std::ostringstream os;
  csv::write_series(os, {Vec3(1, 0, 0), Vec3(0.5, 0.25, 0.25)});
  const auto s = reparse(os.str());
  EXPECT_EQ(s.columns.front(), "sweep");
  EXPECT_EQ(s.rows[1][0], 1.0);
  EXPECT_EQ(s.rows[1][2], 0.25);

  sim::ScanResult scan;
  scan.gamma_axis = {0.3, 0.4};
  scan.replicates = 3;
  scan.mean = {Vec3(0, 1, 0), Vec3(0, 0.2, 0.8)};
  scan.std_error = {Vec3::Zero(), Vec3(0, 0.01, 0.02)};
  std::ostringstream os2;
  csv::write_scan(os2, scan);
  const auto t = reparse(os2.str());
  EXPECT_EQ(t.columns, (std::vector<std::string>{"gamma", "mean_rho_C", "mean_rho_D", "mean_rho_Q", "se_rho_Q", "replicates"}));
  EXPECT_EQ(t.rows[1][t.column("se_rho_Q")], 0.02);
  EXPECT_EQ(t.rows[1][t.column("replicates")], 3.0);
}

TEST(Csv, MalformedInput) {
  EXPECT_THROW(reparse(""), std::invalid_argument);
  EXPECT_THROW(reparse("a,b\n1\n"), std::invalid_argument);
  EXPECT_THROW(reparse("a,b\n1,x\n"), std::invalid_argument);
  EXPECT_THROW(reparse("a\n1\n").column("b"), std::invalid_argument);
}
