#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace qalv {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Raised when a computation finishes but breaks one of its numerical
// guarantees (simplex drift, probability leak, oracle mismatch).
class contract_violation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Strategy : std::uint8_t { C = 0, D = 1, Q = 2 };

inline constexpr std::array<Strategy, 3> kStrategies{Strategy::C, Strategy::D, Strategy::Q};

constexpr std::size_t index(Strategy s) { return static_cast<std::size_t>(s); }

constexpr char label(Strategy s) {
  switch (s) {
    case Strategy::C: return 'C';
    case Strategy::D: return 'D';
    case Strategy::Q: return 'Q';
  }
  return '?';
}

/// Classical prisoner's dilemma payoffs. Construction enforces T > R > P > S.
class PayoffTable {
 public:
  PayoffTable(double T, double R, double P, double S) : T_(T), R_(R), P_(P), S_(S) {
    if (!(std::isfinite(T) && std::isfinite(R) && std::isfinite(P) && std::isfinite(S)))
      throw std::invalid_argument("payoff table: entries must be finite");
    if (!(T > R)) throw std::invalid_argument("payoff table: ordering T > R violated");
    if (!(R > P)) throw std::invalid_argument("payoff table: ordering R > P violated");
    if (!(P > S)) throw std::invalid_argument("payoff table: ordering P > S violated");
  }

  /// The one-parameter family T = 1 + r, R = 1, P = 0, S = -r.
  static PayoffTable game_family(double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("game family: r must be > 0");
    return {1.0 + r, 1.0, 0.0, -r};
  }

  double T() const { return T_; }
  double R() const { return R_; }
  double P() const { return P_; }
  double S() const { return S_; }

  PayoffTable scaled(double k) const { return {k * T_, k * R_, k * P_, k * S_}; }

 private:
  double T_, R_, P_, S_;
};

/// Entanglement angle gamma, restricted to [0, pi/2] where cos^2 is monotone.
class Entanglement {
 public:
  explicit Entanglement(double gamma) : gamma_(gamma) {
    if (!(gamma >= 0.0 && gamma <= std::numbers::pi / 2.0))
      throw std::invalid_argument("entanglement: gamma must lie in [0, pi/2], got " +
                                  std::to_string(gamma));
  }
  double gamma() const { return gamma_; }
  /// Mixing weight cos^2(gamma) of the effective payoffs.
  double lambda() const {
    const double c = std::cos(gamma_);
    return c * c;
  }

 private:
  double gamma_;
};

/// Selection temperature of the Fermi imitation rule (not the temptation payoff).
class Temperature {
 public:
  explicit Temperature(double value) : value_(value) {
    if (!(value > 0.0) || !std::isfinite(value))
      throw std::invalid_argument("temperature must be > 0");
  }
  double value() const { return value_; }

 private:
  double value_;
};

inline bool on_simplex(const Vec3& rho, double tol = 1e-9) {
  return rho.minCoeff() >= -tol && std::abs(rho.sum() - 1.0) <= tol;
}

inline Vec3 vertex(Strategy s) {
  Vec3 v = Vec3::Zero();
  v[static_cast<Eigen::Index>(index(s))] = 1.0;
  return v;
}

}  // namespace qalv
