#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace qpf {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Wraps an angle into [0, 2*pi).
inline double wrap_angle(double theta) {
  double w = std::fmod(theta, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

/// Physical and numerical parameters for one no-jump block.
///
/// Rates are in units of 1/T_gamma and times in units of T_gamma, where
/// T_gamma = 1/(gamma_o + gamma_u) is the total decay time. The observed
/// channel is direct photodetection, the unobserved one is y-homodyne.
struct Params {
  double omega = 2.0;          ///< Rabi drive frequency.
  double gamma_o = 0.5;        ///< Observed (photodetection) coupling rate.
  double gamma_u = 0.5;        ///< Unobserved (homodyne) coupling rate.
  double dt = 1e-3;            ///< Integration step.
  double T = 4.0;              ///< Block duration; the jump happens at T.
  int theta_grid_n = 1024;     ///< Angular grid size for the PDE solvers.
  std::uint64_t seed = 1;      ///< Base RNG seed.

  double gamma_total() const { return gamma_o + gamma_u; }
  int n_steps() const { return static_cast<int>(std::llround(T / dt)); }

  /// Throws std::invalid_argument when any field violates its contract
  /// (negative rates, zero total decay, T not an integer multiple of dt,
  /// grid below 64 points).
  void validate() const;
};

enum class StateKind { state, indefinite };

/// Point on (or, for kind=indefinite, off) the y-z unit disk.
///
/// kind=state promises y^2 + z^2 <= 1 + 1e-9. kind=indefinite carries no
/// radius bound; the SWV estimator legitimately leaves the disk.
struct BlochYZ {
  double y = 0.0;
  double z = 0.0;
  StateKind kind = StateKind::state;
};

/// Checked constructor for kind=state points. Throws when the radius
/// exceeds 1 + 1e-9.
BlochYZ make_state(double y, double z);

inline BlochYZ make_indefinite(double y, double z) {
  return BlochYZ{y, z, StateKind::indefinite};
}

/// Pure state on the y-z great circle, stored as an angle in [0, 2*pi).
/// theta = 0 is the excited state, theta = pi the ground state.
struct PureAngle {
  double theta = 0.0;

  PureAngle() = default;
  explicit PureAngle(double t) : theta(wrap_angle(t)) {}
};

/// Unobserved (homodyne) measurement record: values[i] is the result for
/// the step starting at t0 + i*dt.
struct UnknownRecord {
  std::vector<double> values;
  double dt = 0.0;
  double t0 = 0.0;

  double span() const { return static_cast<double>(values.size()) * dt; }
};

/// Observed photodetection block: no clicks on [0, T), one click at T.
struct ObservedBlock {
  double T = 0.0;

  /// Throws std::invalid_argument unless T > 0.
  void validate() const;
};

/// Hermitian effect operator alpha*1 + beta*sigma_y + zeta*sigma_z.
struct Effect {
  double alpha = 1.0;
  double beta = 0.0;
  double zeta = 0.0;

  /// Positive semidefinite iff alpha >= sqrt(beta^2 + zeta^2), up to tol.
  bool is_positive_semidefinite(double tol = 0.0) const {
    return alpha + tol >= std::sqrt(beta * beta + zeta * zeta);
  }
};

struct AngleRadius {
  double theta = 0.0;
  double R = 0.0;
};

/// Bloch point of the pure state S(theta) = (1 + sin(theta) sigma_y
/// + cos(theta) sigma_z) / 2.
inline BlochYZ state_from_angle(PureAngle angle) {
  return BlochYZ{std::sin(angle.theta), std::cos(angle.theta),
                 StateKind::state};
}

/// Polar decomposition y = R sin(theta), z = R cos(theta) with theta in
/// [0, 2*pi). The maximally mixed point R = 0 maps to theta = 0 by
/// convention.
AngleRadius angle_and_radius(const BlochYZ& state);

/// Tr(rho_a rho_b) = (1 + y_a y_b + z_a z_b) / 2 for y-z circle states.
inline double trace_product(const BlochYZ& a, const BlochYZ& b) {
  return 0.5 * (1.0 + a.y * b.y + a.z * b.z);
}

}  // namespace qpf
