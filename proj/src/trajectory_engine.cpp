#include "qpf/trajectory_engine.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "qpf/numerics.hpp"

namespace qpf {

namespace {

constexpr double kLambdaRescaleFloor = 1e-250;

/// Drift of the deterministic filtered equation in (y, z).
inline void filtered_rhs(const Params& p, double y, double z, double& dy, double& dz) {
  const double go = p.gamma_o;
  const double gu = p.gamma_u;
  dy = -p.omega * z - 0.5 * gu * y + 0.5 * go * y * z;
  dz = p.omega * y - gu * (1.0 + z) + 0.5 * go * (z * z - 1.0);
}

}  // namespace

StepResult diffusive_measurement_update(PureAngle theta, double lambda, double u,
                                        double dt, const Params& params) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("diffusive_measurement_update: dt must be positive");
  }
  const double th = theta.theta;
  const double s = std::sin(th);
  const double c = std::cos(th);
  const double go = params.gamma_o;
  const double gu = params.gamma_u;
  const double u2dt2 = u * u * dt * dt;
  const double sqg = std::sqrt(gu);

  const double th_next = th - dt * params.omega + dt * 0.5 * go * s +
                         (dt - u2dt2) * 0.5 * gu * s - u2dt2 * 0.5 * gu * c * s -
                         u * dt * sqg * (c + 1.0);
  const double factor = 1.0 - dt * 0.5 * go * (c + 1.0) - u * dt * sqg * s -
                        (dt - u2dt2) * 0.5 * gu * (c + 1.0);
  return StepResult{PureAngle{th_next}, lambda * factor};
}

BlochYZ step_true_sme(const BlochYZ& state, double u, double dt, const Params& params) {
  const double R = std::hypot(state.y, state.z);
  if (std::abs(R - 1.0) > 1e-9) {
    throw std::invalid_argument("step_true_sme: input state must be pure (R = 1)");
  }
  const double y = state.y;
  const double z = state.z;
  const double sqg = std::sqrt(params.gamma_u);

  double dy = 0.0;
  double dz = 0.0;
  filtered_rhs(params, y, z, dy, dz);
  const double innovation = (u + sqg * y) * dt;
  const double y_next = y + dt * dy + innovation * sqg * (y * y - (1.0 + z));
  const double z_next = z + dt * dz + innovation * sqg * y * (1.0 + z);

  const double r_next = std::hypot(y_next, z_next);
  if (!(r_next > 0.0)) {
    throw std::runtime_error("step_true_sme: state collapsed to zero radius");
  }
  return BlochYZ{y_next / r_next, z_next / r_next, StateKind::state};
}

WeightedState step_unnormalized_sme(const WeightedState& in, double u, double dt,
                                    const Params& params) {
  if (!(in.lambda > 0.0)) {
    throw std::invalid_argument("step_unnormalized_sme: lambda must be positive");
  }
  const double R = std::hypot(in.state.y, in.state.z);
  if (std::abs(R - 1.0) > 1e-6) {
    throw std::invalid_argument(
        "step_unnormalized_sme: the unnormalized true state is lambda times a pure "
        "state; input radius must be 1");
  }
  const double theta = std::atan2(in.state.y, in.state.z);
  StepResult next = diffusive_measurement_update(PureAngle{theta}, in.lambda, u, dt, params);
  WeightedState out;
  out.state = state_from_angle(next.theta);
  out.lambda = next.lambda;
  out.log_scale = in.log_scale;
  if (out.lambda > 0.0 && out.lambda < kLambdaRescaleFloor) {
    out.log_scale += std::log(out.lambda);
    out.lambda = 1.0;
  }
  return out;
}

BlochYZ step_filtered(const BlochYZ& state, double dt, const Params& params) {
  auto rhs = [&params](double, const std::array<double, 2>& v) {
    std::array<double, 2> d{};
    filtered_rhs(params, v[0], v[1], d[0], d[1]);
    return d;
  };
  const std::array<double, 2> in{state.y, state.z};
  const std::array<double, 2> out = rk4_step(rhs, 0.0, in, dt);
  return BlochYZ{out[0], out[1], StateKind::state};
}

FilteredTrajectory run_filtered(const Params& params) {
  const int n = params.n_steps();
  FilteredTrajectory traj;
  traj.dt = params.dt;
  traj.states.reserve(n + 1);
  traj.norm_trace.reserve(n + 1);

  // Evolve (m, y, z) together: the norm obeys dm/dt = -(gamma_o/2)(1+z) m
  // along the filtered solution.
  auto rhs = [&params](double, const std::array<double, 3>& v) {
    std::array<double, 3> d{};
    filtered_rhs(params, v[1], v[2], d[1], d[2]);
    d[0] = -0.5 * params.gamma_o * (1.0 + v[2]) * v[0];
    return d;
  };

  std::array<double, 3> v = {1.0, 0.0, -1.0};
  traj.states.push_back(BlochYZ{v[1], v[2], StateKind::state});
  traj.norm_trace.push_back(v[0]);
  for (int k = 0; k < n; ++k) {
    v = rk4_step(rhs, k * params.dt, v, params.dt);
    traj.states.push_back(BlochYZ{v[1], v[2], StateKind::state});
    traj.norm_trace.push_back(v[0]);
  }
  return traj;
}

TrueTrajectory sample_ostensible_trajectory(const Params& params, Rng& rng) {
  const int n = params.n_steps();
  UnknownRecord record;
  record.dt = params.dt;
  record.t0 = 0.0;
  record.values.resize(n);
  const double sigma = 1.0 / std::sqrt(params.dt);
  for (double& u : record.values) u = sigma * rng.normal();
  return run_true_from_record(params, record);
}

TrueTrajectory run_true_from_record(const Params& params, const UnknownRecord& record,
                                    PureAngle theta0) {
  const int n = static_cast<int>(record.values.size());
  TrueTrajectory traj;
  traj.dt = record.dt;
  traj.record = record;
  traj.thetas.reserve(n + 1);
  traj.lambdas.reserve(n + 1);
  traj.thetas.push_back(theta0);
  traj.lambdas.push_back(1.0);

  PureAngle theta = theta0;
  double lambda = 1.0;
  for (int k = 0; k < n; ++k) {
    const StepResult next =
        diffusive_measurement_update(theta, lambda, record.values[k], record.dt, params);
    theta = next.theta;
    lambda = next.lambda;
    traj.thetas.push_back(theta);
    traj.lambdas.push_back(lambda);
  }
  return traj;
}

std::array<double, 3> no_jump_rhs(const Params& params, const std::array<double, 3>& v) {
  const double go = params.gamma_o;
  const double gu = params.gamma_u;
  const double m = v[0];
  const double Y = v[1];
  const double Z = v[2];
  return {
      -0.5 * go * (m + Z),
      -0.5 * (go + gu) * Y - params.omega * Z,
      -(0.5 * go + gu) * (m + Z) + params.omega * Y,
  };
}

std::array<double, 3> propagate_no_jump(const Params& params, std::array<double, 3> v,
                                        double t, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("propagate_no_jump: dt must be positive");
  }
  auto rhs = [&params](double, const std::array<double, 3>& x) {
    return no_jump_rhs(params, x);
  };
  const int n = static_cast<int>(std::llround(t / dt));
  for (int k = 0; k < n; ++k) v = rk4_step(rhs, k * dt, v, dt);
  const double rem = t - n * dt;
  if (std::abs(rem) > 1e-12 * std::max(1.0, t)) {
    v = rk4_step(rhs, n * dt, v, rem);
  }
  return v;
}

double WaitingTimeTable::quantile(double x) const {
  if (!(x >= 0.0 && x < 1.0)) {
    throw std::invalid_argument("WaitingTimeTable::quantile: x must be in [0, 1)");
  }
  // CDF at ts[i] is 1 - survival[i], monotone increasing.
  for (std::size_t i = 1; i < ts.size(); ++i) {
    const double c0 = 1.0 - survival[i - 1];
    const double c1 = 1.0 - survival[i];
    if (x <= c1) {
      if (c1 <= c0) return ts[i];
      const double f = (x - c0) / (c1 - c0);
      return ts[i - 1] + f * (ts[i] - ts[i - 1]);
    }
  }
  throw std::runtime_error(
      "WaitingTimeTable::quantile: requested mass beyond tabulated range; extend T_max");
}

WaitingTimeTable waiting_time_pdf(const Params& params, double T_max, double dt,
                                  BlochYZ initial) {
  if (dt <= 0.0) dt = params.dt;
  const int n = static_cast<int>(std::llround(T_max / dt));
  auto rhs = [&params](double, const std::array<double, 3>& x) {
    return no_jump_rhs(params, x);
  };

  WaitingTimeTable table;
  table.dt = dt;
  table.ts.reserve(n + 1);
  table.pdf.reserve(n + 1);
  table.survival.reserve(n + 1);

  std::array<double, 3> v = {1.0, initial.y, initial.z};
  for (int k = 0; k <= n; ++k) {
    table.ts.push_back(k * dt);
    table.pdf.push_back(0.5 * params.gamma_o * (v[0] + v[2]));
    table.survival.push_back(v[0]);
    if (k < n) v = rk4_step(rhs, k * dt, v, dt);
  }
  table.total = trapezoid(table.pdf, dt);
  if (table.total < 0.99) {
    throw std::runtime_error(
        "waiting_time_pdf: only " + std::to_string(table.total) +
        " of the jump-time mass lies in [0, T_max]; extend T_max");
  }
  // The trapezoid rule overshoots convex densities by O(dt^2); allow that
  // much above 1 but no more.
  if (table.total > 1.0 + 1e-6) {
    throw std::runtime_error("waiting_time_pdf: density integrates above 1");
  }
  return table;
}

BlochYZ lindblad_reference(const Params& params, double t, BlochYZ initial) {
  const double g = params.gamma_total();
  Eigen::Matrix3d G;
  G << 0.0, 0.0, 0.0,
       0.0, -0.5 * g, -params.omega,
       -g, params.omega, -g;
  const Eigen::Matrix3d U = (G * t).exp();
  const Eigen::Vector3d v0(1.0, initial.y, initial.z);
  const Eigen::Vector3d v = U * v0;
  return BlochYZ{v(1), v(2), StateKind::state};
}

LindbladSample sample_lindblad_trajectory(const Params& params, double t, Rng& rng) {
  const double dt = params.dt;
  const int n = static_cast<int>(std::llround(t / dt));
  const double sigma = 1.0 / std::sqrt(dt);
  const double go = params.gamma_o;
  const double gu = params.gamma_u;
  const double sqg = std::sqrt(gu);

  LindbladSample out;
  out.dt = dt;
  out.thetas.reserve(static_cast<std::size_t>(n) + 1);
  out.lambdas.reserve(static_cast<std::size_t>(n) + 1);

  double theta = kPi;
  double lambda = 1.0;
  out.thetas.push_back(theta);
  out.lambdas.push_back(lambda);
  for (int k = 0; k < n; ++k) {
    const double u = sigma * rng.normal();
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const double u2dt2 = u * u * dt * dt;

    // Diffusive part of the map only; the observed no-jump factor is
    // replaced by sampling the jump branch at its actual probability.
    const double diff_factor =
        1.0 - u * dt * sqg * s - (dt - u2dt2) * 0.5 * gu * (c + 1.0);
    const double p_jump = 0.5 * go * dt * (1.0 + c);

    lambda *= diff_factor;
    if (rng.uniform01() < p_jump) {
      theta = kPi;
    } else {
      theta = wrap_angle(theta - dt * params.omega + dt * 0.5 * go * s +
                         (dt - u2dt2) * 0.5 * gu * s - u2dt2 * 0.5 * gu * c * s -
                         u * dt * sqg * (c + 1.0));
    }
    out.thetas.push_back(theta);
    out.lambdas.push_back(lambda);
  }
  return out;
}

}  // namespace qpf
