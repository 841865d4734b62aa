#pragma once

#include <array>
#include <vector>

#include "qpf/core_types.hpp"
#include "qpf/rng.hpp"

namespace qpf {

/// Pure true-state trajectory with its norm bookkeeping and the unobserved
/// record that generated it.
struct TrueTrajectory {
  std::vector<PureAngle> thetas;  ///< length n_steps + 1
  std::vector<double> lambdas;    ///< lambdas[0] = 1, strictly positive
  UnknownRecord record;           ///< length n_steps
  double dt = 0.0;

  double theta(std::size_t i) const { return thetas[i].theta; }
};

/// Deterministic filtered trajectory (past observations only).
struct FilteredTrajectory {
  std::vector<BlochYZ> states;     ///< length n_steps + 1, radius <= 1
  std::vector<double> norm_trace;  ///< Tr of the unnormalized filtered state
  double dt = 0.0;
};

struct StepResult {
  PureAngle theta;
  double lambda = 1.0;
};

/// Norm-carrying pure state for unnormalized stepping. The physical norm is
/// lambda * exp(log_scale); the mantissa is rescaled when it gets within a
/// few hundred orders of magnitude of underflow.
struct WeightedState {
  BlochYZ state;
  double lambda = 1.0;
  double log_scale = 0.0;
};

/// One step of the discrete no-jump measurement update for (theta, lambda),
/// keeping the u^2 dt^2 terms exactly as they appear in the map.
StepResult diffusive_measurement_update(PureAngle theta, double lambda, double u,
                                        double dt, const Params& params);

/// Euler-Maruyama step of the normalized true-state SME in (y, z), followed
/// by exact projection back to the unit circle (the true state is pure by
/// construction; the raw scheme drifts off the circle at O(dt) per step).
/// Throws std::invalid_argument unless the input radius is 1 within 1e-9.
BlochYZ step_true_sme(const BlochYZ& state, double u, double dt, const Params& params);

/// One step of the unnormalized true-state equation via the exact discrete
/// map; trace bookkeeping rides in lambda/log_scale. Requires a pure input
/// state (radius 1 within 1e-6).
WeightedState step_unnormalized_sme(const WeightedState& in, double u, double dt,
                                    const Params& params);

/// One step of the deterministic filtered equation. Integrated with a
/// classic fourth-order stage so that the unitary limit keeps the radius at
/// 1 instead of inflating it, which first-order Euler does at this dt.
BlochYZ step_filtered(const BlochYZ& state, double dt, const Params& params);

/// Filtered trajectory from the ground state over params.T, together with
/// the norm trace of the unnormalized filtered state.
FilteredTrajectory run_filtered(const Params& params);

/// Samples a no-jump true trajectory with u_t i.i.d. Normal(0, 1/dt)
/// (ostensible statistics). The final weight for averaging is lambda.
TrueTrajectory sample_ostensible_trajectory(const Params& params, Rng& rng);

/// Replays the discrete map along a fixed unobserved record.
TrueTrajectory run_true_from_record(const Params& params, const UnknownRecord& record,
                                    PureAngle theta0 = PureAngle{kPi});

/// Right-hand side of the linear no-jump equation for v = (m, Y, Z), the
/// trace and unnormalized Bloch components of the filtered state.
std::array<double, 3> no_jump_rhs(const Params& params, const std::array<double, 3>& v);

/// RK4 propagation of the linear no-jump system over time t in steps of dt.
std::array<double, 3> propagate_no_jump(const Params& params, std::array<double, 3> v,
                                        double t, double dt);

/// Waiting-time distribution for the first observed jump.
struct WaitingTimeTable {
  std::vector<double> ts;
  std::vector<double> pdf;       ///< jump-time density at ts
  std::vector<double> survival;  ///< no-jump probability m(t)
  double dt = 0.0;
  double total = 0.0;  ///< integral of pdf over [0, T_max]

  /// Inverse CDF by monotone interpolation. Throws std::runtime_error when
  /// x is not reachable within the tabulated range.
  double quantile(double x) const;
};

/// Tabulates the jump-time density gamma_o (m + Z) / 2 from the given
/// initial state (default ground). Throws std::runtime_error when the mass
/// captured by T_max falls below 0.99, with a message saying to extend it.
WaitingTimeTable waiting_time_pdf(const Params& params, double T_max = 20.0,
                                  double dt = -1.0,
                                  BlochYZ initial = BlochYZ{0.0, -1.0, StateKind::state});

/// Unconditioned (full master equation) Bloch vector at time t via the
/// matrix exponential of the affine generator; the reference for Monte
/// Carlo convergence checks.
BlochYZ lindblad_reference(const Params& params, double t,
                           BlochYZ initial = BlochYZ{0.0, -1.0, StateKind::state});

/// Samples a trajectory of the full master equation by drawing u from the
/// ostensible density, keeping only the diffusive trace factor in lambda,
/// and sampling observed jumps at their actual branch probability (jump
/// resets to the ground state, lambda untouched). The weighted ensemble
/// mean of lambda * S(theta) converges to lindblad_reference.
struct LindbladSample {
  std::vector<double> thetas;   ///< length n+1 with n = t/dt steps
  std::vector<double> lambdas;  ///< running diffusive trace factor, lambdas[0] = 1
  double dt = 0.0;

  double theta_T() const { return thetas.back(); }
  double lambda_T() const { return lambdas.back(); }
};
LindbladSample sample_lindblad_trajectory(const Params& params, double t, Rng& rng);

}  // namespace qpf
