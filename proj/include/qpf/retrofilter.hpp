#pragma once

#include <vector>

#include "qpf/core_types.hpp"

namespace qpf {

/// Backward-propagated effect table on the block grid. effects[k] is the
/// renormalized effect at t = k*dt; the physical effect is
/// effects[k] * exp(log_scales[k]). All consumers are ratio-based, so the
/// scale never matters downstream.
struct EffectTrajectory {
  std::vector<Effect> effects;
  std::vector<double> log_scales;
  double dt = 0.0;

  std::size_t size() const { return effects.size(); }
};

/// Integrates the effect conditioned on "no further observed jump until the
/// one at time T" backwards from its final condition
/// (alpha, beta, zeta) = (gamma_o dt / 2, 0, gamma_o dt / 2).
/// The generator couples (alpha, beta, zeta) linearly; integration uses
/// fixed-step RK4 on the time-reversed system with per-step max-element
/// renormalization. Throws std::invalid_argument when T is not a
/// non-negative multiple of params.dt and std::runtime_error when the
/// positive-semidefiniteness margin alpha >= sqrt(beta^2+zeta^2) - 1e-12 is
/// ever lost (a sign of integration instability).
EffectTrajectory propagate_effect(const Params& params, double T);

/// Tr[E S(theta)] = alpha + zeta cos(theta) + beta sin(theta).
double effect_overlap(const Effect& effect, PureAngle theta);

}  // namespace qpf
