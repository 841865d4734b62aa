#include "qpf/retrofilter.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "qpf/numerics.hpp"

namespace qpf {

namespace {

/// Time-reversed generator for x = (alpha, beta, zeta) in s = T - t.
std::array<double, 3> adjoint_rhs(const Params& params, const std::array<double, 3>& x) {
  const double go = params.gamma_o;
  const double gu = params.gamma_u;
  const double shared = -0.5 * go * (x[0] + x[2]) - gu * x[2];
  return {shared, -0.5 * (go + gu) * x[1] + params.omega * x[2],
          shared - params.omega * x[1]};
}

}  // namespace

EffectTrajectory propagate_effect(const Params& params, double T) {
  const double dt = params.dt;
  if (!(dt > 0.0)) {
    throw std::invalid_argument("propagate_effect: dt must be positive");
  }
  if (!(T >= 0.0)) {
    throw std::invalid_argument("propagate_effect: T must be non-negative");
  }
  const long long n = std::llround(T / dt);
  if (std::abs(static_cast<double>(n) * dt - T) > 1e-9 * std::max(1.0, T)) {
    throw std::invalid_argument("propagate_effect: T must be a multiple of dt");
  }

  EffectTrajectory out;
  out.dt = dt;
  out.effects.resize(static_cast<std::size_t>(n) + 1);
  out.log_scales.resize(static_cast<std::size_t>(n) + 1);

  std::array<double, 3> x{0.5 * params.gamma_o * dt, 0.0, 0.5 * params.gamma_o * dt};
  double log_scale = 0.0;

  const auto store = [&](std::size_t k) {
    const double m = std::max({std::abs(x[0]), std::abs(x[1]), std::abs(x[2])});
    if (!(m > 0.0) || !std::isfinite(m)) {
      throw std::runtime_error("propagate_effect: effect degenerated during integration");
    }
    for (double& v : x) {
      v /= m;
    }
    log_scale += std::log(m);
    if (x[0] < std::hypot(x[1], x[2]) - 1e-12) {
      throw std::runtime_error(
          "propagate_effect: effect lost positive semidefiniteness; "
          "the backward integration is unstable at these parameters");
    }
    out.effects[k] = Effect{x[0], x[1], x[2]};
    out.log_scales[k] = log_scale;
  };

  store(static_cast<std::size_t>(n));
  const auto rhs = [&params](double, const std::array<double, 3>& v) {
    return adjoint_rhs(params, v);
  };
  for (long long k = n - 1; k >= 0; --k) {
    x = rk4_step<3>(rhs, 0.0, x, dt);
    store(static_cast<std::size_t>(k));
  }
  return out;
}

double effect_overlap(const Effect& effect, PureAngle theta) {
  return effect.alpha + effect.zeta * std::cos(theta.theta) +
         effect.beta * std::sin(theta.theta);
}

}  // namespace qpf
