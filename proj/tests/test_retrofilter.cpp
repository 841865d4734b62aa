#include "qpf/retrofilter.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"
#include "qpf/numerics.hpp"
#include "qpf/rng.hpp"
#include "qpf/trajectory_engine.hpp"

using namespace qpf;

namespace {

Params standard_params() {
  Params p;
  p.omega = 2.0;
  p.gamma_o = 0.5;
  p.gamma_u = 0.5;
  p.dt = 1e-3;
  p.T = 4.0;
  return p;
}

double physical(const EffectTrajectory& table, std::size_t k, double Effect::*field) {
  return table.effects[k].*field * std::exp(table.log_scales[k]);
}

}  // namespace

TEST_CASE("effect table anchors its final condition") {
  Params p = standard_params();
  EffectTrajectory table = propagate_effect(p, 1.0);
  REQUIRE(table.size() == 1001);
  const std::size_t last = 1000;
  const double expected = 0.5 * p.gamma_o * p.dt;
  CHECK(physical(table, last, &Effect::alpha) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(table.effects[last].beta == 0.0);
  CHECK(physical(table, last, &Effect::zeta) == doctest::Approx(expected).epsilon(1e-12));

  // Ground state cannot feed the final jump.
  CHECK(std::abs(effect_overlap(table.effects[last], PureAngle(kPi))) <= 1e-15);
}

TEST_CASE("driveless effects decay as pure exponentials") {
  for (double gu : {0.0, 0.5}) {
    Params p = standard_params();
    p.omega = 0.0;
    p.gamma_u = gu;
    const double T = 2.0;
    EffectTrajectory table = propagate_effect(p, T);
    const double rate = p.gamma_o + p.gamma_u;
    const double scale = 0.5 * p.gamma_o * p.dt;
    for (std::size_t k = 0; k < table.size(); k += 100) {
      const double s = T - static_cast<double>(k) * p.dt;
      const double expected = scale * std::exp(-rate * s);
      CHECK(physical(table, k, &Effect::alpha) == doctest::Approx(expected).epsilon(1e-9));
      CHECK(physical(table, k, &Effect::zeta) == doctest::Approx(expected).epsilon(1e-9));
      CHECK(table.effects[k].beta == 0.0);
    }
  }
}

TEST_CASE("effect table matches the matrix exponential of its generator") {
  Params p = standard_params();
  const double T = 1.9;
  EffectTrajectory table = propagate_effect(p, T);

  Eigen::Matrix3d gen;
  const double go = p.gamma_o, gu = p.gamma_u, om = p.omega;
  gen << -0.5 * go, 0.0, -(0.5 * go + gu),
         0.0, -0.5 * (go + gu), om,
         -0.5 * go, -om, -(0.5 * go + gu);
  Eigen::Vector3d final_condition(0.5 * go * p.dt, 0.0, 0.5 * go * p.dt);

  for (double t : {0.0, 0.7, 1.2}) {
    const double s = T - t;
    const Eigen::Vector3d x = (gen * s).exp() * final_condition;
    const std::size_t k = static_cast<std::size_t>(std::llround(t / p.dt));
    CHECK(physical(table, k, &Effect::alpha) == doctest::Approx(x(0)).epsilon(1e-9));
    CHECK(physical(table, k, &Effect::beta) == doctest::Approx(x(1)).epsilon(1e-9));
    CHECK(physical(table, k, &Effect::zeta) == doctest::Approx(x(2)).epsilon(1e-9));
  }
}

TEST_CASE("effect overlap equals the two-by-two trace") {
  Rng rng(404, 0);
  for (int i = 0; i < 200; ++i) {
    const double beta = 2.0 * rng.uniform01() - 1.0;
    const double zeta = 2.0 * rng.uniform01() - 1.0;
    const double alpha = std::hypot(beta, zeta) + rng.uniform01();
    const double theta = kTwoPi * rng.uniform01();
    const std::complex<double> I(0.0, 1.0);
    const double y = std::sin(theta), z = std::cos(theta);
    // E = alpha*Id + beta*sigma_y + zeta*sigma_z, S = (Id + y sigma_y + z sigma_z)/2.
    const std::complex<double> e00 = alpha + zeta, e01 = -I * beta;
    const std::complex<double> e10 = I * beta, e11 = alpha - zeta;
    const std::complex<double> s00 = 0.5 * (1.0 + z), s01 = 0.5 * (-I * y);
    const std::complex<double> s10 = 0.5 * (I * y), s11 = 0.5 * (1.0 - z);
    const std::complex<double> trace = e00 * s00 + e01 * s10 + e10 * s01 + e11 * s11;
    CHECK(std::abs(trace.imag()) <= 1e-14);
    CHECK(effect_overlap(Effect{alpha, beta, zeta}, PureAngle(theta)) ==
          doctest::Approx(trace.real()).epsilon(1e-12));
  }
}

TEST_CASE("overlap is linear in the effect scale") {
  const Effect e{1.3, -0.4, 0.6};
  const Effect scaled{1.3 * 7.5, -0.4 * 7.5, 0.6 * 7.5};
  for (double theta : {0.0, 0.9, 2.7, 5.1}) {
    const double a = effect_overlap(e, PureAngle(theta));
    const double b = effect_overlap(scaled, PureAngle(theta));
    CHECK(b == doctest::Approx(7.5 * a).epsilon(1e-13));
  }
  // Identity-proportional effects are flat in theta.
  for (double theta : {0.0, 1.0, 3.0}) {
    CHECK(effect_overlap(Effect{0.8, 0.0, 0.0}, PureAngle(theta)) == 0.8);
  }
}

TEST_CASE("positivity is maintained over twenty relaxation times") {
  Params p = standard_params();
  EffectTrajectory table = propagate_effect(p, 20.0);
  for (std::size_t k = 0; k < table.size(); k += 50) {
    CHECK(table.effects[k].is_positive_semidefinite(1e-12));
    CHECK(effect_overlap(table.effects[k], PureAngle(0.3)) >= -1e-12);
  }
  CHECK(std::isfinite(table.log_scales.front()));
}

TEST_CASE("rejects spans that do not sit on the grid") {
  Params p = standard_params();
  CHECK_THROWS_AS((void)propagate_effect(p, 0.50037), std::invalid_argument);
  CHECK_THROWS_AS((void)propagate_effect(p, -1.0), std::invalid_argument);
  EffectTrajectory table = propagate_effect(p, 0.0);
  CHECK(table.size() == 1);
}

TEST_CASE("forward weights and backward effects meet at any time") {
  // The ostensible average of lambda_tau * Tr[E(tau) S(theta_tau)] is the
  // record probability, independent of where the two sweeps meet.
  Params p = standard_params();
  p.T = 1.0;
  const int n = 20000;
  EffectTrajectory table = propagate_effect(p, p.T);

  const std::vector<std::size_t> probes = {0, 250, 500, 750, 1000};
  std::vector<KahanSum> sum(probes.size()), sum_sq(probes.size());
  for (int i = 0; i < n; ++i) {
    Rng rng(808, static_cast<std::uint64_t>(i));
    TrueTrajectory tr = sample_ostensible_trajectory(p, rng);
    for (std::size_t j = 0; j < probes.size(); ++j) {
      const std::size_t k = probes[j];
      const double v = tr.lambdas[k] *
                       effect_overlap(table.effects[k], tr.thetas[k]) *
                       std::exp(table.log_scales[k]);
      sum[j].add(v);
      sum_sq[j].add(v * v);
    }
  }
  std::vector<double> mean(probes.size()), se(probes.size());
  for (std::size_t j = 0; j < probes.size(); ++j) {
    mean[j] = sum[j].value() / n;
    se[j] = std::sqrt((sum_sq[j].value() / n - mean[j] * mean[j]) / n);
  }
  // tau = 0 has no Monte Carlo noise: lambda_0 = 1 and theta_0 is fixed.
  CHECK(se[0] <= 1e-15);
  for (std::size_t j = 1; j < probes.size(); ++j) {
    CHECK(std::abs(mean[j] - mean[0]) <= 3.0 * se[j] + 5e-3 * mean[0]);
  }
}
