#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "qpf/core_types.hpp"
#include "qpf/json_io.hpp"

using namespace qpf;

TEST_CASE("state_from_angle hits the cardinal points") {
  const BlochYZ ground = state_from_angle(PureAngle{kPi});
  CHECK(ground.y == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(ground.z == doctest::Approx(-1.0));

  const BlochYZ excited = state_from_angle(PureAngle{0.0});
  CHECK(excited.y == 0.0);
  CHECK(excited.z == 1.0);

  const BlochYZ plus_y = state_from_angle(PureAngle{kPi / 2});
  CHECK(plus_y.y == doctest::Approx(1.0));
  CHECK(plus_y.z == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("angle_and_radius examples") {
  const AngleRadius g = angle_and_radius(BlochYZ{0.0, -1.0, StateKind::state});
  CHECK(g.theta == doctest::Approx(kPi));
  CHECK(g.R == doctest::Approx(1.0));

  const AngleRadius p = angle_and_radius(BlochYZ{0.3, 0.4, StateKind::state});
  CHECK(p.R == doctest::Approx(0.5));
  CHECK(p.theta == doctest::Approx(std::atan2(0.3, 0.4)));

  const AngleRadius mixed = angle_and_radius(BlochYZ{0.0, 0.0, StateKind::state});
  CHECK(mixed.theta == 0.0);
  CHECK(mixed.R == 0.0);
}

TEST_CASE("angle round trip over a 1e4-point sweep") {
  const int n = 10000;
  double worst_theta = 0.0;
  double worst_radius = 0.0;
  for (int i = 0; i < n; ++i) {
    const double theta = kTwoPi * static_cast<double>(i) / n;
    const AngleRadius back = angle_and_radius(state_from_angle(PureAngle{theta}));
    double dd = std::abs(back.theta - theta);
    dd = std::min(dd, kTwoPi - dd);
    worst_theta = std::max(worst_theta, dd);
    worst_radius = std::max(worst_radius, std::abs(back.R - 1.0));
  }
  CHECK(worst_theta < 1e-12);
  CHECK(worst_radius < 1e-12);
}

TEST_CASE("trace_product is symmetric, bounded, and matches the examples") {
  const BlochYZ a = state_from_angle(PureAngle{1.1});
  CHECK(trace_product(a, a) == doctest::Approx(1.0));

  const BlochYZ anti = state_from_angle(PureAngle{1.1 + kPi});
  CHECK(trace_product(a, anti) == doctest::Approx(0.0).epsilon(1e-15));

  const BlochYZ mixed{0.0, 0.0, StateKind::state};
  CHECK(trace_product(a, mixed) == doctest::Approx(0.5));

  for (int i = 0; i < 200; ++i) {
    const BlochYZ u = state_from_angle(PureAngle{0.37 * i});
    const BlochYZ v = state_from_angle(PureAngle{1.93 * i + 0.2});
    const double uv = trace_product(u, v);
    CHECK(uv == doctest::Approx(trace_product(v, u)));
    CHECK(uv >= -1e-15);
    CHECK(uv <= 1.0 + 1e-15);
  }
}

TEST_CASE("Params validation enforces field contracts") {
  Params p;
  CHECK_NOTHROW(p.validate());

  Params bad_rate = p;
  bad_rate.gamma_o = -0.1;
  CHECK_THROWS_AS(bad_rate.validate(), std::invalid_argument);

  Params zero_gamma = p;
  zero_gamma.gamma_o = 0.0;
  zero_gamma.gamma_u = 0.0;
  CHECK_THROWS_AS(zero_gamma.validate(), std::invalid_argument);

  Params bad_T = p;
  bad_T.T = 4.0005;
  bad_T.dt = 1e-3;
  CHECK_THROWS_AS(bad_T.validate(), std::invalid_argument);

  Params small_grid = p;
  small_grid.theta_grid_n = 32;
  CHECK_THROWS_AS(small_grid.validate(), std::invalid_argument);

  Params one_sided = p;
  one_sided.gamma_u = 0.0;
  one_sided.gamma_o = 1.0;
  CHECK_NOTHROW(one_sided.validate());
}

TEST_CASE("make_state rejects points outside the unit disk") {
  CHECK_NOTHROW(make_state(0.6, 0.8));
  CHECK_THROWS_AS(make_state(0.9, 0.9), std::invalid_argument);
  const BlochYZ swv = make_indefinite(0.9, 0.9);
  CHECK(swv.kind == StateKind::indefinite);
}

TEST_CASE("Effect positivity criterion") {
  CHECK(Effect{1.0, 0.6, 0.8}.is_positive_semidefinite());
  CHECK_FALSE(Effect{0.99, 0.6, 0.8}.is_positive_semidefinite());
  CHECK(Effect{0.99, 0.6, 0.8}.is_positive_semidefinite(0.011));
}

TEST_CASE("ObservedBlock duration must be positive") {
  CHECK_NOTHROW(ObservedBlock{4.0}.validate());
  CHECK_THROWS_AS(ObservedBlock{0.0}.validate(), std::invalid_argument);
}

TEST_CASE("JSON config round trip and error reporting") {
  const std::string text =
      "{\"omega\": 2.0, \"gamma_o\": 0.4, \"gamma_u\": 0.6, \"dt\": 1e-3,"
      " \"T\": 4.0, \"theta_grid_n\": 1024, \"seed\": 7}";
  const Params p = params_from_json_text(text);
  CHECK(p.omega == 2.0);
  CHECK(p.gamma_o == 0.4);
  CHECK(p.gamma_u == 0.6);
  CHECK(p.gamma_total() == doctest::Approx(1.0));
  CHECK(p.theta_grid_n == 1024);
  CHECK(p.seed == 7);
  CHECK(p.n_steps() == 4000);

  CHECK_THROWS_WITH_AS(params_from_json_text("{}"),
                       doctest::Contains("missing key 'omega'"),
                       std::invalid_argument);
  CHECK_THROWS_AS(params_from_json_text("not json"), std::invalid_argument);
  CHECK_THROWS_AS(params_from_json_text("{\"omega\": \"x\"}"),
                  std::invalid_argument);
}

TEST_CASE("wrap_angle maps into [0, 2pi)") {
  CHECK(wrap_angle(-0.1) == doctest::Approx(kTwoPi - 0.1));
  CHECK(wrap_angle(kTwoPi) == 0.0);
  CHECK(wrap_angle(7.0) == doctest::Approx(7.0 - kTwoPi));
  CHECK(wrap_angle(-1e-18) < kTwoPi);
  CHECK(wrap_angle(-1e-18) >= 0.0);
}
