#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "qpf/core_types.hpp"

namespace qpf {

/// Density in the Bloch angle theta, sampled on the uniform periodic grid
/// theta_i = 2*pi*i/n, i = 0..n-1 (the duplicate endpoint is excluded).
struct ThetaPdf {
  std::vector<double> grid;
  std::vector<double> values;
  /// True only when mass() has been brought to 1 within 1e-9.
  bool normalized = false;

  std::size_t size() const { return values.size(); }

  /// Grid spacing 2*pi/n. Throws std::invalid_argument on a grid with
  /// fewer than two points.
  double h() const;

  /// Integral of values over [0, 2*pi). On the periodic grid the trapezoid
  /// rule reduces to h * sum(values).
  double mass() const;
};

/// Normalized Gaussian bump of width sigma centered at `center`, sampled
/// with the nearest-image angular distance so the bump wraps correctly.
/// Throws std::invalid_argument for n < 8 or sigma <= 0.
ThetaPdf make_gaussian_pdf(int n, double center, double sigma);

/// Post-jump initial condition for a no-jump block: a sigma = 0.01 Gaussian
/// at the ground state theta = pi, on params.theta_grid_n cells.
ThetaPdf make_gaussian_initial(const Params& params);

/// Rescales a nonnegative density to unit mass. Throws std::runtime_error
/// when the total mass is not positive and finite.
ThetaPdf normalize_pdf(const ThetaPdf& pdf);

/// Evolves the unnormalized density p(theta, t) of the true state
/// conditioned on the observed no-click record:
///
///   d_t p = -sink * p - d_theta[w * p] + d_theta^2[D * p],
///   sink(theta) = (gamma_o/2) (1 + cos theta),
///   w(theta)    = -omega + (gamma_o/2) sin theta
///                 + (gamma_u/2) sin theta (2 + cos theta),
///   D(theta)    = (gamma_u/2) (1 + cos theta)^2,
///
/// with periodic boundaries. The sink and limited-upwind advection steps are
/// explicit (the advection subcycles to keep each substep below CFL 1/2,
/// which preserves positivity), the diffusion step is implicit. Returns one
/// snapshot per step with
/// snapshot[0] = initial; the decaying total mass of snapshot[k] is the
/// probability of seeing no click up to t = k*dt.
///
/// Throws std::invalid_argument for a negative initial density, invalid
/// params, or T that is not a nonnegative multiple of params.dt; throws
/// std::runtime_error when dt violates the CFL bound or a step produces
/// negative mass beyond rounding tolerance.
std::vector<ThetaPdf> evolve_unnormalized_pdf(const ThetaPdf& initial,
                                              const Params& params, double T);

/// Bayes update of the past-conditioned density by a future effect:
/// result ∝ ptilde(theta) * Tr[E S(theta)], normalized. Throws
/// std::invalid_argument for an indefinite effect and std::runtime_error
/// when the product has zero total weight.
ThetaPdf smoothed_pdf(const ThetaPdf& ptilde, const Effect& effect);

/// Mean Bloch vector (y, z) = (int sin * pdf, int cos * pdf): the state
/// minimizing the expected trace-square deviation from the true state.
/// Requires a normalized pdf.
BlochYZ q1_smoothed_state(const ThetaPdf& pdf);

/// Closest pure state to a Bloch point: theta = atan2(y, z). Throws
/// std::invalid_argument below radius 1e-12, where every pure state is
/// equally close.
PureAngle q2_lustrated_state(const BlochYZ& smoothed);

struct ModeResult {
  PureAngle theta;
  /// Set when more than one grid cell ties for the global maximum within
  /// a relative 1e-9; theta then reports the lowest tied angle.
  bool degenerate = false;
};

/// Most-likely state: the global maximum of the density, refined by a
/// quadratic fit through the peak cell and its two neighbors. Requires a
/// normalized pdf.
ModeResult q3_most_likely_state(const ThetaPdf& pdf);

/// Writes "theta,value" CSV rows for polar plots.
void write_pdf_csv(const ThetaPdf& pdf, std::ostream& out);

}  // namespace qpf
