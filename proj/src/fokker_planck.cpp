#include "qpf/fokker_planck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>

#include "qpf/numerics.hpp"

namespace qpf {

namespace {

double sink_rate(const Params& params, double theta) {
  return 0.5 * params.gamma_o * (1.0 + std::cos(theta));
}

double advection_velocity(const Params& params, double theta) {
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  return -params.omega + 0.5 * params.gamma_o * s +
         0.5 * params.gamma_u * s * (2.0 + c);
}

double diffusion_coefficient(const Params& params, double theta) {
  const double oc = 1.0 + std::cos(theta);
  return 0.5 * params.gamma_u * oc * oc;
}

void check_grid(const ThetaPdf& pdf, const char* who) {
  const std::size_t n = pdf.values.size();
  if (n < 8) {
    throw std::invalid_argument(std::string(who) +
                                ": need at least 8 grid cells");
  }
  if (pdf.grid.size() != n) {
    throw std::invalid_argument(std::string(who) +
                                ": grid and values sizes differ");
  }
  const double h = kTwoPi / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(pdf.grid[i] - static_cast<double>(i) * h) > 1e-12) {
      throw std::invalid_argument(
          std::string(who) + ": grid is not uniform on [0, 2*pi)");
    }
  }
}

/// Centered slope clamped so both reconstructed face values stay inside
/// [0, 2*mid]. That bound keeps the advection update nonnegative below
/// CFL 1/2 yet leaves smooth extrema unflattened; classic TVD limiters
/// clip slopes to zero at every peak and drag the mode position downwind.
double positivity_clamped_slope(double left, double mid, double right,
                                double h) {
  double s = 0.5 * (right - left) / h;
  const double bound = 2.0 * mid / h;
  if (s > bound) s = bound;
  if (s < -bound) s = -bound;
  return s;
}

/// Zeroes rounding-level negatives in place; anything below
/// -1e-12 * max(values) means the step genuinely lost positivity.
void enforce_nonnegative(std::vector<double>& values, const char* stage) {
  double vmax = 0.0;
  for (double v : values) vmax = std::max(vmax, v);
  const double floor = -1e-12 * vmax;
  for (double& v : values) {
    if (v < 0.0) {
      if (v < floor) {
        throw std::runtime_error(
            std::string("evolve_unnormalized_pdf: negative mass beyond "
                        "tolerance after the ") +
            stage + " step");
      }
      v = 0.0;
    }
  }
}

}  // namespace

double ThetaPdf::h() const {
  if (grid.size() < 2) {
    throw std::invalid_argument("ThetaPdf: grid has fewer than 2 points");
  }
  return grid[1] - grid[0];
}

double ThetaPdf::mass() const {
  if (grid.size() < 2 || grid.size() != values.size()) {
    throw std::invalid_argument("ThetaPdf: ill-formed grid");
  }
  return periodic_integral(values, h());
}

ThetaPdf make_gaussian_pdf(int n, double center, double sigma) {
  if (n < 8) {
    throw std::invalid_argument("make_gaussian_pdf: need at least 8 cells");
  }
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("make_gaussian_pdf: sigma must be positive");
  }
  ThetaPdf pdf;
  pdf.grid.resize(n);
  pdf.values.resize(n);
  const double h = kTwoPi / static_cast<double>(n);
  for (int i = 0; i < n; ++i) {
    const double theta = static_cast<double>(i) * h;
    pdf.grid[i] = theta;
    const double d = std::remainder(theta - center, kTwoPi) / sigma;
    pdf.values[i] = std::exp(-0.5 * d * d);
  }
  return normalize_pdf(pdf);
}

ThetaPdf make_gaussian_initial(const Params& params) {
  return make_gaussian_pdf(params.theta_grid_n, kPi, 0.01);
}

ThetaPdf normalize_pdf(const ThetaPdf& pdf) {
  check_grid(pdf, "normalize_pdf");
  const double m = pdf.mass();
  if (!(m > 0.0) || !std::isfinite(m)) {
    throw std::runtime_error("normalize_pdf: total mass is not positive");
  }
  ThetaPdf out = pdf;
  for (double& v : out.values) v /= m;
  out.normalized = true;
  return out;
}

std::vector<ThetaPdf> evolve_unnormalized_pdf(const ThetaPdf& initial,
                                              const Params& params, double T) {
  check_grid(initial, "evolve_unnormalized_pdf");
  params.validate();
  for (double v : initial.values) {
    if (!(v >= 0.0)) {
      throw std::invalid_argument(
          "evolve_unnormalized_pdf: initial density has negative values");
    }
  }
  if (!(T >= 0.0)) {
    throw std::invalid_argument("evolve_unnormalized_pdf: T must be >= 0");
  }
  const double dt = params.dt;
  const long long steps = std::llround(T / dt);
  if (std::abs(static_cast<double>(steps) * dt - T) >
      1e-9 * std::max(1.0, T)) {
    throw std::invalid_argument(
        "evolve_unnormalized_pdf: T must be an integer multiple of dt");
  }

  const std::size_t n = initial.values.size();
  const double h = initial.h();

  // Time-independent coefficient tables. Face i sits between cells i and
  // i+1 (mod n).
  std::vector<double> sink(n), w_face(n), diff(n);
  double w_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = initial.grid[i];
    sink[i] = sink_rate(params, theta);
    diff[i] = diffusion_coefficient(params, theta);
    w_face[i] = advection_velocity(params, theta + 0.5 * h);
    w_max = std::max(w_max, std::abs(w_face[i]));
  }
  // The limited-upwind advection preserves positivity only for CFL <= 1/2,
  // so split each dt into substeps below that bound; past 8 substeps dt is
  // declared too large for the grid.
  const double cfl = dt * w_max / h;
  const int substeps = std::max(1, static_cast<int>(std::ceil(cfl / 0.5)));
  if (substeps > 8) {
    throw std::runtime_error(
        "evolve_unnormalized_pdf: advection CFL number " +
        std::to_string(cfl) +
        " needs more than 8 substeps; reduce dt or use a coarser grid");
  }
  const double dt_sub = dt / static_cast<double>(substeps);
  if (dt * params.gamma_o > 1.0) {
    throw std::runtime_error(
        "evolve_unnormalized_pdf: dt exceeds 1/gamma_o; the explicit decay "
        "step would produce negative mass");
  }

  // Implicit diffusion on q = D * p: row i of (I - dt*L) couples p_{i-1},
  // p_i, p_{i+1} with weights -r*D_{i-1}, 1 + 2*r*D_i, -r*D_{i+1}. Columns
  // sum to exactly 1, so the solve conserves mass to rounding.
  const double r = dt / (h * h);
  std::vector<double> lower(n), diag(n), upper(n);
  for (std::size_t i = 0; i < n; ++i) {
    lower[i] = -r * diff[(i + n - 1) % n];
    diag[i] = 1.0 + 2.0 * r * diff[i];
    upper[i] = -r * diff[(i + 1) % n];
  }

  std::vector<ThetaPdf> snapshots;
  snapshots.reserve(static_cast<std::size_t>(steps) + 1);
  snapshots.push_back(initial);

  std::vector<double> work(n), slope(n), flux(n), advected(n);
  const std::vector<double>* current = &initial.values;
  for (long long step = 0; step < steps; ++step) {
    const std::vector<double>& p = *current;

    // Decay sink, evaluated on the old values so the discrete mass budget
    // dM = -dt * sum(sink * p_old) * h holds exactly.
    for (std::size_t i = 0; i < n; ++i) {
      work[i] = p[i] * (1.0 - dt * sink[i]);
    }

    // Explicit second-order upwind advection in conservative form; the
    // flux difference telescopes, so this step moves no total mass.
    for (int sub = 0; sub < substeps; ++sub) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t im = (i + n - 1) % n;
        const std::size_t ip = (i + 1) % n;
        slope[i] = positivity_clamped_slope(work[im], work[i], work[ip], h);
      }
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t ip = (i + 1) % n;
        const double w = w_face[i];
        const double upwind = (w >= 0.0) ? work[i] + 0.5 * h * slope[i]
                                         : work[ip] - 0.5 * h * slope[ip];
        flux[i] = w * upwind;
      }
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t im = (i + n - 1) % n;
        advected[i] = work[i] - (dt_sub / h) * (flux[i] - flux[im]);
      }
      enforce_nonnegative(advected, "advection");
      work.swap(advected);
    }

    ThetaPdf next;
    next.grid = initial.grid;
    next.values = solve_periodic_tridiagonal(lower, diag, upper, work);
    enforce_nonnegative(next.values, "diffusion");
    next.normalized = false;
    snapshots.push_back(std::move(next));
    current = &snapshots.back().values;
  }
  return snapshots;
}

ThetaPdf smoothed_pdf(const ThetaPdf& ptilde, const Effect& effect) {
  check_grid(ptilde, "smoothed_pdf");
  if (!effect.is_positive_semidefinite(1e-12)) {
    throw std::invalid_argument(
        "smoothed_pdf: effect must be positive semidefinite");
  }
  const std::size_t n = ptilde.values.size();
  ThetaPdf out;
  out.grid = ptilde.grid;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double overlap = effect.alpha + effect.zeta * std::cos(out.grid[i]) +
                           effect.beta * std::sin(out.grid[i]);
    const double v = ptilde.values[i] * overlap;
    // A semidefinite effect can only go negative at rounding level.
    out.values[i] = (v > 0.0) ? v : 0.0;
  }
  if (!(out.mass() > 0.0)) {
    throw std::runtime_error(
        "smoothed_pdf: effect leaves zero total weight on the density");
  }
  return normalize_pdf(out);
}

BlochYZ q1_smoothed_state(const ThetaPdf& pdf) {
  check_grid(pdf, "q1_smoothed_state");
  if (!pdf.normalized) {
    throw std::invalid_argument("q1_smoothed_state: pdf must be normalized");
  }
  KahanSum sy, sz;
  const std::size_t n = pdf.values.size();
  for (std::size_t i = 0; i < n; ++i) {
    sy.add(std::sin(pdf.grid[i]) * pdf.values[i]);
    sz.add(std::cos(pdf.grid[i]) * pdf.values[i]);
  }
  return make_state(sy.value() * pdf.h(), sz.value() * pdf.h());
}

PureAngle q2_lustrated_state(const BlochYZ& smoothed) {
  if (std::hypot(smoothed.y, smoothed.z) < 1e-12) {
    throw std::invalid_argument(
        "q2_lustrated_state: fully mixed input; every pure state is equally "
        "close");
  }
  return PureAngle(std::atan2(smoothed.y, smoothed.z));
}

ModeResult q3_most_likely_state(const ThetaPdf& pdf) {
  check_grid(pdf, "q3_most_likely_state");
  if (!pdf.normalized) {
    throw std::invalid_argument(
        "q3_most_likely_state: pdf must be normalized");
  }
  const std::size_t n = pdf.values.size();
  double vmax = pdf.values[0];
  for (double v : pdf.values) vmax = std::max(vmax, v);
  std::size_t peak = 0;
  std::size_t tied = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (pdf.values[i] >= vmax - 1e-9 * vmax) {
      if (tied == 0) peak = i;
      ++tied;
    }
  }
  const std::size_t im = (peak + n - 1) % n;
  const std::size_t ip = (peak + 1) % n;
  const double offset = quadratic_peak_offset(pdf.values[im], pdf.values[peak],
                                              pdf.values[ip]);
  ModeResult out;
  out.theta = PureAngle(pdf.grid[peak] + offset * pdf.h());
  out.degenerate = (tied > 1);
  return out;
}

void write_pdf_csv(const ThetaPdf& pdf, std::ostream& out) {
  out << "theta,value\n";
  const auto old_precision = out.precision(17);
  for (std::size_t i = 0; i < pdf.values.size(); ++i) {
    out << pdf.grid[i] << ',' << pdf.values[i] << '\n';
  }
  out.precision(old_precision);
}

}  // namespace qpf
