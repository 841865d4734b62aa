#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace qpf {

/// Kahan compensated accumulator. Deterministic as long as values are added
/// in a fixed order.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Trapezoid integral of samples f_i at uniform spacing h (non-periodic).
inline double trapezoid(const std::vector<double>& f, double h) {
  if (f.size() < 2) return 0.0;
  KahanSum s;
  s.add(0.5 * f.front());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s.add(f[i]);
  s.add(0.5 * f.back());
  return s.value() * h;
}

/// Rectangle-rule integral over a full periodic cell (grid points exclude
/// the duplicate endpoint), which is spectrally accurate for smooth
/// periodic integrands.
inline double periodic_integral(const std::vector<double>& f, double h) {
  KahanSum s;
  for (double v : f) s.add(v);
  return s.value() * h;
}

/// One classic Runge-Kutta step for dy/dt = f(t, y) on a fixed-size state.
template <std::size_t N, typename F>
std::array<double, N> rk4_step(const F& f, double t, const std::array<double, N>& y,
                               double h) {
  std::array<double, N> k1 = f(t, y);
  std::array<double, N> tmp;
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
  std::array<double, N> k2 = f(t + 0.5 * h, tmp);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
  std::array<double, N> k3 = f(t + 0.5 * h, tmp);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * k3[i];
  std::array<double, N> k4 = f(t + h, tmp);
  std::array<double, N> out;
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

/// Solves a tridiagonal system with the Thomas algorithm. Bands are given as
/// lower a (a[0] unused), diagonal b, upper c (c[n-1] unused).
std::vector<double> solve_tridiagonal(std::vector<double> a, std::vector<double> b,
                                      std::vector<double> c, std::vector<double> d);

/// Solves a periodic tridiagonal system (corner entries couple row 0 and
/// row n-1) via the Sherman-Morrison correction on top of the Thomas solve.
std::vector<double> solve_periodic_tridiagonal(const std::vector<double>& a,
                                               const std::vector<double>& b,
                                               const std::vector<double>& c,
                                               const std::vector<double>& d);

/// Bisection refinement of a bracketed root. Requires f(lo) and f(hi) of
/// opposite sign; returns the midpoint after the interval shrinks below tol.
double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double f_lo, double f_hi, double tol, int max_iter = 200);

/// Offset in [-1, 1] of the parabola vertex through equally spaced samples
/// (y0, y1, y2); zero when y1 is a symmetric maximum. Falls back to 0 when
/// the parabola degenerates.
inline double quadratic_peak_offset(double y0, double y1, double y2) {
  const double denom = y0 - 2.0 * y1 + y2;
  if (denom == 0.0) return 0.0;
  double off = 0.5 * (y0 - y2) / denom;
  if (!(off > -1.0 && off < 1.0)) return 0.0;
  return off;
}

}  // namespace qpf
