#include "qpf/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace qpf {

std::vector<double> solve_tridiagonal(std::vector<double> a, std::vector<double> b,
                                      std::vector<double> c, std::vector<double> d) {
  const std::size_t n = b.size();
  if (a.size() != n || c.size() != n || d.size() != n || n == 0) {
    throw std::invalid_argument("solve_tridiagonal: band size mismatch");
  }
  for (std::size_t i = 1; i < n; ++i) {
    const double m = a[i] / b[i - 1];
    b[i] -= m * c[i - 1];
    d[i] -= m * d[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = d[n - 1] / b[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    x[i] = (d[i] - c[i] * x[i + 1]) / b[i];
  }
  return x;
}

std::vector<double> solve_periodic_tridiagonal(const std::vector<double>& a,
                                               const std::vector<double>& b,
                                               const std::vector<double>& c,
                                               const std::vector<double>& d) {
  const std::size_t n = b.size();
  if (n < 3) {
    throw std::invalid_argument("solve_periodic_tridiagonal: need at least 3 rows");
  }
  // Sherman-Morrison: write A = A' + u v^T with u = (g, 0, ..., 0, c[n-1])
  // and v = (1, 0, ..., 0, a[0]/g), where g = -b[0] keeps A' well scaled.
  const double g = -b[0];
  std::vector<double> b2 = b;
  b2[0] = b[0] - g;
  b2[n - 1] = b[n - 1] - c[n - 1] * a[0] / g;

  std::vector<double> u(n, 0.0);
  u[0] = g;
  u[n - 1] = c[n - 1];

  std::vector<double> y = solve_tridiagonal(a, b2, c, d);
  std::vector<double> q = solve_tridiagonal(a, b2, c, u);

  const double vy = y[0] + (a[0] / g) * y[n - 1];
  const double vq = 1.0 + q[0] + (a[0] / g) * q[n - 1];
  if (vq == 0.0) {
    throw std::runtime_error("solve_periodic_tridiagonal: singular system");
  }
  const double factor = vy / vq;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = y[i] - factor * q[i];
  return x;
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double f_lo, double f_hi, double tol, int max_iter) {
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    throw std::invalid_argument("bisect_root: endpoints do not bracket a root");
  }
  for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace qpf
