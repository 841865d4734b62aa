#include "qpf/core_types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qpf {

void Params::validate() const {
  if (!std::isfinite(omega)) {
    throw std::invalid_argument("Params: omega must be finite");
  }
  if (gamma_o < 0.0 || gamma_u < 0.0) {
    throw std::invalid_argument("Params: coupling rates must be non-negative");
  }
  if (!(gamma_total() > 0.0)) {
    throw std::invalid_argument("Params: total coupling gamma_o + gamma_u must be positive");
  }
  if (!(dt > 0.0)) {
    throw std::invalid_argument("Params: dt must be positive");
  }
  const double ratio = T / dt;
  const double k = std::round(ratio);
  if (k < 1.0 || std::abs(ratio - k) > 1e-9 * std::max(1.0, k)) {
    throw std::invalid_argument(
        "Params: T must be an integer multiple of dt (T=" + std::to_string(T) +
        ", dt=" + std::to_string(dt) + ")");
  }
  if (theta_grid_n < 64) {
    throw std::invalid_argument("Params: theta_grid_n must be at least 64");
  }
}

BlochYZ make_state(double y, double z) {
  const double r2 = y * y + z * z;
  if (r2 > 1.0 + 1e-9) {
    throw std::invalid_argument("BlochYZ: state radius " + std::to_string(std::sqrt(r2)) +
                                " exceeds the unit disk");
  }
  return BlochYZ{y, z, StateKind::state};
}

void ObservedBlock::validate() const {
  if (!(T > 0.0)) {
    throw std::invalid_argument("ObservedBlock: block duration must be positive");
  }
}

AngleRadius angle_and_radius(const BlochYZ& state) {
  const double R = std::hypot(state.y, state.z);
  if (R == 0.0) {
    return AngleRadius{0.0, 0.0};
  }
  return AngleRadius{wrap_angle(std::atan2(state.y, state.z)), R};
}

}  // namespace qpf
