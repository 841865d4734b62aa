#include "qpf/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "qpf/csv.hpp"

namespace qpf {

namespace {

double require_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) {
    throw std::invalid_argument(std::string("config: missing key '") + key + "'");
  }
  if (!j[key].is_number()) {
    throw std::invalid_argument(std::string("config: key '") + key + "' must be a number");
  }
  return j[key].get<double>();
}

}  // namespace

Params params_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw std::invalid_argument("config: top-level JSON value must be an object");
  }

  Params p;
  p.omega = require_number(j, "omega");
  p.gamma_o = require_number(j, "gamma_o");
  p.gamma_u = require_number(j, "gamma_u");
  p.dt = require_number(j, "dt");
  p.T = require_number(j, "T");
  const double grid = require_number(j, "theta_grid_n");
  p.theta_grid_n = static_cast<int>(grid);
  if (static_cast<double>(p.theta_grid_n) != grid) {
    throw std::invalid_argument("config: theta_grid_n must be an integer");
  }
  const double seed = require_number(j, "seed");
  p.seed = static_cast<std::uint64_t>(seed);
  if (static_cast<double>(p.seed) != seed) {
    throw std::invalid_argument("config: seed must be a non-negative integer");
  }
  p.validate();
  return p;
}

Params params_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("config: cannot open file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return params_from_json_text(buf.str());
}

std::string canonical_config_string(const Params& params) {
  std::string s;
  s += "omega=" + format_double(params.omega);
  s += ";gamma_o=" + format_double(params.gamma_o);
  s += ";gamma_u=" + format_double(params.gamma_u);
  s += ";dt=" + format_double(params.dt);
  s += ";T=" + format_double(params.T);
  s += ";theta_grid_n=" + std::to_string(params.theta_grid_n);
  s += ";seed=" + std::to_string(params.seed);
  return s;
}

}  // namespace qpf
