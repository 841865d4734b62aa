#include "qpf/classical_estimation.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "json.hpp"

namespace qpf {

namespace {

void check_stochastic_rows(const std::vector<std::vector<double>>& m, int rows,
                           const char* name) {
  if (static_cast<int>(m.size()) != rows) {
    throw std::invalid_argument(std::string("ToyHmm: ") + name + " must have one row per state");
  }
  for (const auto& row : m) {
    if (row.empty()) {
      throw std::invalid_argument(std::string("ToyHmm: ") + name + " has an empty row");
    }
    double sum = 0.0;
    for (double v : row) {
      if (v < 0.0) {
        throw std::invalid_argument(std::string("ToyHmm: ") + name + " has a negative entry");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw std::invalid_argument(std::string("ToyHmm: ") + name + " row does not sum to 1");
    }
  }
}

void check_observed(const ToyHmm& hmm, const std::vector<int>& observed, int tau) {
  hmm.validate();
  if (static_cast<int>(observed.size()) != hmm.n_steps + 1) {
    throw std::invalid_argument("observed sequence must have n_steps + 1 symbols");
  }
  const int n_sym = static_cast<int>(hmm.obs_emission.front().size());
  for (int o : observed) {
    if (o < 0 || o >= n_sym) {
      throw std::invalid_argument("observed symbol out of range");
    }
  }
  if (tau < 0 || tau > hmm.n_steps) {
    throw std::invalid_argument("tau outside [0, n_steps]");
  }
}

/// Forward pass: alphas[k][x] proportional to p(x_k = x, o_0..o_k), each
/// level renormalized to guard against underflow. Throws on an impossible
/// observed sequence.
std::vector<std::vector<double>> forward_levels(const ToyHmm& hmm,
                                                const std::vector<int>& observed) {
  const int n = hmm.n_states;
  std::vector<std::vector<double>> alphas(observed.size(), std::vector<double>(n, 0.0));
  for (int x = 0; x < n; ++x) {
    alphas[0][x] = hmm.initial.probs[x] * hmm.obs_emission[x][observed[0]];
  }
  for (std::size_t k = 0; k < observed.size(); ++k) {
    if (k > 0) {
      for (int x = 0; x < n; ++x) {
        double acc = 0.0;
        for (int xp = 0; xp < n; ++xp) {
          acc += alphas[k - 1][xp] * hmm.transition[xp][x];
        }
        alphas[k][x] = acc * hmm.obs_emission[x][observed[k]];
      }
    }
    double level = 0.0;
    for (double v : alphas[k]) level += v;
    if (level <= 0.0) {
      throw std::runtime_error("observed sequence has zero probability under the model");
    }
    for (double& v : alphas[k]) v /= level;
  }
  return alphas;
}

}  // namespace

void DiscreteDist::validate() const {
  double sum = 0.0;
  for (double p : probs) {
    if (p < 0.0) {
      throw std::invalid_argument("DiscreteDist: negative probability");
    }
    sum += p;
  }
  if (normalized && std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("DiscreteDist: normalized flag set but sum is " +
                                std::to_string(sum));
  }
}

DiscreteDist DiscreteDist::delta(std::size_t n, std::size_t at) {
  if (at >= n) {
    throw std::invalid_argument("DiscreteDist::delta: index out of range");
  }
  DiscreteDist d;
  d.probs.assign(n, 0.0);
  d.probs[at] = 1.0;
  return d;
}

void ToyHmm::validate() const {
  if (n_states < 1 || n_states > 6) {
    throw std::invalid_argument("ToyHmm: n_states must be in [1, 6]");
  }
  if (n_steps < 1 || n_steps > 8) {
    throw std::invalid_argument("ToyHmm: n_steps must be in [1, 8]");
  }
  check_stochastic_rows(transition, n_states, "transition");
  for (const auto& row : transition) {
    if (static_cast<int>(row.size()) != n_states) {
      throw std::invalid_argument("ToyHmm: transition must be square");
    }
  }
  check_stochastic_rows(obs_emission, n_states, "obs_emission");
  check_stochastic_rows(unobs_emission, n_states, "unobs_emission");
  if (static_cast<int>(initial.probs.size()) != n_states) {
    throw std::invalid_argument("ToyHmm: initial distribution size mismatch");
  }
  initial.validate();
}

ToyHmm ToyHmm::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("ToyHmm: invalid JSON: ") + e.what());
  }
  ToyHmm hmm;
  try {
    hmm.n_states = j.at("n_states").get<int>();
    hmm.n_steps = j.at("n_steps").get<int>();
    hmm.transition = j.at("transition").get<std::vector<std::vector<double>>>();
    hmm.obs_emission = j.at("obs_emission").get<std::vector<std::vector<double>>>();
    hmm.unobs_emission = j.at("unobs_emission").get<std::vector<std::vector<double>>>();
    hmm.initial.probs = j.at("initial").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("ToyHmm: bad field: ") + e.what());
  }
  hmm.validate();
  return hmm;
}

double bme(const DiscreteDist& dist, const std::vector<double>& values) {
  dist.validate();
  if (dist.probs.size() != values.size()) {
    throw std::invalid_argument("bme: distribution and value arrays differ in length");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    acc += dist.probs[i] * values[i];
  }
  return acc;
}

std::size_t mle(const DiscreteDist& dist) {
  dist.validate();
  if (dist.probs.empty()) {
    throw std::invalid_argument("mle: empty distribution");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < dist.probs.size(); ++i) {
    if (dist.probs[i] > dist.probs[best]) best = i;
  }
  return best;
}

DiscreteDist classical_filtered(const ToyHmm& hmm, const std::vector<int>& observed,
                                int tau) {
  check_observed(hmm, observed, tau);
  const std::vector<int> past(observed.begin(), observed.begin() + tau + 1);
  // Run the forward pass on the truncated sequence; the hmm's n_steps refers
  // to the full record, so bypass the length check by recomputing directly.
  const int n = hmm.n_states;
  std::vector<double> alpha(n, 0.0);
  for (int x = 0; x < n; ++x) {
    alpha[x] = hmm.initial.probs[x] * hmm.obs_emission[x][past[0]];
  }
  for (std::size_t k = 1; k < past.size(); ++k) {
    std::vector<double> next(n, 0.0);
    for (int x = 0; x < n; ++x) {
      double acc = 0.0;
      for (int xp = 0; xp < n; ++xp) acc += alpha[xp] * hmm.transition[xp][x];
      next[x] = acc * hmm.obs_emission[x][past[k]];
    }
    alpha = std::move(next);
  }
  double total = 0.0;
  for (double v : alpha) total += v;
  if (total <= 0.0) {
    throw std::runtime_error("observed sequence has zero probability under the model");
  }
  DiscreteDist out;
  out.probs.resize(n);
  for (int x = 0; x < n; ++x) out.probs[x] = alpha[x] / total;
  return out;
}

std::vector<double> classical_backward_likelihood(const ToyHmm& hmm,
                                                  const std::vector<int>& observed,
                                                  int tau) {
  check_observed(hmm, observed, tau);
  const int n = hmm.n_states;
  std::vector<double> beta(n, 1.0);
  for (int k = hmm.n_steps; k > tau; --k) {
    std::vector<double> prev(n, 0.0);
    for (int x = 0; x < n; ++x) {
      double acc = 0.0;
      for (int xn = 0; xn < n; ++xn) {
        acc += hmm.transition[x][xn] * hmm.obs_emission[xn][observed[k]] * beta[xn];
      }
      prev[x] = acc;
    }
    beta = std::move(prev);
  }
  return beta;
}

DiscreteDist classical_smoothed(const ToyHmm& hmm, const std::vector<int>& observed,
                                int tau) {
  check_observed(hmm, observed, tau);
  const auto alphas = forward_levels(hmm, observed);
  const int n = hmm.n_states;

  // ---- Backward pass ----
  std::vector<double> beta(n, 1.0);
  for (int k = hmm.n_steps; k > tau; --k) {
    std::vector<double> prev(n, 0.0);
    for (int x = 0; x < n; ++x) {
      double acc = 0.0;
      for (int xn = 0; xn < n; ++xn) {
        acc += hmm.transition[x][xn] * hmm.obs_emission[xn][observed[k]] * beta[xn];
      }
      prev[x] = acc;
    }
    beta = std::move(prev);
    double mx = 0.0;
    for (double v : beta) mx = std::max(mx, v);
    if (mx <= 0.0) {
      throw std::runtime_error("observed sequence has zero probability under the model");
    }
    for (double& v : beta) v /= mx;
  }

  DiscreteDist out;
  out.probs.resize(n);
  double total = 0.0;
  for (int x = 0; x < n; ++x) {
    out.probs[x] = alphas[tau][x] * beta[x];
    total += out.probs[x];
  }
  if (total <= 0.0) {
    throw std::runtime_error("observed sequence has zero probability under the model");
  }
  for (double& v : out.probs) v /= total;
  return out;
}

DiscreteDist classical_swv(const ToyHmm& hmm, const std::vector<int>& observed,
                           int tau) {
  const DiscreteDist filtered = classical_filtered(hmm, observed, tau);
  const std::vector<double> effect = classical_backward_likelihood(hmm, observed, tau);
  DiscreteDist out;
  out.probs.resize(filtered.probs.size());
  double total = 0.0;
  for (std::size_t x = 0; x < out.probs.size(); ++x) {
    out.probs[x] = filtered.probs[x] * effect[x];
    total += out.probs[x];
  }
  if (total <= 0.0) {
    throw std::runtime_error("observed sequence has zero probability under the model");
  }
  for (double& v : out.probs) v /= total;
  return out;
}

std::pair<DiscreteDist, DiscreteDist> classical_nF_nE_estimators(
    const ToyHmm& hmm, const std::vector<int>& observed, int tau) {
  const DiscreteDist smoothed = classical_smoothed(hmm, observed, tau);
  const std::size_t best = mle(smoothed);
  for (std::size_t x = 0; x < smoothed.probs.size(); ++x) {
    if (x != best && std::abs(smoothed.probs[x] - smoothed.probs[best]) <= 1e-12) {
      throw std::runtime_error("classical_nF_nE_estimators: smoothed maximum is degenerate");
    }
  }
  DiscreteDist d = DiscreteDist::delta(smoothed.probs.size(), best);
  return {d, d};
}

DiscreteDist enumerate_smoothed_posterior(const ToyHmm& hmm,
                                          const std::vector<int>& observed, int tau) {
  check_observed(hmm, observed, tau);
  if (hmm.n_states > 6 || hmm.n_steps > 8) {
    throw std::invalid_argument(
        "enumeration oracle supports at most 6 states and 8 steps");
  }
  const int n = hmm.n_states;
  const int len = hmm.n_steps + 1;
  std::vector<int> path(len, 0);
  std::vector<double> post(n, 0.0);
  while (true) {
    double w = hmm.initial.probs[path[0]] * hmm.obs_emission[path[0]][observed[0]];
    for (int k = 1; k < len && w > 0.0; ++k) {
      w *= hmm.transition[path[k - 1]][path[k]] * hmm.obs_emission[path[k]][observed[k]];
    }
    post[path[tau]] += w;

    int pos = len - 1;
    while (pos >= 0 && ++path[pos] == n) {
      path[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  double total = 0.0;
  for (double v : post) total += v;
  if (total <= 0.0) {
    throw std::runtime_error("observed sequence has zero probability under the model");
  }
  DiscreteDist out;
  out.probs.resize(n);
  for (int x = 0; x < n; ++x) out.probs[x] = post[x] / total;
  return out;
}

DiscreteDist enumerate_smoothed_with_records(const ToyHmm& hmm,
                                             const std::vector<int>& observed,
                                             int tau) {
  check_observed(hmm, observed, tau);
  const int n = hmm.n_states;
  const int len = hmm.n_steps + 1;
  const int n_w = static_cast<int>(hmm.unobs_emission.front().size());
  double joint_size = 1.0;
  for (int k = 0; k < len; ++k) joint_size *= static_cast<double>(n) * n_w;
  if (joint_size > 1e7) {
    throw std::invalid_argument(
        "joint enumeration oracle limited to ~1e7 path-record combinations");
  }

  std::vector<int> path(len, 0);
  std::vector<int> record(len, 0);
  std::vector<double> post(n, 0.0);
  while (true) {
    double w = hmm.initial.probs[path[0]] * hmm.obs_emission[path[0]][observed[0]] *
               hmm.unobs_emission[path[0]][record[0]];
    for (int k = 1; k < len && w > 0.0; ++k) {
      w *= hmm.transition[path[k - 1]][path[k]] *
           hmm.obs_emission[path[k]][observed[k]] *
           hmm.unobs_emission[path[k]][record[k]];
    }
    post[path[tau]] += w;

    int pos = len - 1;
    bool carry = true;
    while (pos >= 0 && carry) {
      carry = false;
      if (++record[pos] == n_w) {
        record[pos] = 0;
        if (++path[pos] == n) {
          path[pos] = 0;
          carry = true;
        }
      }
      if (carry) --pos;
    }
    if (pos < 0) break;
  }
  double total = 0.0;
  for (double v : post) total += v;
  if (total <= 0.0) {
    throw std::runtime_error("observed sequence has zero probability under the model");
  }
  DiscreteDist out;
  out.probs.resize(n);
  for (int x = 0; x < n; ++x) out.probs[x] = post[x] / total;
  return out;
}

}  // namespace qpf
