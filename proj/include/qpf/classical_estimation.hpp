#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace qpf {

/// Probability vector over a finite configuration set.
struct DiscreteDist {
  std::vector<double> probs;
  bool normalized = true;

  /// Throws std::invalid_argument on negative entries, or when the
  /// normalized flag is set but the sum is off 1 by more than 1e-12.
  void validate() const;

  /// Delta distribution at index `at`.
  static DiscreteDist delta(std::size_t n, std::size_t at);
};

/// Small hidden-Markov testbed with one observed and one unobserved symbol
/// emitted per time index. Sizes are capped so brute-force enumeration over
/// hidden paths (and small-instance unobserved records) stays exact.
///
/// Timeline convention: states x_0..x_{n_steps}; x_0 ~ initial; each x_k
/// emits an observed symbol o_k and an unobserved one w_k; transitions act
/// between consecutive indices. An observed sequence therefore has length
/// n_steps + 1.
struct ToyHmm {
  int n_states = 0;
  int n_steps = 0;
  std::vector<std::vector<double>> transition;      ///< n_states x n_states
  std::vector<std::vector<double>> obs_emission;    ///< n_states x n_obs_symbols
  std::vector<std::vector<double>> unobs_emission;  ///< n_states x n_unobs_symbols
  DiscreteDist initial;

  /// Checks stochasticity of every row and the 6-state / 8-step caps.
  void validate() const;

  /// Parses {n_states, n_steps, transition, obs_emission, unobs_emission,
  /// initial} from JSON text.
  static ToyHmm from_json_text(const std::string& text);
};

/// Bayesian mean estimate sum_x p(x) value(x).
double bme(const DiscreteDist& dist, const std::vector<double>& values);

/// Argmax index; ties broken by lowest index.
std::size_t mle(const DiscreteDist& dist);

/// Posterior over configurations at step tau given the full observed
/// sequence, by forward-backward recursion. Throws std::runtime_error when
/// the observed sequence has zero probability.
DiscreteDist classical_smoothed(const ToyHmm& hmm, const std::vector<int>& observed,
                                int tau);

/// Filtered posterior at tau (observations up to and including tau).
DiscreteDist classical_filtered(const ToyHmm& hmm, const std::vector<int>& observed,
                                int tau);

/// Likelihood of the strictly-future observations given the state at tau,
/// i.e. the classical retrodictive effect. Unnormalized by construction.
std::vector<double> classical_backward_likelihood(const ToyHmm& hmm,
                                                  const std::vector<int>& observed,
                                                  int tau);

/// State estimate built the two-sided way: elementwise product of the
/// filtered posterior and the backward likelihood, renormalized. Equals
/// classical_smoothed; keeping the routes separate is the point of the
/// classical equivalence tests.
DiscreteDist classical_swv(const ToyHmm& hmm, const std::vector<int>& observed,
                           int tau);

/// Delta estimators minimizing expected negative fidelity and expected
/// negative equality; both sit at the smoothed argmax. Throws when the
/// smoothed maximum is degenerate.
std::pair<DiscreteDist, DiscreteDist> classical_nF_nE_estimators(
    const ToyHmm& hmm, const std::vector<int>& observed, int tau);

/// Brute-force smoothed posterior summing over every hidden path. Refuses
/// instances beyond 6 states or 8 steps instead of approximating.
DiscreteDist enumerate_smoothed_posterior(const ToyHmm& hmm,
                                          const std::vector<int>& observed, int tau);

/// Same posterior computed by joint enumeration over hidden paths and
/// unobserved symbol records, verifying that the unobserved channel
/// marginalizes out. Intended for small instances; refuses when the joint
/// space exceeds ~1e7 terms.
DiscreteDist enumerate_smoothed_with_records(const ToyHmm& hmm,
                                             const std::vector<int>& observed,
                                             int tau);

}  // namespace qpf
