#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "scet/embedding.hpp"
#include "scet/rng.hpp"

namespace scet {

struct SamplerConfig {
    enum class Mode { argmax, categorical, relaxed };
    Mode mode = Mode::categorical;
    double temperature = 1.0;  // tau > 0
    std::uint64_t seed = 0;
};

// Scores a candidate state embedding against a context vector.
using ContextScorer =
    std::function<double(std::span<const double> state_vec, std::span<const double> context)>;

// Default scorer: (context . e) / sqrt(d).
double scaled_dot_score(std::span<const double> state_vec, std::span<const double> context);

struct RegularizerConfig {
    double lambda_kl = 0.0;    // weight on mean KL(P_row || prior_row)
    double beta_entropy = 0.0; // weight on mean row entropy (entropy is rewarded)
    TransitionMatrix prior;    // P0
};

// q[s] proportional to P[prev_state][s] * exp(scores[s] / tau). Computed in
// log space; -inf scores exclude a state. Throws DegenerateDistributionError
// when every candidate has zero mass.
StateDistribution selection_distribution(int prev_state, const TransitionMatrix& P,
                                         std::span<const double> scores, double tau);

// argmax: smallest index attaining the max; categorical: exact sample from q;
// relaxed: argmax of a Gumbel-softmax draw at config.temperature.
int select_state(const StateDistribution& q, const SamplerConfig& config, RngStream& rng);

// -sum p log p in nats, with 0 log 0 = 0.
double entropy(const StateDistribution& dist);

// sum p log(p / q). Throws InfiniteDivergenceError when p > 0 where q = 0.
double kl_divergence(const StateDistribution& p, const StateDistribution& q);

// lambda * mean_rows KL(P_row || P0_row) - beta * mean_rows entropy(P_row),
// with P = rows_from_logits(logits). Scalar value; the differentiable twin
// lives on the model's tape and is checked against this one.
double transition_regularizer(const TransitionLogits& logits, const RegularizerConfig& config);

// d/dtheta E_q[f] for one logit row theta, where q = selection_distribution
// over P_row = softmax(theta). Exact enumeration over all S states.
std::vector<double> exact_expected_score_grad(std::span<const double> logit_row,
                                              int prev_state,
                                              std::span<const double> scores, double tau);

enum class GradBaseline { none, mean };

// Monte Carlo score-function (REINFORCE) estimate of the same gradient:
// (1/n) sum over sampled states of dlog q(s)/dtheta * (f_s - b). The mean
// baseline b = E_q[f] is computed by enumeration and is independent of the
// samples, so the estimator stays unbiased.
std::vector<double> score_function_grad(std::span<const double> logit_row, int prev_state,
                                        std::span<const double> scores, double tau,
                                        int n_samples, GradBaseline baseline,
                                        RngStream& rng);

// softmax((logits + Gumbel noise) / tau); a point on the simplex,
// differentiable in the logits for fixed noise.
std::vector<double> relaxed_categorical_sample(std::span<const double> logit_row, double tau,
                                               RngStream& rng);

}  // namespace scet
