#include "scet/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scet/errors.hpp"

namespace scet {

double scaled_dot_score(std::span<const double> state_vec, std::span<const double> context) {
    if (state_vec.size() != context.size())
        throw ShapeError("scaled_dot_score: dimension mismatch");
    double dot = 0.0;
    for (std::size_t i = 0; i < state_vec.size(); ++i) dot += state_vec[i] * context[i];
    return dot / std::sqrt(static_cast<double>(state_vec.size()));
}

StateDistribution selection_distribution(int prev_state, const TransitionMatrix& P,
                                         std::span<const double> scores, double tau) {
    validate(P);
    int S = P.state_count;
    if (prev_state < 0 || prev_state >= S)
        throw IndexError("selection_distribution: prev_state out of range");
    if (scores.size() != static_cast<std::size_t>(S))
        throw ShapeError("selection_distribution: scores length does not match state count");
    if (!(tau > 0.0)) throw ValidationError("selection_distribution: tau must be positive");
    for (double f : scores) {
        if (std::isnan(f)) throw ValidationError("selection_distribution: NaN score");
    }

    // log w_s = log P[prev][s] + f_s / tau, normalized by max to avoid
    // overflow; -inf entries drop out.
    std::vector<double> logw(S);
    double mx = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < S; ++s) {
        double p = P(prev_state, s);
        logw[s] = (p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity()) +
                  scores[s] / tau;
        mx = std::max(mx, logw[s]);
    }
    if (!std::isfinite(mx))
        throw DegenerateDistributionError(
            "selection_distribution: all candidate states have zero mass");
    std::vector<double> q(S);
    double sum = 0.0;
    for (int s = 0; s < S; ++s) {
        q[s] = std::isfinite(logw[s]) ? std::exp(logw[s] - mx) : 0.0;
        sum += q[s];
    }
    for (double& v : q) v /= sum;
    return StateDistribution(std::move(q));
}

int select_state(const StateDistribution& q, const SamplerConfig& config, RngStream& rng) {
    validate(q);
    switch (config.mode) {
        case SamplerConfig::Mode::argmax: {
            int best = 0;
            for (int s = 1; s < q.size(); ++s)
                if (q.probs[s] > q.probs[best]) best = s;
            return best;
        }
        case SamplerConfig::Mode::categorical:
            return rng.categorical(q.probs);
        case SamplerConfig::Mode::relaxed: {
            // Hard decision from a relaxed draw: argmax of the Gumbel-softmax
            // sample, which coincides with Gumbel-max over log q.
            std::vector<double> logits(q.size());
            for (int s = 0; s < q.size(); ++s)
                logits[s] = q.probs[s] > 0.0 ? std::log(q.probs[s])
                                             : -std::numeric_limits<double>::infinity();
            auto y = relaxed_categorical_sample(logits, config.temperature, rng);
            return static_cast<int>(std::max_element(y.begin(), y.end()) - y.begin());
        }
    }
    throw ValidationError("select_state: unknown sampler mode");
}

double entropy(const StateDistribution& dist) {
    validate(dist);
    double h = 0.0;
    for (double p : dist.probs) {
        if (p > 0.0) h -= p * std::log(p);
    }
    return std::max(h, 0.0);
}

double kl_divergence(const StateDistribution& p, const StateDistribution& q) {
    validate(p);
    validate(q);
    if (p.size() != q.size()) throw ShapeError("kl_divergence: size mismatch");
    double kl = 0.0;
    for (int i = 0; i < p.size(); ++i) {
        if (p.probs[i] == 0.0) continue;
        if (q.probs[i] == 0.0)
            throw InfiniteDivergenceError("kl_divergence: p[" + std::to_string(i) +
                                          "] > 0 where q[" + std::to_string(i) + "] = 0");
        kl += p.probs[i] * std::log(p.probs[i] / q.probs[i]);
    }
    return std::max(kl, 0.0);
}

double transition_regularizer(const TransitionLogits& logits, const RegularizerConfig& config) {
    if (config.lambda_kl < 0.0 || config.beta_entropy < 0.0)
        throw ValidationError("transition_regularizer: lambda and beta must be non-negative");
    if (config.lambda_kl == 0.0 && config.beta_entropy == 0.0) return 0.0;
    validate(config.prior);
    if (config.prior.state_count != logits.state_count)
        throw ShapeError("transition_regularizer: prior size does not match state count");

    auto matrices = rows_from_logits(logits);
    int S = logits.state_count;
    double kl_sum = 0.0;
    double ent_sum = 0.0;
    long long n_rows = 0;
    for (const auto& P : matrices) {
        for (int i = 0; i < S; ++i) {
            StateDistribution row(std::vector<double>(P.row(i).begin(), P.row(i).end()));
            StateDistribution prior_row(
                std::vector<double>(config.prior.row(i).begin(), config.prior.row(i).end()));
            if (config.lambda_kl > 0.0) kl_sum += kl_divergence(row, prior_row);
            if (config.beta_entropy > 0.0) ent_sum += entropy(row);
            ++n_rows;
        }
    }
    return config.lambda_kl * (kl_sum / n_rows) - config.beta_entropy * (ent_sum / n_rows);
}

namespace {
// With P_row = softmax(theta), q(s) proportional to P_row[s] * exp(f_s/tau)
// collapses to softmax(theta + f/tau).
std::vector<double> selection_from_row(std::span<const double> logit_row, int prev_state,
                                       std::span<const double> scores, double tau) {
    int S = static_cast<int>(logit_row.size());
    if (scores.size() != static_cast<std::size_t>(S))
        throw ShapeError("score gradient: scores length does not match logit row");
    if (prev_state < 0 || prev_state >= S)
        throw IndexError("score gradient: prev_state out of range");
    if (!(tau > 0.0)) throw ValidationError("score gradient: tau must be positive");
    std::vector<double> shifted(S);
    for (int s = 0; s < S; ++s) shifted[s] = logit_row[s] + scores[s] / tau;
    return softmax_row(shifted);
}
}  // namespace

std::vector<double> exact_expected_score_grad(std::span<const double> logit_row,
                                              int prev_state,
                                              std::span<const double> scores, double tau) {
    int S = static_cast<int>(logit_row.size());
    if (S > 64) throw ValidationError("exact_expected_score_grad: S too large to enumerate");
    auto q = selection_from_row(logit_row, prev_state, scores, tau);

    // Full enumeration of E_q[f]: grad_k = sum_s q(s) * dlog q(s)/dtheta_k * f_s
    // with dlog q(s)/dtheta_k = delta_ks - q(k).
    std::vector<double> grad(S, 0.0);
    for (int s = 0; s < S; ++s) {
        for (int k = 0; k < S; ++k)
            grad[k] += q[s] * ((k == s ? 1.0 : 0.0) - q[k]) * scores[s];
    }
    return grad;
}

std::vector<double> score_function_grad(std::span<const double> logit_row, int prev_state,
                                        std::span<const double> scores, double tau,
                                        int n_samples, GradBaseline baseline,
                                        RngStream& rng) {
    if (n_samples < 1) throw ValidationError("score_function_grad: n_samples must be >= 1");
    int S = static_cast<int>(logit_row.size());
    auto q = selection_from_row(logit_row, prev_state, scores, tau);

    double b = 0.0;
    if (baseline == GradBaseline::mean) {
        // Exact E_q[f]; constant with respect to the samples, so unbiasedness
        // is preserved.
        for (int s = 0; s < S; ++s) b += q[s] * scores[s];
    }

    std::vector<double> grad(S, 0.0);
    for (int n = 0; n < n_samples; ++n) {
        int s = rng.categorical(q);
        double f = scores[s] - b;
        for (int k = 0; k < S; ++k) grad[k] += ((k == s ? 1.0 : 0.0) - q[k]) * f;
    }
    for (double& g : grad) g /= n_samples;
    return grad;
}

std::vector<double> relaxed_categorical_sample(std::span<const double> logit_row, double tau,
                                               RngStream& rng) {
    if (!(tau > 0.0)) throw ValidationError("relaxed_categorical_sample: tau must be positive");
    std::vector<double> z(logit_row.size());
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < z.size(); ++i) {
        z[i] = (logit_row[i] + rng.gumbel()) / tau;
        mx = std::max(mx, z[i]);
    }
    double sum = 0.0;
    for (double& v : z) {
        v = std::isfinite(v) ? std::exp(v - mx) : 0.0;
        sum += v;
    }
    for (double& v : z) v /= sum;
    return z;
}

}  // namespace scet
