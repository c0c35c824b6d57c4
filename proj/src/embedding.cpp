#include "scet/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "scet/errors.hpp"

namespace scet {

namespace testhook {
bool disable_row_normalization = false;
}

ConceptEmbeddingTable::ConceptEmbeddingTable(int vocab_size, int state_count, int dim)
    : vocab_size(vocab_size), state_count(state_count), dim(dim) {
    if (vocab_size < 1 || state_count < 1 || dim < 1)
        throw ShapeError("ConceptEmbeddingTable: V, S and d must all be >= 1");
    weights.assign(static_cast<std::size_t>(vocab_size) * state_count * dim, 0.0);
}

std::span<const double> ConceptEmbeddingTable::state_vector(int token, int state) const {
    if (token < 0 || token >= vocab_size)
        throw IndexError("token index " + std::to_string(token) + " out of range [0, " +
                         std::to_string(vocab_size) + ")");
    if (state < 0 || state >= state_count)
        throw IndexError("state index " + std::to_string(state) + " out of range");
    std::size_t off =
        (static_cast<std::size_t>(token) * state_count + state) * static_cast<std::size_t>(dim);
    return {weights.data() + off, static_cast<std::size_t>(dim)};
}

std::span<double> ConceptEmbeddingTable::state_vector(int token, int state) {
    auto view = static_cast<const ConceptEmbeddingTable&>(*this).state_vector(token, state);
    return {const_cast<double*>(view.data()), view.size()};
}

TransitionLogits::TransitionLogits(TransitionScope scope, int vocab_size, int state_count)
    : scope(scope),
      vocab_size(scope == TransitionScope::shared ? 1 : vocab_size),
      state_count(state_count) {
    if (state_count < 1) throw ShapeError("TransitionLogits: S must be >= 1");
    if (this->vocab_size < 1) throw ShapeError("TransitionLogits: V must be >= 1");
    values.assign(static_cast<std::size_t>(matrix_count()) * state_count * state_count, 0.0);
}

std::span<const double> TransitionLogits::row(int token, int from_state) const {
    int m = scope == TransitionScope::shared ? 0 : token;
    if (m < 0 || m >= matrix_count()) throw IndexError("transition matrix index out of range");
    if (from_state < 0 || from_state >= state_count)
        throw IndexError("from_state out of range");
    std::size_t off = (static_cast<std::size_t>(m) * state_count + from_state) *
                      static_cast<std::size_t>(state_count);
    return {values.data() + off, static_cast<std::size_t>(state_count)};
}

std::span<double> TransitionLogits::row(int token, int from_state) {
    auto view = static_cast<const TransitionLogits&>(*this).row(token, from_state);
    return {const_cast<double*>(view.data()), view.size()};
}

TransitionMatrix TransitionMatrix::uniform(int state_count) {
    TransitionMatrix P(state_count);
    double v = 1.0 / state_count;
    std::fill(P.entries.begin(), P.entries.end(), v);
    return P;
}

TransitionMatrix TransitionMatrix::identity(int state_count) {
    TransitionMatrix P(state_count);
    for (int i = 0; i < state_count; ++i) P(i, i) = 1.0;
    return P;
}

StateDistribution StateDistribution::uniform(int state_count) {
    return StateDistribution(std::vector<double>(state_count, 1.0 / state_count));
}

StateDistribution StateDistribution::one_hot(int state_count, int state) {
    std::vector<double> p(state_count, 0.0);
    p.at(state) = 1.0;
    return StateDistribution(std::move(p));
}

void validate(const TransitionMatrix& P) {
    int S = P.state_count;
    if (S < 1 || P.entries.size() != static_cast<std::size_t>(S) * S)
        throw ShapeError("TransitionMatrix: entries do not match state_count");
    for (int i = 0; i < S; ++i) {
        double sum = 0.0;
        for (int j = 0; j < S; ++j) {
            double v = P(i, j);
            if (!std::isfinite(v))
                throw ValidationError("TransitionMatrix: non-finite entry at (" +
                                      std::to_string(i) + ", " + std::to_string(j) + ")");
            if (v < 0.0)
                throw ValidationError("TransitionMatrix: negative entry at (" +
                                      std::to_string(i) + ", " + std::to_string(j) + ")");
            sum += v;
        }
        if (std::abs(sum - 1.0) > kSimplexTol)
            throw ValidationError("TransitionMatrix: row " + std::to_string(i) +
                                  " sums to " + std::to_string(sum));
    }
}

void validate(const StateDistribution& dist) {
    if (dist.probs.empty()) throw ShapeError("StateDistribution: empty");
    double sum = 0.0;
    for (std::size_t i = 0; i < dist.probs.size(); ++i) {
        double v = dist.probs[i];
        if (!std::isfinite(v))
            throw ValidationError("StateDistribution: non-finite entry at " + std::to_string(i));
        if (v < 0.0)
            throw ValidationError("StateDistribution: negative entry at " + std::to_string(i));
        sum += v;
    }
    if (std::abs(sum - 1.0) > kSimplexTol)
        throw ValidationError("StateDistribution: sums to " + std::to_string(sum));
}

std::vector<double> softmax_row(std::span<const double> logits) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double v : logits) {
        if (!std::isfinite(v)) throw ValidationError("softmax_row: non-finite logit");
        mx = std::max(mx, v);
    }
    std::vector<double> out(logits.size());
    double sum = 0.0;
    for (std::size_t j = 0; j < logits.size(); ++j) {
        out[j] = std::exp(logits[j] - mx);
        sum += out[j];
    }
    if (!testhook::disable_row_normalization) {
        for (double& v : out) v /= sum;
    }
    return out;
}

std::vector<TransitionMatrix> rows_from_logits(const TransitionLogits& logits) {
    int S = logits.state_count;
    std::vector<TransitionMatrix> out;
    out.reserve(logits.matrix_count());
    for (int m = 0; m < logits.matrix_count(); ++m) {
        TransitionMatrix P(S);
        for (int i = 0; i < S; ++i) {
            auto row = softmax_row(logits.row(m, i));
            std::copy(row.begin(), row.end(),
                      P.entries.begin() + static_cast<std::size_t>(i) * S);
        }
        out.push_back(std::move(P));
    }
    return out;
}

StateDistribution propagate(const StateDistribution& dist, const TransitionMatrix& P) {
    validate(dist);
    validate(P);
    if (dist.size() != P.state_count)
        throw ShapeError("propagate: distribution size " + std::to_string(dist.size()) +
                         " does not match matrix size " + std::to_string(P.state_count));
    int S = P.state_count;
    std::vector<double> out(S, 0.0);
    for (int i = 0; i < S; ++i) {
        double di = dist.probs[i];
        if (di == 0.0) continue;
        for (int j = 0; j < S; ++j) out[j] += di * P(i, j);
    }
    return StateDistribution(std::move(out));
}

StateDistribution stationary_distribution(const TransitionMatrix& P, double tol,
                                          int max_iters) {
    validate(P);
    int S = P.state_count;
    StateDistribution pi = StateDistribution::uniform(S);
    double residual = 0.0;
    for (int iter = 0; iter < max_iters; ++iter) {
        StateDistribution next = propagate(pi, P);
        residual = 0.0;
        for (int j = 0; j < S; ++j) residual += std::abs(next.probs[j] - pi.probs[j]);
        pi = std::move(next);
        if (residual < tol) return pi;
    }
    std::ostringstream msg;
    msg << "stationary_distribution: no convergence after " << max_iters
        << " iterations, residual " << residual << " (tol " << tol << ")";
    throw ConvergenceError(msg.str(), residual);
}

std::vector<double> expected_embedding(const ConceptEmbeddingTable& table, int token,
                                       const StateDistribution& dist) {
    validate(dist);
    if (token < 0 || token >= table.vocab_size)
        throw IndexError("expected_embedding: token " + std::to_string(token) +
                         " out of range [0, " + std::to_string(table.vocab_size) + ")");
    if (dist.size() != table.state_count)
        throw ShapeError("expected_embedding: distribution size does not match state_count");
    std::vector<double> out(table.dim, 0.0);
    for (int s = 0; s < table.state_count; ++s) {
        double w = dist.probs[s];
        if (w == 0.0) continue;
        auto vec = table.state_vector(token, s);
        for (int k = 0; k < table.dim; ++k) out[k] += w * vec[k];
    }
    return out;
}

TableValidationReport validate_table(const ConceptEmbeddingTable& table) {
    TableValidationReport report;
    if (table.vocab_size < 1 || table.state_count < 1 || table.dim < 1) {
        report.issues.push_back("shape: V, S and d must all be >= 1");
        return report;
    }
    std::size_t expected =
        static_cast<std::size_t>(table.vocab_size) * table.state_count * table.dim;
    if (table.weights.size() != expected) {
        std::ostringstream msg;
        msg << "shape: weights has " << table.weights.size() << " entries, expected "
            << expected;
        report.issues.push_back(msg.str());
        return report;
    }
    report.state_norms.reserve(static_cast<std::size_t>(table.vocab_size) * table.state_count);
    for (int t = 0; t < table.vocab_size; ++t) {
        for (int s = 0; s < table.state_count; ++s) {
            auto vec = table.state_vector(t, s);
            double norm_sq = 0.0;
            for (int k = 0; k < table.dim; ++k) {
                double v = vec[k];
                if (!std::isfinite(v)) {
                    std::ostringstream msg;
                    msg << "non-finite entry at token " << t << ", state " << s
                        << ", coordinate " << k;
                    report.issues.push_back(msg.str());
                }
                norm_sq += v * v;
            }
            double norm = std::sqrt(norm_sq);
            report.state_norms.push_back(norm);
            if (norm == 0.0) {
                std::ostringstream msg;
                msg << "zero-norm state vector at token " << t << ", state " << s;
                report.warnings.push_back(msg.str());
            }
        }
    }
    return report;
}

}  // namespace scet
