#pragma once

#include <span>
#include <string>
#include <vector>

namespace scet {

// Tolerance for simplex checks (row sums, distribution sums).
inline constexpr double kSimplexTol = 1e-9;

// V x S x d tensor of per-token, per-latent-state embedding vectors.
struct ConceptEmbeddingTable {
    int vocab_size = 0;
    int state_count = 0;
    int dim = 0;
    std::vector<double> weights;  // row-major [token][state][coord]

    ConceptEmbeddingTable() = default;
    ConceptEmbeddingTable(int vocab_size, int state_count, int dim);

    std::span<const double> state_vector(int token, int state) const;
    std::span<double> state_vector(int token, int state);
};

enum class TransitionScope { per_token, shared };

// Unconstrained transition parameters; one S x S block per scoped token.
struct TransitionLogits {
    TransitionScope scope = TransitionScope::per_token;
    int vocab_size = 1;  // 1 when shared
    int state_count = 0;
    std::vector<double> values;  // [matrix][row][col]

    TransitionLogits() = default;
    TransitionLogits(TransitionScope scope, int vocab_size, int state_count);

    int matrix_count() const {
        return scope == TransitionScope::shared ? 1 : vocab_size;
    }
    // Logit row for (token, from_state); shared scope ignores token.
    std::span<const double> row(int token, int from_state) const;
    std::span<double> row(int token, int from_state);
};

// Row-stochastic S x S matrix.
struct TransitionMatrix {
    int state_count = 0;
    std::vector<double> entries;  // row-major

    TransitionMatrix() = default;
    explicit TransitionMatrix(int state_count)
        : state_count(state_count),
          entries(static_cast<std::size_t>(state_count) * state_count, 0.0) {}

    double operator()(int i, int j) const {
        return entries[static_cast<std::size_t>(i) * state_count + j];
    }
    double& operator()(int i, int j) {
        return entries[static_cast<std::size_t>(i) * state_count + j];
    }
    std::span<const double> row(int i) const {
        return {entries.data() + static_cast<std::size_t>(i) * state_count,
                static_cast<std::size_t>(state_count)};
    }

    static TransitionMatrix uniform(int state_count);
    static TransitionMatrix identity(int state_count);
};

// Probability vector over the S latent states.
struct StateDistribution {
    std::vector<double> probs;

    StateDistribution() = default;
    explicit StateDistribution(std::vector<double> p) : probs(std::move(p)) {}

    int size() const { return static_cast<int>(probs.size()); }
    double operator[](int i) const { return probs[i]; }

    static StateDistribution uniform(int state_count);
    static StateDistribution one_hot(int state_count, int state);
};

// Throwing validators. `what` names the offending entry where possible.
void validate(const TransitionMatrix& P);
void validate(const StateDistribution& dist);

// Row-wise softmax of every scoped logit block. Output rows sum to 1 within
// kSimplexTol by construction. Throws ValidationError on non-finite logits.
std::vector<TransitionMatrix> rows_from_logits(const TransitionLogits& logits);

// Softmax of a single logit row.
std::vector<double> softmax_row(std::span<const double> logits);

// One Markov step: returns dist * P (row vector times matrix).
StateDistribution propagate(const StateDistribution& dist, const TransitionMatrix& P);

// Power iteration from the uniform distribution until ||pi P - pi||_1 < tol.
// Throws ConvergenceError (carrying the final residual) after max_iters.
StateDistribution stationary_distribution(const TransitionMatrix& P, double tol,
                                          int max_iters);

// Sum_s dist[s] * weights[token][s]; length-d vector.
std::vector<double> expected_embedding(const ConceptEmbeddingTable& table, int token,
                                       const StateDistribution& dist);

struct TableValidationReport {
    std::vector<std::string> issues;    // NaN/Inf and shape problems
    std::vector<std::string> warnings;  // e.g. zero-norm state vectors
    std::vector<double> state_norms;    // per (token, state) L2 norm, row-major
    bool ok() const { return issues.empty(); }
};

TableValidationReport validate_table(const ConceptEmbeddingTable& table);

namespace testhook {
// When true, rows_from_logits skips the final normalization. Only the
// validate command's fault-injection path flips this (via the
// SCET_TEST_DISABLE_ROW_NORM environment variable); never set in production.
extern bool disable_row_normalization;
}  // namespace testhook

}  // namespace scet
