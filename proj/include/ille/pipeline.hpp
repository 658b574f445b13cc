#ifndef ILLE_PIPELINE_HPP
#define ILLE_PIPELINE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ille/embedding.hpp"
#include "ille/kernel.hpp"
#include "ille/similarity.hpp"

namespace ille {

enum class WMethod { knn_eq16, sparse_eq18 };

WMethod w_method_from_string(const std::string& s);
std::string to_string(WMethod m);

/// Knobs of the iterative refinement loop. Defaults follow the reference
/// experimental setup: T = 4 rounds, the sparse learner for every W step,
/// multiplicative kernel combination, gaussian refinement kernel with a
/// median-heuristic scale.
struct IlleConfig {
    int T = 4;
    WMethod w_method = WMethod::sparse_eq18;
    int k_nn = 5;          // knn_eq16 route
    double alpha = 0.1;    // sparse route
    double beta = 0.1;
    double tol = 1e-8;
    int max_iter = 1000;
    int embed_k = 2;
    KernelMethod kernel_method = KernelMethod::gaussian;
    CombineMode combine_mode = CombineMode::multiplicative;
    std::optional<double> gamma; // absent -> per-iteration median heuristic
    bool zero_diagonal = false;  // zero diag(W) before symmetrization
    bool drop_trivial = false;   // skip the constant eigenvector
    std::uint64_t seed = 0;      // consumed by downstream evaluation only
};

struct WeightsSummary {
    Eigen::Index n = 0;
    std::string kind;
    double min = 0.0;
    double max = 0.0;
    double sum = 0.0;
    Eigen::Index nonzeros = 0; // entries with |w| > 1e-12
};

struct KernelSummary {
    Eigen::Index n = 0;
    double min = 0.0;
    double max = 0.0;
    double lambda_min = 0.0;
};

/// One record per executed loop iteration.
struct IterationRecord {
    int t = 0;
    WeightsSummary w_summary;
    Eigen::VectorXd degrees;
    Embedding embedding;
    KernelSummary kernel_next;
    std::optional<SolveReport> solve_report; // sparse route only
};

using IlleHistory = std::vector<IterationRecord>;

struct IlleResult {
    Kernel refined_kernel; // the loop's "pairwise similarity" output
    Embedding embedding;   // Y from the last iteration
    IlleHistory history;
};

WeightsSummary summarize_weights(const SimilarityMatrix& W);
KernelSummary summarize_kernel(const Kernel& K);

/// Run the iterative loop for exactly cfg.T rounds:
/// learn W from K^t, symmetrize, embed, build K_Y from the embedding and
/// combine into K^{t+1}. Module errors are rethrown with the iteration
/// index attached. Kernel invariants are re-checked every round.
IlleResult iterative_lle(const Kernel& K1, const IlleConfig& cfg);

} // namespace ille

#endif
