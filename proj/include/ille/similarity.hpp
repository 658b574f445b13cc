#ifndef ILLE_SIMILARITY_HPP
#define ILLE_SIMILARITY_HPP

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "ille/graph.hpp"
#include "ille/kernel.hpp"

namespace ille {

enum class WeightKind { knn_affine, knn_nonneg, sparse_learned };

std::string to_string(WeightKind k);

/// Learned reconstruction/similarity weights. For the kNN kinds, `support`
/// holds the per-row neighbor index sets and entries outside the support
/// are exactly zero.
struct SimilarityMatrix {
    Eigen::MatrixXd values; // n x n
    WeightKind kind = WeightKind::sparse_learned;
    std::vector<std::vector<Eigen::Index>> support; // empty for sparse_learned

    Eigen::Index size() const { return values.rows(); }
};

/// Convergence record of the multiplicative similarity learner.
struct SolveReport {
    int iterations = 0;                  // update sweeps executed
    std::vector<double> objective_trace; // objective before and after each sweep
    double final_kkt_residual = 0.0;
    bool converged = false;
};

/// Per-row kNN weights under the affine constraint sum_j w_j = 1.
/// Neighborhoods use the kernel-induced distance
/// d^2(i,j) = K_ii + K_jj - 2 K_ij; ties at the k-th distance break toward
/// the lowest index. Singular local Gram matrices are Tikhonov-regularized
/// (1e-3 * trace / k on the diagonal), never a hard error.
SimilarityMatrix lle_weights_knn(const Kernel& K, int k_nn);

/// Per-row nonnegative least squares over the kNN support, minimizing
/// K_ii - 2 k_N^T w + w^T K_NN w subject to w >= 0 (active-set solve).
/// Rows whose whole neighborhood collapses onto the point itself get the
/// uniform feasible vector over the support.
SimilarityMatrix nonneg_lle_weights_knn(const Kernel& K, int k_nn);

/// Dense sparse-similarity learner: starting from S = all-ones (or `init`
/// when given), iterate
///   S_ij <- S_ij * K_ij / ((K S + alpha S)_ij + beta/2 + 1e-12)
/// until the relative objective change drops below `tol` with a matching
/// KKT residual, or `max_iter` sweeps have run. Requires an
/// entrywise-nonnegative kernel.
std::pair<SimilarityMatrix, SolveReport>
learn_sparse_similarity(const Kernel& K, double alpha, double beta,
                        double tol = 1e-8, int max_iter = 1000,
                        std::optional<Eigen::MatrixXd> init = std::nullopt);

/// Tr(K - 2KS + S^T K S) + alpha * Tr(S^T S) + beta * sum_ij S_ij.
double objective_sparse(const Kernel& K, const SimilarityMatrix& S,
                        double alpha, double beta);

/// max_ij |(-2K + 2KS + 2 alpha S + beta E)_ij * S_ij| / max(1, max|K|).
double kkt_residual(const Kernel& K, const SimilarityMatrix& S,
                    double alpha, double beta);

/// Z = (W + W^T)/2 followed by graph construction. Weights must be
/// entrywise nonnegative.
GraphWeights symmetrize(const SimilarityMatrix& W);

/// KKT residual of one NNLS row (gradient 2(Qw - c)): max over j of |grad_j|
/// on the free set and max(0, -grad_j) on the active set. Exposed for tests.
double nnls_row_kkt_residual(const Eigen::MatrixXd& Q, const Eigen::VectorXd& c,
                             const Eigen::VectorXd& w);

} // namespace ille

#endif
