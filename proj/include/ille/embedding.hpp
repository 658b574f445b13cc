#ifndef ILLE_EMBEDDING_HPP
#define ILLE_EMBEDDING_HPP

#include <Eigen/Dense>

#include "ille/graph.hpp"

namespace ille {

/// Degree-weighted embedding: k x n coordinates with Y D Y^T = I_k and the
/// eigenvalues lambda_j = mu_j^2 of (I - Z~)^2, sorted ascending.
struct Embedding {
    Eigen::MatrixXd coords;      // k x n, point i is coords.col(i)
    Eigen::VectorXd eigenvalues; // length k, nonnegative, ascending

    Eigen::Index dim() const { return coords.rows(); }
    Eigen::Index points() const { return coords.cols(); }
};

/// Relaxed normalized-cut indicators: orthonormal eigenvector matrix G and
/// its degree-scaled form H = D^{-1/2} G (both n x k).
struct CutIndicators {
    Eigen::MatrixXd g;
    Eigen::MatrixXd h;
};

struct EmbedOptions {
    /// Skip the constant D^{1/2}e eigenvector and take eigenpairs 2..k+1.
    bool drop_trivial = false;
};

/// Solve the weighted reconstruction objective: Y = F^T D^{-1/2} where F
/// holds the k smallest eigenvectors of the symmetric (I - Z~). Eigenvalues
/// are squared on return. Eigenvector signs are fixed so the entry of
/// largest magnitude (lowest index on ties) is positive.
Embedding embed(const GraphWeights& G, int k, const EmbedOptions& opts = {});

/// Smallest-k eigenvectors of (I - Z~) plus H = D^{-1/2} G.
CutIndicators normalized_cut_indicators(const GraphWeights& G, int k);

/// sum_i d_i ||y_i - sum_j (D^{-1} Z)_ij y_j||^2 for arbitrary k x n
/// coordinates.
double lle_objective(const Eigen::MatrixXd& Y, const GraphWeights& G);

inline double lle_objective(const Embedding& Y, const GraphWeights& G) {
    return lle_objective(Y.coords, G);
}

} // namespace ille

#endif
