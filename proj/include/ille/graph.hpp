#ifndef ILLE_GRAPH_HPP
#define ILLE_GRAPH_HPP

#include <Eigen/Dense>

#include "ille/errors.hpp"

namespace ille {

/// Symmetric nonnegative affinity Z together with the node degrees
/// d_i = sum_j Z_ij and the normalized form Z~ = D^{-1/2} Z D^{-1/2}.
struct GraphWeights {
    Eigen::MatrixXd z;       // n x n, exactly symmetric, entrywise >= 0
    Eigen::VectorXd degrees; // strictly positive after construction
    Eigen::MatrixXd z_tilde; // n x n

    Eigen::Index size() const { return z.rows(); }
};

/// Construct GraphWeights from a raw symmetric nonnegative matrix.
/// Zero-degree nodes receive a self-loop of 1e-10 * max(Z) (with a warning)
/// so that D^{-1/2} stays defined.
GraphWeights build_graph(const Eigen::MatrixXd& z_raw);

} // namespace ille

#endif
