#include "ille/graph.hpp"

#include <cmath>
#include <iostream>

namespace ille {

GraphWeights build_graph(const Eigen::MatrixXd& z_raw) {
    if (z_raw.rows() != z_raw.cols() || z_raw.rows() < 1) {
        throw ValidationError("graph weights must be a nonempty square matrix");
    }
    if (!z_raw.allFinite()) {
        throw ValidationError("graph weights contain non-finite entries");
    }
    const double scale = z_raw.cwiseAbs().maxCoeff();
    if ((z_raw - z_raw.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(scale, 1.0)) {
        throw ValidationError("graph weights are not symmetric");
    }
    if (z_raw.minCoeff() < 0.0) {
        throw ValidationError("graph weights contain negative entries");
    }

    GraphWeights g;
    g.z = (z_raw + z_raw.transpose()) * 0.5; // exact symmetry
    g.degrees = g.z.rowwise().sum();

    if (g.degrees.minCoeff() <= 0.0) {
        const double eps_deg = 1e-10 * g.z.maxCoeff();
        if (eps_deg <= 0.0) {
            throw ValidationError("graph has no edges; degrees cannot be normalized");
        }
        for (Eigen::Index i = 0; i < g.size(); ++i) {
            if (g.degrees(i) <= 0.0) {
                std::cerr << "warning: node " << i
                          << " is isolated; adding self-loop " << eps_deg << "\n";
                g.z(i, i) += eps_deg;
            }
        }
        g.degrees = g.z.rowwise().sum();
    }

    const Eigen::VectorXd dinv_sqrt = g.degrees.array().rsqrt();
    g.z_tilde = dinv_sqrt.asDiagonal() * g.z * dinv_sqrt.asDiagonal();
    g.z_tilde = ((g.z_tilde + g.z_tilde.transpose()) * 0.5).eval();
    return g;
}

} // namespace ille
