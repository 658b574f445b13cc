#ifndef ILLE_TEST_UTIL_HPP
#define ILLE_TEST_UTIL_HPP

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "ille/kernel.hpp"

// Shared generators and independent oracles. Everything here is test-only
// and must stay decoupled from the implementation paths it checks.
namespace testutil {

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Eigen::MatrixXd random_points(std::mt19937_64& rng, Eigen::Index n, Eigen::Index p,
                                     double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Eigen::MatrixXd X(n, p);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < p; ++j) X(i, j) = u(rng);
    return X;
}

// Entrywise-nonnegative PSD kernel: A A^T with A >= 0 (even draws) or a
// gaussian kernel of random points (odd draws).
inline ille::Kernel random_nonneg_psd_kernel(std::mt19937_64& rng, Eigen::Index n,
                                             bool gram_style) {
    if (gram_style) {
        const Eigen::MatrixXd A = random_points(rng, n, n + 2, 0.0, 1.0);
        Eigen::MatrixXd K = A * A.transpose();
        K = ((K + K.transpose()) * 0.5).eval();
        return ille::Kernel{std::move(K)};
    }
    std::uniform_real_distribution<double> g(0.2, 2.0);
    return ille::gaussian_kernel(random_points(rng, n, 2), g(rng));
}

// Symmetric nonnegative affinity with strictly positive entries (connected).
inline Eigen::MatrixXd random_affinity(std::mt19937_64& rng, Eigen::Index n) {
    std::uniform_real_distribution<double> g(0.2, 2.0);
    return ille::gaussian_kernel(random_points(rng, n, 2), g(rng)).values;
}

// Largest principal angle (radians) between the column spaces of A and B.
inline double largest_principal_angle(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    const Eigen::HouseholderQR<Eigen::MatrixXd> qa(A), qb(B);
    const Eigen::MatrixXd Qa =
        qa.householderQ() * Eigen::MatrixXd::Identity(A.rows(), A.cols());
    const Eigen::MatrixXd Qb =
        qb.householderQ() * Eigen::MatrixXd::Identity(B.rows(), B.cols());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Qa.transpose() * Qb);
    const double smin = svd.singularValues().minCoeff();
    return std::acos(std::clamp(smin, -1.0, 1.0));
}

// Eq.-(19) objective evaluated termwise (independent of the library path).
inline double sparse_objective_termwise(const Eigen::MatrixXd& K, const Eigen::MatrixXd& S,
                                        double alpha, double beta) {
    const Eigen::Index n = K.rows();
    double fit = 0.0;
    // ||phi(X) - phi(X) S||^2 expanded columnwise
    for (Eigen::Index j = 0; j < n; ++j) {
        double term = K(j, j);
        for (Eigen::Index a = 0; a < n; ++a) {
            term -= 2.0 * S(a, j) * K(a, j);
            for (Eigen::Index b = 0; b < n; ++b) term += S(a, j) * S(b, j) * K(a, b);
        }
        fit += term;
    }
    double reg = 0.0, l1 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            reg += S(i, j) * S(i, j);
            l1 += S(i, j);
        }
    return fit + alpha * reg + beta * l1;
}

// Projected-gradient oracle for the convex objective of Eq. (19). Step size
// 1/L with L the Lipschitz constant of the gradient; iterates to a tight
// fixed-point tolerance.
inline Eigen::MatrixXd projected_gradient_sparse(const Eigen::MatrixXd& K, double alpha,
                                                 double beta, int max_iter = 500000,
                                                 double tol = 1e-15) {
    const Eigen::Index n = K.rows();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K, Eigen::EigenvaluesOnly);
    const double L = 2.0 * (es.eigenvalues().maxCoeff() + alpha);
    const double step = 1.0 / L;
    Eigen::MatrixXd S = Eigen::MatrixXd::Ones(n, n);
    const Eigen::MatrixXd E = Eigen::MatrixXd::Ones(n, n);
    for (int it = 0; it < max_iter; ++it) {
        const Eigen::MatrixXd grad = -2.0 * K + 2.0 * K * S + 2.0 * alpha * S + beta * E;
        const Eigen::MatrixXd next = (S - step * grad).cwiseMax(0.0);
        const double delta = (next - S).cwiseAbs().maxCoeff();
        S = next;
        if (delta < tol * std::max(1.0, S.cwiseAbs().maxCoeff())) break;
    }
    return S;
}

// Random Y with Y D Y^T = I_k, built from a QR-orthonormalized gaussian block.
inline Eigen::MatrixXd random_d_orthonormal(std::mt19937_64& rng, Eigen::Index k,
                                            const Eigen::VectorXd& degrees) {
    const Eigen::Index n = degrees.size();
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXd B(n, k);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < k; ++j) B(i, j) = g(rng);
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(B);
    const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
    return Q.transpose() * degrees.array().rsqrt().matrix().asDiagonal();
}

} // namespace testutil

#endif
