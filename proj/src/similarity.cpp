#include "ille/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace ille {

std::string to_string(WeightKind k) {
    switch (k) {
    case WeightKind::knn_affine: return "knn_affine";
    case WeightKind::knn_nonneg: return "knn_nonneg";
    default: return "sparse_learned";
    }
}

namespace {

double kernel_dist2(const Eigen::MatrixXd& K, Eigen::Index i, Eigen::Index j) {
    return K(i, i) + K(j, j) - 2.0 * K(i, j);
}

// k nearest neighbors of point i under the kernel-induced distance,
// ties at equal distance broken toward the lowest index.
std::vector<Eigen::Index> knn_of(const Eigen::MatrixXd& K, Eigen::Index i, int k) {
    const Eigen::Index n = K.rows();
    std::vector<Eigen::Index> idx;
    idx.reserve(static_cast<std::size_t>(n) - 1);
    for (Eigen::Index j = 0; j < n; ++j)
        if (j != i) idx.push_back(j);
    std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
        const double da = kernel_dist2(K, i, a);
        const double db = kernel_dist2(K, i, b);
        return da < db || (da == db && a < b);
    });
    idx.resize(static_cast<std::size_t>(k));
    return idx;
}

void check_knn_inputs(const Kernel& K, int k_nn) {
    const Eigen::Index n = K.size();
    if (n < 2) throw ParameterError("kNN weights need at least 2 points");
    if (k_nn < 1 || k_nn > n - 1) {
        throw ParameterError("k_nn must lie in [1, n-1], got " + std::to_string(k_nn));
    }
    if (!K.values.allFinite()) throw ValidationError("kernel contains non-finite entries");
}

// Gram-based NNLS active set: minimize K_ii - 2 c^T w + w^T Q w, w >= 0.
Eigen::VectorXd nnls_active_set(const Eigen::MatrixXd& Q, const Eigen::VectorXd& c) {
    const Eigen::Index k = Q.rows();
    Eigen::VectorXd w = Eigen::VectorXd::Zero(k);
    std::vector<bool> passive(static_cast<std::size_t>(k), false);
    const double scale = std::max({1.0, Q.cwiseAbs().maxCoeff(), c.cwiseAbs().maxCoeff()});
    const double grad_tol = 1e-13 * scale;

    auto solve_passive = [&](const std::vector<Eigen::Index>& P) {
        Eigen::MatrixXd Qp(P.size(), P.size());
        Eigen::VectorXd cp(P.size());
        for (std::size_t a = 0; a < P.size(); ++a) {
            cp(static_cast<Eigen::Index>(a)) = c(P[a]);
            for (std::size_t b = 0; b < P.size(); ++b)
                Qp(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = Q(P[a], P[b]);
        }
        Eigen::VectorXd z = Qp.ldlt().solve(cp);
        if (!z.allFinite()) {
            // rank-deficient passive block: fall back to a tiny ridge
            const double ridge = 1e-12 * std::max(1.0, Qp.trace());
            Qp.diagonal().array() += ridge;
            z = Qp.ldlt().solve(cp);
        }
        return z;
    };

    const int max_outer = 3 * static_cast<int>(k) + 30;
    for (int outer = 0; outer < max_outer; ++outer) {
        const Eigen::VectorXd g = c - Q * w; // descent direction of the gradient
        Eigen::Index best = -1;
        double best_g = grad_tol;
        for (Eigen::Index j = 0; j < k; ++j) {
            if (!passive[static_cast<std::size_t>(j)] && g(j) > best_g) {
                best_g = g(j);
                best = j;
            }
        }
        if (best < 0) break; // KKT satisfied
        passive[static_cast<std::size_t>(best)] = true;

        for (int inner = 0; inner < max_outer; ++inner) {
            std::vector<Eigen::Index> P;
            for (Eigen::Index j = 0; j < k; ++j)
                if (passive[static_cast<std::size_t>(j)]) P.push_back(j);
            const Eigen::VectorXd z = solve_passive(P);

            bool all_pos = true;
            for (Eigen::Index a = 0; a < z.size(); ++a)
                if (z(a) <= 0.0) { all_pos = false; break; }
            if (all_pos) {
                w.setZero();
                for (std::size_t a = 0; a < P.size(); ++a) w(P[a]) = z(static_cast<Eigen::Index>(a));
                break;
            }

            // step toward z until the first coordinate hits zero
            double theta = std::numeric_limits<double>::infinity();
            for (std::size_t a = 0; a < P.size(); ++a) {
                const double za = z(static_cast<Eigen::Index>(a));
                if (za <= 0.0) {
                    const double wa = w(P[a]);
                    const double t = wa / (wa - za);
                    theta = std::min(theta, t);
                }
            }
            if (!std::isfinite(theta)) theta = 0.0;
            for (std::size_t a = 0; a < P.size(); ++a) {
                const double za = z(static_cast<Eigen::Index>(a));
                w(P[a]) += theta * (za - w(P[a]));
            }
            bool removed = false;
            for (std::size_t a = 0; a < P.size(); ++a) {
                if (w(P[a]) <= 1e-14 * scale) {
                    w(P[a]) = 0.0;
                    passive[static_cast<std::size_t>(P[a])] = false;
                    removed = true;
                }
            }
            if (!removed) {
                // numerical stalemate: accept the clipped iterate
                for (std::size_t a = 0; a < P.size(); ++a) w(P[a]) = std::max(w(P[a]), 0.0);
                break;
            }
        }
    }
    return w;
}

} // namespace

double nnls_row_kkt_residual(const Eigen::MatrixXd& Q, const Eigen::VectorXd& c,
                             const Eigen::VectorXd& w) {
    const Eigen::VectorXd grad = 2.0 * (Q * w - c);
    double r = 0.0;
    for (Eigen::Index j = 0; j < w.size(); ++j) {
        r = std::max(r, w(j) > 0.0 ? std::abs(grad(j)) : std::max(0.0, -grad(j)));
    }
    return r;
}

SimilarityMatrix lle_weights_knn(const Kernel& K, int k_nn) {
    check_knn_inputs(K, k_nn);
    const Eigen::Index n = K.size();
    const Eigen::MatrixXd& Kv = K.values;

    SimilarityMatrix W;
    W.kind = WeightKind::knn_affine;
    W.values = Eigen::MatrixXd::Zero(n, n);
    W.support.resize(static_cast<std::size_t>(n));

    for (Eigen::Index i = 0; i < n; ++i) {
        const auto nbrs = knn_of(Kv, i, k_nn);
        W.support[static_cast<std::size_t>(i)] = nbrs;

        // local Gram of feature-space differences:
        // C_ab = K_ii - K_i,na - K_i,nb + K_na,nb
        Eigen::MatrixXd C(k_nn, k_nn);
        for (int a = 0; a < k_nn; ++a)
            for (int b = 0; b < k_nn; ++b)
                C(a, b) = Kv(i, i) - Kv(i, nbrs[a]) - Kv(i, nbrs[b]) + Kv(nbrs[a], nbrs[b]);
        C = ((C + C.transpose()) * 0.5).eval();

        Eigen::VectorXd w;
        const double tr = C.trace();
        if (tr > 0.0) {
            C.diagonal().array() += 1e-3 * tr / k_nn;
            w = C.ldlt().solve(Eigen::VectorXd::Ones(k_nn));
        }
        const double s = (tr > 0.0 && w.allFinite()) ? w.sum() : 0.0;
        if (tr <= 0.0 || std::abs(s) < 1e-12) {
            // neighborhood collapsed onto the point itself
            w = Eigen::VectorXd::Constant(k_nn, 1.0 / k_nn);
        } else {
            w /= s;
        }
        for (int a = 0; a < k_nn; ++a) W.values(i, nbrs[a]) = w(a);
    }
    return W;
}

SimilarityMatrix nonneg_lle_weights_knn(const Kernel& K, int k_nn) {
    check_knn_inputs(K, k_nn);
    const Eigen::Index n = K.size();
    const Eigen::MatrixXd& Kv = K.values;

    SimilarityMatrix W;
    W.kind = WeightKind::knn_nonneg;
    W.values = Eigen::MatrixXd::Zero(n, n);
    W.support.resize(static_cast<std::size_t>(n));

    for (Eigen::Index i = 0; i < n; ++i) {
        const auto nbrs = knn_of(Kv, i, k_nn);
        W.support[static_cast<std::size_t>(i)] = nbrs;

        Eigen::MatrixXd Q(k_nn, k_nn);
        Eigen::VectorXd c(k_nn);
        for (int a = 0; a < k_nn; ++a) {
            c(a) = Kv(i, nbrs[a]);
            for (int b = 0; b < k_nn; ++b) Q(a, b) = Kv(nbrs[a], nbrs[b]);
        }
        Q = ((Q + Q.transpose()) * 0.5).eval();

        // degenerate patch: every candidate coincides with x_i in feature
        // space, so any w with sum 1 is optimal -- return the uniform one
        const double scale = std::max(1.0, Kv(i, i));
        double max_d2 = 0.0;
        for (int a = 0; a < k_nn; ++a) {
            max_d2 = std::max(max_d2, std::abs(kernel_dist2(Kv, i, nbrs[a])));
            for (int b = a + 1; b < k_nn; ++b)
                max_d2 = std::max(max_d2, std::abs(Q(a, a) + Q(b, b) - 2.0 * Q(a, b)));
        }
        Eigen::VectorXd w;
        if (max_d2 <= 1e-12 * scale) {
            w = Eigen::VectorXd::Constant(k_nn, 1.0 / k_nn);
        } else {
            w = nnls_active_set(Q, c);
        }
        for (int a = 0; a < k_nn; ++a) W.values(i, nbrs[a]) = w(a);
    }
    return W;
}

double objective_sparse(const Kernel& K, const SimilarityMatrix& S,
                        double alpha, double beta) {
    const Eigen::MatrixXd& Kv = K.values;
    const Eigen::MatrixXd& Sv = S.values;
    if (Kv.rows() != Sv.rows() || Kv.cols() != Sv.cols()) {
        throw ShapeError("kernel and similarity shapes differ in objective_sparse");
    }
    const Eigen::MatrixXd KS = Kv * Sv;
    const double fit = Kv.trace() - 2.0 * KS.trace() + (Sv.transpose() * KS).trace();
    return fit + alpha * Sv.squaredNorm() + beta * Sv.sum();
}

double kkt_residual(const Kernel& K, const SimilarityMatrix& S,
                    double alpha, double beta) {
    const Eigen::MatrixXd& Kv = K.values;
    const Eigen::MatrixXd& Sv = S.values;
    if (Kv.rows() != Sv.rows() || Kv.cols() != Sv.cols()) {
        throw ShapeError("kernel and similarity shapes differ in kkt_residual");
    }
    const Eigen::MatrixXd grad =
        -2.0 * Kv + 2.0 * (Kv * Sv) + 2.0 * alpha * Sv +
        Eigen::MatrixXd::Constant(Kv.rows(), Kv.cols(), beta);
    const double r = grad.cwiseProduct(Sv).cwiseAbs().maxCoeff();
    return r / std::max(1.0, Kv.cwiseAbs().maxCoeff());
}

std::pair<SimilarityMatrix, SolveReport>
learn_sparse_similarity(const Kernel& K, double alpha, double beta,
                        double tol, int max_iter,
                        std::optional<Eigen::MatrixXd> init) {
    const Eigen::MatrixXd& Kv = K.values;
    if (Kv.rows() != Kv.cols() || Kv.rows() < 1) {
        throw ValidationError("kernel must be a nonempty square matrix");
    }
    if (!Kv.allFinite()) throw ValidationError("kernel contains non-finite entries");
    if (Kv.minCoeff() < 0.0) {
        throw ValidationError(
            "sparse similarity learning requires an entrywise-nonnegative kernel "
            "(the multiplicative update's convergence guarantee assumes K >= 0); "
            "min entry = " + std::to_string(Kv.minCoeff()));
    }
    if (alpha < 0.0) throw ParameterError("alpha must be >= 0");
    if (beta < 0.0) throw ParameterError("beta must be >= 0");
    if (!(tol > 0.0)) throw ParameterError("tol must be > 0");
    if (max_iter < 1) throw ParameterError("max_iter must be >= 1");

    const Eigen::Index n = Kv.rows();
    const double k_scale = std::max(1.0, Kv.cwiseAbs().maxCoeff());
    SimilarityMatrix S;
    S.kind = WeightKind::sparse_learned;
    if (init) {
        if (init->rows() != n || init->cols() != n) {
            throw ShapeError("initial S has the wrong shape");
        }
        if (init->minCoeff() < 0.0) throw ValidationError("initial S must be nonnegative");
        S.values = std::move(*init);
    } else {
        S.values = Eigen::MatrixXd::Ones(n, n);
    }

    // Tr(S^T K S) = sum_ij S_ij (KS)_ij; the K*S product also feeds the
    // gradient and the next sweep's denominator.
    auto objective_and_kkt = [&](const Eigen::MatrixXd& Sv, const Eigen::MatrixXd& KS) {
        const double obj = Kv.trace() - 2.0 * KS.trace() + Sv.cwiseProduct(KS).sum() +
                           alpha * Sv.squaredNorm() + beta * Sv.sum();
        const double kkt = (((-2.0 * Kv + 2.0 * KS + 2.0 * alpha * Sv).array() + beta) *
                            Sv.array())
                               .abs()
                               .maxCoeff() /
                           k_scale;
        return std::pair<double, double>{obj, kkt};
    };

    Eigen::MatrixXd KS = Kv * S.values;
    SolveReport report;
    {
        const auto [obj0, kkt0] = objective_and_kkt(S.values, KS);
        report.objective_trace.push_back(obj0);
        report.final_kkt_residual = kkt0;
    }

    // "converged" demands both a stalled objective and first-order
    // stationarity; the objective test alone can stop while weakly-pruned
    // entries still carry a complementarity residual orders above tol.
    const double kkt_tol = 1e4 * tol;
    constexpr double denom_floor = 1e-12;
    for (int it = 0; it < max_iter; ++it) {
        const Eigen::MatrixXd denom =
            ((KS + alpha * S.values).array() + beta / 2.0 + denom_floor).matrix();
        S.values = (S.values.array() * Kv.array() / denom.array()).matrix();
        KS = Kv * S.values;

        const double prev = report.objective_trace.back();
        const auto [cur, kkt] = objective_and_kkt(S.values, KS);
        report.objective_trace.push_back(cur);
        report.final_kkt_residual = kkt;
        report.iterations = it + 1;
        if (std::abs(prev - cur) < tol * std::max(1.0, std::abs(prev)) && kkt <= kkt_tol) {
            report.converged = true;
            break;
        }
    }
    return {std::move(S), report};
}

GraphWeights symmetrize(const SimilarityMatrix& W) {
    const Eigen::MatrixXd& Wv = W.values;
    if (Wv.rows() != Wv.cols() || Wv.rows() < 1) {
        throw ValidationError("weights must be a nonempty square matrix");
    }
    if (!Wv.allFinite()) throw ValidationError("weights contain non-finite entries");
    if (Wv.minCoeff() < 0.0) {
        throw ValidationError("cannot symmetrize weights with negative entries (kind " +
                              to_string(W.kind) + ")");
    }
    return build_graph((Wv + Wv.transpose()) * 0.5);
}

} // namespace ille
