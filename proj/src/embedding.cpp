#include "ille/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace ille {

namespace {

// Make the entry of largest magnitude positive (lowest index wins ties).
void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
    Eigen::Index best = 0;
    double mag = std::abs(v(0));
    for (Eigen::Index i = 1; i < v.size(); ++i) {
        if (std::abs(v(i)) > mag) {
            mag = std::abs(v(i));
            best = i;
        }
    }
    if (v(best) < 0.0) v = -v;
}

struct EigenPairs {
    Eigen::VectorXd mu;     // ascending eigenvalues of (I - Z~)
    Eigen::MatrixXd vecs;   // matching columns, sign-fixed
};

EigenPairs smallest_pairs(const GraphWeights& G, int k, int skip) {
    const Eigen::Index n = G.size();
    if (k < 1 || k + skip > n) {
        throw ParameterError("embedding dimension out of range: k = " + std::to_string(k) +
                             ", n = " + std::to_string(n));
    }
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n) - G.z_tilde;
    M = ((M + M.transpose()) * 0.5).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    if (es.info() != Eigen::Success) {
        throw NumericError("eigen decomposition of (I - Z~) did not converge");
    }
    EigenPairs out;
    out.mu = es.eigenvalues().segment(skip, k);
    out.vecs = es.eigenvectors().middleCols(skip, k);
    for (int j = 0; j < k; ++j) fix_sign(out.vecs.col(j));
    return out;
}

} // namespace

Embedding embed(const GraphWeights& G, int k, const EmbedOptions& opts) {
    EigenPairs p = smallest_pairs(G, k, opts.drop_trivial ? 1 : 0);

    // lambda = mu^2; re-sort in case floating-point noise around mu = 0
    // perturbs the squared order.
    std::vector<int> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    Eigen::VectorXd lambda = p.mu.array().square();
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return lambda(a) < lambda(b); });

    const Eigen::VectorXd dinv_sqrt = G.degrees.array().rsqrt();
    Embedding e;
    e.coords.resize(k, G.size());
    e.eigenvalues.resize(k);
    for (int j = 0; j < k; ++j) {
        const int src = order[static_cast<std::size_t>(j)];
        e.eigenvalues(j) = lambda(src);
        e.coords.row(j) = (p.vecs.col(src).array() * dinv_sqrt.array()).transpose();
    }
    return e;
}

CutIndicators normalized_cut_indicators(const GraphWeights& G, int k) {
    EigenPairs p = smallest_pairs(G, k, 0);
    CutIndicators ci;
    ci.g = p.vecs;
    ci.h = G.degrees.array().rsqrt().matrix().asDiagonal() * p.vecs;
    return ci;
}

double lle_objective(const Eigen::MatrixXd& Y, const GraphWeights& G) {
    if (Y.cols() != G.size()) {
        throw ShapeError("embedding has " + std::to_string(Y.cols()) +
                         " points but graph has " + std::to_string(G.size()));
    }
    const Eigen::VectorXd dinv = G.degrees.cwiseInverse();
    const Eigen::MatrixXd resid = Y - Y * G.z * dinv.asDiagonal();
    double obj = 0.0;
    for (Eigen::Index i = 0; i < G.size(); ++i) {
        obj += G.degrees(i) * resid.col(i).squaredNorm();
    }
    return obj;
}

} // namespace ille
