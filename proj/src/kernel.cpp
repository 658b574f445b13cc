#include "ille/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ille/embedding.hpp"

namespace ille {

KernelMethod kernel_method_from_string(const std::string& s) {
    if (s == "gaussian") return KernelMethod::gaussian;
    if (s == "linear") return KernelMethod::linear;
    throw ParameterError("unknown kernel method: " + s);
}

CombineMode combine_mode_from_string(const std::string& s) {
    if (s == "replace") return CombineMode::replace;
    if (s == "additive") return CombineMode::additive;
    if (s == "multiplicative") return CombineMode::multiplicative;
    throw ParameterError("unknown combine mode: " + s);
}

std::string to_string(KernelMethod m) {
    return m == KernelMethod::gaussian ? "gaussian" : "linear";
}

std::string to_string(CombineMode m) {
    switch (m) {
    case CombineMode::replace: return "replace";
    case CombineMode::additive: return "additive";
    default: return "multiplicative";
    }
}

namespace {

void require_finite(const Eigen::MatrixXd& m, const char* what) {
    if (!m.allFinite()) {
        throw ValidationError(std::string(what) + " contains non-finite entries");
    }
}

// Gaussian kernel of the rows of P (each row one point).
Eigen::MatrixXd gaussian_of_rows(const Eigen::MatrixXd& P, double gamma) {
    const Eigen::Index n = P.rows();
    const Eigen::VectorXd sq = P.rowwise().squaredNorm();
    Eigen::MatrixXd K(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        K(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d2 = std::max(0.0, sq(i) + sq(j) - 2.0 * P.row(i).dot(P.row(j)));
            const double v = std::exp(-gamma * d2);
            K(i, j) = v;
            K(j, i) = v;
        }
    }
    return K;
}

} // namespace

Kernel gaussian_kernel(const Eigen::MatrixXd& X, double gamma) {
    if (X.rows() < 1) throw ValidationError("data matrix is empty");
    require_finite(X, "data matrix");
    if (!(gamma > 0.0)) throw ParameterError("gamma must be > 0");
    return Kernel{gaussian_of_rows(X, gamma)};
}

Kernel linear_kernel(const Eigen::MatrixXd& X) {
    if (X.rows() < 1) throw ValidationError("data matrix is empty");
    require_finite(X, "data matrix");
    Eigen::MatrixXd K = X * X.transpose();
    K = ((K + K.transpose()) * 0.5).eval(); // exact symmetry
    return Kernel{std::move(K)};
}

double median_pairwise_distance(const Eigen::MatrixXd& Y) {
    const Eigen::Index n = Y.cols();
    std::vector<double> d;
    d.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            d.push_back((Y.col(i) - Y.col(j)).norm());
    if (d.empty()) return 0.0;
    std::sort(d.begin(), d.end());
    const std::size_t m = d.size();
    return (m % 2 == 1) ? d[m / 2] : 0.5 * (d[m / 2 - 1] + d[m / 2]);
}

Kernel kernel_from_embedding(const Embedding& Y, KernelMethod method,
                             std::optional<double> gamma) {
    const Eigen::MatrixXd& C = Y.coords;
    if (C.cols() < 1) throw ValidationError("embedding is empty");
    require_finite(C, "embedding");

    if (method == KernelMethod::linear) {
        Eigen::MatrixXd K = C.transpose() * C;
        K = ((K + K.transpose()) * 0.5).eval();
        return Kernel{std::move(K)};
    }

    double g;
    if (gamma.has_value()) {
        if (!(*gamma > 0.0)) throw ParameterError("gamma must be > 0");
        g = *gamma;
    } else {
        // median heuristic; a median at the floating-point noise floor of
        // the coordinates means the cloud is degenerate, not tightly scaled
        const double med = median_pairwise_distance(C);
        const double scale = C.cwiseAbs().maxCoeff();
        g = med > 1e-12 * std::max(scale, 1.0) ? 1.0 / (2.0 * med * med) : 1.0;
    }
    return Kernel{gaussian_of_rows(C.transpose(), g)};
}

Kernel combine_kernels(const Kernel& K_prev, const Kernel& K_Y, CombineMode mode) {
    if (K_prev.values.rows() != K_Y.values.rows() ||
        K_prev.values.cols() != K_Y.values.cols()) {
        throw ShapeError("kernel size mismatch in combine_kernels");
    }
    switch (mode) {
    case CombineMode::replace:
        return K_Y;
    case CombineMode::additive:
        return Kernel{K_prev.values + K_Y.values};
    default:
        return Kernel{K_prev.values.cwiseProduct(K_Y.values)};
    }
}

PsdReport check_psd(const Kernel& K, double tol) {
    const Eigen::MatrixXd& M = K.values;
    if (M.rows() != M.cols() || M.rows() < 1) throw ShapeError("kernel is not square");
    const double scale = M.cwiseAbs().maxCoeff();
    if ((M - M.transpose()).cwiseAbs().maxCoeff() > kSymTol * std::max(scale, 1.0)) {
        throw ShapeError("kernel is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        (M + M.transpose()) * 0.5, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("eigen solve failed in check_psd");
    const double lmin = es.eigenvalues().minCoeff();
    return PsdReport{lmin >= -tol * scale, lmin};
}

void validate_kernel(const Kernel& K, const std::string& context) {
    const std::string where = context.empty() ? std::string() : context + ": ";
    if (K.values.rows() != K.values.cols() || K.values.rows() < 1) {
        throw ValidationError(where + "kernel must be a nonempty square matrix");
    }
    if (!K.values.allFinite()) {
        throw ValidationError(where + "kernel contains non-finite entries");
    }
    const double scale = K.values.cwiseAbs().maxCoeff();
    if ((K.values - K.values.transpose()).cwiseAbs().maxCoeff() >
        kSymTol * std::max(scale, 1.0)) {
        throw ValidationError(where + "kernel is not symmetric");
    }
    const PsdReport r = check_psd(K, kPsdTol);
    if (!r.psd) {
        throw ValidationError(where + "kernel is not positive semidefinite (lambda_min = " +
                              std::to_string(r.lambda_min) + ")");
    }
}

Kernel shift_to_nonnegative(const Kernel& K) {
    const double mn = K.values.minCoeff();
    if (mn >= 0.0) return K;
    return Kernel{(K.values.array() - mn).matrix()};
}

} // namespace ille
