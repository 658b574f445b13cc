#ifndef ILLE_KERNEL_HPP
#define ILLE_KERNEL_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "ille/errors.hpp"

namespace ille {

struct Embedding; // embedding.hpp

/// Symmetric positive-semidefinite similarity matrix over n points.
/// Constructors in this header guarantee the invariants; matrices loaded
/// from disk should go through validate_kernel().
struct Kernel {
    Eigen::MatrixXd values; // n x n

    Eigen::Index size() const { return values.rows(); }
};

enum class KernelMethod { gaussian, linear };

enum class CombineMode { replace, additive, multiplicative };

KernelMethod kernel_method_from_string(const std::string& s);
CombineMode combine_mode_from_string(const std::string& s);
std::string to_string(KernelMethod m);
std::string to_string(CombineMode m);

/// Relative tolerance used for the PSD invariant: smallest eigenvalue must
/// be >= -kPsdTol * max|K|.
inline constexpr double kPsdTol = 1e-8;
/// Relative tolerance for the symmetry invariant.
inline constexpr double kSymTol = 1e-12;

struct PsdReport {
    bool psd = false;
    double lambda_min = 0.0;
};

/// K_ij = exp(-gamma * ||x_i - x_j||^2). X holds points as rows (n x p).
/// Diagonal entries are exactly 1.
Kernel gaussian_kernel(const Eigen::MatrixXd& X, double gamma);

/// Gram matrix of the points: K_ij = <x_i, x_j>. X holds points as rows.
Kernel linear_kernel(const Eigen::MatrixXd& X);

/// Build an n x n kernel from embedding coordinates (points are the columns
/// of the k x n coordinate matrix). When `gamma` is absent the gaussian
/// variant uses 1 / (2 * median^2) of the pairwise embedding distances.
Kernel kernel_from_embedding(const Embedding& Y, KernelMethod method,
                             std::optional<double> gamma = std::nullopt);

/// replace -> K_Y; additive -> K_prev + K_Y; multiplicative -> Hadamard
/// product. Both combinations preserve positive semidefiniteness.
Kernel combine_kernels(const Kernel& K_prev, const Kernel& K_Y, CombineMode mode);

/// True iff lambda_min(K) >= -tol * max|K|. The input must be symmetric
/// (within kSymTol relative); it is re-symmetrized before the eigen check
/// to absorb floating-point asymmetry.
PsdReport check_psd(const Kernel& K, double tol = kPsdTol);

/// Enforce the Kernel invariants (finite, symmetric, PSD within tolerance).
/// Throws ValidationError when violated. `context` prefixes the message.
void validate_kernel(const Kernel& K, const std::string& context = {});

/// Shift a kernel entrywise by -min(K) when it has negative entries, so the
/// result is entrywise nonnegative. PSD is preserved (a rank-one all-ones
/// term is added). Returns the input unchanged when already nonnegative.
Kernel shift_to_nonnegative(const Kernel& K);

/// Median of the pairwise Euclidean distances between the columns of Y.
double median_pairwise_distance(const Eigen::MatrixXd& Y);

/// gamma = 1 / (2 * median^2) of the pairwise distances between columns;
/// falls back to 1 when the median sits at the coordinate noise floor.
double median_heuristic_gamma(const Eigen::MatrixXd& Y);

} // namespace ille

#endif
