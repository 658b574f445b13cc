#ifndef ILLE_EVAL_HPP
#define ILLE_EVAL_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "ille/graph.hpp"

namespace ille {

/// Integer class assignments in [0, c). `mask[i] != 0` marks point i as
/// labeled; an empty mask means every point is labeled.
struct LabelVector {
    std::vector<int> labels;
    int num_classes = 0;
    std::vector<std::uint8_t> mask;

    Eigen::Index size() const { return static_cast<Eigen::Index>(labels.size()); }
    bool is_labeled(Eigen::Index i) const { return mask.empty() || mask[i] != 0; }
};

struct MetricsReport {
    double acc = 0.0;
    double nmi = 0.0;
    double pur = 0.0;
};

struct KmeansRun {
    std::vector<int> labels;
    double inertia = 0.0;
};

/// All restarts, in restart order. Each restart draws its own generator
/// from (seed, restart index), so runs are independent and reproducible.
std::vector<KmeansRun> kmeans_runs(const Eigen::MatrixXd& points, int c,
                                   int n_init, std::uint64_t seed);

/// Best-inertia assignment over n_init seeded restarts (earliest run wins
/// ties). `points` holds coordinates as columns (k x n).
LabelVector kmeans(const Eigen::MatrixXd& points, int c, int n_init,
                   std::uint64_t seed);

/// Scale every point (column) to unit Euclidean norm. Zero-norm points are
/// left unchanged with a warning.
Eigen::MatrixXd spectral_normalize(const Eigen::MatrixXd& Y);

/// Fraction correctly matched under the best one-to-one cluster/class
/// matching (assignment problem on the contingency table).
double accuracy(const LabelVector& pred, const LabelVector& truth);

/// I(pred; truth) / sqrt(H(pred) H(truth)); 1 for identical partitions,
/// 0 when either entropy vanishes and the partitions differ.
double nmi(const LabelVector& pred, const LabelVector& truth);

/// (1/n) * sum over clusters of the majority class overlap.
double purity(const LabelVector& pred, const LabelVector& truth);

MetricsReport clustering_metrics(const LabelVector& pred, const LabelVector& truth);

/// Class scores of the harmonic propagator: unlabeled rows solve
/// F_u = (D_uu - Z_uu)^{-1} Z_ul F_l; labeled rows are one-hot.
Eigen::MatrixXd harmonic_scores(const GraphWeights& Z, const LabelVector& seeds);

/// Argmax of harmonic_scores per row; labeled points keep their labels.
LabelVector harmonic_label_prop(const GraphWeights& Z, const LabelVector& seeds);

/// Class scores F = (I - alpha Z~)^{-1} Y0 with one-hot seed rows.
Eigen::MatrixXd lg_consistency_scores(const GraphWeights& Z, const LabelVector& seeds,
                                      double alpha_lgc);

/// Argmax per row of the local/global-consistency scores.
LabelVector lg_consistency(const GraphWeights& Z, const LabelVector& seeds,
                           double alpha_lgc);

} // namespace ille

#endif
