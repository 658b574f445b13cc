#include "ille/eval.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <vector>

namespace ille {

namespace {

// Deterministic index draw in [0, m); plain modulo keeps results identical
// across standard libraries.
Eigen::Index draw_index(std::mt19937_64& rng, Eigen::Index m) {
    return static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(m));
}

std::mt19937_64 restart_rng(std::uint64_t seed, int restart) {
    return std::mt19937_64(seed + 0x9e3779b97f4a7c15ULL *
                                      (static_cast<std::uint64_t>(restart) + 1));
}

void check_same_length(const LabelVector& a, const LabelVector& b) {
    if (a.size() != b.size()) {
        throw ShapeError("label vectors have different lengths: " +
                         std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    }
    if (a.size() == 0) throw ShapeError("label vectors are empty");
}

// Contingency table n_pred x n_true.
Eigen::MatrixXd contingency(const LabelVector& pred, const LabelVector& truth) {
    int cp = 0, ct = 0;
    for (Eigen::Index i = 0; i < pred.size(); ++i) {
        cp = std::max(cp, pred.labels[i] + 1);
        ct = std::max(ct, truth.labels[i] + 1);
    }
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(cp, ct);
    for (Eigen::Index i = 0; i < pred.size(); ++i) {
        C(pred.labels[i], truth.labels[i]) += 1.0;
    }
    return C;
}

// Maximum-weight perfect matching on a square benefit matrix via the
// O(n^3) potentials (Hungarian) algorithm. Returns the total benefit.
double max_assignment(const Eigen::MatrixXd& benefit) {
    const int n = static_cast<int>(benefit.rows());
    // minimize cost = -benefit
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> match(n + 1, 0); // match[col 1..n] = row
    std::vector<int> way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, std::numeric_limits<double>::infinity());
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const int i0 = match[j0];
            double delta = std::numeric_limits<double>::infinity();
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = -benefit(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    double total = 0.0;
    for (int j = 1; j <= n; ++j) {
        if (match[j] != 0) total += benefit(match[j] - 1, j - 1);
    }
    return total;
}

double entropy(const Eigen::VectorXd& counts, double n) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < counts.size(); ++i) {
        if (counts(i) > 0.0) {
            const double p = counts(i) / n;
            h -= p * std::log(p);
        }
    }
    return h;
}

// Connected components of the positive-weight graph (union-find).
std::vector<int> components(const Eigen::MatrixXd& z) {
    const Eigen::Index n = z.rows();
    std::vector<int> parent(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (z(i, j) > 0.0) parent[find(static_cast<int>(i))] = find(static_cast<int>(j));
    std::vector<int> comp(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) comp[i] = find(static_cast<int>(i));
    return comp;
}

void check_seeds(const GraphWeights& Z, const LabelVector& seeds) {
    if (seeds.size() != Z.size()) {
        throw ShapeError("seed labels and graph size differ");
    }
    if (seeds.num_classes < 1) throw ParameterError("seed class count must be >= 1");
    bool any = false;
    for (Eigen::Index i = 0; i < seeds.size(); ++i) {
        if (seeds.is_labeled(i)) {
            any = true;
            if (seeds.labels[i] < 0 || seeds.labels[i] >= seeds.num_classes) {
                throw ValidationError("seed label out of range at index " + std::to_string(i));
            }
        }
    }
    if (!any) throw ValidationError("semi-supervised propagation needs at least one labeled point");
}

LabelVector argmax_labels(const Eigen::MatrixXd& scores, const LabelVector& seeds,
                          bool keep_labeled) {
    LabelVector out;
    out.num_classes = seeds.num_classes;
    out.labels.resize(static_cast<std::size_t>(scores.rows()));
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
        if (keep_labeled && seeds.is_labeled(i)) {
            out.labels[i] = seeds.labels[i];
            continue;
        }
        Eigen::Index best = 0;
        scores.row(i).maxCoeff(&best);
        out.labels[i] = static_cast<int>(best);
    }
    return out;
}

} // namespace

std::vector<KmeansRun> kmeans_runs(const Eigen::MatrixXd& points, int c,
                                   int n_init, std::uint64_t seed) {
    const Eigen::Index n = points.cols();
    const Eigen::Index dim = points.rows();
    if (n < 1) throw ParameterError("kmeans needs at least one point");
    if (c < 1 || c > n) throw ParameterError("cluster count must lie in [1, n]");
    if (n_init < 1) throw ParameterError("n_init must be >= 1");

    constexpr int kMaxLloyd = 300;
    std::vector<KmeansRun> runs;
    runs.reserve(static_cast<std::size_t>(n_init));

    for (int r = 0; r < n_init; ++r) {
        auto rng = restart_rng(seed, r);

        // initial centroids: c distinct point indices
        std::vector<Eigen::Index> pool(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) pool[i] = i;
        Eigen::MatrixXd centroids(dim, c);
        for (int k = 0; k < c; ++k) {
            const Eigen::Index pick = draw_index(rng, static_cast<Eigen::Index>(pool.size()));
            centroids.col(k) = points.col(pool[pick]);
            pool.erase(pool.begin() + pick);
        }

        std::vector<int> assign(static_cast<std::size_t>(n), -1);
        for (int it = 0; it < kMaxLloyd; ++it) {
            bool changed = false;
            for (Eigen::Index i = 0; i < n; ++i) {
                int best = 0;
                double bd = (points.col(i) - centroids.col(0)).squaredNorm();
                for (int k = 1; k < c; ++k) {
                    const double d = (points.col(i) - centroids.col(k)).squaredNorm();
                    if (d < bd) {
                        bd = d;
                        best = k;
                    }
                }
                if (assign[i] != best) {
                    assign[i] = best;
                    changed = true;
                }
            }

            // empty clusters grab the point farthest from its centroid
            std::vector<Eigen::Index> count(static_cast<std::size_t>(c), 0);
            for (Eigen::Index i = 0; i < n; ++i) count[assign[i]]++;
            for (int k = 0; k < c; ++k) {
                if (count[k] != 0) continue;
                Eigen::Index far = 0;
                double fd = -1.0;
                for (Eigen::Index i = 0; i < n; ++i) {
                    if (count[assign[i]] <= 1) continue; // keep donors nonempty
                    const double d = (points.col(i) - centroids.col(assign[i])).squaredNorm();
                    if (d > fd) {
                        fd = d;
                        far = i;
                    }
                }
                if (fd >= 0.0) {
                    count[assign[far]]--;
                    assign[far] = k;
                    count[k] = 1;
                    changed = true;
                }
            }

            for (int k = 0; k < c; ++k) {
                Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim);
                Eigen::Index m = 0;
                for (Eigen::Index i = 0; i < n; ++i) {
                    if (assign[i] == k) {
                        sum += points.col(i);
                        ++m;
                    }
                }
                if (m > 0) centroids.col(k) = sum / static_cast<double>(m);
            }
            if (!changed) break;
        }

        double inertia = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            inertia += (points.col(i) - centroids.col(assign[i])).squaredNorm();
        }
        runs.push_back(KmeansRun{std::move(assign), inertia});
    }
    return runs;
}

LabelVector kmeans(const Eigen::MatrixXd& points, int c, int n_init,
                   std::uint64_t seed) {
    const auto runs = kmeans_runs(points, c, n_init, seed);
    std::size_t best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r) {
        if (runs[r].inertia < runs[best].inertia) best = r;
    }
    LabelVector out;
    out.labels = runs[best].labels;
    out.num_classes = c;
    return out;
}

Eigen::MatrixXd spectral_normalize(const Eigen::MatrixXd& Y) {
    Eigen::MatrixXd out = Y;
    for (Eigen::Index i = 0; i < out.cols(); ++i) {
        const double norm = out.col(i).norm();
        if (norm > 0.0) {
            out.col(i) /= norm;
        } else {
            std::cerr << "warning: point " << i << " has zero norm; left unnormalized\n";
        }
    }
    return out;
}

double accuracy(const LabelVector& pred, const LabelVector& truth) {
    check_same_length(pred, truth);
    const Eigen::MatrixXd C = contingency(pred, truth);
    const Eigen::Index m = std::max(C.rows(), C.cols());
    Eigen::MatrixXd square = Eigen::MatrixXd::Zero(m, m);
    square.topLeftCorner(C.rows(), C.cols()) = C;
    return max_assignment(square) / static_cast<double>(pred.size());
}

double nmi(const LabelVector& pred, const LabelVector& truth) {
    check_same_length(pred, truth);
    const Eigen::MatrixXd C = contingency(pred, truth);
    const double n = static_cast<double>(pred.size());
    const Eigen::VectorXd rows = C.rowwise().sum();
    const Eigen::VectorXd cols = C.colwise().sum();
    const double hp = entropy(rows, n);
    const double ht = entropy(cols, n);

    if (hp == 0.0 || ht == 0.0) {
        // degenerate: constant partition(s); 1 iff the partitions coincide
        bool identical = true;
        for (Eigen::Index i = 0; i < C.rows() && identical; ++i)
            for (Eigen::Index j = 0; j < C.cols(); ++j)
                if (C(i, j) > 0.0 && (C(i, j) != rows(i) || C(i, j) != cols(j))) {
                    identical = false;
                    break;
                }
        return identical ? 1.0 : 0.0;
    }

    double mi = 0.0;
    for (Eigen::Index i = 0; i < C.rows(); ++i) {
        for (Eigen::Index j = 0; j < C.cols(); ++j) {
            if (C(i, j) > 0.0) {
                mi += (C(i, j) / n) * std::log(C(i, j) * n / (rows(i) * cols(j)));
            }
        }
    }
    const double v = mi / std::sqrt(hp * ht);
    return std::clamp(v, 0.0, 1.0);
}

double purity(const LabelVector& pred, const LabelVector& truth) {
    check_same_length(pred, truth);
    const Eigen::MatrixXd C = contingency(pred, truth);
    return C.rowwise().maxCoeff().sum() / static_cast<double>(pred.size());
}

MetricsReport clustering_metrics(const LabelVector& pred, const LabelVector& truth) {
    return MetricsReport{accuracy(pred, truth), nmi(pred, truth), purity(pred, truth)};
}

Eigen::MatrixXd harmonic_scores(const GraphWeights& Z, const LabelVector& seeds) {
    check_seeds(Z, seeds);
    const Eigen::Index n = Z.size();
    const int c = seeds.num_classes;

    std::vector<Eigen::Index> lab, unl;
    for (Eigen::Index i = 0; i < n; ++i) {
        (seeds.is_labeled(i) ? lab : unl).push_back(i);
    }

    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(n, c);
    for (const Eigen::Index i : lab) F(i, seeds.labels[i]) = 1.0;
    if (unl.empty()) return F;

    // every component of the positive-weight graph must touch a labeled
    // node, otherwise the unlabeled Laplacian block is singular
    const auto comp = components(Z.z);
    std::vector<int> comp_labeled;
    for (const Eigen::Index i : lab) comp_labeled.push_back(comp[i]);
    for (const Eigen::Index i : unl) {
        if (std::find(comp_labeled.begin(), comp_labeled.end(), comp[i]) ==
            comp_labeled.end()) {
            std::string members;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (comp[j] == comp[i]) {
                    if (!members.empty()) members += ", ";
                    members += std::to_string(j);
                }
            }
            throw ValidationError(
                "unlabeled component {" + members +
                "} has no labeled node; the harmonic system is singular");
        }
    }

    const Eigen::Index nu = static_cast<Eigen::Index>(unl.size());
    const Eigen::Index nl = static_cast<Eigen::Index>(lab.size());
    Eigen::MatrixXd A(nu, nu);
    Eigen::MatrixXd B(nu, nl);
    for (Eigen::Index a = 0; a < nu; ++a) {
        for (Eigen::Index b = 0; b < nu; ++b) {
            A(a, b) = (a == b ? Z.degrees(unl[a]) : 0.0) - Z.z(unl[a], unl[b]);
        }
        for (Eigen::Index b = 0; b < nl; ++b) B(a, b) = Z.z(unl[a], lab[b]);
    }
    Eigen::MatrixXd Fl(nl, c);
    Fl.setZero();
    for (Eigen::Index b = 0; b < nl; ++b) Fl(b, seeds.labels[lab[b]]) = 1.0;

    const Eigen::MatrixXd Fu = A.ldlt().solve(B * Fl);
    if (!Fu.allFinite()) throw NumericError("harmonic propagation solve failed");
    for (Eigen::Index a = 0; a < nu; ++a) F.row(unl[a]) = Fu.row(a);
    return F;
}

LabelVector harmonic_label_prop(const GraphWeights& Z, const LabelVector& seeds) {
    return argmax_labels(harmonic_scores(Z, seeds), seeds, /*keep_labeled=*/true);
}

Eigen::MatrixXd lg_consistency_scores(const GraphWeights& Z, const LabelVector& seeds,
                                      double alpha_lgc) {
    check_seeds(Z, seeds);
    if (!(alpha_lgc > 0.0 && alpha_lgc < 1.0)) {
        throw ParameterError("alpha_lgc must lie in (0, 1)");
    }
    const Eigen::Index n = Z.size();
    Eigen::MatrixXd Y0 = Eigen::MatrixXd::Zero(n, seeds.num_classes);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (seeds.is_labeled(i)) Y0(i, seeds.labels[i]) = 1.0;
    }
    const Eigen::MatrixXd A =
        Eigen::MatrixXd::Identity(n, n) - alpha_lgc * Z.z_tilde;
    Eigen::MatrixXd F = A.ldlt().solve(Y0);
    if (!F.allFinite()) throw NumericError("local/global consistency solve failed");
    return F;
}

LabelVector lg_consistency(const GraphWeights& Z, const LabelVector& seeds,
                           double alpha_lgc) {
    return argmax_labels(lg_consistency_scores(Z, seeds, alpha_lgc), seeds,
                         /*keep_labeled=*/false);
}

} // namespace ille
