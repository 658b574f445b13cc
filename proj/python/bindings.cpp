#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ille/embedding.hpp"
#include "ille/eval.hpp"
#include "ille/kernel.hpp"
#include "ille/pipeline.hpp"
#include "ille/similarity.hpp"

namespace py = pybind11;
using namespace ille;

namespace {

// The python surface speaks points-as-rows; the core keeps embeddings as
// k x n column blocks.
Embedding embedding_from_rows(const Eigen::MatrixXd& Y_rows) {
    Embedding e;
    e.coords = Y_rows.transpose();
    e.eigenvalues = Eigen::VectorXd::Zero(e.coords.rows());
    return e;
}

SimilarityMatrix similarity_from_values(const Eigen::MatrixXd& S) {
    SimilarityMatrix sm;
    sm.values = S;
    sm.kind = WeightKind::sparse_learned;
    return sm;
}

LabelVector labels_from_array(const std::vector<int>& labels, int num_classes) {
    LabelVector lv;
    lv.labels = labels;
    int mx = -1;
    bool any_unlabeled = false;
    for (const int v : labels) {
        if (v < -1) throw ValidationError("labels must be >= -1");
        if (v == -1) any_unlabeled = true;
        mx = std::max(mx, v);
    }
    lv.num_classes = num_classes > 0 ? num_classes : mx + 1;
    if (any_unlabeled) {
        lv.mask.resize(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i) {
            lv.mask[i] = labels[i] >= 0;
            if (labels[i] < 0) lv.labels[i] = 0;
        }
    }
    return lv;
}

py::dict report_dict(const SolveReport& r) {
    py::dict d;
    d["iterations"] = r.iterations;
    d["objective_trace"] = r.objective_trace;
    d["final_kkt_residual"] = r.final_kkt_residual;
    d["converged"] = r.converged;
    return d;
}

IlleConfig config_from_kwargs(int T, const std::string& w_method, int k_nn,
                              double alpha, double beta, double tol, int max_iter,
                              int embed_k, const std::string& kernel_method,
                              const std::string& combine_mode,
                              std::optional<double> gamma, bool zero_diagonal,
                              bool drop_trivial, std::uint64_t seed) {
    IlleConfig cfg;
    cfg.T = T;
    cfg.w_method = w_method_from_string(w_method);
    cfg.k_nn = k_nn;
    cfg.alpha = alpha;
    cfg.beta = beta;
    cfg.tol = tol;
    cfg.max_iter = max_iter;
    cfg.embed_k = embed_k;
    cfg.kernel_method = kernel_method_from_string(kernel_method);
    cfg.combine_mode = combine_mode_from_string(combine_mode);
    cfg.gamma = gamma;
    cfg.zero_diagonal = zero_diagonal;
    cfg.drop_trivial = drop_trivial;
    cfg.seed = seed;
    return cfg;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "iterative locally linear embedding core";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    m.def(
        "gaussian_kernel",
        [](const Eigen::MatrixXd& X, double gamma) {
            return gaussian_kernel(X, gamma).values;
        },
        py::arg("X"), py::arg("gamma"),
        "Gaussian kernel exp(-gamma * ||x_i - x_j||^2) of the rows of X.");

    m.def(
        "linear_kernel",
        [](const Eigen::MatrixXd& X) { return linear_kernel(X).values; }, py::arg("X"),
        "Gram matrix of the rows of X.");

    m.def(
        "kernel_from_embedding",
        [](const Eigen::MatrixXd& Y_rows, const std::string& method,
           std::optional<double> gamma) {
            return kernel_from_embedding(embedding_from_rows(Y_rows),
                                         kernel_method_from_string(method), gamma)
                .values;
        },
        py::arg("Y"), py::arg("method") = "gaussian", py::arg("gamma") = py::none());

    m.def(
        "combine_kernels",
        [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const std::string& mode) {
            return combine_kernels(Kernel{a}, Kernel{b}, combine_mode_from_string(mode))
                .values;
        },
        py::arg("K_prev"), py::arg("K_Y"), py::arg("mode") = "multiplicative");

    m.def(
        "check_psd",
        [](const Eigen::MatrixXd& K, double tol) {
            const PsdReport r = check_psd(Kernel{K}, tol);
            return py::make_tuple(r.psd, r.lambda_min);
        },
        py::arg("K"), py::arg("tol") = kPsdTol,
        "Returns (is_psd, lambda_min) for a symmetric matrix.");

    m.def(
        "lle_weights_knn",
        [](const Eigen::MatrixXd& K, int k_nn) {
            return lle_weights_knn(Kernel{K}, k_nn).values;
        },
        py::arg("K"), py::arg("k_nn"),
        "Affine (rows sum to 1) kNN reconstruction weights from a kernel.");

    m.def(
        "nonneg_lle_weights_knn",
        [](const Eigen::MatrixXd& K, int k_nn) {
            return nonneg_lle_weights_knn(Kernel{K}, k_nn).values;
        },
        py::arg("K"), py::arg("k_nn"),
        "Nonnegative kNN reconstruction weights from a kernel.");

    m.def(
        "learn_sparse_similarity",
        [](const Eigen::MatrixXd& K, double alpha, double beta, double tol, int max_iter) {
            auto [S, report] = learn_sparse_similarity(Kernel{K}, alpha, beta, tol, max_iter);
            return py::make_tuple(S.values, report_dict(report));
        },
        py::arg("K"), py::arg("alpha"), py::arg("beta"), py::arg("tol") = 1e-8,
        py::arg("max_iter") = 1000,
        "Multiplicative-update sparse similarity learner; returns (S, report).");

    m.def(
        "objective_sparse",
        [](const Eigen::MatrixXd& K, const Eigen::MatrixXd& S, double alpha, double beta) {
            return objective_sparse(Kernel{K}, similarity_from_values(S), alpha, beta);
        },
        py::arg("K"), py::arg("S"), py::arg("alpha"), py::arg("beta"));

    m.def(
        "kkt_residual",
        [](const Eigen::MatrixXd& K, const Eigen::MatrixXd& S, double alpha, double beta) {
            return kkt_residual(Kernel{K}, similarity_from_values(S), alpha, beta);
        },
        py::arg("K"), py::arg("S"), py::arg("alpha"), py::arg("beta"));

    m.def(
        "embed",
        [](const Eigen::MatrixXd& weights, int k, bool drop_trivial) {
            SimilarityMatrix W = similarity_from_values(weights);
            const GraphWeights G = symmetrize(W);
            const Embedding e = embed(G, k, EmbedOptions{drop_trivial});
            return py::make_tuple(Eigen::MatrixXd(e.coords.transpose()), e.eigenvalues);
        },
        py::arg("weights"), py::arg("k"), py::arg("drop_trivial") = false,
        "Symmetrize nonnegative weights and embed; returns (Y rows, eigenvalues).");

    m.def(
        "normalized_cut_indicators",
        [](const Eigen::MatrixXd& weights, int k) {
            SimilarityMatrix W = similarity_from_values(weights);
            const GraphWeights G = symmetrize(W);
            const CutIndicators ci = normalized_cut_indicators(G, k);
            return py::make_tuple(ci.g, ci.h);
        },
        py::arg("weights"), py::arg("k"), "Returns (G, H) of the relaxed normalized cut.");

    m.def(
        "lle_objective",
        [](const Eigen::MatrixXd& Y_rows, const Eigen::MatrixXd& weights) {
            SimilarityMatrix W = similarity_from_values(weights);
            return lle_objective(Eigen::MatrixXd(Y_rows.transpose()), symmetrize(W));
        },
        py::arg("Y"), py::arg("weights"),
        "Degree-weighted reconstruction objective of a row embedding.");

    m.def(
        "iterative_lle",
        [](const Eigen::MatrixXd& K1, int T, const std::string& w_method, int k_nn,
           double alpha, double beta, double tol, int max_iter, int embed_k,
           const std::string& kernel_method, const std::string& combine_mode,
           std::optional<double> gamma, bool zero_diagonal, bool drop_trivial,
           std::uint64_t seed) {
            const IlleConfig cfg = config_from_kwargs(
                T, w_method, k_nn, alpha, beta, tol, max_iter, embed_k, kernel_method,
                combine_mode, gamma, zero_diagonal, drop_trivial, seed);
            const IlleResult res = iterative_lle(Kernel{K1}, cfg);
            py::list history;
            for (const IterationRecord& rec : res.history) {
                py::dict d;
                d["t"] = rec.t;
                d["eigenvalues"] = rec.embedding.eigenvalues;
                d["degrees"] = rec.degrees;
                d["Y"] = Eigen::MatrixXd(rec.embedding.coords.transpose());
                py::dict w;
                w["kind"] = rec.w_summary.kind;
                w["min"] = rec.w_summary.min;
                w["max"] = rec.w_summary.max;
                w["sum"] = rec.w_summary.sum;
                w["nonzeros"] = rec.w_summary.nonzeros;
                d["w_summary"] = w;
                py::dict kn;
                kn["min"] = rec.kernel_next.min;
                kn["max"] = rec.kernel_next.max;
                kn["lambda_min"] = rec.kernel_next.lambda_min;
                d["kernel_next"] = kn;
                d["solve_report"] =
                    rec.solve_report ? py::object(report_dict(*rec.solve_report))
                                     : py::object(py::none());
                history.append(d);
            }
            return py::make_tuple(res.refined_kernel.values,
                                  Eigen::MatrixXd(res.embedding.coords.transpose()),
                                  history);
        },
        py::arg("K1"), py::arg("T") = 4, py::arg("w_method") = "sparse_eq18",
        py::arg("k_nn") = 5, py::arg("alpha") = 0.1, py::arg("beta") = 0.1,
        py::arg("tol") = 1e-8, py::arg("max_iter") = 1000, py::arg("embed_k") = 2,
        py::arg("kernel_method") = "gaussian", py::arg("combine_mode") = "multiplicative",
        py::arg("gamma") = py::none(), py::arg("zero_diagonal") = false,
        py::arg("drop_trivial") = false, py::arg("seed") = 0,
        "Run the iterative loop; returns (refined kernel, Y rows, history).");

    m.def(
        "kmeans",
        [](const Eigen::MatrixXd& Y_rows, int c, int n_init, std::uint64_t seed) {
            return kmeans(Eigen::MatrixXd(Y_rows.transpose()), c, n_init, seed).labels;
        },
        py::arg("Y"), py::arg("c"), py::arg("n_init") = 10, py::arg("seed") = 0,
        "Best-inertia K-means labels over seeded restarts (points as rows).");

    m.def(
        "spectral_normalize",
        [](const Eigen::MatrixXd& Y_rows) {
            return Eigen::MatrixXd(
                spectral_normalize(Eigen::MatrixXd(Y_rows.transpose())).transpose());
        },
        py::arg("Y"));

    m.def(
        "accuracy",
        [](const std::vector<int>& pred, const std::vector<int>& truth) {
            return accuracy(labels_from_array(pred, 0), labels_from_array(truth, 0));
        },
        py::arg("pred"), py::arg("truth"));

    m.def(
        "nmi",
        [](const std::vector<int>& pred, const std::vector<int>& truth) {
            return nmi(labels_from_array(pred, 0), labels_from_array(truth, 0));
        },
        py::arg("pred"), py::arg("truth"));

    m.def(
        "purity",
        [](const std::vector<int>& pred, const std::vector<int>& truth) {
            return purity(labels_from_array(pred, 0), labels_from_array(truth, 0));
        },
        py::arg("pred"), py::arg("truth"));

    m.def(
        "harmonic_label_prop",
        [](const Eigen::MatrixXd& weights, const std::vector<int>& seeds, int num_classes) {
            SimilarityMatrix W = similarity_from_values(weights);
            return harmonic_label_prop(symmetrize(W), labels_from_array(seeds, num_classes))
                .labels;
        },
        py::arg("weights"), py::arg("seeds"), py::arg("num_classes") = 0,
        "Harmonic propagation; -1 in seeds marks unlabeled points.");

    m.def(
        "lg_consistency",
        [](const Eigen::MatrixXd& weights, const std::vector<int>& seeds, double alpha_lgc,
           int num_classes) {
            SimilarityMatrix W = similarity_from_values(weights);
            return lg_consistency(symmetrize(W), labels_from_array(seeds, num_classes),
                                  alpha_lgc)
                .labels;
        },
        py::arg("weights"), py::arg("seeds"), py::arg("alpha_lgc") = 0.9,
        py::arg("num_classes") = 0,
        "Local/global consistency propagation; -1 in seeds marks unlabeled points.");
}
