#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "ille/commands.hpp"
#include "ille/csv.hpp"
#include "ille/embedding.hpp"
#include "ille/eval.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliError {
    std::string type;
    std::string message;
    int exit_code;
};

CliError classify(const ille::Error& e) {
    if (dynamic_cast<const ille::ParseError*>(&e)) return {"parse_error", e.what(), 2};
    if (dynamic_cast<const ille::ParameterError*>(&e)) return {"parameter_error", e.what(), 2};
    if (dynamic_cast<const ille::ShapeError*>(&e)) return {"shape_error", e.what(), 2};
    if (dynamic_cast<const ille::ValidationError*>(&e)) return {"validation_error", e.what(), 2};
    return {"numeric_error", e.what(), 3};
}

void write_json_stdout(const json& j) { std::cout << j.dump(2) << "\n"; }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"iterative locally linear embedding toolkit"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "full iterative pipeline from a JSON config");
    std::string run_config;
    std::optional<std::uint64_t> run_seed;
    std::optional<std::string> run_out;
    run->add_option("--config", run_config, "JSON config file")->required();
    run->add_option("--seed", run_seed, "override the config seed");
    run->add_option("--out", run_out, "override the output directory");

    // kernel
    auto* kernel = app.add_subcommand("kernel", "build a kernel matrix from data");
    std::string k_data, k_method = "gaussian", k_out;
    std::optional<double> k_gamma;
    bool k_shift = false;
    kernel->add_option("--data", k_data, "data CSV (points as rows)")->required();
    kernel->add_option("--method", k_method, "gaussian|linear");
    kernel->add_option("--gamma", k_gamma, "gaussian scale (default: median heuristic)");
    kernel->add_flag("--shift-nonneg", k_shift, "shift negative kernels entrywise");
    kernel->add_option("--out", k_out, "output CSV")->required();

    // similarity
    auto* sim = app.add_subcommand("similarity", "learn reconstruction weights from a kernel");
    std::string s_kernel, s_method = "sparse", s_out, s_report;
    int s_knn = 5, s_max_iter = 1000;
    double s_alpha = 0.1, s_beta = 0.1, s_tol = 1e-8;
    sim->add_option("--kernel", s_kernel, "kernel CSV")->required();
    sim->add_option("--method", s_method, "knn-affine|knn-nonneg|sparse");
    sim->add_option("--k-nn", s_knn, "neighborhood size for the kNN methods");
    sim->add_option("--alpha", s_alpha, "ridge weight (sparse)");
    sim->add_option("--beta", s_beta, "sparsity weight (sparse)");
    sim->add_option("--tol", s_tol, "relative objective tolerance (sparse)");
    sim->add_option("--max-iter", s_max_iter, "sweep limit (sparse)");
    sim->add_option("--out", s_out, "output CSV")->required();
    sim->add_option("--report", s_report, "write the solve report JSON here");

    // embed
    auto* emb = app.add_subcommand("embed", "embed a similarity matrix");
    std::string e_weights, e_out, e_eigen;
    int e_k = 2;
    bool e_drop = false;
    emb->add_option("--weights", e_weights, "nonnegative weights CSV")->required();
    emb->add_option("--k", e_k, "embedding dimension");
    emb->add_flag("--drop-trivial", e_drop, "skip the constant eigenvector");
    emb->add_option("--out", e_out, "embedding CSV (points as rows)")->required();
    emb->add_option("--eigenvalues", e_eigen, "write eigenvalues JSON here");

    // cluster
    auto* clu = app.add_subcommand("cluster", "K-means on an embedding");
    std::string c_embedding, c_out, c_truth;
    int c_clusters = 2, c_ninit = 10;
    std::uint64_t c_seed = 0;
    bool c_norm = false;
    clu->add_option("--embedding", c_embedding, "embedding CSV (points as rows)")->required();
    clu->add_option("--clusters", c_clusters, "cluster count")->required();
    clu->add_option("--n-init", c_ninit, "random restarts");
    clu->add_option("--seed", c_seed, "RNG seed");
    clu->add_flag("--normalize", c_norm, "project points onto the unit sphere first");
    clu->add_option("--out", c_out, "labels CSV")->required();
    clu->add_option("--truth", c_truth, "ground-truth labels; prints metrics JSON");

    // ssl
    auto* ssl = app.add_subcommand("ssl", "semi-supervised label propagation");
    std::string l_weights, l_seeds, l_method = "harmonic", l_out;
    double l_alpha = 0.9;
    ssl->add_option("--weights", l_weights, "nonnegative weights CSV")->required();
    ssl->add_option("--seeds", l_seeds, "labels CSV, -1 marks unlabeled")->required();
    ssl->add_option("--method", l_method, "harmonic|lgc");
    ssl->add_option("--alpha-lgc", l_alpha, "propagation strength for lgc");
    ssl->add_option("--out", l_out, "predicted labels CSV")->required();

    // metrics
    auto* met = app.add_subcommand("metrics", "clustering metrics of two label files");
    std::string m_pred, m_truth;
    met->add_option("--pred", m_pred, "predicted labels CSV")->required();
    met->add_option("--truth", m_truth, "ground-truth labels CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            ille::RunConfig cfg = ille::load_run_config(run_config);
            if (run_seed) {
                cfg.seed = *run_seed;
                cfg.pipeline.seed = *run_seed;
            }
            cfg.out_dir = ille::resolve_out_dir(cfg, run_out);
            ille::run_pipeline_command(cfg);
        } else if (*kernel) {
            ille::RunConfig cfg;
            cfg.kernel_method = ille::kernel_method_from_string(k_method);
            cfg.kernel_gamma = k_gamma;
            cfg.shift_nonneg = k_shift;
            const Eigen::MatrixXd X = ille::load_matrix_csv(k_data);
            ille::save_matrix_csv(k_out, ille::build_input_kernel(X, cfg).values);
        } else if (*sim) {
            const ille::Kernel K{ille::load_matrix_csv(s_kernel)};
            ille::validate_kernel(K, "input kernel");
            if (s_method == "knn-affine") {
                ille::save_matrix_csv(s_out, ille::lle_weights_knn(K, s_knn).values);
            } else if (s_method == "knn-nonneg") {
                ille::save_matrix_csv(s_out, ille::nonneg_lle_weights_knn(K, s_knn).values);
            } else if (s_method == "sparse") {
                auto [S, report] =
                    ille::learn_sparse_similarity(K, s_alpha, s_beta, s_tol, s_max_iter);
                ille::save_matrix_csv(s_out, S.values);
                if (!s_report.empty()) {
                    std::ofstream rep(s_report, std::ios::binary);
                    rep << json{{"iterations", report.iterations},
                                {"objective_trace", report.objective_trace},
                                {"final_kkt_residual", report.final_kkt_residual},
                                {"converged", report.converged}}
                               .dump(2)
                        << "\n";
                }
            } else {
                throw ille::ParameterError("unknown similarity method: " + s_method);
            }
        } else if (*emb) {
            ille::SimilarityMatrix W;
            W.values = ille::load_matrix_csv(e_weights);
            const ille::GraphWeights G = ille::symmetrize(W);
            const ille::Embedding Y = ille::embed(G, e_k, ille::EmbedOptions{e_drop});
            ille::save_matrix_csv(e_out, Y.coords.transpose());
            if (!e_eigen.empty()) {
                std::ofstream ev(e_eigen, std::ios::binary);
                ev << json(std::vector<double>(Y.eigenvalues.data(),
                                               Y.eigenvalues.data() + Y.eigenvalues.size()))
                          .dump()
                   << "\n";
            }
        } else if (*clu) {
            Eigen::MatrixXd pts = ille::load_matrix_csv(c_embedding).transpose();
            if (c_norm) pts = ille::spectral_normalize(pts);
            const ille::LabelVector pred = ille::kmeans(pts, c_clusters, c_ninit, c_seed);
            ille::save_labels_csv(c_out, pred);
            if (!c_truth.empty()) {
                const ille::LabelVector truth = ille::load_labels_csv(c_truth, pts.cols());
                const ille::MetricsReport m = ille::clustering_metrics(pred, truth);
                write_json_stdout(json{{"acc", m.acc}, {"nmi", m.nmi}, {"pur", m.pur}});
            }
        } else if (*ssl) {
            ille::SimilarityMatrix W;
            W.values = ille::load_matrix_csv(l_weights);
            const ille::GraphWeights G = ille::symmetrize(W);
            const ille::LabelVector seeds = ille::load_labels_csv(l_seeds, G.size());
            ille::LabelVector pred;
            if (l_method == "harmonic") {
                pred = ille::harmonic_label_prop(G, seeds);
            } else if (l_method == "lgc") {
                pred = ille::lg_consistency(G, seeds, l_alpha);
            } else {
                throw ille::ParameterError("unknown ssl method: " + l_method);
            }
            ille::save_labels_csv(l_out, pred);
        } else if (*met) {
            ille::report_metrics_command(m_pred, m_truth);
        }
    } catch (const ille::Error& e) {
        const CliError ce = classify(e);
        std::cerr << json{{"error", {{"type", ce.type}, {"message", ce.message}}}}.dump()
                  << "\n";
        return ce.exit_code;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", {{"type", "internal_error"}, {"message", e.what()}}}}.dump()
                  << "\n";
        return 1;
    }
    return 0;
}
