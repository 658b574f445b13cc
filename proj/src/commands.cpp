#include "ille/commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "ille/csv.hpp"
#include "ille/eval.hpp"

namespace ille {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* k : known) {
            if (key == k) {
                ok = true;
                break;
            }
        }
        if (!ok) throw ParseError("unknown config key '" + key + "' in " + where);
    }
}

std::optional<double> optional_number(const json& obj, const char* key) {
    if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
    return obj[key].get<double>();
}

json solve_report_json(const SolveReport& r) {
    return json{{"iterations", r.iterations},
                {"objective_trace", r.objective_trace},
                {"final_kkt_residual", r.final_kkt_residual},
                {"converged", r.converged}};
}

json weights_summary_json(const WeightsSummary& s) {
    return json{{"n", s.n},       {"kind", s.kind}, {"min", s.min},
                {"max", s.max},   {"sum", s.sum},   {"nonzeros", s.nonzeros}};
}

json kernel_summary_json(const KernelSummary& s) {
    return json{{"n", s.n}, {"min", s.min}, {"max", s.max}, {"lambda_min", s.lambda_min}};
}

json metrics_block(const Eigen::MatrixXd& coords, const LabelVector& truth,
                   const RunConfig& cfg) {
    const Eigen::MatrixXd pts =
        cfg.normalize_embedding ? spectral_normalize(coords) : coords;
    const auto runs = kmeans_runs(pts, cfg.clusters, cfg.n_init, cfg.seed);

    std::size_t best = 0;
    double mean_acc = 0.0, mean_nmi = 0.0, mean_pur = 0.0;
    for (std::size_t r = 0; r < runs.size(); ++r) {
        if (runs[r].inertia < runs[best].inertia) best = r;
        LabelVector pred{runs[r].labels, cfg.clusters, {}};
        const MetricsReport m = clustering_metrics(pred, truth);
        mean_acc += m.acc;
        mean_nmi += m.nmi;
        mean_pur += m.pur;
    }
    const double nr = static_cast<double>(runs.size());
    LabelVector best_pred{runs[best].labels, cfg.clusters, {}};
    const MetricsReport b = clustering_metrics(best_pred, truth);
    return json{{"best", json{{"acc", b.acc}, {"nmi", b.nmi}, {"pur", b.pur}}},
                {"mean", json{{"acc", mean_acc / nr},
                              {"nmi", mean_nmi / nr},
                              {"pur", mean_pur / nr}}}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path.string());
    out << text;
    if (!out) throw ParseError("write failed for " + path.string());
}

} // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("config " + path.string() + ": " + e.what());
    }

    reject_unknown_keys(doc,
                        {"data", "labels", "out_dir", "seed", "kernel", "pipeline",
                         "eval", "dump_matrices"},
                        "top level");
    RunConfig cfg;
    if (!doc.contains("data")) throw ParseError("config is missing the 'data' path");
    cfg.data_path = doc["data"].get<std::string>();
    if (doc.contains("labels") && !doc["labels"].is_null()) {
        cfg.labels_path = std::filesystem::path(doc["labels"].get<std::string>());
    }
    if (doc.contains("out_dir")) cfg.out_dir = doc["out_dir"].get<std::string>();
    if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("dump_matrices")) cfg.dump_matrices = doc["dump_matrices"].get<bool>();

    if (doc.contains("kernel")) {
        const json& k = doc["kernel"];
        reject_unknown_keys(k, {"method", "gamma", "shift_nonneg"}, "kernel");
        if (k.contains("method")) {
            cfg.kernel_method = kernel_method_from_string(k["method"].get<std::string>());
        }
        cfg.kernel_gamma = optional_number(k, "gamma");
        if (k.contains("shift_nonneg")) cfg.shift_nonneg = k["shift_nonneg"].get<bool>();
    }

    if (doc.contains("pipeline")) {
        const json& p = doc["pipeline"];
        reject_unknown_keys(p,
                            {"T", "w_method", "k_nn", "alpha", "beta", "tol", "max_iter",
                             "embed_k", "kernel_method", "combine_mode", "gamma",
                             "zero_diagonal", "drop_trivial"},
                            "pipeline");
        IlleConfig& pc = cfg.pipeline;
        if (p.contains("T")) pc.T = p["T"].get<int>();
        if (p.contains("w_method")) {
            pc.w_method = w_method_from_string(p["w_method"].get<std::string>());
        }
        if (p.contains("k_nn")) pc.k_nn = p["k_nn"].get<int>();
        if (p.contains("alpha")) pc.alpha = p["alpha"].get<double>();
        if (p.contains("beta")) pc.beta = p["beta"].get<double>();
        if (p.contains("tol")) pc.tol = p["tol"].get<double>();
        if (p.contains("max_iter")) pc.max_iter = p["max_iter"].get<int>();
        if (p.contains("embed_k")) pc.embed_k = p["embed_k"].get<int>();
        if (p.contains("kernel_method")) {
            pc.kernel_method = kernel_method_from_string(p["kernel_method"].get<std::string>());
        }
        if (p.contains("combine_mode")) {
            pc.combine_mode = combine_mode_from_string(p["combine_mode"].get<std::string>());
        }
        pc.gamma = optional_number(p, "gamma");
        if (p.contains("zero_diagonal")) pc.zero_diagonal = p["zero_diagonal"].get<bool>();
        if (p.contains("drop_trivial")) pc.drop_trivial = p["drop_trivial"].get<bool>();
    }

    if (doc.contains("eval")) {
        const json& e = doc["eval"];
        reject_unknown_keys(e, {"clusters", "n_init", "normalize"}, "eval");
        if (e.contains("clusters")) cfg.clusters = e["clusters"].get<int>();
        if (e.contains("n_init")) cfg.n_init = e["n_init"].get<int>();
        if (e.contains("normalize")) cfg.normalize_embedding = e["normalize"].get<bool>();
    }

    cfg.pipeline.seed = cfg.seed;
    return cfg;
}

std::filesystem::path resolve_out_dir(const RunConfig& cfg,
                                      const std::optional<std::string>& cli_out) {
    if (cli_out) return *cli_out;
    if (const char* env = std::getenv("ILLE_OUT_DIR"); env && *env) return env;
    return cfg.out_dir;
}

Kernel build_input_kernel(const Eigen::MatrixXd& X, const RunConfig& cfg) {
    Kernel K;
    if (cfg.kernel_method == KernelMethod::gaussian) {
        double g;
        if (cfg.kernel_gamma) {
            g = *cfg.kernel_gamma;
        } else {
            const double med = median_pairwise_distance(X.transpose());
            g = med > 0.0 ? 1.0 / (2.0 * med * med) : 1.0;
        }
        K = gaussian_kernel(X, g);
    } else {
        K = linear_kernel(X);
    }
    if (cfg.shift_nonneg) K = shift_to_nonnegative(K);
    return K;
}

void run_pipeline_command(const RunConfig& cfg) {
    const Eigen::MatrixXd X = load_matrix_csv(cfg.data_path);
    std::optional<LabelVector> truth;
    if (cfg.labels_path) {
        truth = load_labels_csv(*cfg.labels_path, X.rows());
        if (!truth->mask.empty()) {
            throw ValidationError("clustering ground truth must label every point");
        }
    }

    const std::filesystem::path out = cfg.out_dir;
    std::filesystem::create_directories(out);

    const Kernel K1 = build_input_kernel(X, cfg);
    const IlleResult result = iterative_lle(K1, cfg.pipeline);

    // per-iteration embeddings, points as rows
    for (const IterationRecord& rec : result.history) {
        save_matrix_csv(out / ("Y_t" + std::to_string(rec.t) + ".csv"),
                        rec.embedding.coords.transpose());
    }
    if (cfg.dump_matrices) {
        save_matrix_csv(out / "K_input.csv", K1.values);
        save_matrix_csv(out / "K_refined.csv", result.refined_kernel.values);
    }

    json history{{"iterations", json::array()}};
    for (const IterationRecord& rec : result.history) {
        json item{{"t", rec.t},
                  {"w_summary", weights_summary_json(rec.w_summary)},
                  {"degrees", std::vector<double>(rec.degrees.data(),
                                                  rec.degrees.data() + rec.degrees.size())},
                  {"eigenvalues",
                   std::vector<double>(rec.embedding.eigenvalues.data(),
                                       rec.embedding.eigenvalues.data() +
                                           rec.embedding.eigenvalues.size())},
                  {"kernel_next", kernel_summary_json(rec.kernel_next)}};
        if (rec.solve_report) item["solve_report"] = solve_report_json(*rec.solve_report);
        history["iterations"].push_back(std::move(item));
    }
    write_text(out / "history.json", history.dump(2) + "\n");

    // scatter file: first two embedding coordinates + label (-1 when absent)
    {
        const Eigen::MatrixXd& Y = result.embedding.coords;
        std::string scatter;
        char buf[128];
        for (Eigen::Index i = 0; i < Y.cols(); ++i) {
            const double y0 = Y(0, i);
            const double y1 = Y.rows() > 1 ? Y(1, i) : 0.0;
            const int lab = truth ? truth->labels[i] : -1;
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%d\n", y0, y1, lab);
            scatter += buf;
        }
        write_text(out / "scatter.csv", scatter);
    }

    if (truth) {
        json metrics{{"clusters", cfg.clusters},
                     {"n_init", cfg.n_init},
                     {"seed", cfg.seed},
                     {"normalized", cfg.normalize_embedding}};
        // baseline: normalized-cut embedding of the input kernel itself
        if (K1.values.minCoeff() >= 0.0) {
            const GraphWeights g0 = build_graph(K1.values);
            const Embedding y0 = embed(g0, cfg.pipeline.embed_k,
                                       EmbedOptions{cfg.pipeline.drop_trivial});
            metrics["baseline"] = metrics_block(y0.coords, *truth, cfg);
        }
        json per = json::array();
        for (const IterationRecord& rec : result.history) {
            json item = metrics_block(rec.embedding.coords, *truth, cfg);
            item["t"] = rec.t;
            per.push_back(std::move(item));
        }
        metrics["per_iteration"] = std::move(per);
        metrics["final"] = metrics_block(result.embedding.coords, *truth, cfg);
        write_text(out / "metrics.json", metrics.dump(2) + "\n");
    }
}

void report_metrics_command(const std::filesystem::path& pred_path,
                            const std::filesystem::path& truth_path) {
    LabelVector pred = load_labels_csv(pred_path);
    LabelVector truth = load_labels_csv(truth_path);
    if (!pred.mask.empty() || !truth.mask.empty()) {
        throw ValidationError("metrics need fully labeled files (no -1 entries)");
    }
    const MetricsReport m = clustering_metrics(pred, truth);
    const json out{{"acc", m.acc}, {"nmi", m.nmi}, {"pur", m.pur}};
    std::cout << out.dump(2) << "\n";
}

} // namespace ille
