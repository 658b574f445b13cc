#include "ille/pipeline.hpp"

#include <utility>

namespace ille {

WMethod w_method_from_string(const std::string& s) {
    if (s == "knn_eq16") return WMethod::knn_eq16;
    if (s == "sparse_eq18") return WMethod::sparse_eq18;
    throw ParameterError("unknown w_method: " + s);
}

std::string to_string(WMethod m) {
    return m == WMethod::knn_eq16 ? "knn_eq16" : "sparse_eq18";
}

WeightsSummary summarize_weights(const SimilarityMatrix& W) {
    WeightsSummary s;
    s.n = W.size();
    s.kind = to_string(W.kind);
    s.min = W.values.minCoeff();
    s.max = W.values.maxCoeff();
    s.sum = W.values.sum();
    s.nonzeros = (W.values.cwiseAbs().array() > 1e-12).count();
    return s;
}

KernelSummary summarize_kernel(const Kernel& K) {
    KernelSummary s;
    s.n = K.size();
    s.min = K.values.minCoeff();
    s.max = K.values.maxCoeff();
    s.lambda_min = check_psd(K).lambda_min;
    return s;
}

namespace {

void validate_config(const IlleConfig& cfg) {
    if (cfg.T < 1) throw ParameterError("T must be >= 1");
    if (cfg.embed_k < 1) throw ParameterError("embed_k must be >= 1");
}

[[noreturn]] void rethrow_with_iteration(int t, const Error& e) {
    const std::string msg = "iteration " + std::to_string(t) + ": " + e.what();
    if (dynamic_cast<const ParameterError*>(&e)) throw ParameterError(msg);
    if (dynamic_cast<const ShapeError*>(&e)) throw ShapeError(msg);
    if (dynamic_cast<const NumericError*>(&e)) throw NumericError(msg);
    if (dynamic_cast<const ParseError*>(&e)) throw ParseError(msg);
    throw ValidationError(msg);
}

} // namespace

IlleResult iterative_lle(const Kernel& K1, const IlleConfig& cfg) {
    validate_config(cfg);
    validate_kernel(K1, "input kernel");

    Kernel K = K1;
    IlleResult result;
    result.history.reserve(static_cast<std::size_t>(cfg.T));

    for (int t = 1; t <= cfg.T; ++t) {
        try {
            IterationRecord rec;
            rec.t = t;

            SimilarityMatrix W;
            if (cfg.w_method == WMethod::sparse_eq18) {
                auto [S, report] =
                    learn_sparse_similarity(K, cfg.alpha, cfg.beta, cfg.tol, cfg.max_iter);
                W = std::move(S);
                rec.solve_report = std::move(report);
            } else {
                W = nonneg_lle_weights_knn(K, cfg.k_nn);
            }
            if (cfg.zero_diagonal) W.values.diagonal().setZero();
            rec.w_summary = summarize_weights(W);

            const GraphWeights G = symmetrize(W);
            rec.degrees = G.degrees;

            Embedding Y = embed(G, cfg.embed_k, EmbedOptions{cfg.drop_trivial});
            const Kernel K_Y = kernel_from_embedding(Y, cfg.kernel_method, cfg.gamma);
            Kernel K_next = combine_kernels(K, K_Y, cfg.combine_mode);
            validate_kernel(K_next, "refined kernel");

            rec.kernel_next = summarize_kernel(K_next);
            rec.embedding = std::move(Y);
            result.history.push_back(std::move(rec));
            K = std::move(K_next);
        } catch (const Error& e) {
            rethrow_with_iteration(t, e);
        }
    }

    result.refined_kernel = std::move(K);
    result.embedding = result.history.back().embedding;
    return result;
}

} // namespace ille
