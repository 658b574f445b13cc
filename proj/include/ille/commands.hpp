#ifndef ILLE_COMMANDS_HPP
#define ILLE_COMMANDS_HPP

#include <filesystem>
#include <optional>
#include <string>

#include "ille/pipeline.hpp"

namespace ille {

/// Settings of one `run` invocation, usually loaded from a JSON config.
struct RunConfig {
    std::filesystem::path data_path;
    std::optional<std::filesystem::path> labels_path;
    std::filesystem::path out_dir = "out";
    std::uint64_t seed = 0;

    // input kernel construction
    KernelMethod kernel_method = KernelMethod::gaussian;
    std::optional<double> kernel_gamma; // absent -> median heuristic
    bool shift_nonneg = false;          // lift negative kernels entrywise

    IlleConfig pipeline;

    // evaluation
    int clusters = 2;
    int n_init = 10;
    bool normalize_embedding = false; // unit-sphere variant before K-means

    bool dump_matrices = false;
};

/// Parse a RunConfig from a JSON document on disk. Unknown keys are
/// rejected; missing keys fall back to the documented defaults.
RunConfig load_run_config(const std::filesystem::path& path);

/// Resolve the output directory: CLI flag > ILLE_OUT_DIR env var > config.
std::filesystem::path resolve_out_dir(const RunConfig& cfg,
                                      const std::optional<std::string>& cli_out);

/// Build the input kernel from a data matrix per the config.
Kernel build_input_kernel(const Eigen::MatrixXd& X, const RunConfig& cfg);

/// Execute the full loop and write Y_t{t}.csv, history.json, scatter.csv
/// and (with labels) metrics.json into the output directory.
void run_pipeline_command(const RunConfig& cfg);

/// Print {acc, nmi, pur} for two fully-labeled label files.
void report_metrics_command(const std::filesystem::path& pred_path,
                            const std::filesystem::path& truth_path);

} // namespace ille

#endif
