#ifndef ILLE_CSV_HPP
#define ILLE_CSV_HPP

#include <Eigen/Dense>
#include <filesystem>
#include <optional>

#include "ille/errors.hpp"
#include "ille/eval.hpp"

namespace ille {

/// Parse a header-less numeric CSV (comma separator, dot decimal).
/// Ragged rows and non-numeric cells raise ParseError naming the 1-based
/// (row, column) location.
Eigen::MatrixXd load_matrix_csv(const std::filesystem::path& path);

/// Write with 17 significant digits so a load round-trips exactly.
void save_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m);

/// Single-column integer CSV. Entries of -1 mark unlabeled points and feed
/// the mask; anything else must lie in [0, INT_MAX). `expected_n`, when
/// set, is enforced against the row count.
LabelVector load_labels_csv(const std::filesystem::path& path,
                            std::optional<Eigen::Index> expected_n = std::nullopt);

void save_labels_csv(const std::filesystem::path& path, const LabelVector& labels);

} // namespace ille

#endif
