#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kfwer {

/// Genes × subjects expression matrix. Columns [0, n1) belong to group 1 and
/// [n1, n1 + n2) to group 2.
struct ExpressionDataset {
  int genes = 0;
  int subjects = 0;
  int n1 = 0;
  int n2 = 0;
  std::vector<double> values;  // row-major, genes × subjects
  std::vector<std::string> gene_ids;

  std::span<const double> row(int gene) const {
    return {values.data() + static_cast<std::size_t>(gene) * subjects,
            static_cast<std::size_t>(subjects)};
  }
};

enum class TableFormat { csv, tsv };

TableFormat parse_table_format(std::string_view text);
/// csv unless the extension is .tsv or .txt.
TableFormat format_from_extension(const std::filesystem::path& path);

struct LoadOptions {
  TableFormat format = TableFormat::csv;
  std::optional<int> n1;
  std::optional<int> n2;
};

/// Reads a delimited matrix, one gene per row.
///
/// A first row containing any non-numeric cell is a header. If the header
/// carries group labels, the first run of equal labels is group 1 and the
/// rest group 2. A first column that is non-numeric on the first data row is
/// taken as gene identifiers. Explicit n1/n2 override or must agree with the
/// header. Errors name the 1-based data row and throw std::invalid_argument.
ExpressionDataset parse_expression_matrix(std::istream& in, const LoadOptions& options);
ExpressionDataset load_expression_matrix(const std::filesystem::path& path,
                                         const LoadOptions& options);

void write_expression_csv(const ExpressionDataset& data, std::ostream& out);

struct TestStatistics {
  std::vector<double> t;
  std::vector<double> z;
  int df = 0;
  /// Genes whose t statistic was too extreme for the tail to be represented;
  /// their z is pinned at ±kZCap.
  std::vector<int> saturated;
};

inline constexpr double kZCap = 38.0;

/// Pooled-variance two-sample t statistics (group 2 minus group 1),
/// df = n1 + n2 - 2. A gene with zero pooled variance throws
/// std::invalid_argument listing the offending genes.
TestStatistics two_sample_t(const ExpressionDataset& data);

/// z_i = Φ⁻¹(F_df(t_i)), computed from the nearer tail so that ranks are
/// preserved far into the tails.
TestStatistics t_to_z(TestStatistics stats);

struct RejectionRow {
  int k = 0;
  double alpha_star_fg = 0.0;
  double alpha_star_negdep = 0.0;
  double cutoff_lr = 0.0;
  double cutoff_fg = 0.0;
  double cutoff_proposed = 0.0;
  int lr = 0;
  int fg = 0;
  int proposed = 0;
};

struct RejectionTable {
  int n = 0;
  double alpha = 0.0;
  double rho = 0.0;
  std::vector<RejectionRow> rows;
};

/// Counts z_i above the Lehmann–Romano cutoff, the min{f, g} cutoff and the
/// negative-dependence cutoff for every k. For k = 1 the min{f, g} route is
/// undefined and falls back to α.
RejectionTable run_procedures(std::span<const double> z, std::span<const int> ks, double alpha,
                              double rho);

struct SyntheticSpec {
  int genes = 1000;
  int n1 = 50;
  int n2 = 52;
  int signal_genes = 20;
  double effect = 1.5;  // mean shift of group 2, in within-group SD units
  std::uint64_t seed = 1;
};

/// Independent N(0, 1) genes with `signal_genes` shifted upward in group 2.
ExpressionDataset synthetic_dataset(const SyntheticSpec& spec);

struct CorrelationSummary {
  double mean = 0.0;
  double mean_abs = 0.0;
  std::uint64_t pairs = 0;
};

/// Mean Pearson correlation between the group-centred expression rows of
/// uniformly sampled distinct gene pairs.
CorrelationSummary mean_pairwise_correlation(const ExpressionDataset& data, std::uint64_t pairs,
                                             std::uint64_t seed);

}  // namespace kfwer
