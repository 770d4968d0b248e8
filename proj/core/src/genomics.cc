#include "kfwer/genomics.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "kfwer/bounds.h"
#include "kfwer/dist.h"
#include "kfwer/parallel.h"

namespace kfwer {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delim, start);
    cells.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

std::optional<double> parse_number(std::string_view cell) {
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

bool all_numeric(const std::vector<std::string_view>& cells, std::size_t from) {
  for (std::size_t i = from; i < cells.size(); ++i) {
    if (!parse_number(cells[i])) return false;
  }
  return true;
}

// Two contiguous runs of labels give the group-1 size; anything else carries
// no group information.
std::optional<int> groups_from_labels(const std::vector<std::string_view>& labels) {
  if (labels.empty()) return std::nullopt;
  std::size_t split_at = 1;
  while (split_at < labels.size() && labels[split_at] == labels[0]) ++split_at;
  if (split_at == labels.size()) return std::nullopt;
  for (std::size_t i = split_at; i < labels.size(); ++i) {
    if (labels[i] != labels[split_at]) return std::nullopt;
  }
  return static_cast<int>(split_at);
}

}  // namespace

TableFormat parse_table_format(std::string_view text) {
  if (text == "csv") return TableFormat::csv;
  if (text == "tsv") return TableFormat::tsv;
  throw std::invalid_argument("unknown table format '" + std::string(text) +
                              "' (expected csv or tsv)");
}

TableFormat format_from_extension(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  return (ext == ".tsv" || ext == ".txt") ? TableFormat::tsv : TableFormat::csv;
}

ExpressionDataset parse_expression_matrix(std::istream& in, const LoadOptions& options) {
  const char delim = options.format == TableFormat::csv ? ',' : '\t';
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!trim(line).empty()) lines.push_back(std::move(line));
  }
  if (lines.empty()) throw std::invalid_argument("expression matrix: input is empty");

  std::size_t first_data = 0;
  std::vector<std::string_view> header;
  {
    auto cells = split(lines[0], delim);
    if (!all_numeric(cells, 0)) {
      header = std::move(cells);
      first_data = 1;
    }
  }
  if (first_data >= lines.size()) throw std::invalid_argument("expression matrix: no data rows");

  const auto first_row = split(lines[first_data], delim);
  const bool has_ids = !parse_number(first_row[0]).has_value();
  const std::size_t offset = has_ids ? 1 : 0;
  const std::size_t columns = first_row.size() - offset;
  if (columns == 0) throw std::invalid_argument("expression matrix: no numeric columns");

  ExpressionDataset data;
  data.subjects = static_cast<int>(columns);
  for (std::size_t li = first_data; li < lines.size(); ++li) {
    const std::size_t row_number = li - first_data + 1;
    const auto cells = split(lines[li], delim);
    if (cells.size() != columns + offset) {
      throw std::invalid_argument("expression matrix: row " + std::to_string(row_number) +
                                  " has " + std::to_string(cells.size()) + " cells, expected " +
                                  std::to_string(columns + offset));
    }
    if (has_ids) data.gene_ids.emplace_back(cells[0]);
    for (std::size_t c = offset; c < cells.size(); ++c) {
      const auto v = parse_number(cells[c]);
      if (!v) {
        throw std::invalid_argument("expression matrix: row " + std::to_string(row_number) +
                                    ", column " + std::to_string(c + 1) +
                                    ": non-numeric cell '" + std::string(cells[c]) + "'");
      }
      data.values.push_back(*v);
    }
  }
  data.genes = static_cast<int>(lines.size() - first_data);

  std::optional<int> header_n1;
  if (!header.empty()) {
    std::vector<std::string_view> labels;
    if (header.size() == columns + offset) {
      labels.assign(header.begin() + static_cast<std::ptrdiff_t>(offset), header.end());
    } else if (header.size() == columns) {
      labels = header;
    }
    header_n1 = groups_from_labels(labels);
  }

  const int total = data.subjects;
  int n1 = 0;
  if (options.n1) {
    n1 = *options.n1;
  } else if (options.n2) {
    n1 = total - *options.n2;
  } else if (header_n1) {
    n1 = *header_n1;
  } else {
    throw std::invalid_argument(
        "expression matrix: group sizes unknown; pass n1/n2 or a header with two group labels");
  }
  const int n2 = options.n2 ? *options.n2 : total - n1;
  if (n1 + n2 != total) {
    throw std::invalid_argument("expression matrix: n1 + n2 = " + std::to_string(n1 + n2) +
                                " but the matrix has " + std::to_string(total) + " columns");
  }
  if (header_n1 && (options.n1 || options.n2) && *header_n1 != n1) {
    throw std::invalid_argument("expression matrix: header labels give n1 = " +
                                std::to_string(*header_n1) + " but n1 = " + std::to_string(n1) +
                                " was requested");
  }
  if (n1 < 2 || n2 < 2) {
    throw std::invalid_argument("expression matrix: each group needs at least 2 subjects (n1 = " +
                                std::to_string(n1) + ", n2 = " + std::to_string(n2) + ")");
  }
  data.n1 = n1;
  data.n2 = n2;
  return data;
}

ExpressionDataset load_expression_matrix(const std::filesystem::path& path,
                                         const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open expression matrix " + path.string());
  return parse_expression_matrix(in, options);
}

void write_expression_csv(const ExpressionDataset& data, std::ostream& out) {
  out << "gene";
  for (int j = 0; j < data.subjects; ++j) out << ',' << (j < data.n1 ? "g1" : "g2");
  out << '\n';
  out << std::setprecision(17);
  for (int i = 0; i < data.genes; ++i) {
    out << (data.gene_ids.empty() ? "gene" + std::to_string(i + 1) : data.gene_ids[i]);
    for (double v : data.row(i)) out << ',' << v;
    out << '\n';
  }
}

TestStatistics two_sample_t(const ExpressionDataset& data) {
  if (data.n1 < 2 || data.n2 < 2 || data.n1 + data.n2 != data.subjects) {
    throw std::invalid_argument("two_sample_t: invalid group sizes");
  }
  TestStatistics out;
  out.df = data.n1 + data.n2 - 2;
  out.t.resize(static_cast<std::size_t>(data.genes));
  const double scale = 1.0 / data.n1 + 1.0 / data.n2;
  std::vector<int> degenerate;

  for (int i = 0; i < data.genes; ++i) {
    const auto row = data.row(i);
    const auto g1 = row.first(static_cast<std::size_t>(data.n1));
    const auto g2 = row.subspan(static_cast<std::size_t>(data.n1));
    auto mean = [](std::span<const double> xs) {
      double acc = 0.0;
      for (double x : xs) acc += x;
      return acc / static_cast<double>(xs.size());
    };
    auto sum_sq = [](std::span<const double> xs, double m) {
      double acc = 0.0;
      for (double x : xs) acc += (x - m) * (x - m);
      return acc;
    };
    const double m1 = mean(g1);
    const double m2 = mean(g2);
    const double pooled = (sum_sq(g1, m1) + sum_sq(g2, m2)) / out.df * scale;
    if (!(pooled > 0.0)) {
      degenerate.push_back(i);
      continue;
    }
    out.t[i] = (m2 - m1) / std::sqrt(pooled);
  }

  if (!degenerate.empty()) {
    std::ostringstream msg;
    msg << "two_sample_t: zero pooled variance for " << degenerate.size() << " gene(s):";
    for (std::size_t j = 0; j < degenerate.size() && j < 10; ++j) {
      const int g = degenerate[j];
      msg << ' ' << (data.gene_ids.empty() ? "#" + std::to_string(g + 1) : data.gene_ids[g]);
    }
    if (degenerate.size() > 10) msg << " ...";
    throw std::invalid_argument(msg.str());
  }
  return out;
}

TestStatistics t_to_z(TestStatistics stats) {
  if (stats.df < 1) throw std::invalid_argument("t_to_z: df must be set");
  stats.z.resize(stats.t.size());
  stats.saturated.clear();
  for (std::size_t i = 0; i < stats.t.size(); ++i) {
    const double t = stats.t[i];
    if (t == 0.0) {
      stats.z[i] = 0.0;
      continue;
    }
    const double tail = student_t_sf(std::fabs(t), stats.df);
    double z = 0.0;
    if (tail > 0.0) {
      z = tail >= 0.5 ? 0.0 : normal_upper_quantile(tail);
    } else {
      z = kZCap;
      stats.saturated.push_back(static_cast<int>(i));
    }
    stats.z[i] = t > 0.0 ? z : -z;
  }
  return stats;
}

RejectionTable run_procedures(std::span<const double> z, std::span<const int> ks, double alpha,
                              double rho) {
  RejectionTable table;
  table.n = static_cast<int>(z.size());
  table.alpha = alpha;
  table.rho = rho;
  auto count_above = [&](double cutoff) {
    return static_cast<int>(std::count_if(z.begin(), z.end(), [&](double v) { return v > cutoff; }));
  };
  auto cutoff_or_floor = [&](int k, double level) {
    const double q = static_cast<double>(k) * level / table.n;
    return q >= 1.0 ? -std::numeric_limits<double>::infinity() : cutoff_at(table.n, k, level);
  };

  for (int k : ks) {
    const TestConfig config = TestConfig::make(table.n, k, alpha);
    RejectionRow row;
    row.k = k;
    row.alpha_star_fg = k >= 2 ? alpha_star_fg(config, Equicorrelated{rho}) : alpha;
    row.alpha_star_negdep = alpha_star_negdep(config);
    row.cutoff_lr = lr_cutoff(config);
    row.cutoff_fg = cutoff_or_floor(k, row.alpha_star_fg);
    row.cutoff_proposed = cutoff_or_floor(k, row.alpha_star_negdep);
    row.lr = count_above(row.cutoff_lr);
    row.fg = count_above(row.cutoff_fg);
    row.proposed = count_above(row.cutoff_proposed);
    table.rows.push_back(row);
  }
  return table;
}

ExpressionDataset synthetic_dataset(const SyntheticSpec& spec) {
  if (spec.genes < 1 || spec.n1 < 2 || spec.n2 < 2 || spec.signal_genes < 0 ||
      spec.signal_genes > spec.genes) {
    throw std::invalid_argument("synthetic_dataset: invalid shape");
  }
  ExpressionDataset data;
  data.genes = spec.genes;
  data.n1 = spec.n1;
  data.n2 = spec.n2;
  data.subjects = spec.n1 + spec.n2;
  data.values.resize(static_cast<std::size_t>(data.genes) * data.subjects);
  Engine rng = make_engine(spec.seed, 0);
  std::normal_distribution<double> normal;
  for (double& v : data.values) v = normal(rng);
  // Signal genes are spread evenly through the matrix.
  for (int s = 0; s < spec.signal_genes; ++s) {
    const int gene = static_cast<int>(static_cast<long long>(s) * spec.genes / spec.signal_genes);
    for (int j = spec.n1; j < data.subjects; ++j) {
      data.values[static_cast<std::size_t>(gene) * data.subjects + j] += spec.effect;
    }
  }
  for (int i = 0; i < data.genes; ++i) {
    std::ostringstream id;
    id << "g" << std::setw(5) << std::setfill('0') << i + 1;
    data.gene_ids.push_back(id.str());
  }
  return data;
}

CorrelationSummary mean_pairwise_correlation(const ExpressionDataset& data, std::uint64_t pairs,
                                             std::uint64_t seed) {
  const int n = data.genes;
  const int m = data.subjects;
  if (n < 2) throw std::invalid_argument("mean_pairwise_correlation: needs at least 2 genes");

  // Group-centred, unit-norm rows; zero-variance rows stay all-zero and are skipped.
  std::vector<double> unit(data.values.size());
  std::vector<bool> usable(static_cast<std::size_t>(n), false);
  for (int i = 0; i < n; ++i) {
    const auto row = data.row(i);
    double* out = unit.data() + static_cast<std::size_t>(i) * m;
    for (auto [begin, end] : {std::pair{0, data.n1}, std::pair{data.n1, m}}) {
      double mean = 0.0;
      for (int j = begin; j < end; ++j) mean += row[j];
      mean /= (end - begin);
      for (int j = begin; j < end; ++j) out[j] = row[j] - mean;
    }
    double norm = 0.0;
    for (int j = 0; j < m; ++j) norm += out[j] * out[j];
    if (norm > 0.0) {
      norm = std::sqrt(norm);
      for (int j = 0; j < m; ++j) out[j] /= norm;
      usable[i] = true;
    }
  }
  auto corr = [&](int a, int b) {
    const double* x = unit.data() + static_cast<std::size_t>(a) * m;
    const double* y = unit.data() + static_cast<std::size_t>(b) * m;
    double acc = 0.0;
    for (int j = 0; j < m; ++j) acc += x[j] * y[j];
    return acc;
  };

  CorrelationSummary out;
  double sum = 0.0;
  double sum_abs = 0.0;
  auto add = [&](int a, int b) {
    if (!usable[a] || !usable[b]) return;
    const double r = corr(a, b);
    sum += r;
    sum_abs += std::fabs(r);
    ++out.pairs;
  };
  const double total_pairs = 0.5 * n * (n - 1.0);
  if (static_cast<double>(pairs) >= total_pairs) {
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) add(a, b);
    }
  } else {
    Engine rng = make_engine(seed, 0);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (std::uint64_t p = 0; p < pairs; ++p) {
      int a = pick(rng);
      int b = pick(rng);
      while (b == a) b = pick(rng);
      add(a, b);
    }
  }
  if (out.pairs > 0) {
    out.mean = sum / static_cast<double>(out.pairs);
    out.mean_abs = sum_abs / static_cast<double>(out.pairs);
  }
  return out;
}

}  // namespace kfwer
