#include "kfwer/genomics.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "kfwer/bounds.h"
#include "kfwer/dist.h"
#include "kfwer/parallel.h"

namespace kfwer {
namespace {

const std::filesystem::path kData = KFWER_TEST_DATA_DIR;

ExpressionDataset parse(const std::string& text, LoadOptions opts = {}) {
  std::istringstream in(text);
  return parse_expression_matrix(in, opts);
}

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

TEST(Loader, FixtureWithLabelledHeader) {
  const auto data = load_expression_matrix(kData / "fixture_10x8.csv", {});
  EXPECT_EQ(data.genes, 10);
  EXPECT_EQ(data.subjects, 8);
  EXPECT_EQ(data.n1, 4);
  EXPECT_EQ(data.n2, 4);
  ASSERT_EQ(data.gene_ids.size(), 10u);
  EXPECT_EQ(data.gene_ids[2], "gene03");
  EXPECT_DOUBLE_EQ(data.row(0)[0], 3.414);
  EXPECT_DOUBLE_EQ(data.row(9)[7], 6.110);
}

TEST(Loader, TsvMatchesCsv) {
  EXPECT_EQ(format_from_extension(kData / "fixture_10x8.tsv"), TableFormat::tsv);
  const auto csv = load_expression_matrix(kData / "fixture_10x8.csv", {});
  const auto tsv = load_expression_matrix(kData / "fixture_10x8.tsv", {TableFormat::tsv});
  EXPECT_EQ(csv.values, tsv.values);
  EXPECT_EQ(csv.gene_ids, tsv.gene_ids);
  EXPECT_EQ(parse_table_format("tsv"), TableFormat::tsv);
  EXPECT_THROW(parse_table_format("xlsx"), std::invalid_argument);
}

TEST(Loader, NonNumericCellNamesTheRow) {
  const std::string msg =
      error_of([] { load_expression_matrix(kData / "fixture_bad_row7.csv", {}); });
  EXPECT_NE(msg.find("row 7"), std::string::npos) << msg;
  EXPECT_NE(msg.find("'NA'"), std::string::npos) << msg;
}

TEST(Loader, HeaderlessNeedsGroupSizes) {
  const std::string text = "1,2,3,4,5\n2,3,4,5,6\n";
  EXPECT_THROW(parse(text), std::invalid_argument);
  LoadOptions opts;
  opts.n1 = 2;
  const auto data = parse(text, opts);
  EXPECT_EQ(data.n1, 2);
  EXPECT_EQ(data.n2, 3);
  EXPECT_TRUE(data.gene_ids.empty());
  LoadOptions only_n2;
  only_n2.n2 = 2;
  EXPECT_EQ(parse(text, only_n2).n1, 3);
}

TEST(Loader, StructuralErrors) {
  LoadOptions opts;
  opts.n1 = 2;
  EXPECT_THROW(parse("", opts), std::invalid_argument);
  EXPECT_THROW(parse("gene,a,a,b,b\n", opts), std::invalid_argument);
  const std::string ragged = error_of([&] { parse("1,2,3,4\n1,2,3\n", opts); });
  EXPECT_NE(ragged.find("row 2"), std::string::npos) << ragged;
  // Group sizes must leave two subjects per group.
  opts.n1 = 1;
  EXPECT_THROW(parse("1,2,3,4\n", opts), std::invalid_argument);
  // Header labels and explicit sizes must agree.
  LoadOptions clash;
  clash.n1 = 3;
  EXPECT_THROW(parse("id,a,a,b,b\nx,1,2,3,4\n", clash), std::invalid_argument);
  LoadOptions mismatch;
  mismatch.n1 = 2;
  mismatch.n2 = 3;
  EXPECT_THROW(parse("1,2,3,4\n", mismatch), std::invalid_argument);
  EXPECT_THROW(load_expression_matrix(kData / "does_not_exist.csv", {}), std::runtime_error);
}

TEST(Loader, RoundTripThroughCsvWriter) {
  const auto data = load_expression_matrix(kData / "fixture_10x8.csv", {});
  std::ostringstream out;
  write_expression_csv(data, out);
  const auto again = parse(out.str());
  EXPECT_EQ(again.values, data.values);
  EXPECT_EQ(again.gene_ids, data.gene_ids);
  EXPECT_EQ(again.n1, data.n1);
}

TEST(TwoSampleT, HandComputedFixture) {
  const auto data = load_expression_matrix(kData / "hand_3gene.csv", {});
  const auto stats = two_sample_t(data);
  EXPECT_EQ(stats.df, 2);
  EXPECT_NEAR(stats.t[0], 2.8284271247461901, 1e-14);
  EXPECT_EQ(stats.t[1], 0.0);
  EXPECT_NEAR(stats.t[2], 5.0, 1e-14);

  const auto z = t_to_z(stats);
  EXPECT_NEAR(z.z[0], 1.618416776155992, 1e-12);
  EXPECT_EQ(z.z[1], 0.0);
  EXPECT_NEAR(z.z[2], 2.0775638207774887, 1e-12);
  EXPECT_TRUE(z.saturated.empty());
}

TEST(TwoSampleT, MatchesDirectFormulaOnFixture) {
  const auto data = load_expression_matrix(kData / "fixture_10x8.csv", {});
  const auto stats = two_sample_t(data);
  ASSERT_EQ(stats.t.size(), 10u);
  for (int i = 0; i < data.genes; ++i) {
    const auto row = data.row(i);
    const double m1 = std::accumulate(row.begin(), row.begin() + 4, 0.0) / 4;
    const double m2 = std::accumulate(row.begin() + 4, row.end(), 0.0) / 4;
    double ss = 0.0;
    for (int j = 0; j < 8; ++j) ss += std::pow(row[j] - (j < 4 ? m1 : m2), 2);
    const double se = std::sqrt(ss / 6.0 * 0.5);
    EXPECT_NEAR(stats.t[i], (m2 - m1) / se, 1e-12) << i;
  }
  // The two planted genes stand out.
  std::vector<int> order(10);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return stats.t[a] > stats.t[b]; });
  EXPECT_TRUE((order[0] == 2 && order[1] == 7) || (order[0] == 7 && order[1] == 2));
}

TEST(TwoSampleT, LocationInvarianceAndNullGene) {
  auto data = synthetic_dataset({.genes = 30, .n1 = 6, .n2 = 7, .signal_genes = 3, .seed = 4});
  const auto before = two_sample_t(data);
  for (int j = 0; j < data.subjects; ++j) data.values[5 * data.subjects + j] += 123.25;
  const auto after = two_sample_t(data);
  EXPECT_NEAR(after.t[5], before.t[5], 1e-10);
  EXPECT_EQ(after.df, 11);

  const auto null_gene = parse("g,a,a,b,b\nx,1,3,3,1\n");
  EXPECT_EQ(two_sample_t(null_gene).t[0], 0.0);
}

TEST(TwoSampleT, ZeroVarianceListsTheGene) {
  const auto data = parse("g,a,a,b,b\nflat,0,0,1,1\nok,0,1,2,3\nconst,4,4,4,4\n");
  const std::string msg = error_of([&] { two_sample_t(data); });
  EXPECT_NE(msg.find("flat"), std::string::npos) << msg;
  EXPECT_NE(msg.find("const"), std::string::npos) << msg;
  EXPECT_EQ(msg.find("ok"), std::string::npos) << msg;
}

TEST(TToZ, ReferenceValuesAndSymmetry) {
  TestStatistics stats;
  stats.df = 100;
  stats.t = {0.0, 1.98, -1.98};
  const auto z = t_to_z(stats);
  EXPECT_EQ(z.z[0], 0.0);
  EXPECT_NEAR(z.z[1], 1.9561150143551524, 1e-12);
  EXPECT_EQ(z.z[2], -z.z[1]);

  TestStatistics three;
  three.df = 3;
  three.t = {-2.5};
  EXPECT_NEAR(t_to_z(three).z[0], -1.7076212273548162, 1e-12);
  EXPECT_THROW(t_to_z(TestStatistics{}), std::invalid_argument);
}

TEST(TToZ, PreservesRanksIntoTheTails) {
  TestStatistics stats;
  stats.df = 100;
  for (double t = -60.0; t <= 60.0; t += 0.37) stats.t.push_back(t);
  stats.t.push_back(1e6);
  const auto z = t_to_z(stats);
  for (std::size_t i = 1; i < z.z.size() - 1; ++i) {
    EXPECT_LT(z.z[i - 1], z.z[i]) << stats.t[i];
    EXPECT_TRUE(std::isfinite(z.z[i]));
  }
  // Only an astronomically large t saturates, and it is flagged.
  ASSERT_EQ(z.saturated.size(), 1u);
  EXPECT_EQ(z.saturated[0], static_cast<int>(stats.t.size() - 1));
  EXPECT_EQ(z.z.back(), kZCap);
}

TEST(TToZ, NullStatisticsAreStandardNormal) {
  const auto data = synthetic_dataset({.genes = 4000, .n1 = 5, .n2 = 6, .signal_genes = 0,
                                       .seed = 21});
  const auto z = t_to_z(two_sample_t(data)).z;
  const double mean = std::accumulate(z.begin(), z.end(), 0.0) / z.size();
  double var = 0.0;
  for (double v : z) var += (v - mean) * (v - mean);
  var /= z.size() - 1;
  EXPECT_NEAR(mean, 0.0, 4.0 / std::sqrt(4000.0));
  EXPECT_NEAR(var, 1.0, 0.1);
  const double above = std::count_if(z.begin(), z.end(), [](double v) { return v > 1.6449; });
  EXPECT_NEAR(above / 4000.0, 0.05, 0.015);
}

TEST(RunProcedures, CutoffAndCountOrderings) {
  const auto data = synthetic_dataset({});
  const auto z = t_to_z(two_sample_t(data)).z;
  const std::vector<int> ks = {1, 2, 10, 20, 40, 60};
  const auto table = run_procedures(z, ks, 0.05, 0.0);
  ASSERT_EQ(table.rows.size(), ks.size());
  EXPECT_EQ(table.n, 1000);
  const RejectionRow* prev = nullptr;
  for (const auto& row : table.rows) {
    EXPECT_GE(row.cutoff_lr, row.cutoff_fg) << row.k;
    EXPECT_GE(row.alpha_star_fg, 0.05);
    if (row.alpha_star_fg <= row.alpha_star_negdep) {
      EXPECT_GE(row.cutoff_fg, row.cutoff_proposed) << row.k;
      EXPECT_LE(row.fg, row.proposed) << row.k;
    }
    EXPECT_LE(row.lr, row.fg) << row.k;
    EXPECT_GE(row.lr, 0);
    EXPECT_LE(row.proposed, table.n);
    EXPECT_EQ(row.lr, std::count_if(z.begin(), z.end(), [&](double v) { return v > row.cutoff_lr; }));
    if (prev) {
      EXPECT_GE(row.lr, prev->lr);
      EXPECT_GE(row.proposed, prev->proposed);
    }
    prev = &row;
  }
  // k = 1: the min{f, g} route reduces to Bonferroni.
  EXPECT_EQ(table.rows[0].alpha_star_fg, 0.05);
  EXPECT_EQ(table.rows[0].lr, table.rows[0].fg);
  EXPECT_EQ(table.rows[0].alpha_star_negdep, 0.05);
  // Planted signal is found.
  EXPECT_GE(table.rows[1].lr, 10);
}

TEST(RunProcedures, AllNullDataRejectsLittle) {
  const auto data = synthetic_dataset({.signal_genes = 0, .seed = 99});
  const auto z = t_to_z(two_sample_t(data)).z;
  const std::vector<int> ks = {20};
  const auto row = run_procedures(z, ks, 0.05, 0.0).rows[0];
  EXPECT_GE(row.proposed, row.lr);
  EXPECT_LE(row.lr, 5);
  EXPECT_LE(row.proposed, 40);
}

TEST(RunProcedures, LargestThresholdUsesRootLevel) {
  // With k = n the negative-dependence level is alpha^{1/n}.
  const std::vector<double> z = {-3.0, -1.0, 0.5, 2.0};
  const std::vector<int> ks = {4};
  const auto row = run_procedures(z, ks, 0.9, 0.0).rows[0];
  EXPECT_NEAR(row.alpha_star_negdep, std::pow(0.9, 0.25), 1e-15);
  EXPECT_NEAR(row.cutoff_proposed, cutoff_at(4, 4, std::pow(0.9, 0.25)), 1e-12);
  EXPECT_EQ(row.proposed, 3);
  EXPECT_THROW(run_procedures(z, std::vector<int>{5}, 0.05, 0.0), std::invalid_argument);
}

TEST(Synthetic, DeterministicAndShaped) {
  const auto a = synthetic_dataset({.genes = 50, .seed = 3});
  const auto b = synthetic_dataset({.genes = 50, .seed = 3});
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.subjects, 102);
  EXPECT_EQ(a.gene_ids.front(), "g00001");
  EXPECT_NE(synthetic_dataset({.genes = 50, .seed = 4}).values, a.values);
  EXPECT_THROW(synthetic_dataset({.genes = 5, .signal_genes = 6}), std::invalid_argument);
}

TEST(PairwiseCorrelation, IndependentGenesAverageNearZero) {
  const auto data = synthetic_dataset({.genes = 400, .signal_genes = 0, .seed = 8});
  const auto all = mean_pairwise_correlation(data, 1'000'000, 1);
  EXPECT_EQ(all.pairs, 400u * 399u / 2u);
  EXPECT_LT(std::fabs(all.mean), 0.005);
  // A single pair over 102 subjects has |r| of order 1/sqrt(100).
  EXPECT_NEAR(all.mean_abs, std::sqrt(2.0 / (kPi * 100.0)), 0.01);
  const auto sampled = mean_pairwise_correlation(data, 20'000, 1);
  EXPECT_EQ(sampled.pairs, 20'000u);
  EXPECT_NEAR(sampled.mean, all.mean, 0.003);
}

TEST(PairwiseCorrelation, DetectsSharedFactor) {
  auto data = synthetic_dataset({.genes = 100, .n1 = 20, .n2 = 20, .signal_genes = 0, .seed = 2});
  Engine rng = make_engine(5, 0);
  std::normal_distribution<double> normal;
  std::vector<double> factor(static_cast<std::size_t>(data.subjects));
  for (double& f : factor) f = normal(rng);
  for (int i = 0; i < data.genes; ++i) {
    for (int j = 0; j < data.subjects; ++j) {
      data.values[static_cast<std::size_t>(i) * data.subjects + j] =
          std::sqrt(0.5) * data.values[static_cast<std::size_t>(i) * data.subjects + j] +
          std::sqrt(0.5) * factor[j];
    }
  }
  EXPECT_NEAR(mean_pairwise_correlation(data, 100'000, 3).mean, 0.5, 0.2);
}

}  // namespace
}  // namespace kfwer
