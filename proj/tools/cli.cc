#include "cli.h"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "document.h"
#include "kfwer/bounds.h"
#include "kfwer/event_inequalities.h"
#include "kfwer/genomics.h"
#include "kfwer/mc_sim.h"
#include "kfwer/parallel.h"
#include "kfwer/version.h"

namespace kfwer::cli {
namespace {

// Raised for bad user input that CLI11 cannot see (file contents, flag
// combinations); reported like a parse error.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad content in an input dataset; reported as a runtime failure.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string format = "json";
  unsigned threads = 0;
};

// Shortest text that parses back to the same double.
std::string exact(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

class Run {
 public:
  Run(std::string subcommand, const Common& common) : subcommand_(std::move(subcommand)) {
    doc_.manifest["tool"] = "kfwer";
    doc_.manifest["version"] = KFWER_VERSION_STRING;
    doc_.manifest["subcommand"] = subcommand_;
    doc_.manifest["params"] = Json::object();
    doc_.manifest["seed"] = nullptr;
    doc_.manifest["timestamp"] = manifest_timestamp();
    format_ = parse_output_format(common.format);
    param("format", common.format);
  }

  void param(const std::string& flag, const std::string& value) {
    doc_.manifest["params"][flag] = value;
    command_ += " --" + flag + " " + value;
  }
  void param(const std::string& flag, double value) {
    doc_.manifest["params"][flag] = value;
    command_ += " --" + flag + " " + exact(value);
  }
  void param(const std::string& flag, long long value) {
    doc_.manifest["params"][flag] = value;
    command_ += " --" + flag + " " + std::to_string(value);
  }
  void param(const std::string& flag, bool value) {
    doc_.manifest["params"][flag] = value;
    if (value) command_ += " --" + flag;
  }
  void seed(std::uint64_t s) {
    doc_.manifest["seed"] = s;
    param("seed", static_cast<long long>(s));
  }

  Document& doc() { return doc_; }

  int emit(std::ostream& out) {
    doc_.manifest["command"] = "kfwer " + subcommand_ + command_;
    render(doc_, format_, out);
    return kOk;
  }

 private:
  std::string subcommand_;
  std::string command_;
  OutputFormat format_ = OutputFormat::json;
  Document doc_;
};

Json optional_number(const std::optional<double>& v) { return v ? number(*v) : Json(nullptr); }

std::vector<std::vector<double>> read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    for (char& c : line) {
      if (c == ',' || c == ';' || c == '\t') c = ' ';
    }
    std::istringstream cells(line);
    auto& row = rows.emplace_back();
    std::string cell;
    while (cells >> cell) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw UsageError("matrix file line " + std::to_string(line_no) + ": '" + cell +
                         "' is not a number");
      }
    }
  }
  return rows;
}

EventMoments read_moments(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open moments file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError("moments file is not valid JSON: " + std::string(e.what()));
  }
  EventMoments mom;
  try {
    mom.n = j.at("n").get<int>();
    mom.k = j.at("k").get<int>();
    mom.s = j.at("S").get<std::vector<double>>();
    mom.s_prime = j.value("Sprime", std::vector<double>{});
    mom.max_inter = j.value("maxInter", std::vector<double>{});
  } catch (const Json::exception& e) {
    throw UsageError("moments file: " + std::string(e.what()) +
                     " (expected keys n, k, S, Sprime, maxInter)");
  }
  if (mom.k < 1 || mom.k > mom.n) throw UsageError("moments file: k must satisfy 1 <= k <= n");
  if (static_cast<int>(mom.s.size()) < mom.k) {
    throw UsageError("moments file: S needs entries for m = 1.." + std::to_string(mom.k));
  }
  mom.validate();
  return mom;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  std::string hex;
  char byte[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(byte, sizeof byte, "%02x", digest[i]);
    hex += byte;
  }
  return hex;
}

// ---------------------------------------------------------------- bounds

struct BoundsArgs {
  int n = 0;
  int k = 0;
  double alpha = 0.05;
  double rho = 0.0;
  std::string matrix;
  std::string pairs = "all";
};

int run_bounds(const BoundsArgs& a, const Common& common, std::ostream& out) {
  Run run("bounds", common);
  const TestConfig config = TestConfig::make(a.n, a.k, a.alpha);
  if (config.k < 2) throw UsageError("bounds: k must be >= 2 (k = 1 is the Bonferroni case)");
  run.param("n", static_cast<long long>(a.n));
  run.param("k", static_cast<long long>(a.k));
  run.param("alpha", a.alpha);
  run.param("pairs", a.pairs);

  CorrelationModel model = Equicorrelated{a.rho};
  if (!a.matrix.empty()) {
    model = CorrelationMatrix::from_rows(read_matrix(a.matrix));
    run.param("matrix", a.matrix);
  } else {
    run.param("rho", a.rho);
  }
  const PairSum pairs = a.pairs == "all" ? PairSum::all_pairs : PairSum::excluding_last;
  const BoundReport rep = bound_report(config, model, pairs);

  Json& r = run.doc().result;
  r["n"] = a.n;
  r["k"] = a.k;
  r["alpha"] = number(a.alpha);
  r["model"] = a.matrix.empty() ? "equicorrelated" : "matrix";
  r["rho"] = optional_number(rep.rho);
  r["pair_sum"] = a.pairs;
  r["cutoff"] = number(rep.cutoff);
  r["f_value"] = number(rep.f_value);
  r["g_value"] = number(rep.g_value);
  r["existing_bound"] = number(rep.existing);
  r["bound_A"] = rep.a ? number(rep.a->value) : Json(nullptr);
  r["bound_A_argmin"] = rep.a ? Json(rep.a->argmin) : Json(nullptr);
  r["bound_B"] = rep.b ? number(rep.b->value) : Json(nullptr);
  r["bound_B_argmin"] = rep.b ? Json(rep.b->argmin) : Json(nullptr);
  r["proposed_bound"] = number(rep.proposed);
  r["m_star"] = rep.m_star ? Json(*rep.m_star) : Json(nullptr);
  r["alpha_star_fg"] = number(rep.alpha_star_fg);
  r["alpha_star_independent"] = optional_number(rep.alpha_star_indep);
  r["alpha_star_negdep"] = number(rep.alpha_star_negdep);
  r["alpha_star_chernoff"] = number(rep.alpha_star_chernoff);
  r["hoeffding_bound"] = number(rep.hoeffding);
  r["nearly_independent_bound"] = number(rep.nearly_indep);

  Document& doc = run.doc();
  doc.title = "k-FWER bounds";
  doc.columns = {"quantity", "value"};
  for (const auto& [key, value] : r.items()) doc.rows.push_back({key, value});
  return run.emit(out);
}

// ---------------------------------------------------------------- ineq

int run_ineq(const std::string& path, const Common& common, std::ostream& out) {
  Run run("ineq", common);
  run.param("moments", path);
  const EventMoments mom = read_moments(path);

  const auto b_terms = bound_b_terms(mom);
  std::vector<double> a_terms;
  std::optional<BoundTerm> a;
  if (mom.k >= 2) {
    a_terms = bound_a_terms(mom);
    a = bound_A(mom);
  }
  const BoundTerm b = bound_B(mom);
  const double combined = std::clamp(std::min(a ? a->value : b.value, b.value), 0.0, 1.0);

  Json& r = run.doc().result;
  r["n"] = mom.n;
  r["k"] = mom.k;
  r["bound_A"] = a ? number(a->value) : Json(nullptr);
  r["bound_A_argmin"] = a ? Json(a->argmin) : Json(nullptr);
  r["bound_B"] = number(b.value);
  r["bound_B_argmin"] = b.argmin;
  r["combined_bound"] = number(combined);
  Json terms = Json::array();
  Document& doc = run.doc();
  doc.title = "At-least-k event bounds";
  doc.columns = {"m", "A_term", "B_term"};
  for (int m = 1; m <= mom.k; ++m) {
    const Json at = m >= 2 ? number(a_terms[m - 2]) : Json(nullptr);
    const Json bt = number(b_terms[m - 1]);
    terms.push_back({{"m", m}, {"A_term", at}, {"B_term", bt}});
    doc.rows.push_back({m, at, bt});
  }
  r["terms"] = terms;
  doc.rows.push_back({"min", r["bound_A"], r["bound_B"]});
  doc.rows.push_back({"combined", r["combined_bound"], nullptr});
  return run.emit(out);
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  int n = 0;
  int k = 0;
  double alpha = 0.05;
  double rho = 0.0;
  std::uint64_t reps = 10000;
  std::uint64_t seed = 1;
  std::string cutoff_mode = "lr";
};

int run_simulate(const SimulateArgs& a, const Common& common, std::ostream& out) {
  Run run("simulate", common);
  const TestConfig config = TestConfig::make(a.n, a.k, a.alpha);
  const CutoffMode mode = parse_cutoff_mode(a.cutoff_mode);
  if (mode == CutoffMode::modified && config.k < 2) {
    throw UsageError("simulate: --cutoff-mode modified needs k >= 2");
  }
  run.param("n", static_cast<long long>(a.n));
  run.param("k", static_cast<long long>(a.k));
  run.param("alpha", a.alpha);
  run.param("rho", a.rho);
  run.param("reps", static_cast<long long>(a.reps));
  run.param("cutoff-mode", a.cutoff_mode);
  run.seed(a.seed);

  const double level =
      mode == CutoffMode::lr ? a.alpha : alpha_star_fg(config, Equicorrelated{a.rho});
  const double cutoff = cutoff_at(a.n, a.k, level);
  const SimSpec spec{config, a.rho, cutoff, a.reps, a.seed};
  const SimResult res = estimate_kfwer(spec, common.threads);

  Json& r = run.doc().result;
  r["n"] = a.n;
  r["k"] = a.k;
  r["alpha"] = number(a.alpha);
  r["rho"] = number(a.rho);
  r["cutoff_mode"] = a.cutoff_mode;
  r["level"] = number(level);
  r["cutoff"] = number(cutoff);
  r["reps"] = res.reps;
  r["hits"] = res.hits;
  r["estimate"] = number(res.estimate);
  r["std_error"] = number(res.std_error);
  Json hist = Json::object();
  for (std::size_t j = 0; j < res.exceed_histogram.size(); ++j) {
    if (res.exceed_histogram[j]) hist[std::to_string(j)] = res.exceed_histogram[j];
  }

  Document& doc = run.doc();
  doc.title = "Simulated k-FWER";
  doc.columns = {"quantity", "value"};
  for (const auto& [key, value] : r.items()) doc.rows.push_back({key, value});
  for (const auto& [key, value] : hist.items()) doc.rows.push_back({"exceedances=" + key, value});
  r["exceedance_histogram"] = hist;
  return run.emit(out);
}

// ---------------------------------------------------------------- table1

struct Table1Args {
  double alpha = 0.05;
  std::uint64_t reps = 10000;
  std::uint64_t seed = 1;
  std::string cutoff_mode = "lr";
  bool verbose = false;
};

Json table_cells(const Table1& t) {
  Json cells = Json::array();
  for (const auto& c : t.cells) {
    cells.push_back({{"k", c.k},
                     {"rho", number(c.rho)},
                     {"level", number(c.alpha_star)},
                     {"cutoff", number(c.cutoff)},
                     {"estimate", number(c.sim.estimate)},
                     {"std_error", number(c.sim.std_error)},
                     {"hits", c.sim.hits},
                     {"existing_bound", number(c.existing)},
                     {"proposed_bound", number(c.proposed)}});
  }
  return cells;
}

int run_table1(const Table1Args& a, const Common& common, std::ostream& out) {
  Run run("table1", common);
  if (!(a.alpha > 0.0 && a.alpha < 1.0)) throw UsageError("table1: alpha must lie in (0, 1)");
  if (a.reps < 100) throw UsageError("table1: reps must be >= 100");
  const CutoffMode mode = parse_cutoff_mode(a.cutoff_mode);
  run.param("alpha", a.alpha);
  run.param("reps", static_cast<long long>(a.reps));
  run.param("cutoff-mode", a.cutoff_mode);
  run.param("verbose", a.verbose);
  run.seed(a.seed);

  const Table1 main = table1_run(a.alpha, a.reps, a.seed, mode, common.threads);
  std::optional<Table1> alt;
  if (a.verbose) {
    const CutoffMode other = mode == CutoffMode::lr ? CutoffMode::modified : CutoffMode::lr;
    alt = table1_run(a.alpha, a.reps, a.seed, other, common.threads);
  }

  Json& r = run.doc().result;
  r["n"] = main.n;
  r["alpha"] = number(a.alpha);
  r["reps"] = a.reps;
  r["cutoff_mode"] = a.cutoff_mode;
  r["cells"] = table_cells(main);
  if (alt) {
    r["alternate"] = {{"cutoff_mode", std::string(to_string(alt->mode))},
                      {"cells", table_cells(*alt)}};
  }

  Document& doc = run.doc();
  doc.title = "Estimates of k-FWER (n = 1000, alpha = " + exact(a.alpha) + ")";
  doc.columns = {"k", "row"};
  for (double rho : main.rhos) doc.columns.push_back("rho=" + exact(rho));
  for (int k : main.ks) {
    auto add_row = [&](const std::string& label, auto field, const Table1& t) {
      std::vector<Json> row = {k, label};
      for (double rho : t.rhos) row.push_back(field(t.cell(k, rho)));
      doc.rows.push_back(std::move(row));
    };
    const std::string tag = std::string(to_string(main.mode));
    add_row("estimate_" + tag, [](const Table1Cell& c) { return number(c.sim.estimate); }, main);
    add_row("std_error_" + tag, [](const Table1Cell& c) { return number(c.sim.std_error); }, main);
    if (alt) {
      const std::string alt_tag = std::string(to_string(alt->mode));
      add_row("estimate_" + alt_tag, [](const Table1Cell& c) { return number(c.sim.estimate); },
              *alt);
      add_row("std_error_" + alt_tag,
              [](const Table1Cell& c) { return number(c.sim.std_error); }, *alt);
    }
    add_row("existing_bound", [](const Table1Cell& c) { return number(c.existing); }, main);
    add_row("proposed_bound", [](const Table1Cell& c) { return number(c.proposed); }, main);
  }
  return run.emit(out);
}

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
  std::string data;
  std::string input_format;
  std::optional<int> n1;
  std::optional<int> n2;
  std::vector<int> ks = {2, 10, 20, 40, 60};
  double alpha = 0.05;
  double rho = 0.0;
  std::uint64_t corr_pairs = 100000;
  std::uint64_t seed = 1;
  std::string expect_sha256;
};

int run_analyze(const AnalyzeArgs& a, const Common& common, std::ostream& out) {
  Run run("analyze", common);
  LoadOptions opts;
  opts.format = a.input_format.empty() ? format_from_extension(a.data)
                                       : parse_table_format(a.input_format);
  opts.n1 = a.n1;
  opts.n2 = a.n2;
  if (!(a.alpha > 0.0 && a.alpha < 1.0)) throw UsageError("analyze: alpha must lie in (0, 1)");
  if (!(a.rho >= 0.0 && a.rho < 1.0)) throw UsageError("analyze: rho must lie in [0, 1)");

  const std::string digest = sha256_file(a.data);
  if (!a.expect_sha256.empty() && a.expect_sha256 != digest) {
    throw UsageError("analyze: " + a.data + " has SHA-256 " + digest + ", expected " +
                     a.expect_sha256);
  }
  ExpressionDataset data;
  TestStatistics stats;
  try {
    data = load_expression_matrix(a.data, opts);
    stats = t_to_z(two_sample_t(data));
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  for (int k : a.ks) {
    if (k < 1 || k > data.genes) {
      throw UsageError("analyze: every k must satisfy 1 <= k <= " + std::to_string(data.genes));
    }
  }

  run.param("data", a.data);
  run.param("input-format", std::string(opts.format == TableFormat::csv ? "csv" : "tsv"));
  run.param("n1", static_cast<long long>(data.n1));
  run.param("n2", static_cast<long long>(data.n2));
  std::string klist;
  for (int k : a.ks) klist += (klist.empty() ? "" : ",") + std::to_string(k);
  run.param("k-list", klist);
  run.param("alpha", a.alpha);
  run.param("rho", a.rho);
  run.param("corr-pairs", static_cast<long long>(a.corr_pairs));
  run.seed(a.seed);
  run.doc().manifest["data_sha256"] = digest;

  const CorrelationSummary corr = mean_pairwise_correlation(data, a.corr_pairs, a.seed);
  const RejectionTable table = run_procedures(stats.z, a.ks, a.alpha, a.rho);

  Json& r = run.doc().result;
  r["genes"] = data.genes;
  r["subjects"] = data.subjects;
  r["n1"] = data.n1;
  r["n2"] = data.n2;
  r["df"] = stats.df;
  r["saturated_z"] = stats.saturated.size();
  r["alpha"] = number(a.alpha);
  r["rho"] = number(a.rho);
  r["pairwise_correlation"] = {{"mean", number(corr.mean)},
                               {"mean_abs", number(corr.mean_abs)},
                               {"pairs", corr.pairs}};
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    rows.push_back({{"k", row.k},
                    {"alpha_star_fg", number(row.alpha_star_fg)},
                    {"alpha_star_negdep", number(row.alpha_star_negdep)},
                    {"cutoff_lr", number(row.cutoff_lr)},
                    {"cutoff_fg", number(row.cutoff_fg)},
                    {"cutoff_proposed", number(row.cutoff_proposed)},
                    {"lehmann_romano", row.lr},
                    {"min_fg", row.fg},
                    {"proposed", row.proposed}});
  }
  r["rejections"] = rows;

  Document& doc = run.doc();
  doc.title = "Number of rejected hypotheses (" + std::to_string(data.genes) + " genes)";
  doc.columns = {"method"};
  for (int k : a.ks) doc.columns.push_back("k=" + std::to_string(k));
  for (const char* key : {"lehmann_romano", "min_fg", "proposed", "alpha_star_fg",
                          "alpha_star_negdep"}) {
    std::vector<Json> line = {key};
    for (const auto& row : rows) line.push_back(row[key]);
    doc.rows.push_back(std::move(line));
  }
  return run.emit(out);
}

CLI::App* parsed_subcommand(CLI::App& app) {
  for (CLI::App* sub : app.get_subcommands({})) {
    if (sub->parsed()) return sub;
  }
  return nullptr;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized familywise error rate bounds, simulation and analysis", "kfwer"};
  app.set_version_flag("--version", KFWER_VERSION_STRING);
  app.require_subcommand(1);

  Common common;
  app.add_option("--format", common.format, "Output format: json, csv or table")
      ->check(CLI::IsMember({"json", "csv", "table"}))
      ->capture_default_str();
  app.add_option("--threads", common.threads, "Worker threads (0: KFWER_THREADS or all cores)")
      ->capture_default_str();

  BoundsArgs bounds;
  auto* b = app.add_subcommand("bounds", "k-FWER bounds and inflated levels for one configuration");
  b->fallthrough();
  b->add_option("--n", bounds.n, "Number of hypotheses")->required();
  b->add_option("--k", bounds.k, "False-rejection threshold")->required();
  b->add_option("--alpha", bounds.alpha, "Target level")->capture_default_str();
  auto* rho_opt = b->add_option("--rho", bounds.rho, "Common correlation")->capture_default_str();
  b->add_option("--matrix", bounds.matrix, "Correlation matrix file (rows of numbers)")
      ->check(CLI::ExistingFile)
      ->excludes(rho_opt);
  b->add_option("--pairs", bounds.pairs, "Pair range of f: all, or excluding-last")
      ->transform(CLI::IsMember(std::map<std::string, std::string>{
          {"all", "all"}, {"excluding-last", "excluding-last"}}))
      ->capture_default_str();

  std::string moments;
  auto* q = app.add_subcommand("ineq", "Bounds on P(at least k events) from partial moments");
  q->fallthrough();
  q->add_option("--moments", moments, "JSON file with n, k, S, Sprime, maxInter")
      ->required()
      ->check(CLI::ExistingFile);

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Monte Carlo k-FWER under the equicorrelated null");
  s->fallthrough();
  s->add_option("--n", sim.n, "Number of hypotheses")->required();
  s->add_option("--k", sim.k, "False-rejection threshold")->required();
  s->add_option("--rho", sim.rho, "Common correlation")->capture_default_str();
  s->add_option("--alpha", sim.alpha, "Target level")->capture_default_str();
  s->add_option("--reps", sim.reps, "Replicates")->capture_default_str();
  s->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  s->add_option("--cutoff-mode", sim.cutoff_mode, "lr or modified")
      ->check(CLI::IsMember({"lr", "modified"}))
      ->capture_default_str();

  Table1Args t1;
  auto* t = app.add_subcommand("table1", "Bounds and simulated k-FWER over the reference grid");
  t->fallthrough();
  t->add_option("--alpha", t1.alpha, "Target level")->capture_default_str();
  t->add_option("--reps", t1.reps, "Replicates per cell")->capture_default_str();
  t->add_option("--seed", t1.seed, "Random seed")->capture_default_str();
  t->add_option("--cutoff-mode", t1.cutoff_mode, "lr or modified")
      ->check(CLI::IsMember({"lr", "modified"}))
      ->capture_default_str();
  t->add_flag("--verbose", t1.verbose, "Also simulate under the other cutoff mode");

  AnalyzeArgs an;
  auto* z = app.add_subcommand("analyze", "Two-group expression analysis with three procedures");
  z->fallthrough();
  z->add_option("--data", an.data, "Expression matrix, genes in rows")
      ->required()
      ->check(CLI::ExistingFile);
  z->add_option("--input-format", an.input_format, "csv or tsv (default: from extension)")
      ->check(CLI::IsMember({"csv", "tsv"}));
  z->add_option("--n1", an.n1, "Size of group 1 (leading columns)");
  z->add_option("--n2", an.n2, "Size of group 2 (trailing columns)");
  z->add_option("--k-list", an.ks, "Comma-separated thresholds")
      ->delimiter(',')
      ->capture_default_str();
  z->add_option("--alpha", an.alpha, "Target level")->capture_default_str();
  z->add_option("--rho", an.rho, "Correlation assumed by the procedures")->capture_default_str();
  z->add_option("--corr-pairs", an.corr_pairs, "Gene pairs sampled for the correlation summary")
      ->capture_default_str();
  z->add_option("--seed", an.seed, "Seed for pair sampling")->capture_default_str();
  z->add_option("--expect-sha256", an.expect_sha256, "Refuse input whose SHA-256 differs");

  auto usage = [&](const std::string& message) {
    CLI::App* sub = parsed_subcommand(app);
    err << "kfwer: " << message << "\n\n" << (sub ? sub->help() : app.help());
    return kUsageError;
  };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    return usage(e.what());
  }

  try {
    if (b->parsed()) {
      if (!bounds.matrix.empty()) bounds.rho = 0.0;
      return run_bounds(bounds, common, out);
    }
    if (q->parsed()) return run_ineq(moments, common, out);
    if (s->parsed()) return run_simulate(sim, common, out);
    if (t->parsed()) return run_table1(t1, common, out);
    if (z->parsed()) return run_analyze(an, common, out);
  } catch (const UsageError& e) {
    return usage(e.what());
  } catch (const std::invalid_argument& e) {
    return usage(e.what());
  } catch (const std::domain_error& e) {
    return usage(e.what());
  } catch (const std::exception& e) {
    err << "kfwer: error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return usage("no subcommand given");
}

}  // namespace kfwer::cli
