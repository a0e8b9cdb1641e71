#include "kddfs/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "kddfs/csv.hpp"
#include "kddfs/report.hpp"

namespace kddfs {

namespace {

// A path that does not exist as given is retried under $KDDFS_DATA_DIR.
std::string resolve_data_path(const std::string& path) {
  namespace fs = std::filesystem;
  if (path.empty() || fs::exists(path)) return path;
  if (const char* dir = std::getenv("KDDFS_DATA_DIR")) {
    const fs::path candidate = fs::path(dir) / path;
    if (fs::exists(candidate)) return candidate.string();
  }
  return path;
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// flags shared by the data-consuming subcommands
struct DataOpts {
  std::string train_path;
  std::string test_path;
  double split_fraction = 0.0;  // 0: no random split
  size_t sample_size = 0;       // 0: all rows
  uint64_t seed = 1;
  bool permissive = false;
  std::string fallback = "normal";
  std::string category_map_path;
  bool normalize = false;
  int threads = 1;
};

void add_data_flags(CLI::App* cmd, DataOpts& opts, bool with_test) {
  cmd->add_option("--train", opts.train_path, "Training data file (KDD CSV)")
      ->required();
  if (with_test) {
    cmd->add_option("--test", opts.test_path, "Test data file (KDD CSV)");
    cmd->add_option("--split", opts.split_fraction,
                    "Random train fraction in (0,1) instead of --test");
  }
  cmd->add_option("--sample", opts.sample_size,
                  "Sample this many training records before anything else");
  cmd->add_option("--seed", opts.seed, "Seed for all randomness")
      ->default_val(uint64_t{1});
  cmd->add_flag("--permissive", opts.permissive,
                "Map unknown attack labels to --fallback instead of failing");
  cmd->add_option("--fallback", opts.fallback,
                  "Category for unknown labels in permissive mode")
      ->default_val("normal");
  cmd->add_option("--category-map", opts.category_map_path,
                  "Extension table: one 'attack_name,category' per line");
  cmd->add_flag("--normalize", opts.normalize,
                "Min-max scale features using training statistics");
  cmd->add_option("--threads", opts.threads, "Worker thread cap")
      ->default_val(1);
}

ParseOptions parse_options_from(const DataOpts& opts) {
  ParseOptions po;
  po.labels.strict = !opts.permissive;
  if (const auto cat = category_from_name(opts.fallback))
    po.labels.fallback = *cat;
  else
    throw UsageError("unknown fallback category '" + opts.fallback + "'");
  if (!opts.category_map_path.empty())
    po.labels.extensions =
        load_category_extensions(resolve_data_path(opts.category_map_path));
  return po;
}

// Detects the canonical encoded format by its header.
bool looks_canonical(const std::string& path) {
  std::ifstream in(path);
  std::string first;
  if (!in || !std::getline(in, first)) return false;
  return first.find(":C,") != std::string::npos ||
         first.find(":D,") != std::string::npos ||
         first.rfind(":C", first.size() - 2) != std::string::npos;
}

Dataset load_one(const std::string& path, CategoryDictionary& dict,
                 const ParseOptions& po) {
  const std::string resolved = resolve_data_path(path);
  if (looks_canonical(resolved)) return parse_canonical_file(resolved, po);
  auto [ds, d] =
      parse_kdd_file(resolved, FeatureSchema::kdd41(), std::move(dict), po);
  dict = std::move(d);
  return std::move(ds);
}

struct LoadedData {
  Dataset train;
  std::optional<Dataset> test;
};

LoadedData load_data(const DataOpts& opts, bool need_test) {
  if (!opts.test_path.empty() && opts.split_fraction > 0.0)
    throw UsageError("--test and --split are mutually exclusive");
  const ParseOptions po = parse_options_from(opts);

  CategoryDictionary dict;
  LoadedData data;
  data.train = load_one(opts.train_path, dict, po);
  if (!opts.test_path.empty()) {
    data.test = load_one(opts.test_path, dict, po);
  } else if (opts.split_fraction > 0.0) {
    SplitSpec spec;
    spec.train_fraction = opts.split_fraction;
    spec.seed = opts.seed;
    auto [tr, te] = split(data.train, spec);
    data.train = std::move(tr);
    data.test = std::move(te);
  }
  if (need_test && !data.test)
    throw UsageError("this command needs --test or --split");

  if (opts.sample_size > 0)
    data.train = sample(data.train, opts.sample_size, opts.seed);

  if (opts.normalize) {
    const std::vector<MinMax> stats = min_max_stats(data.train);
    data.train = apply_min_max(data.train, stats);
    if (data.test) data.test = apply_min_max(*data.test, stats);
  }
  return data;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

struct GainFlags {
  DataOpts data;
  int bins = 10;
  std::string method = "equal-frequency";
  std::string out_path;
  std::string json_path;
};

DiscretizationSpec disc_from(int bins, const std::string& method) {
  DiscretizationSpec spec;
  spec.bins = bins;
  if (method == "equal-frequency")
    spec.method = BinningMethod::EqualFrequency;
  else if (method == "equal-width")
    spec.method = BinningMethod::EqualWidth;
  else
    throw UsageError("unknown binning method '" + method + "'");
  return spec;
}

int cmd_gain(const GainFlags& f) {
  const LoadedData data = load_data(f.data, false);
  const GainTable gains = build_gain_table(
      data.train, disc_from(f.bins, f.method), f.data.threads);
  std::ostringstream out;
  emit_gain_report(gains, out);
  write_output(f.out_path, out.str());
  if (!f.json_path.empty())
    write_output(f.json_path, gains_to_json(gains).dump(2) + "\n");
  return 0;
}

struct SelectFlags {
  DataOpts data;
  int bins = 10;
  std::string method = "equal-frequency";
  int k = 10;
  std::string metric = "euclidean";
  bool weighted = false;
  std::string eval_mode = "holdout";
  double holdout = 0.3;
  double epsilon = 0.0;
  int max_features = 0;
  int patience = 0;
  bool ascending = false;
  std::string out_path;
  std::string trace_path;
  std::string log_path;
};

KnnConfig knn_from(int k, const std::string& metric, bool weighted) {
  KnnConfig cfg;
  cfg.k = k;
  if (metric == "euclidean")
    cfg.metric = DistanceMetric::Euclidean;
  else if (metric == "manhattan")
    cfg.metric = DistanceMetric::Manhattan;
  else
    throw UsageError("unknown metric '" + metric + "'");
  cfg.weighting =
      weighted ? VoteWeighting::InverseDistance : VoteWeighting::Uniform;
  return cfg;
}

WrapperConfig wrapper_from(const SelectFlags& f) {
  WrapperConfig cfg;
  cfg.knn = knn_from(f.k, f.metric, f.weighted);
  if (f.eval_mode == "holdout")
    cfg.eval_mode = WrapperEvalMode::Holdout;
  else if (f.eval_mode == "test")
    cfg.eval_mode = WrapperEvalMode::ProvidedTest;
  else
    throw UsageError("unknown eval mode '" + f.eval_mode + "'");
  cfg.holdout_fraction = f.holdout;
  cfg.holdout_seed = f.data.seed;
  cfg.epsilon = f.epsilon;
  cfg.max_features = f.max_features;
  cfg.patience = f.patience;
  cfg.order = f.ascending ? GainOrder::Ascending : GainOrder::Descending;
  cfg.threads = f.data.threads;
  return cfg;
}

int cmd_select(const SelectFlags& f) {
  const WrapperConfig wcfg = wrapper_from(f);
  const bool needs_test = wcfg.eval_mode == WrapperEvalMode::ProvidedTest;
  const LoadedData data = load_data(f.data, needs_test);

  const GainTable gains = build_gain_table(
      data.train, disc_from(f.bins, f.method), f.data.threads);
  SelectionTrace trace;
  if (needs_test)
    trace = select_features(data.train, *data.test, gains, wcfg);
  else
    trace = select_features(data.train, gains, wcfg);

  for (const std::string& w : trace.warnings)
    std::cerr << "warning: " << w << '\n';
  write_output(f.out_path, trace.final_subset.to_string() + "\n");
  if (!f.trace_path.empty())
    write_output(f.trace_path, trace_to_json(trace).dump(2) + "\n");
  if (!f.log_path.empty()) {
    std::ostringstream log;
    write_trace_log(trace, log);
    write_output(f.log_path, log.str());
  }
  return 0;
}

struct EvalFlags {
  DataOpts data;
  std::string features;
  int k = 10;
  std::string metric = "euclidean";
  bool weighted = false;
  bool timings = false;
  std::string out_path;
  std::string csv_path;
};

int cmd_eval(const EvalFlags& f) {
  const LoadedData data = load_data(f.data, true);
  const FeatureSubset subset =
      f.features.empty() ? FeatureSubset::all(data.train.schema())
                         : FeatureSubset::parse(f.features);
  const EvaluationReport report =
      evaluate(data.train, *data.test, subset,
               knn_from(f.k, f.metric, f.weighted), f.data.threads);
  write_output(f.out_path, report_to_json(report, f.timings).dump(2) + "\n");
  if (!f.csv_path.empty()) {
    std::ostringstream csv;
    report_to_csv(report, csv);
    write_output(f.csv_path, csv.str());
  }
  std::cerr << "accuracy " << report.positives << "/" << report.total << " = "
            << report.accuracy << " in " << report.elapsed_seconds << "s\n";
  return 0;
}

struct ExperimentFlags {
  SelectFlags select;  // shares binning/knn/wrapper knobs
  std::string sizes = "1000,10000,50000,100000,150000,250000";
  std::string seeds = "1";
  bool timings = false;
  std::string out_path;
  std::string csv_path;
  std::string plot_path;
};

template <typename T>
std::vector<T> parse_number_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    size_t used = 0;
    const unsigned long long v = std::stoull(tok, &used);
    if (used != tok.size())
      throw UsageError("bad number '" + tok + "' in list");
    out.push_back(static_cast<T>(v));
  }
  if (out.empty()) throw UsageError("empty number list");
  return out;
}

int cmd_experiment(const ExperimentFlags& f) {
  const WrapperConfig wcfg = wrapper_from(f.select);
  const LoadedData data = load_data(f.select.data, true);

  ExperimentPlan plan;
  plan.sizes = parse_number_list<size_t>(f.sizes);
  plan.seeds = parse_number_list<uint64_t>(f.seeds);
  plan.discretization = disc_from(f.select.bins, f.select.method);
  plan.knn = wcfg.knn;
  plan.wrapper = wcfg;

  const ExperimentDocument doc =
      run_experiment(plan, data.train, *data.test, f.select.data.threads);
  for (const ExperimentCell& c : doc.cells)
    if (!c.ok)
      std::cerr << "cell size=" << c.size << " seed=" << c.seed
                << " failed: " << c.error << '\n';

  write_output(f.out_path, document_to_json(doc, f.timings).dump(2) + "\n");
  if (!f.csv_path.empty()) {
    std::ostringstream csv;
    emit_comparison(doc, csv);
    write_output(f.csv_path, csv.str());
  }
  if (!f.plot_path.empty()) {
    std::ostringstream plot;
    emit_plot_data(doc, plot);
    write_output(f.plot_path, plot.str());
  }
  return 0;
}

struct SynthFlags {
  size_t rows = 1000;
  int informative = 3;
  int noise = 7;
  std::string proportions;
  double separation = 1.0;
  uint64_t seed = 1;
  bool kdd_names = false;
  std::string out_path;
};

int cmd_synth(const SynthFlags& f) {
  SyntheticSpec spec;
  spec.rows = f.rows;
  spec.informative_features = f.informative;
  spec.noise_features = f.noise;
  spec.separation = f.separation;
  spec.seed = f.seed;
  spec.kdd_names = f.kdd_names;
  if (!f.proportions.empty()) {
    std::stringstream ss(f.proportions);
    std::string tok;
    size_t i = 0;
    while (std::getline(ss, tok, ',')) {
      if (i >= spec.class_proportions.size())
        throw UsageError("expected 5 class proportions");
      spec.class_proportions[i++] = csv::parse_double(tok);
    }
    if (i != spec.class_proportions.size())
      throw UsageError("expected 5 class proportions");
  }
  const Dataset ds = generate_synthetic(spec);
  std::ostringstream out;
  write_canonical(ds, out);
  write_output(f.out_path, out.str());
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{
      "kddfs: information-gain + KNN ensemble feature selection for "
      "KDD-99-style connection records"};
  app.require_subcommand(1);

  GainFlags gain;
  CLI::App* gain_cmd = app.add_subcommand(
      "gain", "Rank features by information gain (filter phase)");
  add_data_flags(gain_cmd, gain.data, false);
  gain_cmd->add_option("--bins", gain.bins, "Bins for continuous features")
      ->default_val(10);
  gain_cmd
      ->add_option("--method", gain.method,
                   "Binning: equal-frequency or equal-width")
      ->default_val("equal-frequency");
  gain_cmd->add_option("--out", gain.out_path,
                       "Gain table CSV (default stdout)");
  gain_cmd->add_option("--json", gain.json_path, "Gain table JSON");

  SelectFlags select;
  CLI::App* select_cmd = app.add_subcommand(
      "select", "Gain-ordered forward selection (wrapper phase)");
  add_data_flags(select_cmd, select.data, true);
  select_cmd->add_option("--bins", select.bins, "Bins for continuous features")
      ->default_val(10);
  select_cmd
      ->add_option("--method", select.method,
                   "Binning: equal-frequency or equal-width")
      ->default_val("equal-frequency");
  select_cmd->add_option("--k", select.k, "Neighbors to vote")->default_val(10);
  select_cmd
      ->add_option("--metric", select.metric, "euclidean or manhattan")
      ->default_val("euclidean");
  select_cmd->add_flag("--weighted", select.weighted,
                       "Inverse-distance neighbor weighting");
  select_cmd
      ->add_option("--eval-mode", select.eval_mode,
                   "Wrapper accuracy on: holdout or test")
      ->default_val("holdout");
  select_cmd
      ->add_option("--holdout", select.holdout,
                   "Holdout fraction of the training set")
      ->default_val(0.3);
  select_cmd
      ->add_option("--epsilon", select.epsilon,
                   "Minimum accuracy improvement to accept a feature")
      ->default_val(0.0);
  select_cmd->add_option("--max-features", select.max_features,
                         "Stop after this many selected features (0: all)");
  select_cmd->add_option("--patience", select.patience,
                         "Stop after this many consecutive rejections (0: "
                         "try every feature)");
  select_cmd->add_flag(
      "--ascending", select.ascending,
      "Walk the ranking lowest gain first (literal pseudocode order)");
  select_cmd->add_option("--out", select.out_path,
                         "Selected subset list (default stdout)");
  select_cmd->add_option("--trace", select.trace_path, "Selection trace JSON");
  select_cmd->add_option("--log", select.log_path,
                         "Human-readable step log");

  EvalFlags eval_flags;
  CLI::App* eval_cmd = app.add_subcommand(
      "eval", "KNN accuracy and confusion matrix on a test set");
  add_data_flags(eval_cmd, eval_flags.data, true);
  eval_cmd->add_option("--features", eval_flags.features,
                       "Feature subset, e.g. 5,12,21,22 (default: all)");
  eval_cmd->add_option("--k", eval_flags.k, "Neighbors to vote")
      ->default_val(10);
  eval_cmd
      ->add_option("--metric", eval_flags.metric, "euclidean or manhattan")
      ->default_val("euclidean");
  eval_cmd->add_flag("--weighted", eval_flags.weighted,
                     "Inverse-distance neighbor weighting");
  eval_cmd->add_flag("--timings", eval_flags.timings,
                     "Include wall time in the JSON report (not "
                     "run-to-run reproducible)");
  eval_cmd->add_option("--out", eval_flags.out_path,
                       "Report JSON (default stdout)");
  eval_cmd->add_option("--csv", eval_flags.csv_path, "One-line CSV report");

  ExperimentFlags exp;
  CLI::App* exp_cmd = app.add_subcommand(
      "experiment", "Size sweep: sample, rank, select, compare per cell");
  add_data_flags(exp_cmd, exp.select.data, true);
  exp_cmd->add_option("--sizes", exp.sizes, "Sample sizes, comma separated")
      ->default_val("1000,10000,50000,100000,150000,250000");
  exp_cmd->add_option("--seeds", exp.seeds, "Seeds, comma separated")
      ->default_val("1");
  exp_cmd->add_option("--bins", exp.select.bins, "Bins for continuous "
                      "features")
      ->default_val(10);
  exp_cmd
      ->add_option("--method", exp.select.method,
                   "Binning: equal-frequency or equal-width")
      ->default_val("equal-frequency");
  exp_cmd->add_option("--k", exp.select.k, "Neighbors to vote")
      ->default_val(10);
  exp_cmd
      ->add_option("--metric", exp.select.metric, "euclidean or manhattan")
      ->default_val("euclidean");
  exp_cmd->add_flag("--weighted", exp.select.weighted,
                    "Inverse-distance neighbor weighting");
  exp_cmd
      ->add_option("--eval-mode", exp.select.eval_mode,
                   "Wrapper accuracy on: holdout or test")
      ->default_val("holdout");
  exp_cmd
      ->add_option("--holdout", exp.select.holdout,
                   "Holdout fraction of each sampled training set")
      ->default_val(0.3);
  exp_cmd
      ->add_option("--epsilon", exp.select.epsilon,
                   "Minimum accuracy improvement to accept a feature")
      ->default_val(0.0);
  exp_cmd->add_option("--max-features", exp.select.max_features,
                      "Stop after this many selected features (0: all)");
  exp_cmd->add_option("--patience", exp.select.patience,
                      "Stop after this many consecutive rejections");
  exp_cmd->add_flag("--ascending", exp.select.ascending,
                    "Walk the ranking lowest gain first");
  exp_cmd->add_flag("--timings", exp.timings,
                    "Include wall times in the document (not run-to-run "
                    "reproducible)");
  exp_cmd->add_option("--out", exp.out_path,
                      "Experiment document JSON (default stdout)");
  exp_cmd->add_option("--csv", exp.csv_path, "Comparison table CSV");
  exp_cmd->add_option("--plot", exp.plot_path,
                      "Plot data: 'size acc_full acc_selected' lines");

  SynthFlags synth;
  CLI::App* synth_cmd = app.add_subcommand(
      "synth", "Generate a deterministic synthetic dataset");
  synth_cmd->add_option("--rows", synth.rows, "Record count")->required();
  synth_cmd->add_option("--informative", synth.informative,
                        "Label-dependent feature count")
      ->default_val(3);
  synth_cmd->add_option("--noise", synth.noise,
                        "Label-independent feature count")
      ->default_val(7);
  synth_cmd->add_option("--proportions", synth.proportions,
                        "Five class proportions, comma separated");
  synth_cmd
      ->add_option("--separation", synth.separation,
                   "Distance between class-conditional means")
      ->default_val(1.0);
  synth_cmd->add_option("--seed", synth.seed, "Generator seed")
      ->default_val(uint64_t{1});
  synth_cmd->add_flag("--kdd-names", synth.kdd_names,
                      "Use the 41-feature schema (needs 41 features)");
  synth_cmd->add_option("--out", synth.out_path,
                        "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gain_cmd->parsed()) return cmd_gain(gain);
    if (select_cmd->parsed()) return cmd_select(select);
    if (eval_cmd->parsed()) return cmd_eval(eval_flags);
    if (exp_cmd->parsed()) return cmd_experiment(exp);
    if (synth_cmd->parsed()) return cmd_synth(synth);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace kddfs
