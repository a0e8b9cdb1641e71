// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. The real-data gate runs only when --kdd-train/--kdd-test are
// supplied; the CLI determinism gate needs --cli pointing at the built tool.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kddfs/report.hpp"
#include "kddfs/rng.hpp"
#include "oracles.hpp"

using namespace kddfs;

namespace {

struct Outcome {
  enum Kind { Pass, Fail, Skip } kind = Fail;
  std::string detail;
};

Outcome pass(std::string detail) { return {Outcome::Pass, std::move(detail)}; }
Outcome fail(std::string detail) { return {Outcome::Fail, std::move(detail)}; }
Outcome skip(std::string detail) { return {Outcome::Skip, std::move(detail)}; }

std::string g_cli_path;
std::string g_kdd_train;
std::string g_kdd_test;
std::string g_category_map;

std::filesystem::path scratch_dir() {
  static const std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() / "kddfs_acceptance";
    std::filesystem::remove_all(d);
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in),
          std::istreambuf_iterator<char>()};
}

// ---- criterion 1: information gain vs. contingency-table oracle ----------

Outcome gain_oracle_equivalence() {
  Rng rng(20240501);
  double max_err = 0.0;
  size_t checked = 0;
  for (int instance = 0; instance < 500; ++instance) {
    const size_t rows = 1 + rng.below(200);
    const int features = 1 + int(rng.below(8));
    const int n_bins = 1 + int(rng.below(6));
    const int n_classes = 1 + int(rng.below(5));
    std::vector<AttackCategory> labels(rows);
    for (auto& l : labels)
      l = static_cast<AttackCategory>(rng.below(uint64_t(n_classes)));
    for (int f = 0; f < features; ++f) {
      std::vector<int> bins(rows);
      for (int& b : bins) b = int(rng.below(uint64_t(n_bins)));
      const double got = information_gain(bins, labels);
      const double want = oracles::gain(bins, labels);
      max_err = std::max(max_err, std::abs(got - want));
      ++checked;
    }
  }
  std::ostringstream detail;
  detail << checked << " gains checked, max |err| = " << max_err;
  return max_err <= 1e-12 ? pass(detail.str()) : fail(detail.str());
}

// ---- criterion 2: analytic anchors ---------------------------------------

Outcome analytic_anchors() {
  std::vector<AttackCategory> labels;
  for (int i = 0; i < 120; ++i)
    labels.push_back(static_cast<AttackCategory>(i % 4));

  const std::vector<int> constant(labels.size(), 0);
  if (information_gain(constant, labels) != 0.0)
    return fail("constant feature gain is not exactly 0");

  std::vector<int> copy(labels.size());
  for (size_t i = 0; i < labels.size(); ++i) copy[i] = int(labels[i]);
  const double h = class_entropy(labels);
  if (std::abs(information_gain(copy, labels) - h) > 1e-12)
    return fail("label-copy feature gain differs from the class entropy");

  std::vector<AttackCategory> half(8, AttackCategory::Normal);
  half.insert(half.end(), 8, AttackCategory::Dos);
  if (class_entropy(half) != 1.0)
    return fail("50/50 two-class entropy is not exactly 1.0");

  // the same anchors through the full table build
  std::vector<FeatureDesc> descs = {
      {1, "copy", FeatureKind::Discrete},
      {2, "flat", FeatureKind::Continuous},
  };
  Dataset ds{FeatureSchema(descs)};
  for (size_t i = 0; i < labels.size(); ++i) {
    const std::vector<double> row = {double(int(labels[i])), 3.0};
    ds.append_row(row, labels[i], category_name(labels[i]));
  }
  const GainTable table = build_gain_table(ds, {});
  if (table.features[1].gain != 0.0)
    return fail("constant column gain is not exactly 0 in the gain table");
  if (std::abs(table.features[0].gain - table.class_entropy) > 1e-12)
    return fail("label-copy column does not reach the class entropy");
  return pass("constant=0 exact, label-copy=H(S) to 1e-12, H(1/2,1/2)=1 "
              "exact");
}

// ---- criterion 3: knn vs. full-sort oracle --------------------------------

Outcome knn_oracle_equivalence() {
  Rng rng(20240502);
  size_t checked = 0;
  for (int instance = 0; instance < 200; ++instance) {
    const size_t rows = 1 + rng.below(200);
    const int width = 1 + int(rng.below(41));
    std::vector<FeatureDesc> descs;
    for (int f = 0; f < width; ++f)
      descs.push_back(
          {f + 1, "f" + std::to_string(f + 1), FeatureKind::Continuous});
    Dataset train{FeatureSchema(descs)};
    std::vector<double> row(static_cast<size_t>(width));
    for (size_t r = 0; r < rows; ++r) {
      for (double& v : row) v = double(rng.below(4));  // many exact ties
      const auto cat = static_cast<AttackCategory>(rng.below(5));
      train.append_row(row, cat, category_name(cat));
    }
    std::vector<int> subset_indices(static_cast<size_t>(width));
    for (int f = 0; f < width; ++f) subset_indices[size_t(f)] = f + 1;
    const FeatureSubset subset(subset_indices);

    KnnConfig cfg;
    for (const int k : {1, 3, 5, 10}) {
      cfg.k = k;
      for (int q = 0; q < 5; ++q) {
        std::vector<double> query(static_cast<size_t>(width));
        for (double& v : query) v = double(rng.below(4));
        const AttackCategory got = predict(train, query, subset, cfg);
        const AttackCategory want =
            oracles::knn_predict(train, query, subset_indices, cfg);
        if (got != want) {
          std::ostringstream detail;
          detail << "mismatch at instance " << instance << ", k=" << k;
          return fail(detail.str());
        }
        ++checked;
      }
    }
  }
  return pass(std::to_string(checked) + " predictions match the full sort");
}

// ---- criterion 4: the five-point neighborhood flip ------------------------

Outcome figure_one_flip() {
  std::vector<FeatureDesc> descs = {{1, "x", FeatureKind::Continuous},
                                    {2, "y", FeatureKind::Continuous}};
  Dataset train{FeatureSchema(descs)};
  const auto add = [&](double x, double y, AttackCategory c) {
    const std::vector<double> row = {x, y};
    train.append_row(row, c, category_name(c));
  };
  // triangles (Dos) nearer the origin, squares (Normal) more numerous
  add(0.0, 1.0, AttackCategory::Dos);
  add(1.0, 0.0, AttackCategory::Dos);
  add(-1.5, 0.0, AttackCategory::Normal);
  add(0.0, -1.6, AttackCategory::Normal);
  add(1.2, 1.2, AttackCategory::Normal);

  const std::vector<double> query = {0.0, 0.0};
  const FeatureSubset subset({1, 2});
  KnnConfig cfg;
  cfg.k = 3;
  const AttackCategory at3 = predict(train, query, subset, cfg);
  cfg.k = 5;
  const AttackCategory at5 = predict(train, query, subset, cfg);
  if (at3 != AttackCategory::Dos) return fail("k=3 did not pick the triangles");
  if (at5 != AttackCategory::Normal) return fail("k=5 did not pick the squares");
  return pass("k=3 -> triangle class, k=5 -> square class");
}

// ---- criterion 5: wrapper monotonicity and exact replay --------------------

Outcome wrapper_monotonicity_and_replay() {
  for (uint64_t seed = 1; seed <= 50; ++seed) {
    SyntheticSpec spec;
    spec.rows = 300;
    spec.informative_features = 2;
    spec.noise_features = 4;
    spec.seed = seed;
    const Dataset ds = generate_synthetic(spec);
    const GainTable gains = build_gain_table(ds, {});

    WrapperConfig cfg;
    cfg.knn.k = 5;
    cfg.holdout_seed = seed;
    auto [fit, eval_set] = holdout_split(ds, cfg);
    const SelectionTrace trace = select_features(fit, eval_set, gains, cfg);

    double last = trace.seed_accuracy;
    for (const SelectionStep& s : trace.steps) {
      if (s.accuracy_before != last)
        return fail("seed " + std::to_string(seed) +
                    ": accuracy_before drifted from the running best");
      if (s.accepted) {
        if (!(s.accuracy_after > s.accuracy_before))
          return fail("seed " + std::to_string(seed) +
                      ": accepted step did not strictly improve");
        last = s.accuracy_after;
      }
    }

    if (evaluate(fit, eval_set, FeatureSubset({trace.seed_feature}), cfg.knn)
            .accuracy != trace.seed_accuracy)
      return fail("seed " + std::to_string(seed) +
                  ": seed accuracy replay differs");
    for (const SelectionStep& s : trace.steps) {
      FeatureSubset subset(s.subset_before);
      subset.add(s.candidate);
      if (evaluate(fit, eval_set, subset, cfg.knn).accuracy !=
          s.accuracy_after)
        return fail("seed " + std::to_string(seed) +
                    ": step replay differs for feature " +
                    std::to_string(s.candidate));
    }
  }
  return pass("50 seeded runs: accepted accuracies strictly increase, "
              "replays bit-exact");
}

// ---- criterion 6: directional comparison at desk scale --------------------

Outcome directional_synthetic() {
  int better_or_equal = 0;
  int informative_complete = 0;
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    SyntheticSpec spec;
    spec.rows = 2000;
    spec.informative_features = 3;
    spec.noise_features = 7;
    spec.seed = seed;
    const Dataset train = generate_synthetic(spec);
    spec.rows = 1000;
    spec.seed = seed + 1000;
    const Dataset test = generate_synthetic(spec);

    const GainTable gains = build_gain_table(train, {});
    WrapperConfig cfg;
    cfg.holdout_seed = seed;
    const SelectionTrace trace = select_features(train, gains, cfg);
    const ComparisonResult cmp =
        compare_full_vs_selected(train, test, trace, cfg.knn);

    if (cmp.selected.accuracy >= cmp.full.accuracy) ++better_or_equal;
    if (trace.final_subset.contains(1) && trace.final_subset.contains(2) &&
        trace.final_subset.contains(3))
      ++informative_complete;
  }
  std::ostringstream detail;
  detail << "selected >= full in " << better_or_equal
         << "/10 runs; all informative features kept in "
         << informative_complete << "/10 runs";
  return better_or_equal >= 8 && informative_complete >= 8
             ? pass(detail.str())
             : fail(detail.str());
}

// ---- criterion 7: real-data gate ------------------------------------------

Outcome real_data_gate() {
  if (g_kdd_train.empty() || g_kdd_test.empty())
    return skip("supply --kdd-train and --kdd-test to run");

  ParseOptions opts;
  opts.labels.strict = false;
  if (!g_category_map.empty())
    opts.labels.extensions = load_category_extensions(g_category_map);

  const TrainTest loaded =
      parse_kdd_pair(g_kdd_train, g_kdd_test, FeatureSchema::kdd41(), opts);
  const Dataset train = sample(loaded.train,
                               std::min<size_t>(10000, loaded.train.rows()), 1);
  const Dataset test =
      sample(loaded.test, std::min<size_t>(10000, loaded.test.rows()), 2);

  const GainTable gains = build_gain_table(train, {});
  if (gains.features[19].gain != 0.0)
    return fail("feature 20 gain is " +
                std::to_string(gains.features[19].gain) + ", expected 0.0");

  WrapperConfig cfg;
  cfg.holdout_seed = 1;
  const SelectionTrace trace = select_features(train, gains, cfg);
  const ComparisonResult cmp =
      compare_full_vs_selected(train, test, trace, cfg.knn);
  if (!(cmp.selected.accuracy > cmp.full.accuracy)) {
    std::ostringstream detail;
    detail << "selected " << cmp.selected.accuracy << " not above full "
           << cmp.full.accuracy;
    return fail(detail.str());
  }

  for (int f : trace.final_subset.indices()) {
    const auto it = std::find(gains.ranking.begin(), gains.ranking.end(), f);
    const auto rank = it - gains.ranking.begin();
    if (rank >= 15)
      return fail("selected feature " + std::to_string(f) +
                  " ranks " + std::to_string(rank + 1) + ", outside the top "
                  "15");
  }
  std::ostringstream detail;
  detail << "feature 20 gain 0.0; full " << cmp.full.accuracy << " -> selected "
         << cmp.selected.accuracy << "; subset " << trace.final_subset.to_string()
         << " inside the top 15 ranks";
  return pass(detail.str());
}

// ---- criterion 8: CLI byte determinism ------------------------------------

int run_cli_command(const std::string& args) {
  const std::string cmd = "'" + g_cli_path + "' " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return status;
}

Outcome cli_determinism() {
  if (g_cli_path.empty()) return skip("supply --cli to run");
  const auto dir = scratch_dir();
  const std::string data = (dir / "data.csv").string();
  if (run_cli_command("synth --rows 200 --informative 2 --noise 2 --seed 4 "
                      "--out '" + data + "'") != 0)
    return fail("synth invocation failed");

  struct Variant {
    std::string tag;
    std::string threads;
  };
  const std::vector<Variant> variants = {{"a", "1"}, {"b", "1"}, {"c", "3"}};

  std::vector<std::string> digests;
  for (const Variant& v : variants) {
    const std::string doc = (dir / ("doc_" + v.tag + ".json")).string();
    const std::string cmp = (dir / ("cmp_" + v.tag + ".csv")).string();
    const std::string plot = (dir / ("plot_" + v.tag + ".dat")).string();
    const std::string gains = (dir / ("gains_" + v.tag + ".csv")).string();
    const std::string subset = (dir / ("subset_" + v.tag + ".txt")).string();
    const std::string trace = (dir / ("trace_" + v.tag + ".json")).string();
    if (run_cli_command("experiment --train '" + data +
                        "' --split 0.6 --sizes 60,100 --seeds 1,2 --k 3 "
                        "--seed 7 --threads " + v.threads + " --out '" + doc +
                        "' --csv '" + cmp + "' --plot '" + plot + "'") != 0)
      return fail("experiment invocation failed");
    if (run_cli_command("gain --train '" + data + "' --threads " + v.threads +
                        " --out '" + gains + "'") != 0)
      return fail("gain invocation failed");
    if (run_cli_command("select --train '" + data +
                        "' --k 3 --seed 5 --threads " + v.threads +
                        " --out '" + subset + "' --trace '" + trace + "'") !=
        0)
      return fail("select invocation failed");
    digests.push_back(read_file(doc) + '\x1e' + read_file(cmp) + '\x1e' +
                      read_file(plot) + '\x1e' + read_file(gains) + '\x1e' +
                      read_file(subset) + '\x1e' + read_file(trace));
  }
  if (digests[0] != digests[1])
    return fail("identical invocations differ byte-for-byte");
  if (digests[0] != digests[2])
    return fail("outputs change with --threads");
  return pass("experiment/gain/select outputs byte-identical across reruns "
              "and thread counts");
}

struct Criterion {
  int number;
  const char* name;
  double budget_seconds;  // 0: no stated budget
  std::function<Outcome()> fn;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    const auto next = [&]() -> std::string {
      if (i + 1 >= argc) {
        std::fprintf(stderr, "missing value for %s\n", arg.c_str());
        std::exit(2);
      }
      return argv[++i];
    };
    if (arg == "--cli") g_cli_path = next();
    else if (arg == "--kdd-train") g_kdd_train = next();
    else if (arg == "--kdd-test") g_kdd_test = next();
    else if (arg == "--category-map") g_category_map = next();
    else if (arg == "--criterion") only = std::atoi(next().c_str());
    else {
      std::fprintf(stderr,
                   "usage: %s [--cli PATH] [--kdd-train F --kdd-test F] "
                   "[--category-map F] [--criterion N]\n",
                   argv[0]);
      return 2;
    }
  }

  const std::vector<Criterion> criteria = {
      {1, "entropy/gain oracle equivalence", 10.0, gain_oracle_equivalence},
      {2, "analytic anchors", 0.0, analytic_anchors},
      {3, "knn oracle equivalence", 30.0, knn_oracle_equivalence},
      {4, "five-point k=3/k=5 flip", 0.0, figure_one_flip},
      {5, "wrapper monotonicity and replay", 0.0,
       wrapper_monotonicity_and_replay},
      {6, "directional synthetic comparison", 120.0, directional_synthetic},
      {7, "real-data gate", 600.0, real_data_gate},
      {8, "cli byte determinism", 0.0, cli_determinism},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.number != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.fn();
    } catch (const std::exception& e) {
      outcome = fail(std::string("exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (outcome.kind == Outcome::Pass && c.budget_seconds > 0.0 &&
        elapsed > c.budget_seconds) {
      outcome = fail(outcome.detail + " — but exceeded the " +
                     std::to_string(c.budget_seconds) + "s budget");
    }
    const char* tag = outcome.kind == Outcome::Pass   ? "PASS"
                      : outcome.kind == Outcome::Skip ? "SKIP"
                                                      : "FAIL";
    std::printf("[%s] criterion %d: %s — %s [%.2fs]\n", tag, c.number, c.name,
                outcome.detail.c_str(), elapsed);
    std::fflush(stdout);
    if (outcome.kind == Outcome::Fail) ++failures;
  }
  return failures;
}
