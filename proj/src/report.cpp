#include "kddfs/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "kddfs/csv.hpp"
#include "kddfs/rng.hpp"

namespace kddfs {

namespace {

const char* method_name(BinningMethod m) {
  return m == BinningMethod::EqualFrequency ? "equal-frequency" : "equal-width";
}

BinningMethod method_from(const std::string& s) {
  if (s == "equal-frequency") return BinningMethod::EqualFrequency;
  if (s == "equal-width") return BinningMethod::EqualWidth;
  throw std::invalid_argument("unknown binning method '" + s + "'");
}

const char* metric_name(DistanceMetric m) {
  return m == DistanceMetric::Euclidean ? "euclidean" : "manhattan";
}

DistanceMetric metric_from(const std::string& s) {
  if (s == "euclidean") return DistanceMetric::Euclidean;
  if (s == "manhattan") return DistanceMetric::Manhattan;
  throw std::invalid_argument("unknown metric '" + s + "'");
}

const char* weighting_name(VoteWeighting w) {
  return w == VoteWeighting::Uniform ? "uniform" : "inverse-distance";
}

VoteWeighting weighting_from(const std::string& s) {
  if (s == "uniform") return VoteWeighting::Uniform;
  if (s == "inverse-distance") return VoteWeighting::InverseDistance;
  throw std::invalid_argument("unknown weighting '" + s + "'");
}

nlohmann::ordered_json knn_to_json(const KnnConfig& cfg) {
  nlohmann::ordered_json j;
  j["k"] = cfg.k;
  j["metric"] = metric_name(cfg.metric);
  j["weighting"] = weighting_name(cfg.weighting);
  return j;
}

KnnConfig knn_from_json(const nlohmann::ordered_json& j) {
  KnnConfig cfg;
  cfg.k = j.at("k").get<int>();
  cfg.metric = metric_from(j.at("metric").get<std::string>());
  cfg.weighting = weighting_from(j.at("weighting").get<std::string>());
  return cfg;
}

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", fraction * 100.0);
  return buf;
}

}  // namespace

nlohmann::ordered_json plan_to_json(const ExperimentPlan& plan) {
  nlohmann::ordered_json j;
  j["sizes"] = plan.sizes;
  j["seeds"] = plan.seeds;
  j["discretization"] = {{"method", method_name(plan.discretization.method)},
                         {"bins", plan.discretization.bins}};
  j["knn"] = knn_to_json(plan.knn);
  nlohmann::ordered_json w;
  w["knn"] = knn_to_json(plan.wrapper.knn);
  w["eval_mode"] = plan.wrapper.eval_mode == WrapperEvalMode::Holdout
                       ? "holdout"
                       : "test";
  w["holdout_fraction"] = plan.wrapper.holdout_fraction;
  w["holdout_seed"] = plan.wrapper.holdout_seed;
  w["epsilon"] = plan.wrapper.epsilon;
  w["max_features"] = plan.wrapper.max_features;
  w["patience"] = plan.wrapper.patience;
  w["order"] = plan.wrapper.order == GainOrder::Descending ? "descending"
                                                           : "ascending";
  j["wrapper"] = std::move(w);
  return j;
}

ExperimentPlan plan_from_json(const nlohmann::ordered_json& j) {
  ExperimentPlan plan;
  plan.sizes = j.at("sizes").get<std::vector<size_t>>();
  plan.seeds = j.at("seeds").get<std::vector<uint64_t>>();
  plan.discretization.method =
      method_from(j.at("discretization").at("method").get<std::string>());
  plan.discretization.bins = j.at("discretization").at("bins").get<int>();
  plan.knn = knn_from_json(j.at("knn"));
  const auto& w = j.at("wrapper");
  plan.wrapper.knn = knn_from_json(w.at("knn"));
  const std::string mode = w.at("eval_mode").get<std::string>();
  if (mode == "holdout")
    plan.wrapper.eval_mode = WrapperEvalMode::Holdout;
  else if (mode == "test")
    plan.wrapper.eval_mode = WrapperEvalMode::ProvidedTest;
  else
    throw std::invalid_argument("unknown eval_mode '" + mode + "'");
  plan.wrapper.holdout_fraction = w.at("holdout_fraction").get<double>();
  plan.wrapper.holdout_seed = w.at("holdout_seed").get<uint64_t>();
  plan.wrapper.epsilon = w.at("epsilon").get<double>();
  plan.wrapper.max_features = w.at("max_features").get<int>();
  plan.wrapper.patience = w.at("patience").get<int>();
  const std::string order = w.at("order").get<std::string>();
  if (order == "descending")
    plan.wrapper.order = GainOrder::Descending;
  else if (order == "ascending")
    plan.wrapper.order = GainOrder::Ascending;
  else
    throw std::invalid_argument("unknown order '" + order + "'");
  return plan;
}

ExperimentDocument run_experiment(const ExperimentPlan& plan,
                                  const Dataset& train, const Dataset& test,
                                  int threads) {
  ExperimentDocument doc;
  doc.plan = plan;
  for (size_t size : plan.sizes) {
    for (uint64_t seed : plan.seeds) {
      ExperimentCell cell;
      cell.size = size;
      cell.seed = seed;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const Dataset drawn = sample(train, size, seed);
        const GainTable gains =
            build_gain_table(drawn, plan.discretization, threads);
        WrapperConfig wcfg = plan.wrapper;
        wcfg.holdout_seed = seed;
        wcfg.threads = threads;
        SelectionTrace trace;
        if (wcfg.eval_mode == WrapperEvalMode::ProvidedTest)
          trace = select_features(drawn, test, gains, wcfg);
        else
          trace = select_features(drawn, gains, wcfg);
        const ComparisonResult cmp =
            compare_full_vs_selected(drawn, test, trace, plan.knn, threads);
        cell.subset = trace.final_subset.sorted();
        cell.accuracy_full = cmp.full.accuracy;
        cell.accuracy_selected = cmp.selected.accuracy;
        cell.ok = true;
      } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = e.what();
      }
      cell.elapsed_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
      doc.cells.push_back(std::move(cell));
    }
  }
  return doc;
}

nlohmann::ordered_json document_to_json(const ExperimentDocument& doc,
                                        bool include_timings) {
  nlohmann::ordered_json j;
  j["schema_version"] = doc.schema_version;
  j["plan"] = plan_to_json(doc.plan);
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const ExperimentCell& c : doc.cells) {
    nlohmann::ordered_json cj;
    cj["size"] = c.size;
    cj["seed"] = c.seed;
    cj["ok"] = c.ok;
    if (c.ok) {
      cj["subset"] = c.subset;
      cj["accuracy_full"] = c.accuracy_full;
      cj["accuracy_selected"] = c.accuracy_selected;
    } else {
      cj["error"] = c.error;
    }
    if (include_timings) cj["elapsed_seconds"] = c.elapsed_seconds;
    cells.push_back(std::move(cj));
  }
  j["cells"] = std::move(cells);
  return j;
}

ExperimentDocument document_from_json(const nlohmann::ordered_json& j) {
  ExperimentDocument doc;
  doc.schema_version = j.at("schema_version").get<int>();
  doc.plan = plan_from_json(j.at("plan"));
  for (const auto& cj : j.at("cells")) {
    ExperimentCell c;
    c.size = cj.at("size").get<size_t>();
    c.seed = cj.at("seed").get<uint64_t>();
    c.ok = cj.at("ok").get<bool>();
    if (c.ok) {
      c.subset = cj.at("subset").get<std::vector<int>>();
      c.accuracy_full = cj.at("accuracy_full").get<double>();
      c.accuracy_selected = cj.at("accuracy_selected").get<double>();
    } else {
      c.error = cj.at("error").get<std::string>();
    }
    if (cj.contains("elapsed_seconds"))
      c.elapsed_seconds = cj.at("elapsed_seconds").get<double>();
    doc.cells.push_back(std::move(c));
  }
  return doc;
}

void emit_gain_report(const GainTable& gains, std::ostream& out) {
  out << "# class_entropy=" << csv::format_double(gains.class_entropy) << '\n';
  out << "index,name,gain";
  for (AttackCategory c : kAllCategories) out << ",gain_" << category_name(c);
  out << '\n';
  for (const FeatureGain& f : gains.features) {
    out << f.index << ',' << csv::quote(f.name) << ','
        << csv::format_double(f.gain);
    for (double g : f.per_class) out << ',' << csv::format_double(g);
    out << '\n';
  }
  out << '\n';
  out << "rank,index,name,gain\n";
  for (size_t r = 0; r < gains.ranking.size(); ++r) {
    const FeatureGain& f =
        gains.features[static_cast<size_t>(gains.ranking[r]) - 1];
    out << r + 1 << ',' << f.index << ',' << csv::quote(f.name) << ','
        << csv::format_double(f.gain) << '\n';
  }
}

GainTable parse_gain_report(std::istream& in) {
  GainTable table;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# class_entropy=", 0) != 0)
    throw std::runtime_error("gain report: missing class_entropy line");
  table.class_entropy =
      csv::parse_double(line.substr(std::string("# class_entropy=").size()));
  if (!std::getline(in, line) || line.rfind("index,name,gain", 0) != 0)
    throw std::runtime_error("gain report: missing header");
  while (std::getline(in, line) && !line.empty()) {
    const std::vector<std::string> fields = csv::split_line(line);
    if (fields.size() != 3 + kCategoryCount)
      throw std::runtime_error("gain report: bad row '" + line + "'");
    FeatureGain f;
    f.index = static_cast<int>(csv::parse_double(fields[0]));
    f.name = fields[1];
    f.gain = csv::parse_double(fields[2]);
    for (int c = 0; c < kCategoryCount; ++c)
      f.per_class[static_cast<size_t>(c)] =
          csv::parse_double(fields[3 + static_cast<size_t>(c)]);
    table.features.push_back(std::move(f));
  }
  // ranking section
  if (std::getline(in, line) && line.rfind("rank,index,name,gain", 0) == 0) {
    while (std::getline(in, line) && !line.empty()) {
      const std::vector<std::string> fields = csv::split_line(line);
      if (fields.size() != 4)
        throw std::runtime_error("gain report: bad ranking row '" + line + "'");
      table.ranking.push_back(static_cast<int>(csv::parse_double(fields[1])));
    }
  }
  return table;
}

nlohmann::ordered_json gains_to_json(const GainTable& gains) {
  nlohmann::ordered_json j;
  j["class_entropy"] = gains.class_entropy;
  nlohmann::ordered_json features = nlohmann::ordered_json::array();
  for (const FeatureGain& f : gains.features) {
    nlohmann::ordered_json fj;
    fj["index"] = f.index;
    fj["name"] = f.name;
    fj["gain"] = f.gain;
    nlohmann::ordered_json per_class = nlohmann::ordered_json::object();
    for (int c = 0; c < kCategoryCount; ++c)
      per_class[category_name(static_cast<AttackCategory>(c))] =
          f.per_class[static_cast<size_t>(c)];
    fj["per_class"] = std::move(per_class);
    features.push_back(std::move(fj));
  }
  j["features"] = std::move(features);
  j["ranking"] = gains.ranking;
  return j;
}

namespace {

std::vector<const ExperimentCell*> sorted_ok_cells(
    const ExperimentDocument& doc) {
  std::vector<const ExperimentCell*> cells;
  for (const ExperimentCell& c : doc.cells)
    if (c.ok) cells.push_back(&c);
  std::sort(cells.begin(), cells.end(),
            [](const ExperimentCell* a, const ExperimentCell* b) {
              if (a->size != b->size) return a->size < b->size;
              return a->seed < b->seed;
            });
  return cells;
}

}  // namespace

void emit_comparison(const ExperimentDocument& doc, std::ostream& out) {
  out << "size,seed,subset,acc_full,acc_selected\n";
  for (const ExperimentCell* c : sorted_ok_cells(doc)) {
    std::string subset;
    for (int idx : c->subset) {
      if (!subset.empty()) subset.push_back(',');
      subset += std::to_string(idx);
    }
    out << c->size << ',' << c->seed << ',' << csv::quote(subset) << ','
        << percent(c->accuracy_full) << ',' << percent(c->accuracy_selected)
        << '\n';
  }
}

void emit_plot_data(const ExperimentDocument& doc, std::ostream& out) {
  for (const ExperimentCell* c : sorted_ok_cells(doc)) {
    out << c->size << ' ' << csv::format_double(c->accuracy_full) << ' '
        << csv::format_double(c->accuracy_selected) << '\n';
  }
}

Dataset generate_synthetic(const SyntheticSpec& spec) {
  if (spec.rows == 0)
    throw std::invalid_argument("generate_synthetic: rows must be positive");
  if (spec.informative_features < 0 || spec.noise_features < 0)
    throw std::invalid_argument("generate_synthetic: negative feature count");
  const int width = spec.informative_features + spec.noise_features;
  if (width < 1)
    throw std::invalid_argument("generate_synthetic: no features");
  double sum = 0.0;
  for (double p : spec.class_proportions) {
    if (p < 0.0)
      throw std::invalid_argument(
          "generate_synthetic: negative class proportion");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument(
        "generate_synthetic: class proportions must sum to 1");

  FeatureSchema schema;
  if (spec.kdd_names) {
    if (width != 41)
      throw std::invalid_argument(
          "generate_synthetic: the 41-feature layout needs exactly 41 "
          "features");
    schema = FeatureSchema::kdd41();
  } else {
    std::vector<FeatureDesc> features;
    for (int i = 0; i < width; ++i)
      features.push_back(
          {i + 1, "f" + std::to_string(i + 1), FeatureKind::Continuous});
    schema = FeatureSchema(std::move(features));
  }

  // class CDF for label draws
  std::array<double, kCategoryCount> cdf{};
  double acc = 0.0;
  for (int c = 0; c < kCategoryCount; ++c) {
    acc += spec.class_proportions[static_cast<size_t>(c)];
    cdf[static_cast<size_t>(c)] = acc;
  }
  cdf[kCategoryCount - 1] = 1.0;

  Rng rng(spec.seed);
  Dataset ds(schema);
  std::vector<double> row(static_cast<size_t>(width));
  for (size_t r = 0; r < spec.rows; ++r) {
    const double u = rng.unit();
    int cls = 0;
    while (cls + 1 < kCategoryCount && u >= cdf[static_cast<size_t>(cls)])
      ++cls;
    for (int f = 0; f < width; ++f) {
      double v;
      if (f < spec.informative_features) {
        // rotate the class-to-center assignment per feature so each
        // informative feature separates a different class neighborhood
        const int center = (cls + 2 * f) % kCategoryCount;
        v = spec.separation * center + rng.gauss();
      } else {
        v = rng.gauss();
      }
      if (spec.kdd_names &&
          schema.features()[static_cast<size_t>(f)].kind ==
              FeatureKind::Discrete) {
        // symbolic columns carry small non-negative codes
        v = std::min(9.0, std::max(0.0, std::round(v)));
      }
      row[static_cast<size_t>(f)] = v;
    }
    const auto category = static_cast<AttackCategory>(cls);
    ds.append_row(row, category, category_name(category));
  }
  return ds;
}

}  // namespace kddfs
