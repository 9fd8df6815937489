#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <numeric>

#include "shgcn/error.hpp"
#include "shgcn/graphcore/hyperbolicity.hpp"
#include "shgcn/numkit/random.hpp"
#include "shgcn/stability/thresholds.hpp"
#include "shgcn/trainkit/trainer.hpp"
#include "shgcn/version.hpp"

namespace shgcn::cli {
namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// One-sided 95% normal quantile.
constexpr double kZ95 = 1.6448536269514722;

template <typename... Args>
std::string fmt(const char* pattern, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

struct Stats {
  double mean = 0.0;
  double stddev = 0.0;
};

Stats stats_of(const std::vector<double>& xs) {
  Stats s;
  if (xs.empty()) return s;
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

Json json_number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

// Everything one seed needs, built from the shared dataset.
struct Dataset {
  layers::Task task;
  graphcore::Graph graph;
  graphcore::GraphCollection collection;
  std::size_t num_classes = 0;

  std::size_t in_dim() const {
    return task == layers::Task::GraphRegression ? collection.merged.features().cols() : graph.features().cols();
  }
};

Dataset load_dataset(const ExperimentConfig& cfg) {
  Dataset d;
  d.task = cfg.task_kind();
  if (d.task == layers::Task::GraphRegression) {
    d.collection = load_collection(cfg);
    return d;
  }
  d.graph = load_graph(cfg);
  if (d.task == layers::Task::NodeClassification) {
    if (!d.graph.labels()) throw UsageError("task nc needs node labels");
    const auto& y = *d.graph.labels();
    d.num_classes = static_cast<std::size_t>(*std::max_element(y.begin(), y.end())) + 1;
    if (d.num_classes < 2) throw UsageError("task nc needs at least two classes");
  }
  if (d.task == layers::Task::LinkPrediction && d.graph.num_edges() == 0) {
    throw UsageError("task lp needs a graph with edges");
  }
  return d;
}

struct SeedOutcome {
  std::uint64_t seed = 0;
  trainkit::TrainResult result;
  trainkit::TimingSummary timing;
  std::vector<double> curvatures;
  std::string split_warning;
};

SeedOutcome run_seed(const ExperimentConfig& cfg, const Dataset& data, layers::LayerKind kind, std::uint64_t seed,
                     bool evaluate) {
  SeedOutcome out;
  out.seed = seed;
  const auto ratios = cfg.split_ratios();
  trainkit::TaskData task_data;
  try {
    switch (data.task) {
      case layers::Task::LinkPrediction: {
        auto split = graphcore::split_edges(data.graph, ratios, seed);
        out.split_warning = split.warning;
        task_data = trainkit::LinkData{&data.graph, std::move(split)};
        break;
      }
      case layers::Task::NodeClassification:
        task_data = trainkit::NodeData{&data.graph, graphcore::split_nodes(data.graph.num_nodes(), ratios, seed),
                                       data.num_classes};
        break;
      case layers::Task::GraphRegression:
        task_data = trainkit::RegressionData{&data.collection,
                                             graphcore::split_nodes(data.collection.num_graphs(), ratios, seed)};
        break;
    }
  } catch (const ContractError& e) {
    throw UsageError(e.what());
  }

  layers::Model model(cfg.model_config(kind), data.task, data.in_dim(), data.num_classes,
                      numkit::mix_seed(seed, 0x1417));
  trainkit::TrainOptions options;
  options.epochs = cfg.epochs;
  options.patience = cfg.patience;
  options.seed = seed;
  options.adam.lr = cfg.lr;
  options.adam.weight_decay = cfg.weight_decay;
  options.fd_r = cfg.fd_r;
  options.fd_t = cfg.fd_t;
  options.precision = cfg.precision_mode();
  options.evaluate = evaluate;
  out.result = trainkit::train_model(model, task_data, options);
  out.timing = trainkit::summarize_timing(out.result.records);
  out.curvatures = model.curvatures();
  return out;
}

std::vector<std::string> metric_names(layers::Task task) {
  switch (task) {
    case layers::Task::LinkPrediction: return {"auc"};
    case layers::Task::NodeClassification: return {"accuracy", "f1", "macro_f1"};
    case layers::Task::GraphRegression: return {"mae"};
  }
  return {};
}

Json timing_json(const std::vector<double>& epoch_times) {
  const Stats s = stats_of(epoch_times);
  const double se = epoch_times.size() > 1 ? s.stddev / std::sqrt(static_cast<double>(epoch_times.size())) : 0.0;
  return {{"epochs", epoch_times.size()}, {"mean", s.mean}, {"std", s.stddev}, {"stderr", se}};
}

std::vector<double> post_warmup_times(const trainkit::TrainResult& r) {
  const std::size_t skip = r.records.size() > 5 ? 5 : 0;
  std::vector<double> out;
  for (std::size_t i = skip; i < r.records.size(); ++i) out.push_back(r.records[i].wall_time_seconds);
  return out;
}

Json base_report(const char* command) {
  Json j;
  j["command"] = command;
  j["version"] = std::string(kVersion);
  return j;
}

std::string graph_line(const ExperimentConfig& cfg, const Dataset& d) {
  const std::string source = cfg.synthetic.empty() ? cfg.edges : cfg.synthetic;
  if (d.task == layers::Task::GraphRegression) {
    return fmt("data: %s (%zu graphs, %zu nodes)\n", source.c_str(), d.collection.num_graphs(),
               d.collection.merged.num_nodes());
  }
  return fmt("data: %s (%zu nodes, %zu edges, %zu features)\n", source.c_str(), d.graph.num_nodes(),
             d.graph.num_edges(), d.graph.features().cols());
}

}  // namespace

CommandOutput cmd_run(const ExperimentConfig& cfg) {
  const Dataset data = load_dataset(cfg);
  const auto kind = cfg.model_kind();

  std::vector<SeedOutcome> outcomes(cfg.seeds.size());
  if (cfg.threads > 1 && cfg.seeds.size() > 1) {
    // Independent tapes and RNG streams per seed; results are identical to
    // the sequential path.
    for (std::size_t start = 0; start < cfg.seeds.size(); start += cfg.threads) {
      std::vector<std::future<SeedOutcome>> batch;
      for (std::size_t i = start; i < std::min(cfg.seeds.size(), start + cfg.threads); ++i) {
        batch.push_back(std::async(std::launch::async, run_seed, std::cref(cfg), std::cref(data), kind, cfg.seeds[i], true));
      }
      for (std::size_t k = 0; k < batch.size(); ++k) outcomes[start + k] = batch[k].get();
    }
  } else {
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) outcomes[i] = run_seed(cfg, data, kind, cfg.seeds[i], true);
  }

  CommandOutput out;
  Json& report = out.report = base_report("run");
  report["config"] = cfg.to_json(false);

  const auto names = metric_names(data.task);
  std::map<std::string, std::vector<double>> values;
  std::vector<double> all_times;
  Json per_seed = Json::array();
  for (const auto& o : outcomes) {
    Json s;
    s["seed"] = o.seed;
    Json metrics;
    for (const auto& name : names) {
      const double v = o.result.test_metrics.at(name);
      metrics[name] = json_number(v);
      values[name].push_back(v);
    }
    s["test"] = metrics;
    s["best_epoch"] = o.result.best_epoch;
    s["epochs_run"] = o.result.records.size();
    s["best_val_metric"] = json_number(o.result.best_val_metric);
    s["final_train_loss"] = o.result.records.empty() ? Json(nullptr) : json_number(o.result.records.back().train_loss);
    s["curvatures"] = o.curvatures;
    s["overflow"] = o.result.overflow;
    if (!o.split_warning.empty()) s["split_warning"] = o.split_warning;
    s["epoch_seconds"] = timing_json(post_warmup_times(o.result));
    per_seed.push_back(s);
    const auto times = post_warmup_times(o.result);
    all_times.insert(all_times.end(), times.begin(), times.end());
  }
  report["per_seed"] = per_seed;

  Json summary;
  for (const auto& name : names) {
    const Stats s = stats_of(values[name]);
    summary[name] = {{"mean", json_number(s.mean)}, {"std", json_number(s.stddev)}, {"n", values[name].size()}};
  }
  report["summary"] = summary;
  report["timing"] = {{"epoch_seconds", timing_json(all_times)}, {"warmup_epochs", 5}};

  std::string& t = out.text;
  t += fmt("shgcn %s run: task %s, model %s, precision %s\n", std::string(kVersion).c_str(), cfg.task.c_str(),
           cfg.model.c_str(), cfg.precision.c_str());
  t += graph_line(cfg, data);
  t += fmt("architecture: %zu layers, dim %zu, %s, lr %g, epochs %zu, patience %zu\n\n", cfg.layers, cfg.dim,
           cfg.activation.c_str(), cfg.lr, cfg.epochs, cfg.patience);
  t += fmt("%-8s", "seed");
  for (const auto& name : names) t += fmt("%12s", name.c_str());
  t += fmt("%12s%12s%14s\n", "best_epoch", "epochs", "epoch_ms");
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    t += fmt("%-8llu", static_cast<unsigned long long>(outcomes[i].seed));
    for (const auto& name : names) t += fmt("%12.4f", values[name][i]);
    t += fmt("%12zu%12zu%14.3f\n", outcomes[i].result.best_epoch, outcomes[i].result.records.size(),
             1e3 * outcomes[i].timing.mean);
  }
  t += "\n";
  for (const auto& name : names) {
    const Stats s = stats_of(values[name]);
    t += fmt("%s: %.4f +- %.4f\n", name.c_str(), s.mean, s.stddev);
  }
  const Stats ts = stats_of(all_times);
  t += fmt("epoch time: %.3f +- %.3f ms (%zu epochs after warmup)\n", 1e3 * ts.mean, 1e3 * ts.stddev, all_times.size());
  for (const auto& o : outcomes) {
    if (!o.split_warning.empty()) {
      t += fmt("warning (seed %llu): %s\n", static_cast<unsigned long long>(o.seed), o.split_warning.c_str());
    }
    if (o.result.overflow) {
      t += fmt("warning (seed %llu): values overflowed in %s precision\n", static_cast<unsigned long long>(o.seed),
               cfg.precision.c_str());
    }
  }
  return out;
}

CommandOutput cmd_bench(const ExperimentConfig& cfg) {
  const Dataset data = load_dataset(cfg);
  std::vector<layers::LayerKind> kinds;
  for (const auto& m : cfg.models) kinds.push_back(layers::parse_layer_kind(m));
  const std::size_t M = kinds.size();

  std::vector<std::vector<double>> pooled(M);
  std::vector<std::vector<double>> run_means(M);
  std::vector<std::vector<double>> metric(M);
  for (std::size_t r = 0; r < cfg.runs; ++r) {
    const std::uint64_t seed = cfg.seeds.front() + r;
    // Rotate the order each run so slow drift does not favour one model.
    for (std::size_t k = 0; k < M; ++k) {
      const std::size_t m = (k + r) % M;
      const SeedOutcome o = run_seed(cfg, data, kinds[m], seed, false);
      const auto times = post_warmup_times(o.result);
      pooled[m].insert(pooled[m].end(), times.begin(), times.end());
      run_means[m].push_back(stats_of(times).mean);
      const auto names = metric_names(data.task);
      metric[m].push_back(o.result.test_metrics.at(names.front()));
    }
  }

  CommandOutput out;
  Json& report = out.report = base_report("bench");
  report["config"] = cfg.to_json(true);
  const std::string metric_name = metric_names(data.task).front();

  Json models = Json::array();
  std::vector<Stats> time_stats(M);
  std::vector<double> time_se(M);
  for (std::size_t m = 0; m < M; ++m) {
    time_stats[m] = stats_of(pooled[m]);
    time_se[m] = pooled[m].size() > 1 ? time_stats[m].stddev / std::sqrt(static_cast<double>(pooled[m].size())) : 0.0;
    const Stats ms = stats_of(metric[m]);
    models.push_back({{"model", cfg.models[m]},
                      {"epoch_seconds", timing_json(pooled[m])},
                      {"run_mean_seconds", run_means[m]},
                      {"final_" + metric_name, {{"mean", json_number(ms.mean)}, {"std", json_number(ms.stddev)}}}});
  }
  report["per_seed"] = models;

  Json speedups = Json::array();
  for (std::size_t b = 1; b < M; ++b) {
    const double ratio = time_stats[b].mean / time_stats[0].mean;
    // Delta-method standard error of a ratio of independent means.
    const double rel_b = time_se[b] / time_stats[b].mean;
    const double rel_s = time_se[0] / time_stats[0].mean;
    const double se = ratio * std::sqrt(rel_b * rel_b + rel_s * rel_s);
    std::vector<double> per_run;
    for (std::size_t r = 0; r < cfg.runs; ++r) per_run.push_back(run_means[b][r] / run_means[0][r]);
    const Stats pr = stats_of(per_run);
    speedups.push_back({{"baseline", cfg.models[b]},
                        {"subject", cfg.models[0]},
                        {"speedup", ratio},
                        {"stderr", se},
                        {"lower_95", ratio - kZ95 * se},
                        {"per_run_mean", pr.mean},
                        {"per_run_std", pr.stddev}});
  }
  report["summary"] = {{"speedups", speedups}};
  report["timing"] = {{"warmup_epochs", 5}, {"runs", cfg.runs}, {"epochs_per_run", cfg.epochs}};

  std::string& t = out.text;
  t += fmt("shgcn %s bench: task %s, precision %s, %zu runs x %zu epochs\n", std::string(kVersion).c_str(),
           cfg.task.c_str(), cfg.precision.c_str(), cfg.runs, cfg.epochs);
  t += graph_line(cfg, data);
  t += "\n";
  t += fmt("%-28s", "epoch time (ms)");
  for (const auto& m : cfg.models) t += fmt("%22s", m.c_str());
  t += "\n";
  t += fmt("%-28s", "mean +- sd");
  for (std::size_t m = 0; m < M; ++m) {
    t += fmt("%22s", fmt("%.3f +- %.3f", 1e3 * time_stats[m].mean, 1e3 * time_stats[m].stddev).c_str());
  }
  t += "\n\n";
  for (const auto& s : speedups) {
    const std::string label =
        "Speedup (" + s["baseline"].get<std::string>() + " vs " + s["subject"].get<std::string>() + ")";
    t += fmt("%-36s %.3f +- %.3f  (95%% lower bound %.3f)\n", label.c_str(), s["speedup"].get<double>(),
             s["per_run_std"].get<double>(), s["lower_95"].get<double>());
  }
  return out;
}

CommandOutput cmd_stability() {
  const auto table = stability::threshold_table();
  CommandOutput out;
  Json& report = out.report = base_report("stability");
  Json rows = Json::array();
  for (const auto& row : table) {
    rows.push_back({{"mode", stability::format_name(row.mode)},
                    {"epsilon", row.epsilon},
                    {"max_k", row.max_k},
                    {"representable_radius", row.representable_radius},
                    {"collapse_threshold", row.collapse_threshold},
                    {"analytic_threshold", row.analytic_threshold}});
  }
  report["summary"] = {{"thresholds", rows}};
  report["config"] = {{"curvature", 1.0}, {"direction", {1.0, 0.0}}, {"search", {{"lo", 0.1}, {"hi", 64.0}, {"resolution", 1e-3}}}};
  out.text = stability::to_text(table);
  out.csv = stability::to_csv(table);
  return out;
}

CommandOutput cmd_hyperbolicity(const ExperimentConfig& cfg) {
  const graphcore::Graph g = load_structure(cfg);
  graphcore::HyperbolicityOptions options;
  options.max_nodes = cfg.max_nodes;
  options.threads = cfg.threads;
  double delta = 0.0;
  try {
    delta = graphcore::delta_hyperbolicity(g, options);
  } catch (const CapacityError& e) {
    throw UsageError(std::string(e.what()) + "; use a smaller graph or raise --max-nodes");
  } catch (const ContractError& e) {
    throw UsageError(e.what());
  }
  CommandOutput out;
  Json& report = out.report = base_report("hyperbolicity");
  report["config"] = {{"source", cfg.synthetic.empty() ? cfg.edges : cfg.synthetic}, {"max_nodes", cfg.max_nodes}};
  report["summary"] = {{"nodes", g.num_nodes()}, {"edges", g.num_edges()}, {"delta", delta}};
  out.text = fmt("nodes %zu, edges %zu, delta %g\n", g.num_nodes(), g.num_edges(), delta);
  return out;
}

void write_outputs(const fs::path& dir, const CommandOutput& output) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());
  auto write = [&](const char* name, const std::string& content) {
    const fs::path path = dir / name;
    std::ofstream f(path);
    f << content;
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  };
  write("report.json", output.report.dump(2) + "\n");
  write("report.txt", output.text);
  if (!output.csv.empty()) write("thresholds.csv", output.csv);
}

}  // namespace shgcn::cli
