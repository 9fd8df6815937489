#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "shgcn/error.hpp"
#include "shgcn/graphcore/io.hpp"
#include "shgcn/numkit/random.hpp"

namespace shgcn::cli {
namespace {

namespace fs = std::filesystem;

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

void require_file(const std::string& path, const char* flag) {
  if (path.empty()) return;
  std::error_code ec;
  require(fs::is_regular_file(path, ec), std::string(flag) + ": file '" + path + "' does not exist");
}

bool is_collection(const std::string& spec) { return spec.rfind("collection:", 0) == 0; }

template <typename Fn>
auto as_usage(Fn&& fn) {
  try {
    return fn();
  } catch (const ContractError& e) {
    throw UsageError(e.what());
  }
}

}  // namespace

void ExperimentConfig::validate(bool bench) const {
  as_usage([&] {
    (void)task_kind();
    (void)precision_mode();
    (void)layers::parse_activation(activation);
    if (bench) {
      require(models.size() >= 2, "bench needs at least two models (--models a,b)");
      for (const auto& m : models) (void)layers::parse_layer_kind(m);
    } else {
      (void)model_kind();
    }
    return 0;
  });
  require(synthetic.empty() != edges.empty(), "give exactly one graph source: --synthetic or --edges");
  require_file(edges, "--edges");
  require_file(features, "--features");
  require_file(labels, "--labels");
  const auto t = as_usage([&] { return task_kind(); });
  if (t == layers::Task::GraphRegression) {
    require(is_collection(synthetic), "task gr needs --synthetic collection:<count>,<seed>");
  } else {
    require(!is_collection(synthetic), "collection:... graphs are only valid for task gr");
  }
  if (t == layers::Task::NodeClassification) {
    require(!synthetic.empty() || !labels.empty(), "task nc with --edges needs --labels");
  }
  require(synthetic_features == "diffusion" || synthetic_features == "identity",
          "--synthetic-features must be diffusion or identity");
  require(feature_dim >= 1, "--feature-dim must be positive");
  require(feature_noise >= 0.0, "--feature-noise must be non-negative");
  require(layers >= 1, "--layers must be at least 1");
  require(dim >= 1, "--dim must be at least 1");
  require(curvature > 0.0, "--curvature must be positive");
  require(dropout >= 0.0 && dropout < 1.0, "--dropout must lie in [0, 1)");
  require(lr > 0.0, "--lr must be positive");
  require(weight_decay >= 0.0, "--weight-decay must be non-negative");
  require(patience >= 1, "--patience must be at least 1");
  require(!seeds.empty(), "--seeds must list at least one seed");
  require(ratios.size() == 3, "--ratios takes three values train,val,test");
  require(ratios[0] > 0.0 && ratios[1] >= 0.0 && ratios[2] >= 0.0 &&
              std::abs(ratios[0] + ratios[1] + ratios[2] - 1.0) <= 1e-9,
          "--ratios must be non-negative, with a positive train share, and sum to 1");
  require(fd_t > 0.0, "--fd-t must be positive");
  require(runs >= 1, "--runs must be at least 1");
  require(threads >= 1, "--threads must be at least 1");
}

layers::ModelConfig ExperimentConfig::model_config(layers::LayerKind kind) const {
  layers::ModelConfig c;
  c.layer_kind = kind;
  c.num_layers = layers;
  c.hidden_dim = dim;
  c.activation = layers::parse_activation(activation);
  c.init_curvature = curvature;
  c.trainable_curvature = !fixed_curvature;
  c.dropout = dropout;
  return c;
}

nlohmann::ordered_json ExperimentConfig::to_json(bool bench) const {
  nlohmann::ordered_json j;
  j["task"] = task;
  if (bench) {
    j["models"] = models;
  } else {
    j["model"] = model;
  }
  nlohmann::ordered_json data;
  if (!synthetic.empty()) {
    data["synthetic"] = synthetic;
    if (!is_collection(synthetic)) {
      data["synthetic_features"] = synthetic_features;
      data["feature_dim"] = feature_dim;
      data["feature_noise"] = feature_noise;
      data["dataset_seed"] = dataset_seed;
    }
  } else {
    data["edges"] = edges;
    data["features"] = features.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(features);
    data["labels"] = labels.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(labels);
  }
  j["data"] = data;
  j["layers"] = layers;
  j["dim"] = dim;
  j["activation"] = activation;
  j["curvature"] = curvature;
  j["trainable_curvature"] = !fixed_curvature;
  j["dropout"] = dropout;
  j["lr"] = lr;
  j["weight_decay"] = weight_decay;
  j["adam"] = {{"beta1", 0.9}, {"beta2", 0.999}, {"eps", 1e-8}};
  j["epochs"] = epochs;
  if (!bench) j["patience"] = patience;
  j["seeds"] = seeds;
  j["ratios"] = ratios;
  j["fd_r"] = fd_r;
  j["fd_t"] = fd_t;
  j["precision"] = precision;
  if (bench) {
    j["runs"] = runs;
    j["timing_warmup_epochs"] = 5;
  } else {
    j["threads"] = threads;
  }
  j["out"] = out;
  return j;
}

graphcore::Graph load_structure(const ExperimentConfig& cfg) {
  return as_usage([&] {
    if (!cfg.synthetic.empty()) return graphcore::synthetic(cfg.synthetic);
    const auto list = graphcore::load_edge_list(cfg.edges);
    return graphcore::Graph(list.num_nodes, list.edges);
  });
}

graphcore::Graph load_graph(const ExperimentConfig& cfg) {
  return as_usage([&] {
    if (cfg.synthetic.empty()) {
      std::optional<fs::path> features, labels;
      if (!cfg.features.empty()) features = cfg.features;
      if (!cfg.labels.empty()) labels = cfg.labels;
      return graphcore::load_graph(cfg.edges, features, labels);
    }
    graphcore::Graph g = graphcore::synthetic(cfg.synthetic);
    if (cfg.synthetic_features == "identity") return g.with_features(graphcore::identity_features(g.num_nodes()));
    return g.with_features(graphcore::diffusion_features(g, cfg.feature_dim, cfg.feature_noise,
                                                         numkit::mix_seed(cfg.dataset_seed, 0xfea7)));
  });
}

graphcore::GraphCollection load_collection(const ExperimentConfig& cfg) {
  return as_usage([&] {
    const std::string body = cfg.synthetic.substr(std::string("collection:").size());
    const auto comma = body.find(',');
    if (comma == std::string::npos) throw ContractError("expected collection:<count>,<seed>");
    auto number = [&](std::string_view s) {
      std::uint64_t v = 0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ContractError("collection spec '" + cfg.synthetic + "': cannot parse '" + std::string(s) + "'");
      }
      return v;
    };
    const std::string_view view(body);
    return graphcore::graph_collection(number(view.substr(0, comma)), number(view.substr(comma + 1)));
  });
}

std::vector<std::string> config_file_args(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("--config: cannot read '" + path.string() + "'");
  std::vector<std::string> args;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string{};
      const auto b = s.find_last_not_of(" \t\r");
      return s.substr(a, b - a + 1);
    };
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path.string() + ":" + std::to_string(no) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    for (char& ch : key)
      if (ch == '_') ch = '-';
    if (key.empty() || key == "config") {
      throw UsageError(path.string() + ":" + std::to_string(no) + ": invalid key '" + key + "'");
    }
    args.push_back("--" + key + "=" + value);
  }
  return args;
}

}  // namespace shgcn::cli
