#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "shgcn/graphcore/generators.hpp"
#include "shgcn/graphcore/split.hpp"
#include "shgcn/layers/params.hpp"
#include "shgcn/numkit/precision.hpp"
#include "json.hpp"

namespace shgcn::cli {

// Raised for bad flags, values or inputs; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string task = "lp";
  std::string model = "shgcn";
  std::vector<std::string> models;  // bench only

  std::string synthetic;
  std::string edges;
  std::string features;
  std::string labels;
  // Features for generated graphs without a feature file.
  std::string synthetic_features = "diffusion";
  std::size_t feature_dim = 16;
  double feature_noise = 1.0;
  std::uint64_t dataset_seed = 0;

  std::size_t layers = 2;
  std::size_t dim = 16;
  std::string activation = "relu";
  double curvature = 1.0;
  bool fixed_curvature = false;
  double dropout = 0.0;

  double lr = 0.01;
  double weight_decay = 0.0;
  std::size_t epochs = 1000;
  std::size_t patience = 100;
  std::vector<std::uint64_t> seeds{0};
  std::vector<double> ratios{0.85, 0.05, 0.10};
  double fd_r = 2.0;
  double fd_t = 1.0;
  std::string precision = "double";
  std::size_t runs = 3;     // bench only
  unsigned threads = 1;     // run only: seeds in parallel
  std::size_t max_nodes = 600;  // hyperbolicity cap

  std::string out;

  // Checks values and that referenced files exist. Throws UsageError.
  void validate(bool bench) const;

  layers::Task task_kind() const { return layers::parse_task(task); }
  layers::LayerKind model_kind() const { return layers::parse_layer_kind(model); }
  numkit::PrecisionMode precision_mode() const { return numkit::parse_precision(precision); }
  graphcore::SplitRatios split_ratios() const { return {ratios.at(0), ratios.at(1), ratios.at(2)}; }
  layers::ModelConfig model_config(layers::LayerKind kind) const;

  nlohmann::ordered_json to_json(bool bench) const;
};

// Node-level input: a single graph with features (and labels for nc).
graphcore::Graph load_graph(const ExperimentConfig& cfg);

// Graph-level input for gr: synthetic "collection:<count>,<seed>".
graphcore::GraphCollection load_collection(const ExperimentConfig& cfg);

// Graph without features, for structural commands.
graphcore::Graph load_structure(const ExperimentConfig& cfg);

// Parses a key=value file ('#' comments) into "--key=value" arguments.
// Throws UsageError if the file cannot be read or a line is malformed.
std::vector<std::string> config_file_args(const std::filesystem::path& path);

}  // namespace shgcn::cli
