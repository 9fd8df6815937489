#pragma once

#include <filesystem>
#include <string>

#include "config.hpp"
#include "json.hpp"

namespace shgcn::cli {

struct CommandOutput {
  nlohmann::ordered_json report;
  std::string text;
  std::string csv;  // stability only
};

// Trains one model per seed and summarises test metrics and epoch timing.
CommandOutput cmd_run(const ExperimentConfig& cfg);

// Times every model in cfg.models on the same graph, split and seeds. The
// first model is the subject; speedup = baseline mean epoch time / subject
// mean epoch time. Runs are sequential and skip validation.
CommandOutput cmd_bench(const ExperimentConfig& cfg);

CommandOutput cmd_stability();

CommandOutput cmd_hyperbolicity(const ExperimentConfig& cfg);

// Writes report.json, report.txt and (if present) thresholds.csv into dir.
void write_outputs(const std::filesystem::path& dir, const CommandOutput& output);

}  // namespace shgcn::cli
