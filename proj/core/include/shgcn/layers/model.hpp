#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "shgcn/graphcore/adjacency.hpp"
#include "shgcn/layers/layer_ops.hpp"
#include "shgcn/layers/params.hpp"
#include "shgcn/numkit/random.hpp"
#include "shgcn/numkit/tape.hpp"

namespace shgcn::layers {

struct Parameter {
  std::string name;
  numkit::Matrix value;  // always held in Double
  bool trainable = true;
};

// Encoder stack plus the task head. Parameters live in a flat list so the
// optimizer can treat them uniformly; bind() places them on a tape.
//
// Layout: layer{l}.W (d_out x d_in), layer{l}.b (1 x d_out), layer{l}.theta_c
// (1 x 1, hyperbolic kinds only); NC adds head.W (k x d), head.b (1 x k);
// GR adds readout.W1 (d x d), readout.b1, readout.W2 (1 x d), readout.b2.
class Model {
 public:
  // Weights ~ uniform(-1/sqrt(d_in), 1/sqrt(d_in)) from `seed`, biases 0,
  // theta_c chosen so every layer starts at init_curvature.
  Model(const ModelConfig& config, Task task, std::size_t in_dim, std::size_t num_classes, std::uint64_t seed);

  const ModelConfig& config() const noexcept { return config_; }
  Task task() const noexcept { return task_; }
  std::size_t in_dim() const noexcept { return in_dim_; }
  std::size_t embedding_dim() const noexcept { return config_.hidden_dim; }

  std::vector<Parameter>& parameters() noexcept { return params_; }
  const std::vector<Parameter>& parameters() const noexcept { return params_; }
  const Parameter& parameter(std::string_view name) const;

  LayerParams layer(std::size_t l) const;
  std::vector<double> curvatures() const;

  // Tape handles for every parameter, index-aligned with parameters().
  std::vector<Var> bind(numkit::Tape& tape) const;

  // Euclidean node embeddings (n x hidden_dim). Hyperbolic-output kinds are
  // decoded with log0 at the last curvature. `dropout_rng` enables dropout
  // on layer weights when config().dropout > 0.
  Var encode(std::span<const Var> bound, Var X, const graphcore::NormalizedAdjacency& adj,
             numkit::Rng* dropout_rng = nullptr) const;

  Var classify(std::span<const Var> bound, Var embeddings) const;
  Var regress(std::span<const Var> bound, Var pooled) const;

 private:
  std::size_t index_of(std::string_view name) const;

  ModelConfig config_;
  Task task_;
  std::size_t in_dim_;
  std::vector<Parameter> params_;
};

}  // namespace shgcn::layers
