#include "shgcn/layers/model.hpp"

#include <cmath>

#include "shgcn/error.hpp"
#include "shgcn/hypgeo/poincare.hpp"
#include "shgcn/hypgeo/tape_ops.hpp"
#include "shgcn/layers/decoders.hpp"
#include "shgcn/numkit/ops.hpp"

namespace shgcn::layers {
namespace {

namespace nk = numkit::ops;

numkit::Matrix uniform_init(std::size_t rows, std::size_t cols, numkit::Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(cols));
  std::vector<double> data(rows * cols);
  for (double& v : data) v = rng.uniform(-bound, bound);
  return numkit::Matrix(rows, cols, std::move(data));
}

std::string layer_name(std::size_t l, const char* field) { return "layer" + std::to_string(l) + "." + field; }

Var dropout(Var W, double p, numkit::Rng& rng) {
  std::vector<double> mask(W.value().size());
  for (double& m : mask) m = rng.uniform() < p ? 0.0 : 1.0 / (1.0 - p);
  return nk::mul(W, W.tape().constant(numkit::Matrix(W.rows(), W.cols(), std::move(mask))));
}

}  // namespace

Model::Model(const ModelConfig& config, Task task, std::size_t in_dim, std::size_t num_classes, std::uint64_t seed)
    : config_(config), task_(task), in_dim_(in_dim) {
  config_.validate();
  if (in_dim == 0) throw ContractError("Model: input dimension must be positive");
  if (task == Task::NodeClassification && num_classes < 2) throw ContractError("Model: need at least two classes");

  numkit::Rng rng(seed);
  const double theta = theta_for_curvature(config_.init_curvature);
  const bool hyperbolic = is_hyperbolic(config_.layer_kind);
  std::size_t d_in = in_dim;
  for (std::size_t l = 0; l < config_.num_layers; ++l) {
    const std::size_t d_out = config_.hidden_dim;
    params_.push_back({layer_name(l, "W"), uniform_init(d_out, d_in, rng)});
    params_.push_back({layer_name(l, "b"), numkit::Matrix(1, d_out)});
    if (hyperbolic) {
      params_.push_back({layer_name(l, "theta_c"), numkit::Matrix::scalar(theta), config_.trainable_curvature});
    }
    d_in = d_out;
  }
  const std::size_t d = config_.hidden_dim;
  if (task == Task::NodeClassification) {
    params_.push_back({"head.W", uniform_init(num_classes, d, rng)});
    params_.push_back({"head.b", numkit::Matrix(1, num_classes)});
  } else if (task == Task::GraphRegression) {
    params_.push_back({"readout.W1", uniform_init(d, d, rng)});
    params_.push_back({"readout.b1", numkit::Matrix(1, d)});
    params_.push_back({"readout.W2", uniform_init(1, d, rng)});
    params_.push_back({"readout.b2", numkit::Matrix(1, 1)});
  }
}

std::size_t Model::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < params_.size(); ++i)
    if (params_[i].name == name) return i;
  throw ContractError("Model: no parameter named '" + std::string(name) + "'");
}

const Parameter& Model::parameter(std::string_view name) const { return params_[index_of(name)]; }

LayerParams Model::layer(std::size_t l) const {
  if (l >= config_.num_layers) throw ContractError("Model::layer: index out of range");
  LayerParams p{parameter(layer_name(l, "W")).value, parameter(layer_name(l, "b")).value, 0.0};
  if (is_hyperbolic(config_.layer_kind)) p.theta_c = parameter(layer_name(l, "theta_c")).value.item();
  return p;
}

std::vector<double> Model::curvatures() const {
  std::vector<double> out;
  if (!is_hyperbolic(config_.layer_kind)) return out;
  for (std::size_t l = 0; l < config_.num_layers; ++l) out.push_back(layer(l).curvature());
  return out;
}

std::vector<Var> Model::bind(numkit::Tape& tape) const {
  std::vector<Var> out;
  out.reserve(params_.size());
  for (const auto& p : params_) out.push_back(p.trainable ? tape.parameter(p.value) : tape.constant(p.value));
  return out;
}

Var Model::encode(std::span<const Var> bound, Var X, const graphcore::NormalizedAdjacency& adj,
                  numkit::Rng* dropout_rng) const {
  if (bound.size() != params_.size()) throw ContractError("Model::encode: bound parameter count mismatch");
  if (X.cols() != in_dim_) {
    throw ShapeError("Model::encode: features have " + std::to_string(X.cols()) + " columns, model expects " +
                     std::to_string(in_dim_));
  }
  const std::size_t L = config_.num_layers;
  const bool hyperbolic = is_hyperbolic(config_.layer_kind);
  const std::size_t stride = hyperbolic ? 3 : 2;

  std::vector<LayerVars> vars(L);
  for (std::size_t l = 0; l < L; ++l) {
    Var W = bound[l * stride];
    if (dropout_rng && config_.dropout > 0.0) W = dropout(W, config_.dropout, *dropout_rng);
    vars[l].W = W;
    vars[l].b = bound[l * stride + 1];
    if (hyperbolic) vars[l].c = curvature(bound[l * stride + 2]);
  }
  auto act = [&](std::size_t l) { return l + 1 == L ? Activation::Identity : config_.activation; };

  Var H = X;
  switch (config_.layer_kind) {
    case LayerKind::GCN:
      for (std::size_t l = 0; l < L; ++l) H = gcn_layer(H, adj, vars[l].W, vars[l].b, act(l));
      return H;
    case LayerKind::SHGCN:
      for (std::size_t l = 0; l < L; ++l) H = shgcn_layer(H, adj, vars[l], act(l));
      return H;
    case LayerKind::HGCN_AGG0: {
      // Layer l reads the ball of its own curvature and writes the ball of
      // the next layer's; the last layer writes its own.
      const double eps = hypgeo::default_projection_eps(X.tape().mode());
      H = hypgeo::ops::project(hypgeo::ops::exp0(X, vars[0].c), vars[0].c, eps);
      for (std::size_t l = 0; l < L; ++l) {
        const Var c_out = l + 1 < L ? vars[l + 1].c : vars[l].c;
        H = hgcn_agg0_layer(H, adj, vars[l], c_out, act(l));
      }
      return hypgeo::ops::log0(H, vars[L - 1].c);
    }
  }
  return H;
}

Var Model::classify(std::span<const Var> bound, Var embeddings) const {
  if (task_ != Task::NodeClassification) throw ContractError("Model::classify: model has no classification head");
  return nc_head(embeddings, bound[index_of("head.W")], bound[index_of("head.b")]);
}

Var Model::regress(std::span<const Var> bound, Var pooled) const {
  if (task_ != Task::GraphRegression) throw ContractError("Model::regress: model has no readout");
  return readout(pooled, bound[index_of("readout.W1")], bound[index_of("readout.b1")], bound[index_of("readout.W2")],
                 bound[index_of("readout.b2")]);
}

}  // namespace shgcn::layers
