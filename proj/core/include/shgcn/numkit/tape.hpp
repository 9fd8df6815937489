#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "shgcn/numkit/matrix.hpp"

namespace shgcn::numkit {

class Tape;

// Handle to a node recorded on a Tape. Cheap to copy; only valid while the
// owning tape is alive.
class Var {
 public:
  Var() = default;

  bool valid() const noexcept { return tape_ != nullptr; }
  std::size_t id() const noexcept { return id_; }
  Tape& tape() const noexcept { return *tape_; }
  const Matrix& value() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

// Arguments handed to a node's local-gradient rule. grad_out has the shape of
// the node's value; parent_grads[i] is null when parent i does not need a
// gradient. Rules accumulate (+=) into the parent buffers.
struct BackwardArgs {
  const Tape& tape;
  std::span<const double> grad_out;
  std::span<std::vector<double>* const> parent_grads;
};

using BackwardFn = std::function<void(const BackwardArgs&)>;

// Dynamic reverse-mode tape. Node ids are assigned in recording order, which
// is a topological order because parents must already exist. Forward values
// are rounded to the tape's precision mode; gradients are always accumulated
// in double. One tape belongs to one thread.
class Tape {
 public:
  explicit Tape(PrecisionMode mode = PrecisionMode::Double) : mode_(mode) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  PrecisionMode mode() const noexcept { return mode_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  Var constant(Matrix value);
  Var parameter(Matrix value);
  Var record(Matrix value, std::span<const Var> parents, std::string_view rule, BackwardFn backward);

  const Matrix& value(Var v) const;
  const Matrix& value(std::size_t id) const { return nodes_[id].value; }
  std::string_view rule(Var v) const { return nodes_.at(v.id()).rule; }
  std::span<const std::size_t> parents(Var v) const { return nodes_.at(v.id()).parents; }
  bool requires_grad(Var v) const { return nodes_.at(v.id()).requires_grad; }

  // Reverse accumulation of d(root)/d(node) into every node reachable from
  // root. Throws ContractError when root is not 1x1.
  void backward(Var root);

  // Gradient buffer of v as a double-mode matrix of v's shape. Zero for
  // nodes the last backward() did not reach.
  Matrix grad(Var v) const;

 private:
  struct Node {
    Matrix value;
    std::vector<std::size_t> parents;
    std::string_view rule;
    BackwardFn backward;
    bool requires_grad = false;
  };

  Var push(Node node);

  PrecisionMode mode_;
  std::vector<Node> nodes_;
  std::vector<std::vector<double>> grads_;
};

}  // namespace shgcn::numkit
