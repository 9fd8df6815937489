#include "shgcn/numkit/tape.hpp"

#include <string>

#include "shgcn/error.hpp"

namespace shgcn::numkit {

const Matrix& Var::value() const {
  if (tape_ == nullptr) throw ContractError("Var::value on an unbound variable");
  return tape_->value(*this);
}

Var Tape::push(Node node) {
  if (node.value.mode() != mode_) node.value = node.value.with_mode(mode_);
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Var Tape::constant(Matrix value) {
  Node node;
  node.value = std::move(value);
  node.rule = "constant";
  return push(std::move(node));
}

Var Tape::parameter(Matrix value) {
  Node node;
  node.value = std::move(value);
  node.rule = "parameter";
  node.requires_grad = true;
  return push(std::move(node));
}

Var Tape::record(Matrix value, std::span<const Var> parents, std::string_view rule,
                 BackwardFn backward) {
  Node node;
  node.value = std::move(value);
  node.rule = rule;
  node.parents.reserve(parents.size());
  for (const Var& p : parents) {
    if (&p.tape() != this) throw ContractError("Tape::record: parent belongs to another tape");
    node.parents.push_back(p.id());
    node.requires_grad = node.requires_grad || nodes_[p.id()].requires_grad;
  }
  if (node.requires_grad) node.backward = std::move(backward);
  return push(std::move(node));
}

const Matrix& Tape::value(Var v) const {
  if (v.id() >= nodes_.size()) throw ContractError("Tape::value: unknown node");
  return nodes_[v.id()].value;
}

void Tape::backward(Var root) {
  const Node& r = nodes_.at(root.id());
  if (r.value.rows() != 1 || r.value.cols() != 1) {
    throw ContractError("Tape::backward: root must be scalar, got " +
                        std::to_string(r.value.rows()) + "x" + std::to_string(r.value.cols()));
  }
  grads_.assign(nodes_.size(), {});
  grads_[root.id()].assign(1, 1.0);

  std::vector<std::vector<double>*> slots;
  for (std::size_t id = root.id() + 1; id-- > 0;) {
    Node& node = nodes_[id];
    if (grads_[id].empty() || !node.backward) continue;
    slots.assign(node.parents.size(), nullptr);
    for (std::size_t k = 0; k < node.parents.size(); ++k) {
      const std::size_t pid = node.parents[k];
      if (!nodes_[pid].requires_grad) continue;
      if (grads_[pid].empty()) grads_[pid].assign(nodes_[pid].value.size(), 0.0);
      slots[k] = &grads_[pid];
    }
    node.backward(BackwardArgs{*this, grads_[id], slots});
  }
}

Matrix Tape::grad(Var v) const {
  const Node& node = nodes_.at(v.id());
  if (v.id() < grads_.size() && !grads_[v.id()].empty()) {
    return Matrix(node.value.rows(), node.value.cols(), grads_[v.id()]);
  }
  return Matrix(node.value.rows(), node.value.cols());
}

}  // namespace shgcn::numkit
