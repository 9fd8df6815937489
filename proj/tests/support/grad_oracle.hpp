#pragma once

#include <functional>
#include <string>
#include <vector>

#include "shgcn/numkit/gradcheck.hpp"
#include "shgcn/numkit/tape.hpp"

namespace shgcn::oracle {

using ScalarGraph = std::function<numkit::Var(numkit::Tape&, const std::vector<numkit::Var>&)>;

struct GradReport {
  std::string worst_input;
  double worst_error = 0.0;
};

// Tape gradient of f w.r.t. each input vs central differences, where f is
// re-evaluated on a fresh constant-only tape for every probe.
inline GradReport check_gradients(const ScalarGraph& f, const std::vector<numkit::Matrix>& inputs,
                                  const std::vector<std::string>& names) {
  numkit::Tape tape;
  std::vector<numkit::Var> vars;
  for (const auto& m : inputs) vars.push_back(tape.parameter(m));
  tape.backward(f(tape, vars));
  GradReport report;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const numkit::Matrix fd = numkit::finite_diff_grad(
        [&](const numkit::Matrix& probe) {
          numkit::Tape t;
          std::vector<numkit::Var> vs;
          for (std::size_t j = 0; j < inputs.size(); ++j) vs.push_back(t.constant(j == k ? probe : inputs[j]));
          return f(t, vs).value().item();
        },
        inputs[k]);
    const double err = numkit::max_relative_error(tape.grad(vars[k]), fd);
    if (err >= report.worst_error) {
      report.worst_error = err;
      report.worst_input = names[k];
    }
  }
  return report;
}

}  // namespace shgcn::oracle
