#include "shgcn/numkit/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "shgcn/error.hpp"

namespace shgcn::numkit {

Matrix finite_diff_grad(const ScalarFn& f, const Matrix& x, double h) {
  if (!(h > 0.0)) throw ContractError("finite_diff_grad: step must be positive");
  const Matrix base = x.with_mode(PrecisionMode::Double);
  std::vector<double> work(base.data().begin(), base.data().end());
  std::vector<double> out(work.size());
  for (std::size_t i = 0; i < work.size(); ++i) {
    const double orig = work[i];
    work[i] = orig + h;
    const double fp = f(Matrix(base.rows(), base.cols(), work));
    work[i] = orig - h;
    const double fm = f(Matrix(base.rows(), base.cols(), work));
    work[i] = orig;
    out[i] = (fp - fm) / (2.0 * h);
  }
  return Matrix(base.rows(), base.cols(), std::move(out));
}

double max_relative_error(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) throw ShapeError("max_relative_error: shape mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ref = b.data()[i];
    worst = std::max(worst, std::fabs(a.data()[i] - ref) / std::max(1.0, std::fabs(ref)));
  }
  return worst;
}

}  // namespace shgcn::numkit
