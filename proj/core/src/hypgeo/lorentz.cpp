#include "shgcn/hypgeo/lorentz.hpp"

#include <cmath>
#include <string>

#include "shgcn/error.hpp"
#include "shgcn/hypgeo/kernels.hpp"

namespace shgcn::hypgeo {

using numkit::round_to_precision;

bool LorentzPoint::on_hyperboloid(double tol) const {
  if (coords.empty() || !(coords[0] > 0.0)) return false;
  return std::fabs(minkowski_dot(coords, coords) + K) <= tol * K;
}

double minkowski_dot(const std::vector<double>& x, const std::vector<double>& y, numkit::PrecisionMode mode) {
  if (x.size() != y.size() || x.empty()) throw ContractError("minkowski_dot: dimension mismatch");
  double s = -x[0] * y[0];
  for (std::size_t i = 1; i < x.size(); ++i) s += x[i] * y[i];
  return round_to_precision(s, mode);
}

LorentzPoint lorentz_origin(std::size_t d, double K) {
  if (!(K > 0.0)) throw ContractError("lorentz_origin: K must be positive");
  LorentzPoint o{std::vector<double>(d + 1, 0.0), K};
  o.coords[0] = std::sqrt(K);
  return o;
}

LorentzPoint lorentz_exp0(const std::vector<double>& v, double K, numkit::PrecisionMode mode) {
  if (!(K > 0.0)) throw ContractError("lorentz_exp0: K must be positive");
  for (double e : v)
    if (!std::isfinite(e)) throw ContractError("lorentz_exp0: non-finite tangent coordinate");
  const double sk = std::sqrt(K);
  const double n = round_to_precision(kernels::norm(v), mode);
  LorentzPoint out{std::vector<double>(v.size() + 1, 0.0), K};
  if (n == 0.0) {
    out.coords[0] = round_to_precision(sk, mode);
    return out;
  }
  const double theta = n / sk;
  out.coords[0] = round_to_precision(sk * std::cosh(theta), mode);
  const double s = sk * std::sinh(theta) / n;
  for (std::size_t i = 0; i < v.size(); ++i) out.coords[i + 1] = round_to_precision(s * v[i], mode);
  return out;
}

double lorentz_dist0(const LorentzPoint& x, numkit::PrecisionMode mode) {
  const LorentzPoint o = lorentz_origin(x.ambient_dim() - 1, x.K);
  const double a = round_to_precision(-minkowski_dot(o.coords, x.coords, mode) / x.K, mode);
  if (std::isinf(a)) return a;
  if (a < 1.0) {
    if (a < 1.0 - 1e-9) {
      throw DomainError("lorentz_dist0: arcosh argument " + std::to_string(a) + " below 1");
    }
    return 0.0;
  }
  const double am1 = round_to_precision(a - 1.0, mode);
  const double ap1 = round_to_precision(a + 1.0, mode);
  const double prod = round_to_precision(am1 * ap1, mode);
  const double root = round_to_precision(std::sqrt(prod), mode);
  const double sum = round_to_precision(a + root, mode);
  return round_to_precision(std::sqrt(x.K) * std::log(sum), mode);
}

}  // namespace shgcn::hypgeo
