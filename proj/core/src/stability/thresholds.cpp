#include "shgcn/stability/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <numbers>
#include <sstream>

#include "shgcn/error.hpp"
#include "shgcn/hypgeo/kernels.hpp"

namespace shgcn::stability {

using numkit::round_to_precision;

namespace {

constexpr double kProbeCurvature = 1.0;

struct RoundTrip {
  bool on_boundary = false;
  double residual = 0.0;
};

RoundTrip round_trip(const hypgeo::TangentVector& v, PrecisionMode mode) {
  hypgeo::TangentVector vr{v.coords, v.c};
  for (double& e : vr.coords) e = round_to_precision(e, mode);
  const hypgeo::PoincarePoint x = hypgeo::exp0(vr, mode);
  if (!(hypgeo::kernels::scaled_norm(x.coords, x.c, mode) < 1.0)) return {true, 1.0};
  const hypgeo::TangentVector back = hypgeo::log0(x, mode);
  double err = 0.0;
  for (std::size_t i = 0; i < v.coords.size(); ++i) {
    const double diff = back.coords[i] - v.coords[i];
    err += diff * diff;
  }
  const double scale = std::max(1.0, hypgeo::kernels::norm(v.coords));
  return {false, std::sqrt(err) / scale};
}

}  // namespace

double measure_epsilon(PrecisionMode mode) {
  double p = 1.0;
  while (round_to_precision(1.0 + p / 2.0, mode) > 1.0) p /= 2.0;
  return p;
}

int max_boundary_k(PrecisionMode mode) {
  const double eps = measure_epsilon(mode);
  int k = 1;
  while (std::pow(10.0, -k) >= eps) ++k;
  return k;
}

double representable_radius(PrecisionMode mode) {
  return std::numbers::ln10 * max_boundary_k(mode) + std::numbers::ln2;
}

double analytic_threshold(double radius) {
  const double ch = std::cosh(radius);
  return std::atanh(std::sqrt((ch - 1.0) / (ch + 1.0)));
}

double roundtrip_residual(const hypgeo::TangentVector& v, PrecisionMode mode) {
  for (double e : v.coords)
    if (!std::isfinite(e)) throw ContractError("roundtrip_residual: non-finite tangent vector");
  return round_trip(v, mode).residual;
}

bool collapses(const hypgeo::TangentVector& v, PrecisionMode mode) {
  const RoundTrip rt = round_trip(v, mode);
  return rt.on_boundary || rt.residual >= 0.5;
}

double collapse_threshold(PrecisionMode mode, const std::vector<double>& direction, const SearchOptions& options) {
  const double n = hypgeo::kernels::norm(direction);
  if (!(n > 0.0)) throw ContractError("collapse_threshold: direction must be non-zero");
  auto at = [&](double radius) {
    hypgeo::TangentVector v{direction, kProbeCurvature};
    for (double& e : v.coords) e *= radius / n;
    return v;
  };
  double lo = options.lo;
  double hi = options.hi;
  if (collapses(at(lo), mode)) return lo;
  if (!collapses(at(hi), mode)) return hi;
  while (hi - lo > options.resolution) {
    const double mid = 0.5 * (lo + hi);
    if (collapses(at(mid), mode)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

ThresholdReport threshold_report(PrecisionMode mode) {
  ThresholdReport r;
  r.mode = mode;
  r.epsilon = measure_epsilon(mode);
  r.max_k = max_boundary_k(mode);
  r.representable_radius = representable_radius(mode);
  r.collapse_threshold = collapse_threshold(mode);
  r.analytic_threshold = analytic_threshold(r.representable_radius);
  return r;
}

std::vector<ThresholdReport> threshold_table() {
  const PrecisionMode modes[] = {PrecisionMode::Half, PrecisionMode::Single, PrecisionMode::Double};
  std::vector<std::future<ThresholdReport>> jobs;
  for (PrecisionMode m : modes) jobs.push_back(std::async(std::launch::async, threshold_report, m));
  std::vector<ThresholdReport> table;
  for (auto& j : jobs) table.push_back(j.get());
  return table;
}

std::string format_name(PrecisionMode mode) {
  switch (mode) {
    case PrecisionMode::Half: return "float16";
    case PrecisionMode::Single: return "float32";
    case PrecisionMode::Double: return "float64";
  }
  return "float64";
}

std::string to_csv(const std::vector<ThresholdReport>& table) {
  std::ostringstream out;
  out << "mode,epsilon,max_k,radius,threshold\n";
  char line[160];
  for (const auto& r : table) {
    std::snprintf(line, sizeof line, "%s,%.10g,%d,%.4f,%.3f\n", format_name(r.mode).c_str(), r.epsilon, r.max_k,
                  r.representable_radius, r.collapse_threshold);
    out << line;
  }
  return out.str();
}

std::string to_text(const std::vector<ThresholdReport>& table) {
  std::ostringstream out;
  char line[200];
  std::snprintf(line, sizeof line, "%-24s %12s %6s %10s %12s %12s\n", "Floating-Point Precision", "epsilon", "max k",
                "radius r0", "Threshold t", "r0/2 bound");
  out << line;
  out << std::string(81, '-') << '\n';
  for (const auto& r : table) {
    std::snprintf(line, sizeof line, "%-24s %12.5g %6d %10.4f %12.3f %12.3f\n", format_name(r.mode).c_str(),
                  r.epsilon, r.max_k, r.representable_radius, r.collapse_threshold, r.analytic_threshold);
    out << line;
  }
  return out.str();
}

}  // namespace shgcn::stability
