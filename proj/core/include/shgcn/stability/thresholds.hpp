#pragma once

#include <string>
#include <vector>

#include "shgcn/hypgeo/poincare.hpp"
#include "shgcn/numkit/precision.hpp"

namespace shgcn::stability {

using numkit::PrecisionMode;

struct ThresholdReport {
  PrecisionMode mode = PrecisionMode::Double;
  double epsilon = 0.0;
  int max_k = 0;
  double representable_radius = 0.0;
  // Empirical: smallest |v| at which log0(exp0(v)) breaks down.
  double collapse_threshold = 0.0;
  // artanh(sqrt((cosh r0 - 1)/(cosh r0 + 1))) for r0 = representable_radius.
  double analytic_threshold = 0.0;
};

// Smallest power of two p with round(1 + p) > 1.
double measure_epsilon(PrecisionMode mode);

// First decimal exponent k whose offset 10^-k from 1 drops below the
// format's machine epsilon, i.e. the k at which 1 - 10^-k is absorbed into 1.
int max_boundary_k(PrecisionMode mode);

// ln(10) k + ln(2) with k = max_boundary_k(mode): the largest distance from
// the origin a point 1 - 10^-k away from the boundary can carry.
double representable_radius(PrecisionMode mode);

// artanh(sqrt((cosh r0 - 1)/(cosh r0 + 1))), which simplifies to r0 / 2.
double analytic_threshold(double radius);

// |log0(exp0(v)) - v| / max(1, |v|) with every forward op rounded to mode.
// When exp0(v) rounds onto the boundary, log0 is undefined and the tangent
// vector is considered lost: the residual is reported as 1.
double roundtrip_residual(const hypgeo::TangentVector& v, PrecisionMode mode);

// Collapse criterion: exp0(v) rounds onto/over the boundary, or the relative
// round-trip error reaches 0.5.
bool collapses(const hypgeo::TangentVector& v, PrecisionMode mode);

struct SearchOptions {
  double lo = 0.1;
  double hi = 64.0;
  double resolution = 1e-3;
};

// Binary search (double control flow, forward ops in mode, c = 1) along the
// given direction for the smallest |v| that collapses. The direction is
// normalised; the default is the first axis of R^2.
double collapse_threshold(PrecisionMode mode, const std::vector<double>& direction = {1.0, 0.0},
                          const SearchOptions& options = {});

ThresholdReport threshold_report(PrecisionMode mode);

// Half, Single, Double in that order. Modes are probed concurrently.
std::vector<ThresholdReport> threshold_table();

// Header: mode,epsilon,max_k,radius,threshold
std::string to_csv(const std::vector<ThresholdReport>& table);
std::string to_text(const std::vector<ThresholdReport>& table);

std::string format_name(PrecisionMode mode);

}  // namespace shgcn::stability
