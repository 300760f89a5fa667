#pragma once

#include <functional>
#include <vector>

namespace altroute {

/// a*x^2 + b*x + c
struct Quadratic {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double operator()(double x) const { return (a * x + b) * x + c; }
};

struct PiecewiseMinimum {
  double argmin = 0.0;
  double value = 0.0;
  /// Candidates whose value is within the tie tolerance of the minimum, ascending.
  std::vector<double> ties;
  /// Every candidate examined, ascending.
  std::vector<double> candidates;
};

/// Global minimum of a continuous piecewise-quadratic function on [lo, hi].
///
/// `breakpoints` are the points where the quadratic changes (values outside
/// (lo, hi) are ignored). `piece(u, v)` returns the quadratic valid on [u, v];
/// `value(x)` evaluates the function directly and is used to rank candidates
/// (endpoints, breakpoints and each piece's interior vertex). Ties within
/// `eps_tie` resolve to the largest argument.
PiecewiseMinimum minimize_piecewise_quadratic(double lo, double hi, std::vector<double> breakpoints,
                                              const std::function<Quadratic(double, double)>& piece,
                                              const std::function<double(double)>& value,
                                              double eps_tie);

}  // namespace altroute
