#include "altroute/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "altroute/errors.hpp"

namespace altroute {

PiecewiseMinimum minimize_piecewise_quadratic(double lo, double hi, std::vector<double> breakpoints,
                                              const std::function<Quadratic(double, double)>& piece,
                                              const std::function<double(double)>& value,
                                              double eps_tie) {
  if (!(lo <= hi)) throw ConfigError("empty minimization interval");
  std::vector<double> knots{lo};
  std::sort(breakpoints.begin(), breakpoints.end());
  for (double b : breakpoints) {
    if (std::isfinite(b) && b > lo && b < hi && b > knots.back()) knots.push_back(b);
  }
  if (hi > knots.back()) knots.push_back(hi);

  std::vector<double> cand = knots;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double u = knots[k];
    const double v = knots[k + 1];
    const Quadratic q = piece(u, v);
    // Only convex pieces have an interior minimizer; linear and concave
    // pieces attain their minimum at an endpoint.
    if (q.a > 0.0) {
      const double vertex = -q.b / (2.0 * q.a);
      if (vertex > u && vertex < v) cand.push_back(vertex);
    }
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  std::vector<double> vals;
  vals.reserve(cand.size());
  double best = std::numeric_limits<double>::infinity();
  for (double x : cand) {
    vals.push_back(value(x));
    best = std::min(best, vals.back());
  }

  PiecewiseMinimum out;
  out.value = best;
  for (std::size_t k = 0; k < cand.size(); ++k) {
    if (vals[k] <= best + eps_tie) out.ties.push_back(cand[k]);
  }
  out.argmin = out.ties.back();
  out.value = value(out.argmin);
  out.candidates = std::move(cand);
  return out;
}

}  // namespace altroute
