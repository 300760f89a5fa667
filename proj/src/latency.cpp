#include "altroute/latency.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "altroute/errors.hpp"

namespace altroute {

namespace {

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }
bool finite_pos(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

LatencyFn LatencyFn::affine(double a, double b) {
  if (!finite_nonneg(a) || !finite_nonneg(b)) {
    throw DomainError("affine latency requires a >= 0 and b >= 0 (got a=" + std::to_string(a) +
                      ", b=" + std::to_string(b) + ")");
  }
  return LatencyFn(Affine{a, b});
}

LatencyFn LatencyFn::elbow(double height, double width, double knee, double offset) {
  if (!finite_pos(height)) throw DomainError("elbow latency requires height L > 0");
  if (!finite_pos(width)) throw DomainError("elbow latency requires width delta > 0");
  if (!finite_pos(knee)) throw DomainError("elbow latency requires knee r > 0");
  if (!finite_nonneg(offset)) throw DomainError("elbow latency requires offset >= 0");
  return LatencyFn(Elbow{height, width, knee, offset});
}

double LatencyFn::elbow_kink() const {
  const auto& e = as_elbow();
  return e.knee - e.width * ((e.height - e.offset) / e.height);
}

double LatencyFn::operator()(double x) const {
  if (!(x >= 0.0)) throw DomainError("latency evaluated at negative flow " + std::to_string(x));
  if (const auto* a = std::get_if<Affine>(&fn_)) return a->a * x + a->b;
  const auto& e = as_elbow();
  return std::max(e.offset, e.slope() * (x - e.knee) + e.height);
}

std::vector<double> LatencyFn::kink_points() const {
  if (is_affine()) return {};
  return {std::max(0.0, elbow_kink())};
}

LinearPiece LatencyFn::piece_at(double x) const {
  if (const auto* a = std::get_if<Affine>(&fn_)) return {a->b, a->a};
  const auto& e = as_elbow();
  if (x < elbow_kink()) return {e.offset, 0.0};
  return {e.height - e.slope() * e.knee, e.slope()};
}

double LatencyFn::left_derivative(double x) const {
  if (const auto* a = std::get_if<Affine>(&fn_)) return a->a;
  return x <= elbow_kink() ? 0.0 : as_elbow().slope();
}

double LatencyFn::integral(double x) const {
  if (!(x >= 0.0)) throw DomainError("latency integral at negative flow " + std::to_string(x));
  if (const auto* a = std::get_if<Affine>(&fn_)) return 0.5 * a->a * x * x + a->b * x;
  const auto& e = as_elbow();
  const double k = std::max(0.0, elbow_kink());
  if (x <= k) return e.offset * x;
  const double s = e.slope();
  // line: height + s*(t - knee)
  const double line_part = e.height * (x - k) +
                           0.5 * s * ((x - e.knee) * (x - e.knee) - (k - e.knee) * (k - e.knee));
  return e.offset * k + line_part;
}

double eval_latency(const LatencyFn& f, double x) { return f(x); }

std::vector<double> kink_points(const LatencyFn& f) { return f.kink_points(); }

}  // namespace altroute
