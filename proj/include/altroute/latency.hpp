#pragma once

#include <variant>
#include <vector>

namespace altroute {

/// T(x) = a*x + b with a, b >= 0.
struct Affine {
  double a = 0.0;
  double b = 0.0;
  friend bool operator==(const Affine&, const Affine&) = default;
};

/// T(x) = max(offset, (height/width)*(x - knee) + height).
///
/// Flat at `offset` below the kink, then rises with slope height/width; it
/// reaches `height` at x = knee. In the load-balancing examples the knee sits
/// at the per-player demand and the kink at knee - width.
struct Elbow {
  double height = 0.0;  // latency at the knee
  double width = 0.0;   // flow span from the floor (offset 0) up to the knee
  double knee = 0.0;
  double offset = 0.0;
  double slope() const { return height / width; }
  friend bool operator==(const Elbow&, const Elbow&) = default;
};

/// Affine piece `intercept + slope*x` of a piecewise-linear latency.
struct LinearPiece {
  double intercept = 0.0;
  double slope = 0.0;
  double operator()(double x) const { return intercept + slope * x; }
};

/// Per-link latency function. Immutable value type; parameters are validated
/// on construction.
class LatencyFn {
 public:
  static LatencyFn affine(double a, double b);
  static LatencyFn elbow(double height, double width, double knee, double offset = 0.0);

  bool is_affine() const { return std::holds_alternative<Affine>(fn_); }
  bool is_elbow() const { return std::holds_alternative<Elbow>(fn_); }
  const Affine& as_affine() const { return std::get<Affine>(fn_); }
  const Elbow& as_elbow() const { return std::get<Elbow>(fn_); }

  /// Latency at total flow x; throws DomainError for x < 0.
  double operator()(double x) const;

  /// Flows where the function is not differentiable, ascending.
  std::vector<double> kink_points() const;

  /// Linear piece active on [x, x + eps) for small eps.
  LinearPiece piece_at(double x) const;

  double right_derivative(double x) const { return piece_at(x).slope; }
  double left_derivative(double x) const;

  /// Integral of T over [0, x]; the per-link term of the Beckmann potential.
  double integral(double x) const;

  friend bool operator==(const LatencyFn&, const LatencyFn&) = default;

 private:
  explicit LatencyFn(std::variant<Affine, Elbow> fn) : fn_(fn) {}
  double elbow_kink() const;

  std::variant<Affine, Elbow> fn_;
};

double eval_latency(const LatencyFn& f, double x);
std::vector<double> kink_points(const LatencyFn& f);

}  // namespace altroute
