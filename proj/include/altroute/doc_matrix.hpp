#pragma once

#include <span>
#include <vector>

namespace altroute {

/// Degree-of-cooperation weights. Row i is player i's weighting of every
/// player's actual cost; each row lies on the probability simplex.
class DocMatrix {
 public:
  /// Throws DomainError if a row has a negative entry or does not sum to 1
  /// within 1e-12, StructuralError if the matrix is not square.
  explicit DocMatrix(std::vector<std::vector<double>> rows);

  /// Every player selfish (identity).
  static DocMatrix selfish(int n);
  /// Player `altruist` puts weight 1 - beta on itself and beta spread evenly
  /// over the others; everyone else is selfish.
  static DocMatrix altruistic(int n, int altruist, double beta);
  static DocMatrix equally_cooperative(int n);

  int size() const { return static_cast<int>(rows_.size()); }
  double operator()(int i, int k) const {
    return rows_[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
  }
  std::span<const double> row(int i) const { return rows_[static_cast<std::size_t>(i)]; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }
  bool is_selfish() const;

  /// Row-wise weighted sums of `actual` (perceived = alpha * J).
  std::vector<double> apply(std::span<const double> actual) const;
  double apply_row(int i, std::span<const double> actual) const;

  friend bool operator==(const DocMatrix&, const DocMatrix&) = default;

 private:
  std::vector<std::vector<double>> rows_;
};

}  // namespace altroute
