#include "altroute/doc_matrix.hpp"

#include <cmath>
#include <string>

#include "altroute/errors.hpp"

namespace altroute {

namespace {
constexpr double kSimplexTolerance = 1e-12;
}

DocMatrix::DocMatrix(std::vector<std::vector<double>> rows) : rows_(std::move(rows)) {
  const std::size_t n = rows_.size();
  if (n == 0) throw StructuralError("degree-of-cooperation matrix is empty");
  for (std::size_t i = 0; i < n; ++i) {
    if (rows_[i].size() != n) throw StructuralError("degree-of-cooperation matrix must be square");
    double sum = 0.0;
    for (double a : rows_[i]) {
      if (!(std::isfinite(a) && a >= 0.0)) {
        throw DomainError("degree of cooperation must be >= 0 (row " + std::to_string(i) + ")");
      }
      sum += a;
    }
    if (std::abs(sum - 1.0) > kSimplexTolerance) {
      throw DomainError("degree-of-cooperation row " + std::to_string(i) + " sums to " +
                        std::to_string(sum) + ", not 1");
    }
  }
}

DocMatrix DocMatrix::selfish(int n) {
  if (n < 1) throw StructuralError("need at least one player");
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(n),
                                        std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
  return DocMatrix(std::move(rows));
}

DocMatrix DocMatrix::altruistic(int n, int altruist, double beta) {
  if (n < 2) throw StructuralError("altruism needs at least two players");
  if (altruist < 0 || altruist >= n) throw StructuralError("altruist index out of range");
  if (!(beta >= 0.0 && beta <= 1.0)) throw DomainError("beta must lie in [0, 1]");
  auto rows = selfish(n).rows_;
  auto& row = rows[static_cast<std::size_t>(altruist)];
  for (int k = 0; k < n; ++k) {
    row[static_cast<std::size_t>(k)] = k == altruist ? 1.0 - beta : beta / (n - 1);
  }
  return DocMatrix(std::move(rows));
}

DocMatrix DocMatrix::equally_cooperative(int n) {
  if (n < 1) throw StructuralError("need at least one player");
  return DocMatrix(std::vector<std::vector<double>>(
      static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 1.0 / n)));
}

bool DocMatrix::is_selfish() const {
  for (int i = 0; i < size(); ++i) {
    for (int k = 0; k < size(); ++k) {
      if ((*this)(i, k) != (i == k ? 1.0 : 0.0)) return false;
    }
  }
  return true;
}

double DocMatrix::apply_row(int i, std::span<const double> actual) const {
  if (static_cast<int>(actual.size()) != size()) throw StructuralError("cost vector size mismatch");
  double s = 0.0;
  for (int k = 0; k < size(); ++k) s += (*this)(i, k) * actual[static_cast<std::size_t>(k)];
  return s;
}

std::vector<double> DocMatrix::apply(std::span<const double> actual) const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (int i = 0; i < size(); ++i) out.push_back(apply_row(i, actual));
  return out;
}

}  // namespace altroute
