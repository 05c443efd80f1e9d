#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "colline/error.hpp"
#include "colline/matrix.hpp"
#include "colline/scalar.hpp"
#include "colline/vector.hpp"

namespace colline {

/// Largest supported input/output dimension of a map.
inline constexpr std::size_t kMaxDim = 8;

namespace detail {

// Reduced row echelon form in place. Returns pivot column per pivot row.
inline std::vector<std::size_t> reduce_rows(std::vector<std::vector<Scalar>>& rows, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c].is_zero()) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    Scalar inv = rows[r][c].inverse();
    for (std::size_t k = c; k < cols; ++k) rows[r][k] *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c].is_zero()) continue;
      Scalar factor = rows[i][c];
      for (std::size_t k = c; k < cols; ++k) rows[i][k] -= factor * rows[r][k];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::vector<std::vector<Scalar>> to_rows(std::span<const Vector> vectors) {
  std::vector<std::vector<Scalar>> rows;
  rows.reserve(vectors.size());
  for (const auto& v : vectors) {
    if (v.dim() != vectors.front().dim()) throw DimensionError("vectors of different dimensions");
    rows.emplace_back(v.coords().begin(), v.coords().end());
  }
  return rows;
}

}  // namespace detail

/// Rank of the span of `vectors` (exact elimination).
inline std::size_t rank(std::span<const Vector> vectors) {
  if (vectors.empty()) return 0;
  auto rows = detail::to_rows(vectors);
  return detail::reduce_rows(rows, vectors.front().dim()).size();
}

inline std::size_t rank(const Matrix& m) {
  std::vector<Vector> rows;
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
  return rank(rows);
}

/// True iff no (alpha, beta) != (0, 0) gives alpha v + beta w = 0.
inline bool linearly_independent(const Vector& v, const Vector& w) {
  require_same_dim(v, w);
  const Vector pair[] = {v, w};
  return rank(pair) == 2;
}

/// Rank of {p_i - p_0}: 0 for a point, 1 for collinear points, 2 for a planar configuration, ...
inline std::size_t affine_rank(std::span<const Vector> points) {
  if (points.empty()) throw Error("affine_rank of an empty point set");
  std::vector<Vector> diffs;
  diffs.reserve(points.size());
  for (std::size_t i = 1; i < points.size(); ++i) {
    require_same_dim(points[i], points[0]);
    diffs.push_back(points[i] - points[0]);
  }
  return rank(diffs);
}

/// The unique s with v = s w, if any. Throws when w = 0 (s would not be unique).
inline std::optional<Scalar> collinearity_scalar(const Vector& v, const Vector& w) {
  require_same_dim(v, w);
  if (w.is_zero()) throw PreconditionError("collinearity_scalar: reference vector is zero");
  std::size_t k = 0;
  while (w[k].is_zero()) ++k;
  Scalar s = v[k] / w[k];
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (v[i] != s * w[i]) return std::nullopt;
  }
  return s;
}

/// True iff v is a linear combination of `basis`.
inline bool in_span(std::span<const Vector> basis, const Vector& v) {
  if (basis.empty()) return v.is_zero();
  std::vector<Vector> with(basis.begin(), basis.end());
  std::size_t before = rank(with);
  with.push_back(v);
  return rank(with) == before;
}

/// Unique x with sum_j x_j columns[j] = rhs; absent if inconsistent or underdetermined.
inline std::optional<std::vector<Scalar>> solve_unique(std::span<const Vector> columns, const Vector& rhs) {
  const std::size_t k = columns.size();
  const std::size_t n = rhs.dim();
  std::vector<std::vector<Scalar>> rows(n, std::vector<Scalar>(k + 1));
  for (std::size_t j = 0; j < k; ++j) {
    require_same_dim(columns[j], rhs);
    for (std::size_t i = 0; i < n; ++i) rows[i][j] = columns[j][i];
  }
  for (std::size_t i = 0; i < n; ++i) rows[i][k] = rhs[i];
  auto pivots = detail::reduce_rows(rows, k + 1);
  if (!pivots.empty() && pivots.back() == k) return std::nullopt;  // 0 = nonzero row
  if (pivots.size() != k) return std::nullopt;
  std::vector<Scalar> x(k);
  for (std::size_t r = 0; r < k; ++r) x[pivots[r]] = rows[r][k];
  return x;
}

/// Basis of {x : A x = 0}.
inline std::vector<Vector> kernel_basis(const Matrix& a) {
  std::vector<std::vector<Scalar>> rows(a.rows(), std::vector<Scalar>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) rows[i][j] = a(i, j);
  auto pivots = detail::reduce_rows(rows, a.cols());
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<Vector> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Scalar> x(a.cols());
    x[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = -rows[r][free];
    basis.emplace_back(std::move(x));
  }
  return basis;
}

}  // namespace colline
