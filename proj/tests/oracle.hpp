#pragma once

// Brute-force reference implementations, deliberately independent of the library's elimination code.

#include <gmpxx.h>

#include <cstddef>
#include <vector>

namespace oracle {

using Grid = std::vector<std::vector<mpq_class>>;

inline mpq_class laplace_det(const Grid& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  mpq_class total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j] == 0) continue;
    Grid minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<mpq_class> row;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != j) row.push_back(m[i][k]);
      }
      minor.push_back(row);
    }
    mpq_class term = m[0][j] * laplace_det(minor);
    total += (j % 2 == 0) ? term : mpq_class(-term);
  }
  return total;
}

inline void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                    std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

/// Largest k with a nonzero k-by-k minor.
inline std::size_t rank_by_minors(const Grid& m) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size(), cols = m[0].size();
  for (std::size_t k = std::min(rows, cols); k >= 1; --k) {
    std::vector<std::vector<std::size_t>> rs, cs;
    std::vector<std::size_t> cur;
    subsets(rows, k, 0, cur, rs);
    subsets(cols, k, 0, cur, cs);
    for (const auto& r : rs) {
      for (const auto& c : cs) {
        Grid sub;
        for (auto i : r) {
          std::vector<mpq_class> row;
          for (auto j : c) row.push_back(m[i][j]);
          sub.push_back(row);
        }
        if (laplace_det(sub) != 0) return k;
      }
    }
  }
  return 0;
}

/// Collinearity of three points in any dimension via 2x2 minors of the difference vectors.
inline bool collinear(const std::vector<mpq_class>& p, const std::vector<mpq_class>& q,
                      const std::vector<mpq_class>& r) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      mpq_class u0 = q[i] - p[i], u1 = q[j] - p[j], v0 = r[i] - p[i], v1 = r[j] - p[j];
      if (u0 * v1 - u1 * v0 != 0) return false;
    }
  }
  return true;
}

}  // namespace oracle
