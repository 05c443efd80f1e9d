#pragma once

#include <gmpxx.h>

#include <random>
#include <vector>

#include "colline/matrix.hpp"
#include "colline/scalar.hpp"
#include "colline/vector.hpp"
#include "oracle.hpp"

namespace testing_support {

using namespace colline;

inline Scalar random_scalar(std::mt19937_64& rng, long range = 12) {
  std::uniform_int_distribution<long> num(-range, range), den(1, range);
  long p = num(rng), q = den(rng);
  return Scalar(p, q);
}

inline Vector random_vector(std::mt19937_64& rng, std::size_t dim, long range = 12) {
  std::vector<Scalar> c;
  for (std::size_t i = 0; i < dim; ++i) c.push_back(random_scalar(rng, range));
  return Vector(std::move(c));
}

inline Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, long range = 12) {
  std::vector<Vector> r;
  for (std::size_t i = 0; i < rows; ++i) r.push_back(random_vector(rng, cols, range));
  return Matrix::from_rows(r);
}

inline oracle::Grid to_grid(const std::vector<Vector>& rows) {
  oracle::Grid g;
  for (const auto& v : rows) {
    std::vector<mpq_class> row;
    for (const auto& s : v.coords()) row.push_back(s.mpq());
    g.push_back(row);
  }
  return g;
}

inline std::vector<mpq_class> to_mpq(const Vector& v) {
  std::vector<mpq_class> out;
  for (const auto& s : v.coords()) out.push_back(s.mpq());
  return out;
}

}  // namespace testing_support
