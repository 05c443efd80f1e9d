#pragma once

#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "colline/error.hpp"
#include "colline/scalar.hpp"
#include "colline/vector.hpp"

namespace colline {

/// Dense rows x cols grid of scalars; the matrix of a map Q^cols -> Q^rows.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  Matrix(std::initializer_list<std::initializer_list<Scalar>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionError("ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix from_rows(const std::vector<Vector>& rows) {
    if (rows.empty()) return {};
    Matrix m(rows.size(), rows.front().dim());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].dim() != m.cols_) throw DimensionError("ragged matrix rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m.data_[i * m.cols_ + j] = rows[i][j];
    }
    return m;
  }

  static Matrix from_columns(const std::vector<Vector>& cols) {
    return from_rows(cols).transposed();
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = 1;
    return m;
  }

  /// Whitespace-separated scalars, one row per non-empty line; `#` starts a comment.
  static Matrix parse(std::string_view text) {
    std::vector<Vector> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      std::istringstream words(line);
      std::vector<Scalar> row;
      std::string w;
      while (words >> w) row.push_back(Scalar::parse(w));
      if (!row.empty()) rows.emplace_back(std::move(row));
    }
    if (rows.empty()) throw Error("matrix text has no rows");
    return from_rows(rows);
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  Vector row(std::size_t i) const {
    return Vector(std::vector<Scalar>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                                      data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)));
  }

  Vector column(std::size_t j) const {
    std::vector<Scalar> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return Vector(std::move(c));
  }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_zero() const {
    for (const auto& s : data_)
      if (!s.is_zero()) return false;
    return true;
  }

  friend Vector operator*(const Matrix& a, const Vector& x) {
    if (x.dim() != a.cols_) {
      throw DimensionError("matrix has " + std::to_string(a.cols_) + " columns, vector has dimension " +
                           std::to_string(x.dim()));
    }
    std::vector<Scalar> out(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      Scalar acc;
      for (std::size_t j = 0; j < a.cols_; ++j) acc += a(i, j) * x[j];
      out[i] = std::move(acc);
    }
    return Vector(std::move(out));
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("matrix product dimension mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) {
        Scalar acc;
        for (std::size_t k = 0; k < a.cols_; ++k) acc += a(i, k) * b(k, j);
        c(i, j) = std::move(acc);
      }
    return c;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

  /// Rows separated by newlines, entries by single spaces (the matrix file format).
  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j) out += ' ';
        out += (*this)(i, j).str();
      }
      out += '\n';
    }
    return out;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

/// x -> A x + b.
struct AffineForm {
  Matrix matrix;
  Vector offset;

  Vector operator()(const Vector& x) const { return matrix * x + offset; }
  bool is_linear() const { return offset.is_zero(); }
  friend bool operator==(const AffineForm&, const AffineForm&) = default;
};

}  // namespace colline
