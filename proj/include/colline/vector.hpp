#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "colline/error.hpp"
#include "colline/scalar.hpp"

namespace colline {

/// Fixed-dimension coordinate tuple over the rationals. Text form: `(s1, s2, ..., sn)`.
class Vector {
 public:
  Vector() = default;
  Vector(std::initializer_list<Scalar> coords) : coords_(coords) {}
  explicit Vector(std::vector<Scalar> coords) : coords_(std::move(coords)) {}

  static Vector zero(std::size_t dim) { return Vector(std::vector<Scalar>(dim)); }

  static Vector unit(std::size_t dim, std::size_t index) {
    std::vector<Scalar> c(dim);
    c.at(index) = 1;
    return Vector(std::move(c));
  }

  static Vector parse(std::string_view text) {
    std::size_t open = text.find('(');
    std::size_t close = text.rfind(')');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
      throw Error("malformed vector '" + std::string(text) + "'");
    }
    for (std::size_t i = 0; i < text.size(); ++i) {
      if ((i < open || i > close) && !std::isspace(static_cast<unsigned char>(text[i]))) {
        throw Error("malformed vector '" + std::string(text) + "'");
      }
    }
    std::string_view body = text.substr(open + 1, close - open - 1);
    std::vector<Scalar> coords;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = body.find(',', start);
      coords.push_back(Scalar::parse(body.substr(start, comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return Vector(std::move(coords));
  }

  std::size_t dim() const { return coords_.size(); }
  const Scalar& operator[](std::size_t i) const { return coords_[i]; }
  std::span<const Scalar> coords() const { return coords_; }

  bool is_zero() const {
    for (const auto& c : coords_) {
      if (!c.is_zero()) return false;
    }
    return true;
  }

  /// Copy with coordinate `i` replaced.
  Vector with(std::size_t i, Scalar value) const {
    Vector v = *this;
    v.coords_.at(i) = std::move(value);
    return v;
  }

  std::string str() const {
    std::string out = "(";
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (i) out += ", ";
      out += coords_[i].str();
    }
    return out + ")";
  }

  Vector operator-() const {
    Vector v = *this;
    for (auto& c : v.coords_) c = -c;
    return v;
  }

  Vector& operator+=(const Vector& o) {
    require_same_dim(o);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += o.coords_[i];
    return *this;
  }
  Vector& operator-=(const Vector& o) {
    require_same_dim(o);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= o.coords_[i];
    return *this;
  }
  Vector& operator*=(const Scalar& s) {
    for (auto& c : coords_) c *= s;
    return *this;
  }

  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator*(const Scalar& s, Vector v) { return v *= s; }
  friend Vector operator*(Vector v, const Scalar& s) { return v *= s; }

  friend bool operator==(const Vector&, const Vector&) = default;
  friend std::strong_ordering operator<=>(const Vector& a, const Vector& b) {
    if (auto c = a.dim() <=> b.dim(); c != 0) return c;
    for (std::size_t i = 0; i < a.dim(); ++i) {
      if (auto c = a[i] <=> b[i]; c != 0) return c;
    }
    return std::strong_ordering::equal;
  }

 private:
  void require_same_dim(const Vector& o) const {
    if (o.dim() != dim()) {
      throw DimensionError("vector dimensions differ: " + std::to_string(dim()) + " vs " +
                           std::to_string(o.dim()));
    }
  }

  std::vector<Scalar> coords_;
};

inline std::ostream& operator<<(std::ostream& os, const Vector& v) { return os << v.str(); }

inline void require_same_dim(const Vector& a, const Vector& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("vector dimensions differ: " + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
  }
}

}  // namespace colline
