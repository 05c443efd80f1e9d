#pragma once

#include <gmpxx.h>

#include <cctype>
#include <compare>
#include <concepts>
#include <string>
#include <string_view>

#include "colline/error.hpp"

namespace colline {

/// Exact rational number in canonical form (denominator > 0, gcd(|num|, den) = 1).
///
/// Text form is `p` or `p/q` with an optional leading `-`.
class Scalar {
 public:
  Scalar() = default;

  template <std::integral I>
  Scalar(I value) : value_(static_cast<long>(value)) {}  // NOLINT: implicit by design of the field type

  Scalar(long numerator, long denominator) {
    if (denominator == 0) {
      throw DivisionByZero("scalar with zero denominator");
    }
    value_ = mpq_class(numerator, denominator);
    value_.canonicalize();
  }

  static Scalar from_mpq(mpq_class q) {
    q.canonicalize();
    Scalar s;
    s.value_ = std::move(q);
    return s;
  }

  static Scalar from_parts(const mpz_class& numerator, const mpz_class& denominator) {
    if (denominator == 0) {
      throw DivisionByZero("scalar with zero denominator");
    }
    return from_mpq(mpq_class(numerator, denominator));
  }

  /// Parses `p`, `-p`, `p/q` or `-p/q` (surrounding blanks allowed).
  static Scalar parse(std::string_view text) {
    auto trim = [](std::string_view s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
      return s;
    };
    auto digits = [](std::string_view s) {
      if (s.empty()) return false;
      for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
      }
      return true;
    };
    std::string_view body = trim(text);
    bool negative = false;
    if (!body.empty() && body.front() == '-') {
      negative = true;
      body = trim(body.substr(1));
    }
    std::string_view num = body;
    std::string_view den = "1";
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
      num = trim(body.substr(0, slash));
      den = trim(body.substr(slash + 1));
    }
    if (!digits(num) || !digits(den)) {
      throw Error("malformed scalar '" + std::string(text) + "'");
    }
    mpz_class n(std::string(num), 10);
    mpz_class d(std::string(den), 10);
    if (d == 0) {
      throw DivisionByZero("malformed scalar '" + std::string(text) + "': zero denominator");
    }
    if (negative) n = -n;
    return from_parts(n, d);
  }

  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }
  const mpq_class& mpq() const { return value_; }

  bool is_zero() const { return sgn(value_) == 0; }
  int sign() const { return sgn(value_); }
  bool is_integer() const { return value_.get_den() == 1; }

  /// Truncates the numerator halfway toward zero, keeping the denominator: p/q -> trunc(p/2)/q.
  Scalar halved_numerator() const {
    mpz_class n = value_.get_num();
    mpz_tdiv_q_2exp(n.get_mpz_t(), n.get_mpz_t(), 1);
    return from_parts(n, value_.get_den());
  }

  Scalar abs() const { return sign() < 0 ? -*this : *this; }

  Scalar inverse() const {
    if (is_zero()) throw DivisionByZero("inverse of zero");
    return from_mpq(1 / value_);
  }

  std::string str() const {
    if (is_integer()) return value_.get_num().get_str();
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
  }

  Scalar operator-() const { return from_mpq(-value_); }

  Scalar& operator+=(const Scalar& o) {
    value_ += o.value_;
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    value_ -= o.value_;
    return *this;
  }
  Scalar& operator*=(const Scalar& o) {
    value_ *= o.value_;
    return *this;
  }
  Scalar& operator/=(const Scalar& o) {
    if (o.is_zero()) throw DivisionByZero("division by zero");
    value_ /= o.value_;
    return *this;
  }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Scalar& a, const Scalar& b) {
    int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class value_{0};
};

inline std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

}  // namespace colline
