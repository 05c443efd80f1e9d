#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "colline/error.hpp"
#include "colline/linalg.hpp"
#include "colline/matrix.hpp"
#include "colline/scalar.hpp"
#include "colline/vector.hpp"

namespace colline {

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class BinaryOp { add, sub, mul, div };

/// Immutable expression tree over rational literals and input coordinates x0, x1, ...
class Expr {
 public:
  struct Literal {
    Scalar value;
  };
  struct Variable {
    std::size_t index;
  };
  struct Negate {
    ExprPtr operand;
  };
  struct Binary {
    BinaryOp op;
    ExprPtr lhs;
    ExprPtr rhs;
  };
  /// if guard_lhs <= guard_rhs then then_branch else else_branch
  struct Conditional {
    ExprPtr guard_lhs;
    ExprPtr guard_rhs;
    ExprPtr then_branch;
    ExprPtr else_branch;
  };
  using Node = std::variant<Literal, Variable, Negate, Binary, Conditional>;

  explicit Expr(Node node) : node_(std::move(node)) {}
  const Node& node() const { return node_; }

 private:
  Node node_;
};

namespace expr {

inline ExprPtr lit(Scalar v) { return std::make_shared<const Expr>(Expr::Literal{std::move(v)}); }
inline ExprPtr var(std::size_t i) { return std::make_shared<const Expr>(Expr::Variable{i}); }
inline ExprPtr neg(ExprPtr e) { return std::make_shared<const Expr>(Expr::Negate{std::move(e)}); }
inline ExprPtr binary(BinaryOp op, ExprPtr a, ExprPtr b) {
  return std::make_shared<const Expr>(Expr::Binary{op, std::move(a), std::move(b)});
}
inline ExprPtr add(ExprPtr a, ExprPtr b) { return binary(BinaryOp::add, std::move(a), std::move(b)); }
inline ExprPtr sub(ExprPtr a, ExprPtr b) { return binary(BinaryOp::sub, std::move(a), std::move(b)); }
inline ExprPtr mul(ExprPtr a, ExprPtr b) { return binary(BinaryOp::mul, std::move(a), std::move(b)); }
inline ExprPtr div(ExprPtr a, ExprPtr b) { return binary(BinaryOp::div, std::move(a), std::move(b)); }
inline ExprPtr cond(ExprPtr gl, ExprPtr gr, ExprPtr t, ExprPtr e) {
  return std::make_shared<const Expr>(Expr::Conditional{std::move(gl), std::move(gr), std::move(t), std::move(e)});
}

}  // namespace expr

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

/// Exact value at x. Throws DivisionByZero.
inline Scalar evaluate(const Expr& e, std::span<const Scalar> x) {
  return std::visit(
      overloaded{
          [](const Expr::Literal& l) { return l.value; },
          [&](const Expr::Variable& v) -> Scalar {
            if (v.index >= x.size()) {
              throw DimensionError("variable x" + std::to_string(v.index) + " outside input of dimension " +
                                   std::to_string(x.size()));
            }
            return x[v.index];
          },
          [&](const Expr::Negate& n) { return -evaluate(*n.operand, x); },
          [&](const Expr::Binary& b) {
            Scalar l = evaluate(*b.lhs, x);
            Scalar r = evaluate(*b.rhs, x);
            switch (b.op) {
              case BinaryOp::add: return l + r;
              case BinaryOp::sub: return l - r;
              case BinaryOp::mul: return l * r;
              case BinaryOp::div: return l / r;
            }
            return Scalar{};
          },
          [&](const Expr::Conditional& c) {
            return evaluate(*c.guard_lhs, x) <= evaluate(*c.guard_rhs, x) ? evaluate(*c.then_branch, x)
                                                                          : evaluate(*c.else_branch, x);
          },
      },
      e.node());
}

/// Fully parenthesised text that reparses to a structurally equal tree.
inline std::string render(const Expr& e) {
  return std::visit(
      overloaded{
          [](const Expr::Literal& l) {
            return l.value.sign() < 0 ? "(" + l.value.str() + ")" : l.value.str();
          },
          [](const Expr::Variable& v) { return "x" + std::to_string(v.index); },
          [](const Expr::Negate& n) { return "-" + render(*n.operand); },
          [](const Expr::Binary& b) {
            static const char* ops[] = {" + ", " - ", " * ", " / "};
            return "(" + render(*b.lhs) + ops[static_cast<int>(b.op)] + render(*b.rhs) + ")";
          },
          [](const Expr::Conditional& c) {
            return "(if " + render(*c.guard_lhs) + " <= " + render(*c.guard_rhs) + " then " +
                   render(*c.then_branch) + " else " + render(*c.else_branch) + ")";
          },
      },
      e.node());
}

inline bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node().index() != b.node().index()) return false;
  return std::visit(
      overloaded{
          [&](const Expr::Literal& l) { return l.value == std::get<Expr::Literal>(b.node()).value; },
          [&](const Expr::Variable& v) { return v.index == std::get<Expr::Variable>(b.node()).index; },
          [&](const Expr::Negate& n) {
            return structurally_equal(*n.operand, *std::get<Expr::Negate>(b.node()).operand);
          },
          [&](const Expr::Binary& x) {
            const auto& y = std::get<Expr::Binary>(b.node());
            return x.op == y.op && structurally_equal(*x.lhs, *y.lhs) && structurally_equal(*x.rhs, *y.rhs);
          },
          [&](const Expr::Conditional& x) {
            const auto& y = std::get<Expr::Conditional>(b.node());
            return structurally_equal(*x.guard_lhs, *y.guard_lhs) &&
                   structurally_equal(*x.guard_rhs, *y.guard_rhs) &&
                   structurally_equal(*x.then_branch, *y.then_branch) &&
                   structurally_equal(*x.else_branch, *y.else_branch);
          },
      },
      a.node());
}

/// Largest variable index used, or absent for a constant expression.
inline std::optional<std::size_t> max_variable(const Expr& e) {
  auto merge = [](std::optional<std::size_t> a, std::optional<std::size_t> b) -> std::optional<std::size_t> {
    if (!a) return b;
    if (!b) return a;
    return std::max(*a, *b);
  };
  return std::visit(
      overloaded{
          [](const Expr::Literal&) -> std::optional<std::size_t> { return std::nullopt; },
          [](const Expr::Variable& v) -> std::optional<std::size_t> { return v.index; },
          [&](const Expr::Negate& n) { return max_variable(*n.operand); },
          [&](const Expr::Binary& b) { return merge(max_variable(*b.lhs), max_variable(*b.rhs)); },
          [&](const Expr::Conditional& c) {
            return merge(merge(max_variable(*c.guard_lhs), max_variable(*c.guard_rhs)),
                         merge(max_variable(*c.then_branch), max_variable(*c.else_branch)));
          },
      },
      e.node());
}

/// sum_i coeffs[i] x_i + constant.
struct AffinePolynomial {
  std::vector<Scalar> coeffs;
  Scalar constant;

  bool is_constant() const {
    for (const auto& c : coeffs)
      if (!c.is_zero()) return false;
    return true;
  }
};

/// Normal form by distribution and constant folding. Absent for anything not provably affine:
/// products of two non-constant factors, division by a non-constant or zero, conditionals whose
/// guard is not constant.
inline std::optional<AffinePolynomial> affine_normal_form(const Expr& e, std::size_t inputs) {
  using Result = std::optional<AffinePolynomial>;
  auto scale = [](AffinePolynomial p, const Scalar& s) {
    for (auto& c : p.coeffs) c *= s;
    p.constant *= s;
    return p;
  };
  return std::visit(
      overloaded{
          [&](const Expr::Literal& l) -> Result {
            return AffinePolynomial{std::vector<Scalar>(inputs), l.value};
          },
          [&](const Expr::Variable& v) -> Result {
            if (v.index >= inputs) return std::nullopt;
            AffinePolynomial p{std::vector<Scalar>(inputs), Scalar{}};
            p.coeffs[v.index] = 1;
            return p;
          },
          [&](const Expr::Negate& n) -> Result {
            auto p = affine_normal_form(*n.operand, inputs);
            if (!p) return std::nullopt;
            return scale(std::move(*p), Scalar(-1));
          },
          [&](const Expr::Binary& b) -> Result {
            auto l = affine_normal_form(*b.lhs, inputs);
            if (!l) return std::nullopt;
            auto r = affine_normal_form(*b.rhs, inputs);
            if (!r) return std::nullopt;
            switch (b.op) {
              case BinaryOp::add:
              case BinaryOp::sub: {
                Scalar sign = b.op == BinaryOp::add ? Scalar(1) : Scalar(-1);
                for (std::size_t i = 0; i < inputs; ++i) l->coeffs[i] += sign * r->coeffs[i];
                l->constant += sign * r->constant;
                return l;
              }
              case BinaryOp::mul:
                if (l->is_constant()) return scale(std::move(*r), l->constant);
                if (r->is_constant()) return scale(std::move(*l), r->constant);
                return std::nullopt;
              case BinaryOp::div:
                if (!r->is_constant() || r->constant.is_zero()) return std::nullopt;
                return scale(std::move(*l), r->constant.inverse());
            }
            return std::nullopt;
          },
          [&](const Expr::Conditional& c) -> Result {
            auto gl = affine_normal_form(*c.guard_lhs, inputs);
            auto gr = affine_normal_form(*c.guard_rhs, inputs);
            if (!gl || !gr || !gl->is_constant() || !gr->is_constant()) return std::nullopt;
            return affine_normal_form(gl->constant <= gr->constant ? *c.then_branch : *c.else_branch, inputs);
          },
      },
      e.node());
}

/// A parsed map Q^m -> Q^n: one expression per output coordinate.
struct MapSpec {
  std::string name;
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<ExprPtr> outputs;
};

inline bool structurally_equal(const MapSpec& a, const MapSpec& b) {
  if (a.name != b.name || a.m != b.m || a.n != b.n || a.outputs.size() != b.outputs.size()) return false;
  for (std::size_t i = 0; i < a.outputs.size(); ++i) {
    if (!structurally_equal(*a.outputs[i], *b.outputs[i])) return false;
  }
  return true;
}

/// Exact evaluation. Division by zero is reported with the output index and the input.
inline Vector eval_map(const MapSpec& spec, const Vector& x) {
  if (x.dim() != spec.m) {
    throw DimensionError("map '" + spec.name + "' expects input dimension " + std::to_string(spec.m) +
                         ", got " + std::to_string(x.dim()));
  }
  std::vector<Scalar> out;
  out.reserve(spec.n);
  for (std::size_t i = 0; i < spec.outputs.size(); ++i) {
    try {
      out.push_back(evaluate(*spec.outputs[i], x.coords()));
    } catch (const DivisionByZero&) {
      throw EvalError("division by zero in output y" + std::to_string(i) + " of map '" + spec.name +
                      "' at input " + x.str());
    }
  }
  return Vector(std::move(out));
}

/// (A, b) with eval_map(spec, x) = A x + b for every x, when every output normalises to an
/// affine polynomial. Absent is not a verdict of non-affineness.
inline std::optional<AffineForm> symbolic_affine_form(const MapSpec& spec) {
  Matrix a(spec.n, spec.m);
  std::vector<Scalar> b(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    auto p = affine_normal_form(*spec.outputs[i], spec.m);
    if (!p) return std::nullopt;
    for (std::size_t j = 0; j < spec.m; ++j) a(i, j) = p->coeffs[j];
    b[i] = p->constant;
  }
  return AffineForm{std::move(a), Vector(std::move(b))};
}

inline std::string render(const MapSpec& spec) {
  std::string out = "map " + spec.name + " : " + std::to_string(spec.m) + " -> " + std::to_string(spec.n) + " {\n";
  for (std::size_t i = 0; i < spec.outputs.size(); ++i) {
    out += "  y" + std::to_string(i) + " = " + render(*spec.outputs[i]) + ";\n";
  }
  return out + "}\n";
}

}  // namespace colline
