#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "colline/error.hpp"
#include "colline/expr.hpp"
#include "colline/linalg.hpp"
#include "colline/matrix.hpp"
#include "colline/parser.hpp"
#include "colline/vector.hpp"

namespace colline {

/// Shared, immutable handle to an exactly evaluable map Q^m -> Q^n.
class MapHandle {
 public:
  enum class Kind { linear, affine, lemma23, dsl, table, compose, shift, function };

  struct Linear {
    Matrix matrix;
  };
  struct Affine {
    Matrix matrix;
    Vector offset;
  };
  /// x -> psi(x[e0]) d0
  struct Lemma23 {
    ExprPtr psi;
    std::size_t e0;
    Vector d0;
  };
  struct Dsl {
    MapSpec spec;
  };
  /// Finite input -> output pairs; inputs outside the table go to `fallback` when present.
  struct Table {
    std::map<Vector, Vector> entries;
    std::shared_ptr<const MapHandle> fallback;
  };
  struct Compose {
    std::shared_ptr<const MapHandle> outer;
    std::shared_ptr<const MapHandle> inner;
  };
  /// x -> inner(x + shift) - inner(shift)
  struct Shift {
    std::shared_ptr<const MapHandle> inner;
    Vector shift;
    Vector base;
  };
  struct Function {
    std::function<Vector(const Vector&)> fn;
  };
  using Body = std::variant<Linear, Affine, Lemma23, Dsl, Table, Compose, Shift, Function>;

  MapHandle(std::string name, std::size_t m, std::size_t n, Body body)
      : impl_(std::make_shared<const Impl>(Impl{std::move(name), m, n, std::move(body)})) {
    if (m < 1 || m > kMaxDim || n < 1 || n > kMaxDim) {
      throw DimensionError("map dimensions " + std::to_string(m) + " -> " + std::to_string(n) +
                           " outside 1.." + std::to_string(kMaxDim));
    }
  }

  const std::string& name() const { return impl_->name; }
  std::size_t input_dim() const { return impl_->m; }
  std::size_t output_dim() const { return impl_->n; }
  Kind kind() const { return static_cast<Kind>(impl_->body.index()); }
  const Body& body() const { return impl_->body; }

  Vector operator()(const Vector& x) const {
    if (x.dim() != input_dim()) {
      throw DimensionError("map '" + name() + "' expects input dimension " + std::to_string(input_dim()) +
                           ", got " + std::to_string(x.dim()));
    }
    Vector y = std::visit(
        overloaded{
            [&](const Linear& l) { return l.matrix * x; },
            [&](const Affine& a) { return a.matrix * x + a.offset; },
            [&](const Lemma23& l) {
              const Scalar coord[] = {x[l.e0]};
              try {
                return evaluate(*l.psi, coord) * l.d0;
              } catch (const DivisionByZero&) {
                throw EvalError("division by zero in psi of map '" + name() + "' at input " + x.str());
              }
            },
            [&](const Dsl& d) { return eval_map(d.spec, x); },
            [&](const Table& t) {
              if (auto it = t.entries.find(x); it != t.entries.end()) return it->second;
              if (t.fallback) return (*t.fallback)(x);
              throw EvalError("input " + x.str() + " outside the domain of table map '" + name() + "'");
            },
            [&](const Compose& c) { return (*c.outer)((*c.inner)(x)); },
            [&](const Shift& s) { return (*s.inner)(x + s.shift) - s.base; },
            [&](const Function& f) { return f.fn(x); },
        },
        impl_->body);
    if (y.dim() != output_dim()) throw InternalError("map '" + name() + "' produced a vector of wrong dimension");
    return y;
  }

  /// Exact affine form when the body is syntactically affine; absent otherwise.
  std::optional<AffineForm> symbolic_form() const {
    return std::visit(
        overloaded{
            [&](const Linear& l) -> std::optional<AffineForm> {
              return AffineForm{l.matrix, Vector::zero(output_dim())};
            },
            [](const Affine& a) -> std::optional<AffineForm> { return AffineForm{a.matrix, a.offset}; },
            [&](const Lemma23& l) -> std::optional<AffineForm> {
              auto p = affine_normal_form(*l.psi, 1);
              if (!p) return std::nullopt;
              Matrix a(output_dim(), input_dim());
              for (std::size_t i = 0; i < output_dim(); ++i) a(i, l.e0) = p->coeffs[0] * l.d0[i];
              return AffineForm{std::move(a), p->constant * l.d0};
            },
            [](const Dsl& d) { return symbolic_affine_form(d.spec); },
            [](const Table&) -> std::optional<AffineForm> { return std::nullopt; },
            [](const Compose& c) -> std::optional<AffineForm> {
              auto outer = c.outer->symbolic_form();
              auto inner = c.inner->symbolic_form();
              if (!outer || !inner) return std::nullopt;
              return AffineForm{outer->matrix * inner->matrix, outer->matrix * inner->offset + outer->offset};
            },
            [](const Shift& s) -> std::optional<AffineForm> {
              auto inner = s.inner->symbolic_form();
              if (!inner) return std::nullopt;
              // A(x + s) + b - base, with base = inner(s)
              return AffineForm{inner->matrix, inner->matrix * s.shift + inner->offset - s.base};
            },
            [](const Function&) -> std::optional<AffineForm> { return std::nullopt; },
        },
        impl_->body);
  }

  /// DSL text defining the same map, when the body has one.
  std::optional<std::string> to_dsl() const {
    auto literal = [](const Scalar& s) { return expr::lit(s); };
    return std::visit(
        overloaded{
            [&](const Linear& l) -> std::optional<std::string> { return render(affine_spec(l.matrix, std::nullopt)); },
            [&](const Affine& a) -> std::optional<std::string> { return render(affine_spec(a.matrix, a.offset)); },
            [&](const Lemma23& l) -> std::optional<std::string> {
              MapSpec spec{name(), input_dim(), output_dim(), {}};
              ExprPtr psi = substitute_x0(l.psi, l.e0);
              for (std::size_t i = 0; i < output_dim(); ++i) spec.outputs.push_back(expr::mul(literal(l.d0[i]), psi));
              return render(spec);
            },
            [](const Dsl& d) -> std::optional<std::string> { return render(d.spec); },
            [](const auto&) -> std::optional<std::string> { return std::nullopt; },
        },
        impl_->body);
  }

 private:
  struct Impl {
    std::string name;
    std::size_t m;
    std::size_t n;
    Body body;
  };

  MapSpec affine_spec(const Matrix& a, const std::optional<Vector>& b) const {
    MapSpec spec{name(), input_dim(), output_dim(), {}};
    for (std::size_t i = 0; i < a.rows(); ++i) {
      ExprPtr e;
      for (std::size_t j = 0; j < a.cols(); ++j) {
        ExprPtr t = expr::mul(expr::lit(a(i, j)), expr::var(j));
        e = e ? expr::add(e, t) : t;
      }
      if (b) e = expr::add(e, expr::lit((*b)[i]));
      spec.outputs.push_back(e);
    }
    return spec;
  }

  static ExprPtr substitute_x0(const ExprPtr& e, std::size_t index) {
    return std::visit(
        overloaded{
            [&](const Expr::Literal&) { return e; },
            [&](const Expr::Variable&) { return expr::var(index); },
            [&](const Expr::Negate& n) { return expr::neg(substitute_x0(n.operand, index)); },
            [&](const Expr::Binary& b) {
              return expr::binary(b.op, substitute_x0(b.lhs, index), substitute_x0(b.rhs, index));
            },
            [&](const Expr::Conditional& c) {
              return expr::cond(substitute_x0(c.guard_lhs, index), substitute_x0(c.guard_rhs, index),
                                substitute_x0(c.then_branch, index), substitute_x0(c.else_branch, index));
            },
        },
        e->node());
  }

  std::shared_ptr<const Impl> impl_;
};

inline MapHandle make_linear(Matrix a, std::string name = "linear") {
  std::size_t m = a.cols(), n = a.rows();
  return MapHandle(std::move(name), m, n, MapHandle::Linear{std::move(a)});
}

inline MapHandle make_affine(Matrix a, Vector b, std::string name = "affine") {
  if (b.dim() != a.rows()) throw DimensionError("affine offset dimension does not match matrix rows");
  std::size_t m = a.cols(), n = a.rows();
  return MapHandle(std::move(name), m, n, MapHandle::Affine{std::move(a), std::move(b)});
}

/// t -> t for t <= 0, 2t for t > 0: a non-linear bijection of Q fixing 0.
inline ExprPtr default_psi() {
  using namespace expr;
  return cond(var(0), lit(0), var(0), mul(lit(2), var(0)));
}

/// x -> psi(x[e0]) d0 with psi a one-variable expression in x0.
inline MapHandle make_lemma23(std::size_t m, std::size_t n, ExprPtr psi, std::size_t e0, Vector d0,
                              std::string name = "lemma23") {
  if (e0 >= m) throw DimensionError("lemma23: e0 index " + std::to_string(e0) + " out of range");
  if (d0.dim() != n) throw DimensionError("lemma23: d0 must have dimension " + std::to_string(n));
  if (d0.is_zero()) throw PreconditionError("lemma23: d0 must be nonzero");
  if (auto mv = max_variable(*psi); mv && *mv > 0) throw PreconditionError("lemma23: psi may only use x0");
  const Scalar zero[] = {Scalar{}};
  Scalar at_zero;
  try {
    at_zero = evaluate(*psi, zero);
  } catch (const DivisionByZero&) {
    throw PreconditionError("lemma23: psi is undefined at 0");
  }
  if (!at_zero.is_zero()) throw PreconditionError("lemma23: psi(0) must be 0, got " + at_zero.str());
  return MapHandle(std::move(name), m, n, MapHandle::Lemma23{std::move(psi), e0, std::move(d0)});
}

inline MapHandle make_dsl(MapSpec spec) {
  std::string name = spec.name;
  std::size_t m = spec.m, n = spec.n;
  for (const auto& o : spec.outputs) {
    if (!o) throw PreconditionError("map '" + name + "' has an undefined output");
    if (auto mv = max_variable(*o); mv && *mv >= m) throw DimensionError("map '" + name + "' uses x" + std::to_string(*mv));
  }
  return MapHandle(std::move(name), m, n, MapHandle::Dsl{std::move(spec)});
}

inline MapHandle make_table(std::size_t m, std::size_t n, const std::vector<std::pair<Vector, Vector>>& entries,
                            std::optional<MapHandle> fallback = std::nullopt, std::string name = "table") {
  MapHandle::Table t;
  for (const auto& [x, y] : entries) {
    if (x.dim() != m || y.dim() != n) throw DimensionError("table entry of wrong dimension");
    t.entries[x] = y;
  }
  if (fallback && (fallback->input_dim() != m || fallback->output_dim() != n)) {
    throw DimensionError("table fallback of wrong dimension");
  }
  if (fallback) t.fallback = std::make_shared<const MapHandle>(std::move(*fallback));
  return MapHandle(std::move(name), m, n, std::move(t));
}

/// outer after inner.
inline MapHandle compose(const MapHandle& outer, const MapHandle& inner) {
  if (inner.output_dim() != outer.input_dim()) {
    throw DimensionError("compose: inner output dimension " + std::to_string(inner.output_dim()) +
                         " differs from outer input dimension " + std::to_string(outer.input_dim()));
  }
  return MapHandle(outer.name() + "." + inner.name(), inner.input_dim(), outer.output_dim(),
                   MapHandle::Compose{std::make_shared<const MapHandle>(outer), std::make_shared<const MapHandle>(inner)});
}

/// x -> g(x + shift) - g(shift).
inline MapHandle shift_map(const MapHandle& g, const Vector& shift) {
  Vector base = g(shift);
  return MapHandle("reduce(" + g.name() + ")", g.input_dim(), g.output_dim(),
                   MapHandle::Shift{std::make_shared<const MapHandle>(g), shift, std::move(base)});
}

inline MapHandle make_function(std::string name, std::size_t m, std::size_t n, std::function<Vector(const Vector&)> fn) {
  return MapHandle(std::move(name), m, n, MapHandle::Function{std::move(fn)});
}

inline MapHandle make_zero(std::size_t m, std::size_t n) { return make_linear(Matrix(n, m), "zero"); }

inline MapHandle make_identity(std::size_t n) { return make_linear(Matrix::identity(n), "identity"); }

/// c x on Q^1.
inline MapHandle make_scalar_multiple(const Scalar& c) {
  return make_linear(Matrix{{c}}, "scale(" + c.str() + ")");
}

}  // namespace colline
