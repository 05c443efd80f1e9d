#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "colline/error.hpp"
#include "colline/geometry.hpp"
#include "colline/linalg.hpp"
#include "colline/maps.hpp"
#include "colline/outcome.hpp"
#include "colline/probe.hpp"

namespace colline {

namespace checks {
inline constexpr const char* homogeneity = "homogeneity";
inline constexpr const char* additivity = "additivity";
inline constexpr const char* zero_fixed = "zero-fixed";
inline constexpr const char* line_image = "line-image";
inline constexpr const char* line_injectivity = "line-injectivity";
inline constexpr const char* ratio = "ratio";
inline constexpr const char* betweenness_cor43 = "betweenness-cor43";
inline constexpr const char* betweenness_prop44 = "betweenness-prop44";
inline constexpr const char* scalar_multiplicative = "scalar-multiplicative";
inline constexpr const char* scalar_monotone = "scalar-monotone";
inline constexpr const char* plane_image = "plane-image";
inline constexpr const char* plane_injectivity = "plane-injectivity";
inline constexpr const char* parallelism = "parallelism";
}  // namespace checks

/// What a violated relation looked like on concrete inputs.
struct Violation {
  Bindings observed;
  std::string relation;
};

/// Decides a relation on explicit inputs: a Violation when it fails, absent when it holds or the
/// inputs do not meet the check's sampling preconditions.
using Evaluator = std::function<std::optional<Violation>(const MapHandle&, const Bindings&)>;

namespace detail {

inline Bindings bind(std::initializer_list<Binding> b) { return Bindings(b); }

inline const Scalar& vec1(const Vector& v) { return v[0]; }

/// Registry of evaluators by check name; further modules add theirs at static-init time.
inline std::map<std::string, Evaluator>& evaluator_table() {
  static std::map<std::string, Evaluator> table;
  return table;
}

struct Registrar {
  Registrar(const std::string& name, Evaluator e) { evaluator_table()[name] = std::move(e); }
};

inline std::optional<Violation> homogeneity(const MapHandle& f, const Bindings& in) {
  const Vector& a = vector_at(in, "a");
  const Scalar& c = scalar_at(in, "c");
  Vector lhs = f(c * a), rhs = c * f(a);
  if (lhs == rhs) return std::nullopt;
  return Violation{bind({{"f(c*a)", lhs}, {"c*f(a)", rhs}}), "f(c*a) != c*f(a)"};
}

inline std::optional<Violation> additivity(const MapHandle& f, const Bindings& in) {
  const Vector& a = vector_at(in, "a");
  const Vector& b = vector_at(in, "b");
  Vector lhs = f(a + b), rhs = f(a) + f(b);
  if (lhs == rhs) return std::nullopt;
  return Violation{bind({{"f(a+b)", lhs}, {"f(a)+f(b)", rhs}}), "f(a+b) != f(a)+f(b)"};
}

inline std::optional<Violation> zero_fixed(const MapHandle& f, const Bindings& in) {
  const Vector& x = vector_at(in, "x");
  if (!x.is_zero()) return std::nullopt;
  Vector y = f(x);
  if (y.is_zero()) return std::nullopt;
  return Violation{bind({{"f(x)", y}}), "f(0) != 0"};
}

inline std::optional<Violation> line_image(const MapHandle& f, const Bindings& in) {
  const Vector& o = vector_at(in, "origin");
  const Vector& d = vector_at(in, "direction");
  if (d.is_zero()) return std::nullopt;
  Line l(o, d);
  std::vector<Vector> img;
  for (const char* t : {"t1", "t2", "t3"}) img.push_back(f(l.at(scalar_at(in, t))));
  if (affine_rank(img) < 2) return std::nullopt;
  return Violation{bind({{"f(L(t1))", img[0]}, {"f(L(t2))", img[1]}, {"f(L(t3))", img[2]}}),
                   "images of three points of a line are not collinear"};
}

inline std::optional<Violation> line_injectivity(const MapHandle& f, const Bindings& in) {
  const Vector& o = vector_at(in, "origin");
  const Vector& d = vector_at(in, "direction");
  const Scalar &t1 = scalar_at(in, "t1"), &t2 = scalar_at(in, "t2"), &t3 = scalar_at(in, "t3");
  if (d.is_zero() || t1 == t2) return std::nullopt;
  Line l(o, d);
  Vector y1 = f(l.at(t1)), y2 = f(l.at(t2)), y3 = f(l.at(t3));
  if (y1 != y2 || y3 == y1) return std::nullopt;
  return Violation{bind({{"f(L(t1))", y1}, {"f(L(t2))", y2}, {"f(L(t3))", y3}}),
                   "distinct points t1, t2 of a line with non-constant image have equal images"};
}

inline std::optional<Violation> ratio(const MapHandle& f, const Bindings& in) {
  const Vector& a = vector_at(in, "a");
  const Vector& b = vector_at(in, "b");
  const Scalar &r = scalar_at(in, "r"), &s = scalar_at(in, "s");
  if (a == b || (r + s).is_zero()) return std::nullopt;
  Vector fa = f(a), fb = f(b);
  if (fa == fb) return std::nullopt;
  Vector fc = f(divides_in_ratio(a, b, r, s));
  Vector expected = divides_in_ratio(fa, fb, r, s);
  if (fc == expected) return std::nullopt;
  return Violation{bind({{"f(c)", fc}, {"ratio point of f(a), f(b)", expected}}),
                   "f(c) does not divide f(a)-f(b) in ratio r : s"};
}

inline bool open_unit(const Scalar& t) { return t > Scalar(0) && t < Scalar(1); }

inline std::optional<Violation> betweenness_cor43(const MapHandle& g, const Bindings& in) {
  const Vector& a = vector_at(in, "a");
  const Vector& b = vector_at(in, "b");
  const Scalar& t = scalar_at(in, "t");
  if (a == b || !open_unit(t)) return std::nullopt;
  Vector c = a + t * (b - a);
  Vector ga = g(a), gb = g(b), gc = g(c);
  if ((ga == gb && gb == gc) || in_interval(ga, gb, gc, Interval::open)) return std::nullopt;
  return Violation{bind({{"g(a)", ga}, {"g(b)", gb}, {"g(c)", gc}}),
                   "g(c) is not strictly between g(a) and g(b), and g(a), g(b), g(c) are not all equal"};
}

inline std::optional<Violation> betweenness_prop44(const MapHandle& f, const Bindings& in) {
  const Vector& a = vector_at(in, "a");
  const Scalar& t = scalar_at(in, "t");
  if (a.is_zero() || !open_unit(t)) return std::nullopt;
  Vector fa = f(a), fc = f(t * a);
  Vector zero = Vector::zero(fa.dim());
  if ((fa.is_zero() && fc.is_zero()) || in_interval(fa, zero, fc, Interval::open)) return std::nullopt;
  return Violation{bind({{"f(a)", fa}, {"f(c)", fc}}),
                   "f(c) is not strictly between f(a) and 0, and f(a) = f(c) = 0 fails"};
}

inline std::optional<Violation> scalar_multiplicative(const MapHandle& h, const Bindings& in) {
  const Scalar &r = scalar_at(in, "r"), &s = scalar_at(in, "s");
  Scalar lhs = vec1(h(Vector{r * s})), rhs = vec1(h(Vector{r})) * vec1(h(Vector{s}));
  if (lhs == rhs) return std::nullopt;
  return Violation{bind({{"h(r*s)", lhs}, {"h(r)*h(s)", rhs}}), "h(r*s) != h(r)*h(s)"};
}

inline std::optional<Violation> scalar_monotone(const MapHandle& h, const Bindings& in) {
  const Scalar &r = scalar_at(in, "r"), &s = scalar_at(in, "s"), &t = scalar_at(in, "t");
  if (!(r < s && s < t)) return std::nullopt;
  Scalar hr = vec1(h(Vector{r})), hs = vec1(h(Vector{s})), ht = vec1(h(Vector{t}));
  if ((hs - hr) * (ht - hs) >= Scalar(0)) return std::nullopt;
  return Violation{bind({{"h(r)", hr}, {"h(s)", hs}, {"h(t)", ht}}), "h changes direction on r < s < t"};
}

inline std::optional<Violation> plane_image(const MapHandle& f, const Bindings& in) {
  std::vector<Vector> pts, img;
  for (const char* p : {"p0", "p1", "p2", "p3"}) pts.push_back(vector_at(in, p));
  if (affine_rank(pts) > 2) return std::nullopt;
  for (const auto& p : pts) img.push_back(f(p));
  if (affine_rank(img) < 3) return std::nullopt;
  return Violation{bind({{"f(p0)", img[0]}, {"f(p1)", img[1]}, {"f(p2)", img[2]}, {"f(p3)", img[3]}}),
                   "images of four coplanar points are affinely independent"};
}

inline std::optional<Violation> plane_injectivity(const MapHandle& f, const Bindings& in) {
  std::vector<Vector> pts;
  for (const char* p : {"u0", "u1", "u2", "p", "q"}) pts.push_back(vector_at(in, p));
  if (affine_rank(pts) != 2 || pts[3] == pts[4]) return std::nullopt;
  Vector fu0 = f(pts[0]), fu1 = f(pts[1]), fu2 = f(pts[2]), fp = f(pts[3]), fq = f(pts[4]);
  const Vector spanning[] = {fu0, fu1, fu2};
  if (affine_rank(spanning) != 2 || fp != fq) return std::nullopt;
  return Violation{bind({{"f(u0)", fu0}, {"f(u1)", fu1}, {"f(u2)", fu2}, {"f(p)", fp}, {"f(q)", fq}}),
                   "a plane with planar image has two distinct points p, q with equal images"};
}

/// Two parallel lines L0 = (o0, d), L1 = (o1, k d) and two parameters on each.
inline std::optional<Violation> parallelism(const MapHandle& f, const Bindings& in) {
  const Vector &o0 = vector_at(in, "o0"), &d = vector_at(in, "d"), &o1 = vector_at(in, "o1");
  const Scalar& k = scalar_at(in, "k");
  if (d.is_zero() || k.is_zero()) return std::nullopt;
  Line l0(o0, d), l1(o1, k * d);
  Vector p0 = f(l0.at(scalar_at(in, "s1"))), p1 = f(l0.at(scalar_at(in, "s2")));
  Vector q0 = f(l1.at(scalar_at(in, "t1"))), q1 = f(l1.at(scalar_at(in, "t2")));
  if (p0 == p1 || q0 == q1) return std::nullopt;
  if (lines_parallel(line_through(p0, p1), line_through(q0, q1))) return std::nullopt;
  return Violation{bind({{"f(L0(s1))", p0}, {"f(L0(s2))", p1}, {"f(L1(t1))", q0}, {"f(L1(t2))", q1}}),
                   "images of parallel lines are not parallel"};
}

inline const bool builtin_evaluators_registered = [] {
  auto& t = evaluator_table();
  t[checks::homogeneity] = homogeneity;
  t[checks::additivity] = additivity;
  t[checks::zero_fixed] = zero_fixed;
  t[checks::line_image] = line_image;
  t[checks::line_injectivity] = line_injectivity;
  t[checks::ratio] = ratio;
  t[checks::betweenness_cor43] = betweenness_cor43;
  t[checks::betweenness_prop44] = betweenness_prop44;
  t[checks::scalar_multiplicative] = scalar_multiplicative;
  t[checks::scalar_monotone] = scalar_monotone;
  t[checks::plane_image] = plane_image;
  t[checks::plane_injectivity] = plane_injectivity;
  t[checks::parallelism] = parallelism;
  return true;
}();

}  // namespace detail

inline const Evaluator& evaluator_for(const std::string& check) {
  const auto& table = detail::evaluator_table();
  auto it = table.find(check);
  if (it == table.end()) throw Error("unknown check '" + check + "'");
  return it->second;
}

/// Re-decides a witness from its inputs alone; true iff the same violation is reproduced exactly.
inline bool witness_reproduces(const std::string& check, const MapHandle& f, const Witness& w) {
  std::optional<Violation> v;
  try {
    v = evaluator_for(check)(f, w.inputs);
  } catch (const EvalError&) {
    return false;
  }
  return v && v->observed == w.observed && v->relation == w.relation;
}

namespace detail {

inline std::optional<Violation> try_evaluate(const Evaluator& e, const MapHandle& f, const Bindings& in) {
  try {
    return e(f, in);
  } catch (const EvalError&) {
    return std::nullopt;
  } catch (const DegenerateError&) {
    return std::nullopt;
  }
}

inline std::vector<Value> halvings(const Value& v) {
  std::vector<Value> out;
  if (const auto* s = std::get_if<Scalar>(&v)) {
    Scalar h = s->halved_numerator();
    if (h != *s) out.emplace_back(h);
    return out;
  }
  const Vector& x = std::get<Vector>(v);
  for (std::size_t i = 0; i < x.dim(); ++i) {
    Scalar h = x[i].halved_numerator();
    if (h != x[i]) out.emplace_back(x.with(i, h));
  }
  return out;
}

/// Halves numerators, one coordinate at a time, while the violation persists.
inline Bindings shrink(const Evaluator& e, const MapHandle& f, Bindings in) {
  for (int pass = 0; pass < 256; ++pass) {
    bool changed = false;
    for (std::size_t i = 0; i < in.size(); ++i) {
      for (const auto& candidate : halvings(in[i].value)) {
        Bindings trial = in;
        trial[i].value = candidate;
        if (try_evaluate(e, f, trial)) {
          in = std::move(trial);
          changed = true;
          break;
        }
      }
    }
    if (!changed) break;
  }
  return in;
}

/// Shrinks a violating input tuple and packages it as a self-validated witness.
inline Witness finalize(const std::string& check, const MapHandle& f, const Bindings& inputs, std::size_t index) {
  const Evaluator& e = evaluator_for(check);
  if (!try_evaluate(e, f, inputs)) {
    throw InternalError("check '" + check + "' produced inputs that do not violate its relation");
  }
  Bindings small = shrink(e, f, inputs);
  auto v = e(f, small);
  Witness w{small, v->observed, v->relation, index};
  if (!witness_reproduces(check, f, w)) throw InternalError("witness for '" + check + "' failed self-validation");
  return w;
}

inline std::string describe(const Bindings& in) {
  std::string out;
  for (const auto& b : in) out += (out.empty() ? "" : ", ") + b.name + "=" + to_text(b.value);
  return out;
}

/// Probe outcome: nothing to report, not applicable, or a violating input tuple.
struct Clean {};
struct Skip {};
using ProbeResult = std::variant<Clean, Skip, Bindings>;

using ProbeFn = std::function<ProbeResult(ProbeRng&, std::size_t index)>;

/// Runs probes in index order and reports the first violation, which is therefore the one with
/// the smallest probe index.
inline CheckOutcome run_probes(const std::string& check, const MapHandle& f, const ProbeConfig& cfg, Stream stream,
                               const ProbeFn& probe) {
  cfg.validate();
  CheckOutcome out{check, Verdict::pass, 0, 0, std::nullopt, {}};
  for (std::size_t i = 0; i < cfg.count; ++i) {
    ProbeRng rng(cfg, stream, i);
    ProbeResult r;
    try {
      r = probe(rng, i);
    } catch (const EvalError& e) {
      throw EvalError(std::string(e.what()) + " (check " + check + ", probe " + std::to_string(i) + ")");
    }
    if (std::holds_alternative<Skip>(r)) {
      ++out.skipped;
      continue;
    }
    ++out.probes;
    if (const auto* bad = std::get_if<Bindings>(&r)) {
      out.verdict = Verdict::fail;
      out.witness = finalize(check, f, *bad, i);
      return out;
    }
  }
  return out;
}

/// Probe that samples explicit inputs and applies the check's evaluator to them.
inline ProbeFn sampled(const std::string& check, const MapHandle& f,
                       std::function<std::optional<Bindings>(ProbeRng&, std::size_t)> sample) {
  return [check, f, sample](ProbeRng& rng, std::size_t i) -> ProbeResult {
    auto in = sample(rng, i);
    if (!in) return Skip{};
    try {
      if (evaluator_for(check)(f, *in)) return *in;
    } catch (const EvalError& e) {
      throw EvalError(std::string(e.what()) + " at " + describe(*in));
    }
    return Clean{};
  };
}

/// Axis lines through 0 for the first m probes, random lines afterwards.
inline Line probe_line(ProbeRng& rng, std::size_t index, std::size_t m) {
  if (index < m) return Line(Vector::zero(m), Vector::unit(m, index));
  return rng.line(m);
}

inline void require_scalar_map(const MapHandle& h, const char* what) {
  if (h.input_dim() != 1 || h.output_dim() != 1) {
    throw DimensionError(std::string(what) + " needs a map Q -> Q, got " + std::to_string(h.input_dim()) + " -> " +
                         std::to_string(h.output_dim()));
  }
}

}  // namespace detail

inline CheckOutcome check_homogeneity(const MapHandle& f, const ProbeConfig& cfg) {
  const std::size_t m = f.input_dim();
  return detail::run_probes(checks::homogeneity, f, cfg, Stream::homogeneity,
                            detail::sampled(checks::homogeneity, f, [m](ProbeRng& rng, std::size_t i) {
                              if (i == 0) return std::optional(detail::bind({{"a", Vector::unit(m, 0)}, {"c", Scalar(-1)}}));
                              if (i == 1) return std::optional(detail::bind({{"a", Vector::unit(m, 0)}, {"c", Scalar(2)}}));
                              Vector a = rng.vector(m);
                              Scalar c = rng.scalar();
                              return std::optional(detail::bind({{"a", a}, {"c", c}}));
                            }));
}

inline CheckOutcome check_additivity(const MapHandle& f, const ProbeConfig& cfg) {
  const std::size_t m = f.input_dim();
  return detail::run_probes(checks::additivity, f, cfg, Stream::additivity,
                            detail::sampled(checks::additivity, f, [m](ProbeRng& rng, std::size_t i) {
                              Vector e = Vector::unit(m, 0);
                              if (i == 0) return std::optional(detail::bind({{"a", e}, {"b", -e}}));
                              if (i == 1) return std::optional(detail::bind({{"a", e}, {"b", e}}));
                              Vector a = rng.vector(m);
                              Vector b = rng.vector(m);
                              return std::optional(detail::bind({{"a", a}, {"b", b}}));
                            }));
}

inline CheckOutcome check_zero_fixed(const MapHandle& f) {
  ProbeConfig single;
  single.count = 1;
  const std::size_t m = f.input_dim();
  return detail::run_probes(checks::zero_fixed, f, single, Stream::homogeneity,
                            detail::sampled(checks::zero_fixed, f, [m](ProbeRng&, std::size_t) {
                              return std::optional(detail::bind({{"x", Vector::zero(m)}}));
                            }));
}

inline CheckOutcome check_line_image(const MapHandle& f, const ProbeConfig& cfg) {
  const std::size_t m = f.input_dim();
  return detail::run_probes(
      checks::line_image, f, cfg, Stream::line_image, [&f, &cfg, m](ProbeRng& rng, std::size_t i) -> detail::ProbeResult {
        Line l = detail::probe_line(rng, i, m);
        auto ts = rng.line_params(cfg.params_per_line);
        std::vector<Vector> img;
        for (const auto& t : ts) img.push_back(f(l.at(t)));
        if (affine_rank(img) < 2) return detail::Clean{};
        for (std::size_t a = 0; a < img.size(); ++a) {
          for (std::size_t b = a + 1; b < img.size(); ++b) {
            for (std::size_t c = b + 1; c < img.size(); ++c) {
              const Vector tri[] = {img[a], img[b], img[c]};
              if (affine_rank(tri) == 2) {
                return detail::bind({{"origin", l.origin()}, {"direction", l.direction()}, {"t1", ts[a]},
                                     {"t2", ts[b]}, {"t3", ts[c]}});
              }
            }
          }
        }
        throw InternalError("line-image: rank 2 without an affinely independent triple");
      });
}

inline CheckOutcome check_line_injectivity(const MapHandle& f, const ProbeConfig& cfg) {
  const std::size_t m = f.input_dim();
  return detail::run_probes(
      checks::line_injectivity, f, cfg, Stream::line_injectivity,
      [&f, &cfg, m](ProbeRng& rng, std::size_t i) -> detail::ProbeResult {
        Line l = detail::probe_line(rng, i, m);
        auto ts = rng.line_params(cfg.params_per_line);
        std::vector<Vector> img;
        for (const auto& t : ts) img.push_back(f(l.at(t)));
        if (affine_rank(img) != 1) return detail::Skip{};
        for (std::size_t a = 0; a < img.size(); ++a) {
          for (std::size_t b = a + 1; b < img.size(); ++b) {
            if (img[a] != img[b]) continue;
            for (std::size_t c = 0; c < img.size(); ++c) {
              if (img[c] != img[a]) {
                return detail::bind({{"origin", l.origin()}, {"direction", l.direction()}, {"t1", ts[a]},
                                     {"t2", ts[b]}, {"t3", ts[c]}});
              }
            }
          }
        }
        return detail::Clean{};
      });
}

inline CheckOutcome check_ratio_preservation(const MapHandle& f, const ProbeConfig& cfg) {
  const std::size_t m = f.input_dim();
  return detail::run_probes(checks::ratio, f, cfg, Stream::ratio,
                            detail::sampled(checks::ratio, f, [&f, m](ProbeRng& rng, std::size_t i) -> std::optional<Bindings> {
                              Bindings in;
                              if (i == 0) {
                                Vector e = Vector::unit(m, 0);
                                in = detail::bind({{"a", -e}, {"b", e}, {"r", Scalar(1)}, {"s", Scalar(1)}});
                              } else {
                                Vector a = rng.vector(m);
                                Vector b = rng.vector(m);
                                Scalar r = rng.scalar();
                                Scalar s = rng.scalar();
                                in = detail::bind({{"a", a}, {"b", b}, {"r", r}, {"s", s}});
                              }
                              const Vector &a = vector_at(in, "a"), &b = vector_at(in, "b");
                              if (a == b || (scalar_at(in, "r") + scalar_at(in, "s")).is_zero() || f(a) == f(b)) {
                                return std::nullopt;
                              }
                              return in;
                            }));
}

/// First sampled pair with linearly independent images: basis pairs, then random pairs.
inline std::optional<std::pair<Vector, Vector>> find_independence_witness(const MapHandle& f, const ProbeConfig& cfg) {
  cfg.validate();
  const std::size_t m = f.input_dim();
  std::vector<std::pair<Vector, Vector>> fixed;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) fixed.emplace_back(Vector::unit(m, i), Vector::unit(m, j));
  }
  for (std::size_t i = 0; i < cfg.count; ++i) {
    std::pair<Vector, Vector> p = [&] {
      if (i < fixed.size()) return fixed[i];
      ProbeRng rng(cfg, Stream::independence, i);
      Vector a = rng.vector(m);
      Vector b = rng.vector(m);
      return std::pair{a, b};
    }();
    if (linearly_independent(f(p.first), f(p.second))) return p;
  }
  return std::nullopt;
}

/// Witnesses (a*, a0*, a1*) with g(a0*) - g(a*) and g(a1*) - g(a*) independent.
struct AffineIndependence {
  Vector base;
  Vector first;
  Vector second;
};

inline std::optional<AffineIndependence> find_affine_independence_witness(const MapHandle& g, const ProbeConfig& cfg) {
  cfg.validate();
  const std::size_t m = g.input_dim();
  std::vector<AffineIndependence> fixed;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) fixed.push_back({Vector::zero(m), Vector::unit(m, i), Vector::unit(m, j)});
  }
  for (std::size_t i = 0; i < cfg.count; ++i) {
    AffineIndependence w = [&] {
      if (i < fixed.size()) return fixed[i];
      ProbeRng rng(cfg, Stream::affine_independence, i);
      Vector a = rng.vector(m);
      Vector b = rng.vector(m);
      Vector c = rng.vector(m);
      return AffineIndependence{a, b, c};
    }();
    Vector base = g(w.base);
    if (linearly_independent(g(w.first) - base, g(w.second) - base)) return w;
  }
  return std::nullopt;
}

enum class BetweennessVariant { cor43, prop44 };

inline CheckOutcome check_betweenness(const MapHandle& g, const ProbeConfig& cfg, BetweennessVariant variant) {
  const std::size_t m = g.input_dim();
  if (variant == BetweennessVariant::cor43) {
    return detail::run_probes(checks::betweenness_cor43, g, cfg, Stream::betweenness_cor43,
                              detail::sampled(checks::betweenness_cor43, g, [m](ProbeRng& rng, std::size_t) -> std::optional<Bindings> {
                                Vector a = rng.vector(m);
                                Vector b = rng.vector(m);
                                Scalar t = rng.unit_open();
                                if (a == b) return std::nullopt;
                                return detail::bind({{"a", a}, {"b", b}, {"t", t}});
                              }));
  }
  return detail::run_probes(checks::betweenness_prop44, g, cfg, Stream::betweenness_prop44,
                            detail::sampled(checks::betweenness_prop44, g, [m](ProbeRng& rng, std::size_t) -> std::optional<Bindings> {
                              Vector a = rng.nonzero_vector(m);
                              Scalar t = rng.unit_open();
                              return detail::bind({{"a", a}, {"t", t}});
                            }));
}

inline CheckOutcome check_scalar_multiplicative(const MapHandle& h, const ProbeConfig& cfg) {
  detail::require_scalar_map(h, "check_scalar_multiplicative");
  return detail::run_probes(checks::scalar_multiplicative, h, cfg, Stream::scalar_multiplicative,
                            detail::sampled(checks::scalar_multiplicative, h, [](ProbeRng& rng, std::size_t i) {
                              if (i == 0) return std::optional(detail::bind({{"r", Scalar(1)}, {"s", Scalar(1)}}));
                              Scalar r = rng.scalar();
                              Scalar s = rng.scalar();
                              return std::optional(detail::bind({{"r", r}, {"s", s}}));
                            }));
}

/// Probes add points to a sorted sample; Fail once the sample rises somewhere and falls elsewhere.
inline CheckOutcome check_scalar_monotone(const MapHandle& h, const ProbeConfig& cfg) {
  detail::require_scalar_map(h, "check_scalar_monotone");
  std::map<Scalar, Scalar> seen;
  auto turn = [&seen]() -> std::optional<Bindings> {
    // r = start of the first strict step, s = extreme point, t = end of the first opposite step.
    std::vector<std::pair<Scalar, Scalar>> pts(seen.begin(), seen.end());
    std::size_t first = pts.size();
    int dir = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      int step = (pts[i + 1].second - pts[i].second).sign();
      if (step == 0) continue;
      if (dir == 0) {
        dir = step;
        first = i;
        continue;
      }
      if (step == dir) continue;
      std::size_t extreme = first + 1;
      for (std::size_t k = first + 1; k <= i; ++k) {
        if ((pts[k].second - pts[extreme].second).sign() == dir) extreme = k;
      }
      return detail::bind({{"r", pts[first].first}, {"s", pts[extreme].first}, {"t", pts[i + 1].first}});
    }
    return std::nullopt;
  };
  return detail::run_probes(checks::scalar_monotone, h, cfg, Stream::scalar_monotone,
                            [&](ProbeRng& rng, std::size_t i) -> detail::ProbeResult {
                              static const Scalar fixed[] = {Scalar(-1), Scalar(0), Scalar(1)};
                              Scalar r = i < 3 ? fixed[i] : rng.scalar();
                              if (seen.contains(r)) return detail::Clean{};
                              seen.emplace(r, detail::vec1(h(Vector{r})));
                              if (auto w = turn()) return *w;
                              return detail::Clean{};
                            });
}

enum class ImageKind { point, line, plane, beyond };

inline const char* to_string(ImageKind k) {
  switch (k) {
    case ImageKind::point: return "point";
    case ImageKind::line: return "line";
    case ImageKind::plane: return "plane";
    case ImageKind::beyond: return "beyond";
  }
  return "?";
}

/// Affine dimension of the sampled image of a plane, with an injectivity search when it is 2.
struct PlaneImage {
  ImageKind kind = ImageKind::point;
  bool injective = true;
  std::size_t samples = 0;
  /// `plane-image` witness when kind is beyond, `plane-injectivity` witness when not injective.
  std::optional<CheckOutcome> violation;
};

inline PlaneImage classify_plane_image(const MapHandle& f, const Plane& e, const ProbeConfig& cfg) {
  cfg.validate();
  if (e.dim() != f.input_dim()) throw DimensionError("classify_plane_image: plane dimension differs from map input");
  std::vector<std::pair<Scalar, Scalar>> params;
  for (int s : {0, 1, -1, 2}) {
    for (int t : {0, 1, -1, 2}) params.emplace_back(s, t);
  }
  for (std::size_t i = 0; i < cfg.count; ++i) {
    ProbeRng rng(cfg, Stream::plane_image, i);
    Scalar s = rng.scalar();
    Scalar t = rng.scalar();
    params.emplace_back(s, t);
  }

  PlaneImage out;
  std::vector<Vector> domain, image;
  // Points realizing the current affine rank of the image.
  std::vector<std::size_t> basis;
  std::map<Vector, std::size_t> first_with_image;
  std::optional<std::pair<std::size_t, std::size_t>> collision;
  for (const auto& [s, t] : params) {
    Vector p = e.at(s, t);
    Vector y = f(p);
    std::size_t idx = domain.size();
    domain.push_back(p);
    image.push_back(y);
    ++out.samples;
    std::vector<Vector> trial;
    for (auto b : basis) trial.push_back(image[b]);
    trial.push_back(y);
    if (basis.empty() || affine_rank(trial) == basis.size()) basis.push_back(idx);
    auto [it, inserted] = first_with_image.emplace(y, idx);
    if (!inserted && domain[it->second] != p && !collision) collision = std::pair{it->second, idx};
    if (basis.size() == 4) break;
  }

  const std::size_t rank = basis.size() - 1;
  if (rank >= 3) {
    out.kind = ImageKind::beyond;
    out.injective = false;
    Bindings in = detail::bind({{"p0", domain[basis[0]]}, {"p1", domain[basis[1]]}, {"p2", domain[basis[2]]},
                                {"p3", domain[basis[3]]}});
    out.violation = CheckOutcome{checks::plane_image, Verdict::fail, out.samples, 0,
                                 detail::finalize(checks::plane_image, f, in, basis[3]), {}};
    return out;
  }
  out.kind = rank == 0 ? ImageKind::point : rank == 1 ? ImageKind::line : ImageKind::plane;
  if (out.kind == ImageKind::plane) {
    out.injective = !collision.has_value();
    if (collision) {
      Bindings in = detail::bind({{"u0", domain[basis[0]]}, {"u1", domain[basis[1]]}, {"u2", domain[basis[2]]},
                                  {"p", domain[collision->first]}, {"q", domain[collision->second]}});
      out.violation = CheckOutcome{checks::plane_injectivity, Verdict::fail, out.samples, 0,
                                   detail::finalize(checks::plane_injectivity, f, in, collision->second), {}};
    }
  } else {
    out.injective = false;
  }
  return out;
}

inline CheckOutcome check_parallelism_preservation(const MapHandle& f, const ProbeConfig& cfg) {
  const std::size_t m = f.input_dim();
  CheckOutcome out = detail::run_probes(
      checks::parallelism, f, cfg, Stream::parallelism, [&f, &cfg, m](ProbeRng& rng, std::size_t) -> detail::ProbeResult {
        Vector o0 = rng.vector(m);
        Vector d = rng.nonzero_vector(m);
        Vector o1 = rng.vector(m);
        Scalar k = rng.nonzero_scalar();
        auto ss = rng.line_params(cfg.params_per_line);
        auto ts = rng.line_params(cfg.params_per_line);
        Line l0(o0, d), l1(o1, k * d);
        std::vector<Vector> i0, i1;
        for (const auto& s : ss) i0.push_back(f(l0.at(s)));
        for (const auto& t : ts) i1.push_back(f(l1.at(t)));
        if (affine_rank(i0) != 1 || affine_rank(i1) != 1) return detail::Skip{};
        auto distinct = [](const std::vector<Vector>& img) {
          for (std::size_t j = 1; j < img.size(); ++j) {
            if (img[j] != img[0]) return j;
          }
          return std::size_t{0};
        };
        std::size_t j0 = distinct(i0), j1 = distinct(i1);
        if (lines_parallel(line_through(i0[0], i0[j0]), line_through(i1[0], i1[j1]))) return detail::Clean{};
        return detail::bind({{"o0", o0}, {"d", d}, {"o1", o1}, {"k", k}, {"s1", ss[0]}, {"s2", ss[j0]},
                             {"t1", ts[0]}, {"t2", ts[j1]}});
      });
  if (out.passed() && out.skipped > 0) {
    out.note = std::to_string(out.skipped) + " sampled pairs skipped: image of a line was not a line";
  }
  return out;
}

}  // namespace colline
