#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "colline/certificate.hpp"
#include "colline/error.hpp"
#include "colline/linalg.hpp"
#include "colline/maps.hpp"
#include "colline/outcome.hpp"
#include "colline/predicates.hpp"
#include "colline/probe.hpp"

namespace colline {

namespace checks {
inline constexpr const char* phi_consistency = "phi-consistency";
inline constexpr const char* lemma32 = "lemma32";
inline constexpr const char* phi_additive = "phi-additive";
inline constexpr const char* phi_multiplicative = "phi-multiplicative";
inline constexpr const char* scalar_dichotomy = "scalar-dichotomy";
inline constexpr const char* reduced_additivity = "reduced-additivity";
inline constexpr const char* reduced_homogeneity = "reduced-homogeneity";
inline constexpr const char* reduced_phi_consistency = "reduced-phi-consistency";
}  // namespace checks

/// The s with f(r a) = s f(a). Requires f(a) != 0.
inline Scalar extract_phi(const MapHandle& f, const Vector& a, const Scalar& r) {
  Vector fa = f(a);
  if (fa.is_zero()) throw PreconditionError("extract_phi: f(a) = 0 at a = " + a.str());
  Vector fra = f(r * a);
  auto s = collinearity_scalar(fra, fa);
  if (!s) {
    throw ViolationError("extract_phi: f(r*a) = " + fra.str() + " is not a multiple of f(a) = " + fa.str() +
                         " (a = " + a.str() + ", r = " + r.str() + "); the image of the line through 0 and a is not a line");
  }
  return *s;
}

/// Sampled values r -> phi(r), each with the anchor it was computed from.
struct PhiTable {
  std::map<Scalar, Scalar> entries;
  std::map<Scalar, Vector> anchors;

  bool is_identity() const {
    for (const auto& [r, p] : entries) {
      if (r != p) return false;
    }
    return true;
  }
};

namespace detail {

inline std::optional<Scalar> phi_or_absent(const MapHandle& f, const Vector& a, const Scalar& r) {
  Vector fa = f(a);
  if (fa.is_zero()) return std::nullopt;
  return collinearity_scalar(f(r * a), fa);
}

inline std::optional<Violation> phi_consistency_eval(const MapHandle& f, const Bindings& in) {
  const Vector &a = vector_at(in, "a"), &b = vector_at(in, "b");
  const Scalar& r = scalar_at(in, "r");
  if (f(a).is_zero() || f(b).is_zero()) return std::nullopt;
  auto pa = phi_or_absent(f, a, r), pb = phi_or_absent(f, b, r);
  if (!pa) return Violation{bind({{"f(a)", f(a)}, {"f(r*a)", f(r * a)}}), "f(r*a) is not a multiple of f(a)"};
  if (!pb) return Violation{bind({{"f(b)", f(b)}, {"f(r*b)", f(r * b)}}), "f(r*b) is not a multiple of f(b)"};
  if (*pa == *pb) return std::nullopt;
  return Violation{bind({{"phi(a, r)", *pa}, {"phi(b, r)", *pb}}), "phi(a, r) != phi(b, r)"};
}

inline std::optional<Violation> lemma32_eval(const MapHandle& f, const Bindings& in) {
  const Vector &a = vector_at(in, "a"), &b = vector_at(in, "b");
  if (a.is_zero() || b.is_zero() || !f(a).is_zero() || f(b).is_zero()) return std::nullopt;
  Vector fab = f(a + b), fb = f(b);
  if (fab == fb) return std::nullopt;
  return Violation{bind({{"f(a+b)", fab}, {"f(b)", fb}}), "f(a) = 0 but f(a+b) != f(b)"};
}

/// phi measured along the anchor a: phi(r) f(a) = f(r a).
inline std::optional<Violation> phi_multiplicative_eval(const MapHandle& f, const Bindings& in) {
  const Vector& a = vector_at(in, "a");
  const Scalar &r = scalar_at(in, "r"), &s = scalar_at(in, "s");
  if (f(a).is_zero()) return std::nullopt;
  auto prs = phi_or_absent(f, a, r * s), pr = phi_or_absent(f, a, r), ps = phi_or_absent(f, a, s);
  if (!prs || !pr || !ps) return std::nullopt;
  if (*prs == *pr * *ps) return std::nullopt;
  return Violation{bind({{"phi(r*s)", *prs}, {"phi(r)*phi(s)", *pr * *ps}}), "phi(r*s) != phi(r)*phi(s)"};
}

inline std::optional<Violation> phi_additive_eval(const MapHandle& f, const Bindings& in) {
  const Vector& a = vector_at(in, "a");
  const Scalar &r = scalar_at(in, "r"), &s = scalar_at(in, "s");
  if (f(a).is_zero()) return std::nullopt;
  Vector lhs = f((r + s) * a), rhs = f(r * a) + f(s * a);
  if (lhs == rhs) return std::nullopt;
  return Violation{bind({{"f((r+s)*a)", lhs}, {"f(r*a)+f(s*a)", rhs}}), "f((r+s)*a) != f(r*a)+f(s*a)"};
}

inline std::optional<Violation> scalar_dichotomy_eval(const MapHandle& h, const Bindings& in) {
  const Scalar &r = scalar_at(in, "r"), &s = scalar_at(in, "s");
  Scalar hr = vec1(h(Vector{r})), hs = vec1(h(Vector{s}));
  if (hr.is_zero() || hs == s) return std::nullopt;
  return Violation{bind({{"h(r)", hr}, {"h(s)", hs}}), "h(r) != 0 and h(s) != s: neither zero nor identity"};
}

inline Bindings without(const Bindings& in, const std::string& name) {
  Bindings out;
  for (const auto& b : in) {
    if (b.name != name) out.push_back(b);
  }
  return out;
}

inline std::optional<Violation> reduced_eval(const Evaluator& inner, const MapHandle& g, const Bindings& in) {
  return inner(shift_map(g, vector_at(in, "shift")), without(in, "shift"));
}

/// r -> phi(r) along the anchor a, as a map Q -> Q. Undefined (EvalError) where f(r a) is off the line.
inline MapHandle phi_map(const MapHandle& f, const Vector& a) {
  if (f(a).is_zero()) throw PreconditionError("phi_map: f(a) = 0 at a = " + a.str());
  return make_function("phi", 1, 1, [f, a](const Vector& r) {
    auto s = collinearity_scalar(f(r[0] * a), f(a));
    if (!s) throw EvalError("phi undefined at r = " + r[0].str() + ": f(r*a) is not a multiple of f(a)");
    return Vector{*s};
  });
}

/// A scalar check on phi, restated against f with the anchor as input "anchor".
inline std::optional<Violation> phi_scalar_eval(const Evaluator& inner, const MapHandle& f, const Bindings& in) {
  const Vector& a = vector_at(in, "anchor");
  if (f(a).is_zero()) return std::nullopt;
  return inner(phi_map(f, a), without(in, "anchor"));
}

inline const bool theorem_evaluators_registered = [] {
  auto& t = evaluator_table();
  t[checks::phi_consistency] = phi_consistency_eval;
  t[checks::lemma32] = lemma32_eval;
  t[checks::phi_multiplicative] = phi_multiplicative_eval;
  t[checks::phi_additive] = phi_additive_eval;
  t[checks::scalar_dichotomy] = scalar_dichotomy_eval;
  t[checks::reduced_additivity] = [](const MapHandle& g, const Bindings& in) { return reduced_eval(additivity, g, in); };
  t[checks::reduced_homogeneity] = [](const MapHandle& g, const Bindings& in) { return reduced_eval(homogeneity, g, in); };
  t[checks::reduced_phi_consistency] = [](const MapHandle& g, const Bindings& in) {
    return reduced_eval(phi_consistency_eval, g, in);
  };
  for (const char* name : {checks::additivity, checks::scalar_multiplicative, checks::scalar_monotone,
                           checks::scalar_dichotomy}) {
    std::string inner = name;
    t["phi-" + inner] = [inner](const MapHandle& f, const Bindings& in) {
      return phi_scalar_eval(evaluator_for(inner), f, in);
    };
  }
  return true;
}();

inline const Scalar& fixed_r(std::size_t i) {
  static const Scalar values[] = {Scalar(0), Scalar(1), Scalar(-1), Scalar(2), Scalar(1, 2), Scalar(3), Scalar(-2)};
  return values[i];
}
inline constexpr std::size_t kFixedR = 7;

}  // namespace detail

struct PhiResult {
  CheckOutcome outcome;
  PhiTable table;
};

/// Compares phi(a, r) across anchors: first the two independence witnesses, then a random anchor
/// routed through whichever witness has an image independent of f(a).
inline PhiResult phi_consistency(const MapHandle& f, const ProbeConfig& cfg, const std::pair<Vector, Vector>& ind) {
  const auto& [a0, a1] = ind;
  if (!linearly_independent(f(a0), f(a1))) {
    throw PreconditionError("phi_consistency: f(a0), f(a1) are not independent; find an independence witness first");
  }
  const std::size_t m = f.input_dim();
  PhiTable table;
  CheckOutcome out = detail::run_probes(
      checks::phi_consistency, f, cfg, Stream::phi, [&](ProbeRng& rng, std::size_t i) -> detail::ProbeResult {
        Scalar r = i < detail::kFixedR ? detail::fixed_r(i) : rng.scalar();
        Bindings pair = detail::bind({{"a", a0}, {"b", a1}, {"r", r}});
        if (detail::phi_consistency_eval(f, pair)) return pair;
        table.entries[r] = extract_phi(f, a0, r);
        table.anchors[r] = a0;
        Vector a = rng.vector(m);
        Vector fa = f(a);
        if (fa.is_zero()) return detail::Clean{};
        const Vector& route = linearly_independent(fa, f(a0)) ? a0 : a1;
        Bindings routed = detail::bind({{"a", a}, {"b", route}, {"r", r}});
        if (detail::phi_consistency_eval(f, routed)) return routed;
        return detail::Clean{};
      });
  if (out.failed()) table = {};
  return PhiResult{out, table};
}

/// The four-line constellation showing phi(a, r) = phi(b, r) for independent f(a), f(b).
inline Certificate homogeneity_certificate(const MapHandle& f, const Vector& a, const Vector& b, const Scalar& r) {
  if (!linearly_independent(f(a), f(b))) throw PreconditionError("homogeneity_certificate: f(a), f(b) must be independent");
  if (r.is_zero()) throw PreconditionError("homogeneity_certificate: r must be nonzero");
  const std::size_t m = a.dim();
  CertificateBuilder c(f, "homogeneity");
  c.point("0", Vector::zero(m)).point("a", a).point("b", b);
  c.point("ra", r * a, {{r, "a"}}).point("rb", r * b, {{r, "b"}});
  c.line("L0", "a", "0").line("L1", "b", "0").line("L2", "a", "b").line("L3", "ra", "rb");
  c.meet({"L0", "L1"}, "0").meet({"L0", "L2"}, "a").meet({"L1", "L2"}, "b");
  c.meet({"L0", "L3"}, "ra").meet({"L1", "L3"}, "rb");
  c.parallel({"L2", "L3"});
  Scalar pa = extract_phi(f, a, r), pb = extract_phi(f, b, r);
  c.phi(PhiFact{"a", "b", "ra", "rb", r, pa, pb});
  if (r == Scalar(1)) c.note("r = 1: L2 and L3 coincide");
  return c.finish("phi(a, " + r.str() + ") = phi(b, " + r.str() + ") = " + pa.str());
}

namespace detail {

/// Parallelogram on 0, u, v, u+v: lines u-0, v-0, u-(u+v), v-(u+v).
inline void parallelogram(CertificateBuilder& c, const std::string& u, const std::string& v, const std::string& uv,
                          const std::string& lu0, const std::string& lv0, const std::string& lu, const std::string& lv,
                          bool add_u0, bool add_v0) {
  if (add_u0) c.line(lu0, u, "0");
  if (add_v0) c.line(lv0, v, "0");
  c.line(lu, u, uv).line(lv, v, uv);
  c.meet({lu0, lv0}, "0").meet({lu0, lu}, u).meet({lv0, lv}, v).meet({lu, lv}, uv);
  c.parallel({lu0, lv}).parallel({lv0, lu});
  c.equal(uv, {u, v});
}

inline const Vector& choose_auxiliary(const MapHandle& f, const Vector& a, const std::pair<Vector, Vector>& ind) {
  Vector fa = f(a);
  if (linearly_independent(f(ind.first), fa)) return ind.first;
  if (linearly_independent(f(ind.second), fa)) return ind.second;
  throw PreconditionError("additivity_certificate: neither independence witness has an image independent of f(a)");
}

inline Certificate zero_image_certificate(const MapHandle& f, const Vector& a, const Vector& b, const std::string& kind) {
  // f(a) = 0, f(b) != 0, a and b independent.
  const std::size_t m = a.dim();
  CertificateBuilder c(f, kind);
  c.point("0", Vector::zero(m)).point("a", a).point("b", b).point("a+b", a + b, {{1, "a"}, {1, "b"}});
  if (!linearly_independent(a, b)) {
    c.equal("a", {}).equal("a+b", {"b"}).equal("a+b", {"a", "b"});
    c.note("a and b are dependent; no constellation, the equalities are checked directly");
    return c.finish("f(a+b) = f(b) = f(a)+f(b)");
  }
  c.line("L0", "a", "0").line("L1", "b", "0").line("L2", "a+b", "b");
  c.meet({"L0", "L1"}, "0", false).meet({"L1", "L2"}, "b", false);
  c.parallel({"L0", "L2"}, false);
  c.equal("a", {}).equal("a+b", {"b"}).equal("a+b", {"a", "b"});
  c.note("f(a) = 0 and f(b) != 0: the line through b parallel to the collapsed line a-0 has constant image");
  return c.finish("f(a+b) = f(b) = f(a)+f(b)");
}

}  // namespace detail

/// Checks f(a+b) = f(b) for a, b != 0 with f(a) = 0, f(b) != 0.
inline CheckOutcome lemma32_check(const MapHandle& f, const Vector& a, const Vector& b) {
  if (a.is_zero()) throw PreconditionError("lemma32_check: a must be nonzero");
  if (b.is_zero()) throw PreconditionError("lemma32_check: b must be nonzero");
  if (!f(a).is_zero()) throw PreconditionError("lemma32_check: f(a) must be 0, got " + f(a).str());
  if (f(b).is_zero()) throw PreconditionError("lemma32_check: f(b) must be nonzero");
  CheckOutcome out{checks::lemma32, Verdict::pass, 1, 0, std::nullopt, {}};
  Bindings in = detail::bind({{"a", a}, {"b", b}});
  if (detail::lemma32_eval(f, in)) {
    out.verdict = Verdict::fail;
    out.witness = detail::finalize(checks::lemma32, f, in, 0);
  }
  return out;
}

inline Certificate lemma32_certificate(const MapHandle& f, const Vector& a, const Vector& b) {
  CheckOutcome o = lemma32_check(f, a, b);
  if (o.failed()) throw ViolationError("lemma32 certificate: f(a+b) != f(b)");
  return detail::zero_image_certificate(f, a, b, "lemma32");
}

/// Constellation proving f(a+b) = f(a) + f(b), routed by the independence of f(a), f(b) and of a, b.
inline Certificate additivity_certificate(const MapHandle& f, const Vector& a, const Vector& b,
                                          const std::pair<Vector, Vector>& ind) {
  require_same_dim(a, b);
  const std::size_t m = a.dim();
  const Vector zero = Vector::zero(m);
  Vector fa = f(a), fb = f(b);
  auto finish_sum = [](CertificateBuilder& c) { return c.finish("f(a+b) = f(a)+f(b)"); };

  if (linearly_independent(fa, fb)) {
    CertificateBuilder c(f, "additivity-case1");
    c.point("0", zero).point("a", a).point("b", b).point("a+b", a + b, {{1, "a"}, {1, "b"}});
    detail::parallelogram(c, "a", "b", "a+b", "L0", "L1", "L2", "L3", true, true);
    return finish_sum(c);
  }

  if (!linearly_independent(a, b)) {
    CertificateBuilder c(f, "additivity-case2");
    c.point("0", zero).point("a", a).point("b", b).point("a+b", a + b, {{1, "a"}, {1, "b"}});
    if (a.is_zero() || b.is_zero()) {
      c.equal("0", {}).equal("a+b", {"a", "b"}).note("a or b is 0; follows from f(0) = 0");
      return finish_sum(c);
    }
    if (fa.is_zero() || fb.is_zero()) {
      c.equal("0", {}).equal("a+b", {"a", "b"}).note("the line through 0 and a has image {0}");
      return finish_sum(c);
    }
    const Vector& ai = detail::choose_auxiliary(f, a, ind);
    c.point("ai", ai).point("ai+a", ai + a, {{1, "ai"}, {1, "a"}}).point("ai+a+b", ai + a + b, {{1, "ai+a"}, {1, "b"}});
    c.line("L0", "a", "0").line("L1", "ai+a", "ai").line("L2", "ai", "0").line("L3", "ai+a", "0");
    c.line("L4", "ai+a", "a").line("L5", "ai+a+b", "b").line("L6", "ai+a+b", "a+b");
    c.meet({"L0", "L2", "L3"}, "0").meet({"L0", "L4"}, "a").meet({"L0", "L5"}, "b").meet({"L0", "L6"}, "a+b");
    c.meet({"L1", "L2"}, "ai").meet({"L1", "L3", "L4"}, "ai+a").meet({"L1", "L5", "L6"}, "ai+a+b");
    c.parallel({"L0", "L1"}).parallel({"L2", "L4", "L6"}).parallel({"L3", "L5"});
    c.equal("ai+a", {"ai", "a"}).equal("ai+a+b", {"ai", "a", "b"}).equal("a+b", {"a", "b"});
    return finish_sum(c);
  }

  // a, b independent with dependent images.
  if (fa.is_zero() && fb.is_zero()) {
    CertificateBuilder c(f, "additivity-case3");
    c.point("0", zero).point("a", a).point("b", b).point("a+b", a + b, {{1, "a"}, {1, "b"}});
    c.equal("a", {}).equal("b", {}).equal("a+b", {"a", "b"});
    c.note("f(a) = f(b) = 0: the plane through 0, a, b has image {0}");
    return finish_sum(c);
  }
  if (fa.is_zero() || fb.is_zero()) {
    Certificate c = fa.is_zero() ? detail::zero_image_certificate(f, a, b, "additivity-case3")
                                 : detail::zero_image_certificate(f, b, a, "additivity-case3");
    if (fb.is_zero()) c.note = "roles of a and b swapped; " + c.note;
    return c;
  }
  const Vector& ai = detail::choose_auxiliary(f, a, ind);
  CertificateBuilder c(f, "additivity-case3");
  c.point("0", zero).point("a", a).point("b", b).point("ai", ai);
  c.point("a+b", a + b, {{1, "a"}, {1, "b"}});
  c.point("ai+a", ai + a, {{1, "ai"}, {1, "a"}});
  c.point("ai+a+b", ai + a + b, {{1, "ai+a"}, {1, "b"}});
  // Parallelograms on (ai, a) and (ai+a, b) give f(ai+a+b) = f(ai) + f(a) + f(b).
  detail::parallelogram(c, "ai", "a", "ai+a", "L0", "L1", "L2", "L3", true, true);
  detail::parallelogram(c, "ai+a", "b", "ai+a+b", "L4", "L5", "L6", "L7", true, true);
  if (!f(a + b).is_zero()) {
    // A third parallelogram on (ai, a+b) gives f(ai+a+b) = f(ai) + f(a+b).
    detail::parallelogram(c, "ai", "a+b", "ai+a+b", "L0", "L8", "L9", "L10", false, true);
  } else {
    c.line("L8", "a+b", "0").line("L9", "ai", "0").line("L10", "ai+a+b", "ai");
    c.meet({"L8", "L9"}, "0", false).meet({"L9", "L10"}, "ai", false).parallel({"L8", "L10"}, false);
    c.equal("a+b", {}).equal("ai+a+b", {"ai"});
    c.note("f(a+b) = 0: the last step uses the zero-image constellation on (a+b, ai)");
  }
  c.equal("a+b", {"a", "b"});
  return finish_sum(c);
}

enum class DichotomyKind { zero, identity, fail };

inline const char* to_string(DichotomyKind k) {
  switch (k) {
    case DichotomyKind::zero: return "zero";
    case DichotomyKind::identity: return "identity";
    case DichotomyKind::fail: return "fail";
  }
  return "?";
}

struct DichotomyResult {
  DichotomyKind kind = DichotomyKind::fail;
  /// additivity, scalar-multiplicative, scalar-monotone, then the dichotomy scan itself.
  std::vector<CheckOutcome> checks;
  std::optional<Witness> witness;
  /// Names of hypothesis checks that failed, reported alongside a dichotomy failure.
  std::vector<std::string> failed_hypotheses;
};

/// Additive and multiplicative h : Q -> Q is 0 or the identity; decides which on the probes.
inline DichotomyResult scalar_dichotomy(const MapHandle& h, const ProbeConfig& cfg) {
  detail::require_scalar_map(h, "scalar_dichotomy");
  DichotomyResult res;
  res.checks.push_back(check_additivity(h, cfg));
  res.checks.push_back(check_scalar_multiplicative(h, cfg));
  res.checks.push_back(check_scalar_monotone(h, cfg));
  for (const auto& c : res.checks) {
    if (c.failed()) res.failed_hypotheses.push_back(c.check);
  }
  std::optional<Scalar> nonzero_at, moved_at;
  CheckOutcome scan = detail::run_probes(
      checks::scalar_dichotomy, h, cfg, Stream::dichotomy, [&](ProbeRng& rng, std::size_t i) -> detail::ProbeResult {
        Scalar r = i < detail::kFixedR ? detail::fixed_r(i) : rng.scalar();
        Scalar hr = detail::vec1(h(Vector{r}));
        if (!nonzero_at && !hr.is_zero()) nonzero_at = r;
        if (!moved_at && hr != r) moved_at = r;
        if (nonzero_at && moved_at) return detail::bind({{"r", *nonzero_at}, {"s", *moved_at}});
        return detail::Clean{};
      });
  res.checks.push_back(scan);
  if (scan.failed()) {
    res.kind = DichotomyKind::fail;
    res.witness = scan.witness;
  } else {
    res.kind = nonzero_at ? DichotomyKind::identity : DichotomyKind::zero;
  }
  return res;
}

struct PipelineResult {
  CheckOutcome outcome;
  /// True when every sampled image is 0, so f is the zero map on the probes.
  bool trivial = false;
  std::optional<Vector> anchor;
  PhiTable table;
  std::optional<DichotomyResult> dichotomy;
};

/// phi along one anchor must be additive and multiplicative, hence 0 or the identity.
/// Additivity of f itself is the caller's precondition and is not re-checked here.
inline PipelineResult theorem29_pipeline(const MapHandle& f, const ProbeConfig& cfg) {
  cfg.validate();
  const std::size_t m = f.input_dim();
  PipelineResult res;
  for (std::size_t i = 0; i < m && !res.anchor; ++i) {
    if (!f(Vector::unit(m, i)).is_zero()) res.anchor = Vector::unit(m, i);
  }
  for (std::size_t i = 0; i < cfg.count && !res.anchor; ++i) {
    ProbeRng rng(cfg, Stream::theorem29, i);
    Vector a = rng.vector(m);
    if (!f(a).is_zero()) res.anchor = a;
  }
  if (!res.anchor) {
    res.trivial = true;
    res.outcome = CheckOutcome{"theorem29", Verdict::pass, cfg.count, 0, std::nullopt, "image is {0} on every probe: f is linear"};
    return res;
  }
  const Vector a = *res.anchor;

  std::vector<std::pair<Scalar, Scalar>> grid;
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) grid.emplace_back(detail::fixed_r(i), detail::fixed_r(j));
  }
  auto pairs = [&](ProbeRng& rng, std::size_t i) {
    if (i < grid.size()) return grid[i];
    Scalar r = rng.scalar();
    Scalar s = rng.scalar();
    return std::pair{r, s};
  };
  auto phi_at = [&](const Scalar& r) {
    if (auto p = detail::phi_or_absent(f, a, r)) {
      res.table.entries[r] = *p;
      res.table.anchors[r] = a;
    }
  };

  CheckOutcome mult = detail::run_probes(
      checks::phi_multiplicative, f, cfg, Stream::theorem29, [&](ProbeRng& rng, std::size_t i) -> detail::ProbeResult {
        auto [r, s] = pairs(rng, i);
        phi_at(r);
        phi_at(s);
        phi_at(r * s);
        Bindings in = detail::bind({{"a", a}, {"r", r}, {"s", s}});
        if (detail::phi_multiplicative_eval(f, in)) return in;
        return detail::Clean{};
      });
  if (mult.failed()) {
    res.outcome = mult;
    return res;
  }
  CheckOutcome add = detail::run_probes(
      checks::phi_additive, f, cfg, Stream::theorem29, [&](ProbeRng& rng, std::size_t i) -> detail::ProbeResult {
        auto [r, s] = pairs(rng, i);
        Bindings in = detail::bind({{"a", a}, {"r", r}, {"s", s}});
        if (detail::phi_additive_eval(f, in)) return in;
        return detail::Clean{};
      });
  if (add.failed()) {
    res.outcome = add;
    return res;
  }
  res.dichotomy = scalar_dichotomy(detail::phi_map(f, a), cfg);
  if (res.dichotomy->kind == DichotomyKind::fail) {
    // Restate the first failure against f so its witness revalidates on f itself.
    CheckOutcome first = res.dichotomy->checks.back();
    for (const auto& c : res.dichotomy->checks) {
      if (c.failed()) {
        first = c;
        break;
      }
    }
    first.check = "phi-" + first.check;
    first.witness->inputs.insert(first.witness->inputs.begin(), Binding{"anchor", a});
    res.outcome = first;
    return res;
  }
  res.outcome = CheckOutcome{"theorem29", Verdict::pass, mult.probes + add.probes, 0, std::nullopt,
                             std::string("phi is ") + to_string(res.dichotomy->kind)};
  return res;
}

/// f(x) = g(x + a*) - g(a*), after checking that g(a0*) - g(a*) and g(a1*) - g(a*) are independent.
inline MapHandle affine_reduce(const MapHandle& g, const AffineIndependence& w) {
  Vector base = g(w.base);
  if (!linearly_independent(g(w.first) - base, g(w.second) - base)) {
    throw PreconditionError("affine_reduce: g(a0*) - g(a*) and g(a1*) - g(a*) are not independent");
  }
  return shift_map(g, w.base);
}

/// Checks of the reduced map x -> g(x + shift) - g(shift), reported against g with the shift as input.
inline CheckOutcome check_reduced(const MapHandle& g, const Vector& shift, const ProbeConfig& cfg, bool additivity) {
  const std::size_t m = g.input_dim();
  const char* name = additivity ? checks::reduced_additivity : checks::reduced_homogeneity;
  return detail::run_probes(name, g, cfg, Stream::reduced,
                            detail::sampled(name, g, [shift, m, additivity](ProbeRng& rng, std::size_t) {
                              Vector a = rng.vector(m);
                              if (additivity) {
                                Vector b = rng.vector(m);
                                return std::optional(detail::bind({{"shift", shift}, {"a", a}, {"b", b}}));
                              }
                              Scalar c = rng.scalar();
                              return std::optional(detail::bind({{"shift", shift}, {"a", a}, {"c", c}}));
                            }));
}

}  // namespace colline
