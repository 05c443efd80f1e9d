#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "colline/certificate.hpp"
#include "colline/error.hpp"
#include "colline/maps.hpp"
#include "colline/outcome.hpp"
#include "colline/predicates.hpp"
#include "colline/probe.hpp"
#include "colline/theorem.hpp"

namespace colline {

enum class ClassKind { exact_linear, exact_affine, empirically_linear, empirically_affine, non_linear, inconclusive };

inline const char* to_string(ClassKind k) {
  switch (k) {
    case ClassKind::exact_linear: return "ExactLinear";
    case ClassKind::exact_affine: return "ExactAffine";
    case ClassKind::empirically_linear: return "EmpiricallyLinear";
    case ClassKind::empirically_affine: return "EmpiricallyAffine";
    case ClassKind::non_linear: return "NonLinear";
    case ClassKind::inconclusive: return "Inconclusive";
  }
  return "?";
}

inline bool is_linear(ClassKind k) { return k == ClassKind::exact_linear || k == ClassKind::empirically_linear; }
inline bool is_affine(ClassKind k) { return k == ClassKind::exact_affine || k == ClassKind::empirically_affine; }

struct ClassifyOptions {
  /// Off forces the sampled route even for syntactically affine maps.
  bool symbolic = true;
  std::size_t certificates = 9;
};

struct Classification {
  ClassKind kind = ClassKind::inconclusive;
  /// Set only for the exact kinds.
  std::optional<AffineForm> form;
  /// Index into `outcomes` of the failure behind a NonLinear verdict.
  std::optional<std::size_t> failing;
  std::vector<std::string> reasons;
  /// Every outcome is stated against the classified map itself; reduced checks carry the shift as an input.
  std::vector<CheckOutcome> outcomes;
  /// Certificates are stated against the map, or against x -> g(x + reduced_at) - g(reduced_at) when set.
  std::vector<Certificate> certificates;
  std::optional<Vector> reduced_at;
  std::optional<PhiTable> phi;

  const CheckOutcome* failing_outcome() const { return failing ? &outcomes[*failing] : nullptr; }
};

/// The map certificates in `c` are stated against.
inline MapHandle certificate_subject(const MapHandle& g, const Classification& c) {
  return c.reduced_at ? shift_map(g, *c.reduced_at) : g;
}

namespace detail {

inline Witness with_shift(Witness w, const Vector& shift) {
  w.inputs.insert(w.inputs.begin(), Binding{"shift", shift});
  return w;
}

class Classifier {
 public:
  Classifier(const MapHandle& g, const ProbeConfig& cfg, const ClassifyOptions& opt) : g_(g), cfg_(cfg), opt_(opt) {}

  Classification run() {
    cfg_.validate();
    if (opt_.symbolic) {
      if (auto form = g_.symbolic_form()) {
        res_.kind = form->is_linear() ? ClassKind::exact_linear : ClassKind::exact_affine;
        res_.form = std::move(*form);
        res_.reasons.push_back("body is syntactically affine");
        return res_;
      }
    }
    try {
      CheckOutcome zero = record(check_zero_fixed(g_));
      if (zero.passed()) {
        linear_route();
      } else {
        affine_route();
      }
    } catch (const EvalError& e) {
      res_ = Classification{};
      res_.kind = ClassKind::inconclusive;
      res_.reasons.push_back(std::string("evaluation failed: ") + e.what());
    }
    return res_;
  }

 private:
  CheckOutcome record(CheckOutcome o) {
    res_.outcomes.push_back(o);
    return o;
  }

  bool fail_on(std::size_t index) {
    res_.kind = ClassKind::non_linear;
    res_.failing = index;
    return true;
  }

  /// Runs each check; the first failure decides NonLinear.
  template <typename... Checks>
  bool first_failure(Checks&&... run) {
    std::optional<std::size_t> first;
    auto one = [&](auto&& check) {
      record(check());
      if (!first && res_.outcomes.back().failed()) first = res_.outcomes.size() - 1;
    };
    (one(run), ...);
    return first && fail_on(*first);
  }

  void linear_route() {
    const ProbeConfig& c = cfg_;
    const MapHandle& f = g_;
    auto ind = find_independence_witness(f, c);
    if (!ind) res_.reasons.push_back("independence hypothesis unsatisfied: no pair with independent images found");
    if (first_failure([&] { return check_additivity(f, c); }, [&] { return check_homogeneity(f, c); },
                      [&] { return check_line_image(f, c); }, [&] { return check_line_injectivity(f, c); },
                      [&] { return check_ratio_preservation(f, c); },
                      [&] { return check_parallelism_preservation(f, c); },
                      [&] { return check_betweenness(f, c, BetweennessVariant::cor43); },
                      [&] { return check_betweenness(f, c, BetweennessVariant::prop44); })) {
      return;
    }
    if (!ind) {
      res_.kind = ClassKind::empirically_linear;
      res_.reasons.push_back("f(0) = 0 and ratio preservation passed, which together force linearity");
      return;
    }
    machinery(f, *ind, std::nullopt, ClassKind::empirically_linear);
  }

  void affine_route() {
    const ProbeConfig& c = cfg_;
    res_.reasons.push_back("f(0) != 0: not linear; testing for an affine map");
    if (first_failure([&] { return check_line_image(g_, c); }, [&] { return check_line_injectivity(g_, c); },
                      [&] { return check_ratio_preservation(g_, c); },
                      [&] { return check_parallelism_preservation(g_, c); },
                      [&] { return check_betweenness(g_, c, BetweennessVariant::cor43); })) {
      return;
    }
    auto w = find_affine_independence_witness(g_, c);
    if (!w) {
      res_.kind = ClassKind::empirically_affine;
      res_.reasons.push_back("affine independence hypothesis unsatisfied: no triple with independent image differences found");
      res_.reasons.push_back("ratio preservation passed, which forces x -> g(x) - g(0) to be linear");
      return;
    }
    if (first_failure([&] { return check_reduced(g_, w->base, c, true); },
                      [&] { return check_reduced(g_, w->base, c, false); })) {
      return;
    }
    MapHandle f = affine_reduce(g_, *w);
    res_.reduced_at = w->base;
    machinery(f, {w->first - w->base, w->second - w->base}, w->base, ClassKind::empirically_affine);
  }

  /// phi consistency plus sampled certificates on the (possibly reduced) map f.
  void machinery(const MapHandle& f, const std::pair<Vector, Vector>& ind, const std::optional<Vector>& shift,
                 ClassKind success) {
    PhiResult phi = phi_consistency(f, cfg_, ind);
    if (shift) {
      phi.outcome.check = checks::reduced_phi_consistency;
      if (phi.outcome.witness) phi.outcome.witness = with_shift(*phi.outcome.witness, *shift);
    }
    record(phi.outcome);
    if (phi.outcome.failed()) {
      fail_on(res_.outcomes.size() - 1);
      return;
    }
    res_.phi = phi.table;

    const std::size_t m = f.input_dim();
    for (std::size_t k = 0; k < opt_.certificates; ++k) {
      ProbeRng rng(cfg_, Stream::certificates, k);
      Vector a = rng.nonzero_vector(m);
      Vector b = k % 3 == 2 ? rng.nonzero_scalar() * a : rng.nonzero_vector(m);
      try {
        if (k == 0) {
          res_.certificates.push_back(homogeneity_certificate(f, ind.first, ind.second, rng.nonzero_scalar()));
        } else {
          res_.certificates.push_back(additivity_certificate(f, a, b, ind));
        }
      } catch (const PreconditionError& e) {
        res_.reasons.push_back(std::string("certificate ") + std::to_string(k) + " skipped: " + e.what());
      } catch (const ViolationError& e) {
        certificate_failure(f, a, b, shift, e.what());
        return;
      }
    }
    res_.kind = success;
  }

  /// A constellation fact failed; look for a direct additivity witness at the same inputs.
  void certificate_failure(const MapHandle& f, const Vector& a, const Vector& b, const std::optional<Vector>& shift,
                           const std::string& what) {
    res_.reasons.push_back(what);
    Bindings in = bind({{"a", a}, {"b", b}});
    if (!additivity(f, in)) {
      res_.kind = ClassKind::inconclusive;
      res_.reasons.push_back("certificate failed but f(a+b) = f(a)+f(b) holds at its inputs");
      return;
    }
    const char* name = shift ? checks::reduced_additivity : checks::additivity;
    Bindings full = shift ? bind({{"shift", *shift}, {"a", a}, {"b", b}}) : in;
    CheckOutcome o{name, Verdict::fail, 1, 0, finalize(name, g_, full, 0), "found while building a certificate"};
    record(o);
    fail_on(res_.outcomes.size() - 1);
  }

  MapHandle g_;
  ProbeConfig cfg_;
  ClassifyOptions opt_;
  Classification res_;
};

}  // namespace detail

/// Exact when the body is syntactically affine; otherwise decided by sampled checks and certificates.
inline Classification classify_map(const MapHandle& g, const ProbeConfig& cfg, const ClassifyOptions& opt = {}) {
  return detail::Classifier(g, cfg, opt).run();
}

}  // namespace colline
