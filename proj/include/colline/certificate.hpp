#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "colline/error.hpp"
#include "colline/geometry.hpp"
#include "colline/linalg.hpp"
#include "colline/maps.hpp"

namespace colline {

/// A named domain point with its image; `terms`, when present, pins x = sum c_k x_k over earlier points.
struct CertPoint {
  std::string name;
  Vector x;
  Vector fx;
  std::vector<std::pair<Scalar, std::string>> terms;
};

/// Line through two named points; `image` is the line through their images when those differ.
struct CertLine {
  std::string name;
  std::string from;
  std::string to;
  Line line;
  std::optional<Line> image;
};

/// The named lines are pairwise distinct and meet exactly at `point` (and likewise their images
/// at f(point) when `image` is set).
struct IntersectionFact {
  std::vector<std::string> lines;
  std::string point;
  bool image = true;
};

struct ParallelFact {
  std::vector<std::string> lines;
  bool image = true;
};

/// f(lhs) = sum of f(rhs); an empty rhs means f(lhs) = 0.
struct EqualityFact {
  std::string lhs;
  std::vector<std::string> rhs;
};

/// f(scaled_first) = phi_first f(first), f(scaled_second) = phi_second f(second), phi_first = phi_second.
struct PhiFact {
  std::string first;
  std::string second;
  std::string scaled_first;
  std::string scaled_second;
  Scalar r;
  Scalar phi_first;
  Scalar phi_second;
};

struct Certificate {
  std::string kind;
  std::vector<CertPoint> points;
  std::vector<CertLine> lines;
  std::vector<IntersectionFact> intersections;
  std::vector<ParallelFact> parallels;
  /// Derivation steps in order; the last one is the conclusion for additivity kinds.
  std::vector<EqualityFact> equalities;
  std::optional<PhiFact> phi;
  std::string conclusion;
  std::string note;
  bool holds = true;

  const CertPoint& point(const std::string& name) const {
    for (const auto& p : points) {
      if (p.name == name) return p;
    }
    throw ViolationError("certificate refers to unknown point '" + name + "'");
  }

  const CertLine& line(const std::string& name) const {
    for (const auto& l : lines) {
      if (l.name == name) return l;
    }
    throw ViolationError("certificate refers to unknown line '" + name + "'");
  }
};

namespace detail {

inline std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

inline std::string describe(const IntersectionFact& f, bool image) {
  std::string lhs = image ? "f''" + join(f.lines, " & f''") : join(f.lines, " & ");
  return lhs + " meet at " + (image ? "f(" + f.point + ")" : f.point);
}

inline std::string describe(const ParallelFact& f, bool image) {
  return (image ? "f''" + join(f.lines, " || f''") : join(f.lines, " || ")) + " parallel";
}

inline std::string describe(const EqualityFact& e) {
  std::vector<std::string> terms;
  for (const auto& r : e.rhs) terms.push_back("f(" + r + ")");
  return "f(" + e.lhs + ") = " + (terms.empty() ? std::string("0") : join(terms, " + "));
}

/// The lines are pairwise distinct and each pair meets exactly at p.
inline bool meet_exactly_at(const std::vector<Line>& lines, const Vector& p) {
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!lines[i].contains(p)) return false;
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      if (lines[i] == lines[j]) return false;
      auto meet = intersection(lines[i], lines[j]);
      if (!meet || *meet != p) return false;
    }
  }
  return true;
}

inline bool pairwise_parallel(const std::vector<Line>& lines) {
  for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
    if (!lines_parallel(lines[i], lines[i + 1])) return false;
  }
  return true;
}

}  // namespace detail

/// Re-checks every stored fact from the certificate's data alone; with a map, also re-evaluates
/// each stored image. Throws ViolationError naming the first fact that fails.
inline void validate_certificate(const Certificate& c, const MapHandle* f = nullptr) {
  auto fail = [&](const std::string& what) { throw ViolationError(c.kind + " certificate: " + what); };
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    const auto& p = c.points[i];
    if (f && (*f)(p.x) != p.fx) fail("stored image of " + p.name + " differs from the map");
    if (p.terms.empty()) continue;
    Vector sum = Vector::zero(p.x.dim());
    for (const auto& [coef, name] : p.terms) {
      bool earlier = false;
      for (std::size_t j = 0; j < i; ++j) earlier = earlier || c.points[j].name == name;
      if (!earlier) fail("point " + p.name + " is built from a later or unknown point " + name);
      sum = sum + coef * c.point(name).x;
    }
    if (sum != p.x) fail("point " + p.name + " is not the stated combination");
  }
  for (const auto& l : c.lines) {
    const auto &from = c.point(l.from), &to = c.point(l.to);
    if (from.x == to.x || l.line != line_through(from.x, to.x)) fail("line " + l.name + " does not join " + l.from + " and " + l.to);
    if (from.fx == to.fx) {
      if (l.image) fail("image of " + l.name + " recorded as a line but its endpoints have equal images");
    } else if (!l.image || *l.image != line_through(from.fx, to.fx)) {
      fail("image of " + l.name + " is not the line through f(" + l.from + ") and f(" + l.to + ")");
    }
  }
  for (const auto& fact : c.intersections) {
    std::vector<Line> dom, img;
    for (const auto& name : fact.lines) {
      const auto& l = c.line(name);
      dom.push_back(l.line);
      if (fact.image) {
        if (!l.image) fail(detail::describe(fact, true) + ": image of " + name + " is a point");
        img.push_back(*l.image);
      }
    }
    if (!detail::meet_exactly_at(dom, c.point(fact.point).x)) fail(detail::describe(fact, false));
    if (fact.image && !detail::meet_exactly_at(img, c.point(fact.point).fx)) fail(detail::describe(fact, true));
  }
  for (const auto& fact : c.parallels) {
    std::vector<Line> dom, img;
    for (const auto& name : fact.lines) {
      const auto& l = c.line(name);
      dom.push_back(l.line);
      if (fact.image) {
        if (!l.image) fail(detail::describe(fact, true) + ": image of " + name + " is a point");
        img.push_back(*l.image);
      }
    }
    if (!detail::pairwise_parallel(dom)) fail(detail::describe(fact, false));
    if (fact.image && !detail::pairwise_parallel(img)) fail(detail::describe(fact, true));
  }
  for (const auto& e : c.equalities) {
    const Vector& lhs = c.point(e.lhs).fx;
    Vector rhs = Vector::zero(lhs.dim());
    for (const auto& r : e.rhs) rhs = rhs + c.point(r).fx;
    if (lhs != rhs) fail(detail::describe(e) + " fails");
  }
  if (c.phi) {
    const PhiFact& p = *c.phi;
    const auto &a = c.point(p.first), &b = c.point(p.second);
    const auto &ra = c.point(p.scaled_first), &rb = c.point(p.scaled_second);
    if (ra.x != p.r * a.x || rb.x != p.r * b.x) fail("scaled points are not r times their anchors");
    if (ra.fx != p.phi_first * a.fx || a.fx.is_zero()) fail("f(" + p.scaled_first + ") != phi * f(" + p.first + ")");
    if (rb.fx != p.phi_second * b.fx || b.fx.is_zero()) fail("f(" + p.scaled_second + ") != phi * f(" + p.second + ")");
    if (p.phi_first != p.phi_second) fail("phi values differ: " + p.phi_first.str() + " vs " + p.phi_second.str());
  }
  if (!c.holds) fail("conclusion recorded as not holding");
}

/// Incremental construction; every fact is checked as it is added.
class CertificateBuilder {
 public:
  CertificateBuilder(const MapHandle& f, std::string kind) : f_(f) { cert_.kind = std::move(kind); }

  CertificateBuilder& point(const std::string& name, const Vector& x, std::vector<std::pair<Scalar, std::string>> terms = {}) {
    cert_.points.push_back(CertPoint{name, x, f_(x), std::move(terms)});
    return *this;
  }

  CertificateBuilder& line(const std::string& name, const std::string& from, const std::string& to) {
    const auto &a = cert_.point(from), &b = cert_.point(to);
    if (a.x == b.x) throw ViolationError(cert_.kind + " certificate: " + name + " joins coinciding points " + from + ", " + to);
    std::optional<Line> image;
    if (a.fx != b.fx) image = line_through(a.fx, b.fx);
    cert_.lines.push_back(CertLine{name, from, to, line_through(a.x, b.x), image});
    return *this;
  }

  CertificateBuilder& meet(std::vector<std::string> lines, const std::string& point, bool image = true) {
    cert_.intersections.push_back(IntersectionFact{std::move(lines), point, image});
    return *this;
  }

  CertificateBuilder& parallel(std::vector<std::string> lines, bool image = true) {
    cert_.parallels.push_back(ParallelFact{std::move(lines), image});
    return *this;
  }

  CertificateBuilder& equal(const std::string& lhs, std::vector<std::string> rhs) {
    cert_.equalities.push_back(EqualityFact{lhs, std::move(rhs)});
    return *this;
  }

  CertificateBuilder& phi(PhiFact p) {
    cert_.phi = std::move(p);
    return *this;
  }

  CertificateBuilder& note(std::string n) {
    cert_.note = std::move(n);
    return *this;
  }

  Certificate finish(std::string conclusion) {
    cert_.conclusion = std::move(conclusion);
    validate_certificate(cert_);
    return cert_;
  }

 private:
  MapHandle f_;
  Certificate cert_;
};

}  // namespace colline
