#include <gtest/gtest.h>

#include <random>

#include "colline/geometry.hpp"
#include "support.hpp"

using namespace colline;
using testing_support::random_scalar;
using testing_support::random_vector;

TEST(LineThrough, Examples) {
  EXPECT_EQ(line_through(Vector({0, 0}), Vector({1, 0})).direction(), Vector({1, 0}));
  Line l = line_through(Vector({1, 1}), Vector({3, 5}));
  EXPECT_EQ(l.origin(), Vector({1, 1}));
  EXPECT_EQ(l.direction(), Vector({2, 4}));
  EXPECT_THROW(line_through(Vector({1, 1}), Vector({1, 1})), DegenerateError);
}

TEST(LineThrough, OrderDoesNotChangePointSet) {
  std::mt19937_64 rng(1);
  Vector a({1, 2, 3}), b({-1, 0, 5});
  Line ab = line_through(a, b), ba = line_through(b, a);
  EXPECT_EQ(ab, ba);
  for (int i = 0; i < 20; ++i) {
    Scalar t = random_scalar(rng);
    EXPECT_TRUE(ba.contains(ab.at(t)));
    EXPECT_TRUE(ab.contains(ba.at(t)));
  }
}

TEST(Line, ParseAndRender) {
  Line l = Line::parse("line (0, 1) dir (2, -1/2)");
  EXPECT_EQ(l.origin(), Vector({0, 1}));
  EXPECT_EQ(l.direction(), Vector({2, Scalar(-1, 2)}));
  EXPECT_EQ(Line::parse(l.str()), l);
  EXPECT_THROW(Line::parse("line (0, 1) dir (0, 0)"), DegenerateError);
}

TEST(DividesInRatio, Examples) {
  EXPECT_EQ(divides_in_ratio(Vector({0, 0}), Vector({2, 0}), 1, 1), Vector({1, 0}));
  EXPECT_EQ(divides_in_ratio(Vector({1, 1}), Vector({4, 7}), 2, 1), Vector({3, 5}));
  Vector b({3, -6});
  Scalar c(2, 5);
  EXPECT_EQ(divides_in_ratio(Vector::zero(2), b, c, Scalar(1) - c), c * b);
  EXPECT_THROW(divides_in_ratio(Vector({0}), Vector({1}), 1, -1), DegenerateError);
}

TEST(RatioOf, Examples) {
  Vector a({0, 0}), b({2, 0});
  EXPECT_EQ(ratio_of(a, b, a), (std::pair<Scalar, Scalar>{0, 1}));
  EXPECT_EQ(ratio_of(a, b, b), (std::pair<Scalar, Scalar>{1, 0}));
  EXPECT_EQ(ratio_of(a, b, Vector({5, 0})), (std::pair<Scalar, Scalar>{Scalar(5, 2), Scalar(-3, 2)}));
  EXPECT_FALSE(ratio_of(a, b, Vector({1, 1})).has_value());
  EXPECT_THROW(ratio_of(a, a, b), DegenerateError);
}

TEST(RatioOf, LeftInverseOfDividesInRatio) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t dim = 1 + trial % 4;
    Vector a = random_vector(rng, dim), b = random_vector(rng, dim);
    Scalar r = random_scalar(rng), s = random_scalar(rng);
    if (a == b || (r + s).is_zero()) continue;
    Scalar t = r / (r + s);
    auto got = ratio_of(a, b, divides_in_ratio(a, b, r, s));
    ASSERT_TRUE(got);
    EXPECT_EQ(got->first, t);
    EXPECT_EQ(got->second, Scalar(1) - t);
  }
}

TEST(InInterval, Examples) {
  Vector a({0, 0}), b({2, 0});
  EXPECT_TRUE(in_interval(a, b, Vector({1, 0}), Interval::closed));
  EXPECT_TRUE(in_interval(a, b, Vector({2, 0}), Interval::closed));
  EXPECT_FALSE(in_interval(a, b, Vector({2, 0}), Interval::open));
  EXPECT_FALSE(in_interval(a, b, Vector({3, 0}), Interval::closed));
  EXPECT_FALSE(in_interval(a, b, Vector({1, 1}), Interval::closed));
  Vector p({1, 1});
  EXPECT_FALSE(in_interval(p, p, p, Interval::open));
  EXPECT_TRUE(in_interval(p, p, p, Interval::closed));
  EXPECT_FALSE(in_interval(p, p, a, Interval::closed));
}

TEST(LinesParallel, Examples) {
  Line l0(Vector({0, 0}), Vector({1, 0}));
  EXPECT_TRUE(lines_parallel(l0, l0));
  EXPECT_TRUE(lines_parallel(l0, Line(Vector({0, 1}), Vector({2, 0}))));
  EXPECT_FALSE(lines_parallel(l0, Line(Vector({0, 0}), Vector({0, 1}))));
}

// Reference definition: equal, or contained in a common plane and disjoint.
bool parallel_by_plane(const Line& l0, const Line& l1) {
  if (l0 == l1) return true;
  std::vector<Vector> spanning{l0.direction(), l1.direction(), l1.origin() - l0.origin()};
  bool coplanar = rank(spanning) <= 2;
  const Vector cols[] = {l0.direction(), -l1.direction()};
  bool disjoint = !solve_unique(cols, l1.origin() - l0.origin()).has_value() &&
                  !(in_span(std::span<const Vector>(cols, 2), l1.origin() - l0.origin()));
  return coplanar && disjoint;
}

TEST(LinesParallel, AgreesWithPlaneDefinition) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 400; ++trial) {
    std::size_t dim = 2 + trial % 3;
    Vector o0 = random_vector(rng, dim, 3), d0 = random_vector(rng, dim, 3);
    if (d0.is_zero()) continue;
    Vector d1 = trial % 2 ? random_scalar(rng, 3) * d0 : random_vector(rng, dim, 3);
    Vector o1 = trial % 3 == 0 ? o0 + random_scalar(rng, 3) * d0 : random_vector(rng, dim, 3);
    if (d1.is_zero()) continue;
    Line l0(o0, d0), l1(o1, d1);
    EXPECT_EQ(lines_parallel(l0, l1), parallel_by_plane(l0, l1)) << l0.str() << " | " << l1.str();
  }
}

TEST(LinesParallel, EquivalenceOnCoplanarTriples) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    Vector d = random_vector(rng, 3);
    if (d.is_zero()) continue;
    Vector e = random_vector(rng, 3);
    Vector base = random_vector(rng, 3);
    auto pick = [&]() -> Line {
      Scalar k = random_scalar(rng);
      bool same = rng() % 3 == 0;
      Vector dir = same ? d : d + random_scalar(rng) * e;
      if (dir.is_zero()) dir = d;
      return Line(base + k * e + random_scalar(rng) * d, dir);
    };
    Line a = pick(), b = pick(), c = pick();
    EXPECT_TRUE(lines_parallel(a, a));
    EXPECT_EQ(lines_parallel(a, b), lines_parallel(b, a));
    if (lines_parallel(a, b) && lines_parallel(b, c)) EXPECT_TRUE(lines_parallel(a, c));
  }
}

TEST(LinesParallel, ParallelPostulate) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t dim = 2 + trial % 3;
    Vector dir = random_vector(rng, dim);
    if (dir.is_zero()) continue;
    Line l(random_vector(rng, dim), dir);
    Vector p = random_vector(rng, dim);
    Line through(p, l.direction());
    EXPECT_TRUE(lines_parallel(through, l));
    Vector q = p + random_vector(rng, dim, 2);
    if (q == p) continue;
    Line candidate = line_through(p, q);
    if (l.contains(p) || !linearly_independent(l.direction(), q - p)) {
      if (lines_parallel(candidate, l)) EXPECT_EQ(candidate, through);
      continue;
    }
    Plane plane = plane_through(l.origin(), l.origin() + l.direction(), p);
    if (plane.contains(candidate)) EXPECT_FALSE(lines_parallel(candidate, l));
  }
}

TEST(PlaneThrough, Examples) {
  Plane e = plane_through(Vector({0, 0, 0}), Vector({1, 0, 0}), Vector({0, 1, 0}));
  EXPECT_TRUE(e.contains(Vector({5, -3, 0})));
  EXPECT_FALSE(e.contains(Vector({0, 0, 1})));
  EXPECT_TRUE(e.contains(e.origin() + Scalar(3) * e.dir1() - Scalar(2) * e.dir2()));
  EXPECT_THROW(plane_through(Vector({0, 0}), Vector({1, 1}), Vector({2, 2})), DegenerateError);
}

TEST(PlaneThrough, PermutationGivesSamePointSet) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    Vector a = random_vector(rng, 3), b = random_vector(rng, 3), c = random_vector(rng, 3);
    const Vector pts[] = {a, b, c};
    if (affine_rank(pts) < 2) continue;
    Plane e = plane_through(a, b, c), f = plane_through(c, a, b);
    EXPECT_EQ(e, f);
    for (int i = 0; i < 10; ++i) {
      Vector p = e.at(random_scalar(rng), random_scalar(rng));
      EXPECT_TRUE(f.contains(p));
      Vector off = p + random_vector(rng, 3);
      EXPECT_EQ(e.contains(off), f.contains(off));
    }
  }
}

void expect_valid_crossing(const Vector& p, const Line& l0, const Line& l1, const Crossing& c) {
  EXPECT_TRUE(c.line.contains(p));
  EXPECT_TRUE(c.line.contains(c.on_first));
  EXPECT_TRUE(c.line.contains(c.on_second));
  EXPECT_TRUE(l0.contains(c.on_first));
  EXPECT_TRUE(l1.contains(c.on_second));
  EXPECT_NE(c.on_first, c.on_second);
}

TEST(CrossingLine, Examples) {
  Line l0(Vector({0, 0}), Vector({1, 0})), l1(Vector({0, 0}), Vector({1, 1}));
  Vector on_l0({3, 0});
  auto c = crossing_line(on_l0, l0, l1);
  ASSERT_TRUE(c);
  expect_valid_crossing(on_l0, l0, l1, *c);
  EXPECT_NE(c->on_second, on_l0);

  EXPECT_FALSE(crossing_line(Vector({0, 0}), l0, l1).has_value());

  Vector generic({2, 5});
  auto g = crossing_line(generic, l0, l1);
  ASSERT_TRUE(g);
  expect_valid_crossing(generic, l0, l1, *g);
  // First candidate is origin(l0) + direction(l0).
  EXPECT_EQ(g->on_first, Vector({1, 0}));

  EXPECT_THROW(crossing_line(generic, l0, Line(Vector({0, 1}), Vector({2, 0}))), PreconditionError);
  Line s0(Vector({0, 0, 0}), Vector({1, 0, 0})), s1(Vector({0, 0, 0}), Vector({0, 1, 0}));
  EXPECT_THROW(crossing_line(Vector({0, 0, 1}), s0, s1), PreconditionError);
}

TEST(CrossingLine, RandomPlanePoints) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t dim = 2 + trial % 3;
    Vector m = random_vector(rng, dim), d0 = random_vector(rng, dim), d1 = random_vector(rng, dim);
    if (!linearly_independent(d0, d1)) continue;
    Line l0(m + random_scalar(rng) * d0, d0), l1(m + random_scalar(rng) * d1, d1);
    Vector p = m + random_scalar(rng, 2) * d0 + random_scalar(rng, 2) * d1;
    auto c = crossing_line(p, l0, l1);
    if (p == m) {
      EXPECT_FALSE(c.has_value());
    } else {
      ASSERT_TRUE(c) << p.str();
      expect_valid_crossing(p, l0, l1, *c);
    }
  }
}
