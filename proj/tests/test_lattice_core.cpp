#include <gtest/gtest.h>

#include <random>
#include <set>

#include "latnorm/polytope.hpp"
#include "oracles.hpp"

using namespace latnorm;

namespace {

Polytope reeve(Int q) { return convex_hull({Point{0, 0, 0}, Point{1, 0, 0}, Point{0, 1, 0}, Point{1, 1, q}}); }

Polytope unit_cube() {
  std::vector<Point> v;
  for (Int x = 0; x <= 1; ++x)
    for (Int y = 0; y <= 1; ++y)
      for (Int z = 0; z <= 1; ++z) v.push_back(Point{x, y, z});
  return convex_hull(v);
}

std::vector<Point> random_points3(std::mt19937_64& rng, int count, Int lo, Int hi) {
  std::uniform_int_distribution<Int> d(lo, hi);
  std::vector<Point> v;
  for (int i = 0; i < count; ++i) v.push_back(Point{d(rng), d(rng), d(rng)});
  return v;
}

bool is_full3(const std::vector<Point>& v) {
  for (std::size_t a = 1; a < v.size(); ++a)
    for (std::size_t b = a + 1; b < v.size(); ++b)
      for (std::size_t c = b + 1; c < v.size(); ++c)
        if (det3(v[a] - v[0], v[b] - v[0], v[c] - v[0]) != 0) return true;
  return false;
}

}  // namespace

TEST(Arith, CheckedOverflowThrows) {
  EXPECT_THROW(checked_mul(Int(1) << 62, 4), OverflowError);
  EXPECT_THROW(checked_add(INT64_MAX, 1), OverflowError);
  EXPECT_EQ(floor_div(-3, 2), -2);
  EXPECT_EQ(ceil_div(-3, 2), -1);
  EXPECT_EQ(ceil_div(3, 2), 2);
}

TEST(Arith, FractionOrdering) {
  EXPECT_LT(Fraction(1, 3), Fraction(1, 2));
  EXPECT_EQ(Fraction(2, 4), Fraction(1, 2));
  EXPECT_EQ(Fraction(-3, 2).floor(), -2);
  EXPECT_EQ(Fraction(-3, 2).ceil(), -1);
  EXPECT_EQ(Fraction(5, -2), Fraction(-5, 2));
}

TEST(Unimodular, CompletionHasGivenLastColumn) {
  for (Point v : {Point{0, 0, 1}, Point{2, 3, 5}, Point{-4, 6, 1}, Point{1, 1, 2}, Point{0, -3, 7}}) {
    IntMatrix W = complete_to_unimodular(v);
    EXPECT_EQ(W.col(2), v);
    EXPECT_TRUE(W.det() == 1 || W.det() == -1);
    EXPECT_EQ(W.unimodular_inverse().apply(v), (Point{0, 0, 1}));
  }
  IntMatrix W2 = complete_to_unimodular(Point{3, -5});
  EXPECT_EQ(W2.col(1), (Point{3, -5}));
  EXPECT_THROW(complete_to_unimodular(Point{2, 4, 6}), GeometryError);
}

TEST(Unimodular, RejectsNonUnimodular) {
  IntMatrix M = IntMatrix::from_rows({Point{2, 0, 0}, Point{0, 1, 0}, Point{0, 0, 1}}, 3);
  EXPECT_THROW(AffineUnimodularMap(M, Point(3)), GeometryError);
}

TEST(Unimodular, ComposeAndInvert) {
  IntMatrix A = IntMatrix::from_rows({Point{1, 1, 0}, Point{0, 1, 0}, Point{2, 0, 1}}, 3);
  AffineUnimodularMap T(A, Point{1, -2, 3});
  AffineUnimodularMap Ti = T.inverse();
  for (Point p : {Point{0, 0, 0}, Point{5, -7, 2}, Point{1, 1, 1}}) {
    EXPECT_EQ(Ti(T(p)), p);
    EXPECT_EQ(T.after(Ti)(p), p);
  }
}

TEST(ConvexHull, SquareWithDuplicateAndInteriorRemoved) {
  auto P = convex_hull({Point{0, 0}, Point{1, 0}, Point{0, 1}, Point{1, 1}, Point{0, 0}});
  EXPECT_EQ(P.dim(), 2);
  EXPECT_EQ(P.vertices().size(), 4u);
  auto Q = convex_hull({Point{0, 0}, Point{2, 0}, Point{0, 2}, Point{2, 2}, Point{1, 1}, Point{1, 0}});
  EXPECT_EQ(Q.vertices().size(), 4u);
}

TEST(ConvexHull, ReeveTetrahedron) {
  auto Q2 = reeve(2);
  EXPECT_EQ(Q2.dim(), 3);
  EXPECT_EQ(Q2.vertices().size(), 4u);
  EXPECT_EQ(Q2.facets().size(), 4u);
  EXPECT_EQ(Q2.edges().size(), 6u);
}

TEST(ConvexHull, CollinearInputIsSegment) {
  auto S = convex_hull({Point{0, 0, 0}, Point{2, 0, 0}, Point{1, 0, 0}});
  EXPECT_EQ(S.dim(), 1);
  ASSERT_EQ(S.vertices().size(), 2u);
  EXPECT_EQ(S.vertices()[0], (Point{0, 0, 0}));
  EXPECT_EQ(S.vertices()[1], (Point{2, 0, 0}));
}

TEST(ConvexHull, CubeFaceData) {
  auto C = unit_cube();
  EXPECT_EQ(C.vertices().size(), 8u);
  EXPECT_EQ(C.facets().size(), 6u);
  EXPECT_EQ(C.edges().size(), 12u);
  for (const auto& fv : C.facet_vertices()) EXPECT_EQ(fv.size(), 4u);
}

TEST(ConvexHull, CoplanarPointsOnFacetsAreNotVertices) {
  std::vector<Point> v;
  for (Int x = 0; x <= 2; ++x)
    for (Int y = 0; y <= 2; ++y)
      for (Int z = 0; z <= 2; ++z) v.push_back(Point{x, y, z});
  auto C = convex_hull(v);
  EXPECT_EQ(C.vertices().size(), 8u);
  EXPECT_EQ(C.facets().size(), 6u);
}

TEST(ConvexHull, PolygonInSpace) {
  auto A = convex_hull({Point{0, 0, 1}, Point{1, 0, 1}, Point{0, 1, 2}, Point{1, 1, 2}});
  EXPECT_EQ(A.dim(), 2);
  EXPECT_EQ(A.equations().size(), 1u);
  EXPECT_EQ(A.facets().size(), 4u);
  EXPECT_EQ(A.normalized_area(), 2);
  EXPECT_TRUE(A.contains(Point{1, 1, 2}));
  EXPECT_FALSE(A.contains(Point{1, 1, 1}));
  EXPECT_EQ(A.lattice_points().size(), 4u);
}

TEST(LatticePoints, Examples) {
  EXPECT_EQ(unit_cube().lattice_points().size(), 8u);
  EXPECT_EQ(segment(Point{0, 0, 0}, Point{0, 0, 3}).lattice_points().size(), 4u);
  // Q_2 has no lattice points besides its vertices; checked against the
  // brute-force plane oracle.
  std::vector<Point> q2v{Point{0, 0, 0}, Point{1, 0, 0}, Point{0, 1, 0}, Point{1, 1, 2}};
  auto pts = reeve(2).lattice_points();
  EXPECT_EQ(pts, oracle::lattice_points3(q2v));
  EXPECT_EQ(pts.size(), 4u);
}

TEST(LatticePoints, AgreeWithOracleOnRandomHulls) {
  std::mt19937_64 rng(7);
  int checked = 0;
  while (checked < 40) {
    auto v = random_points3(rng, 6, -3, 3);
    if (!is_full3(v)) continue;
    auto P = convex_hull(v);
    ASSERT_EQ(P.dim(), 3);
    for (Int k = 1; k <= 2; ++k) EXPECT_EQ(P.lattice_points_scaled(k), oracle::lattice_points3(v, k));
    ++checked;
  }
}

TEST(LatticePoints, AgreeWithOracleOnRandomPolygons) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<Int> d(-4, 4);
  int checked = 0;
  while (checked < 40) {
    std::vector<Point> v;
    for (int i = 0; i < 5; ++i) v.push_back(Point{d(rng), d(rng)});
    auto P = convex_hull(v);
    if (P.dim() != 2) continue;
    EXPECT_EQ(P.lattice_points(), oracle::lattice_points2(v));
    ++checked;
  }
}

TEST(ConvexHull, VerticesAreExtremeOnRandomInput) {
  std::mt19937_64 rng(3);
  int checked = 0;
  while (checked < 30) {
    auto v = random_points3(rng, 9, -4, 4);
    if (!is_full3(v)) continue;
    auto P = convex_hull(v);
    auto planes = oracle::supporting_planes3(v);
    for (const auto& p : v) EXPECT_TRUE(P.contains(p));
    // A vertex is extreme iff removing it shrinks the hull.
    for (const auto& w : P.vertices()) {
      std::vector<Point> rest;
      for (const auto& p : v)
        if (p != w) rest.push_back(p);
      if (!is_full3(rest)) continue;
      EXPECT_FALSE(oracle::inside3(oracle::supporting_planes3(rest), w));
    }
    // Every input point that is not a vertex lies in the hull of the vertices.
    auto vp = oracle::supporting_planes3(P.vertices());
    for (const auto& p : v) EXPECT_TRUE(oracle::inside3(vp, p));
    // Facet vertex sets match the tight vertices.
    for (std::size_t f = 0; f < P.facets().size(); ++f) {
      std::set<std::size_t> tight;
      for (std::size_t i = 0; i < P.vertices().size(); ++i)
        if (P.facets()[f].tight_scaled(P.vertices()[i], 1)) tight.insert(i);
      std::set<std::size_t> listed(P.facet_vertices()[f].begin(), P.facet_vertices()[f].end());
      EXPECT_EQ(tight, listed);
      EXPECT_GE(tight.size(), 3u);
    }
    ++checked;
  }
}

TEST(Minkowski, Examples) {
  auto sq = minkowski_sum(segment(Point{0, 0}, Point{1, 0}), segment(Point{0, 0}, Point{0, 1}));
  EXPECT_EQ(sq, convex_hull({Point{0, 0}, Point{1, 0}, Point{0, 1}, Point{1, 1}}));
  auto P4 = minkowski_sum(reeve(4), segment(Point{0, 0, 0}, Point{0, 0, 1}));
  EXPECT_EQ(P4.vertices().size(), 8u);
  auto Q = reeve(3);
  EXPECT_EQ(minkowski_sum(Q, convex_hull({Point{0, 0, 0}})), Q);
}

TEST(Minkowski, CommutativeAndAssociative) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    auto A = convex_hull(random_points3(rng, 4, -2, 2));
    auto B = convex_hull(random_points3(rng, 3, -2, 2));
    auto C = convex_hull(random_points3(rng, 4, -2, 2));
    EXPECT_EQ(minkowski_sum(A, B), minkowski_sum(B, A));
    EXPECT_EQ(minkowski_sum(minkowski_sum(A, B), C), minkowski_sum(A, minkowski_sum(B, C)));
  }
}

TEST(Dilate, Examples) {
  auto sq = convex_hull({Point{0, 0}, Point{1, 0}, Point{0, 1}, Point{1, 1}});
  auto sq2 = dilate(sq, 2);
  EXPECT_EQ(sq2, convex_hull({Point{0, 0}, Point{2, 0}, Point{0, 2}, Point{2, 2}}));
  EXPECT_EQ(sq2.lattice_points().size(), 9u);
  EXPECT_EQ(dilate(sq, 1), sq);
  EXPECT_THROW(dilate(sq, 0), GeometryError);
  // (1/2,1/2,1/2) has barycentric weights 1/4 on each of 0, e1, e2, (1,1,2).
  EXPECT_TRUE(dilate(reeve(2), 2).contains(Point{1, 1, 1}));
  EXPECT_TRUE(reeve(2).contains_scaled(Point{1, 1, 1}, 2));
}

TEST(ApplyMap, Examples) {
  auto sq = convex_hull({Point{0, 0}, Point{1, 0}, Point{0, 1}, Point{1, 1}});
  EXPECT_EQ(apply_map(AffineUnimodularMap(2), sq), sq);
  auto moved = apply_map(AffineUnimodularMap::translation(Point{-1, -1}), sq);
  EXPECT_TRUE(moved.vertex_index(Point{0, 0}).has_value());
  IntMatrix shear = IntMatrix::from_rows({Point{1, 1}, Point{0, 1}, Point(2)}, 2);
  auto par = apply_map(AffineUnimodularMap(shear, Point(2)), sq);
  EXPECT_EQ(par, convex_hull({Point{0, 0}, Point{1, 0}, Point{1, 1}, Point{2, 1}}));
  EXPECT_EQ(par.lattice_points().size(), 4u);
  EXPECT_EQ(oracle::lattice_points2(par.vertices()).size(), 4u);
}

TEST(NormalizePosition, Examples) {
  auto C = unit_cube();
  for (std::size_t f = 0; f < C.facets().size(); ++f) {
    auto [T, img] = normalize_position(C, f);
    for (auto v : C.facet_vertices()[f]) EXPECT_EQ(T(C.vertices()[v])[2], 0);
    for (const auto& v : img.vertices()) EXPECT_GE(v[2], 0);
    if (C.facets()[f].normal == Point{0, 0, 1}) {
      EXPECT_EQ(T.linear(), IntMatrix(3));
      EXPECT_EQ(T.offset(), Point(3));
    }
    if (C.facets()[f].normal == Point{0, 0, -1}) {
      for (const auto& v : C.vertices()) EXPECT_EQ(T(v)[2], 1 - v[2]);
    }
  }
  auto Q2 = reeve(2);
  for (std::size_t f = 0; f < Q2.facets().size(); ++f) {
    if (Q2.facets()[f].normal != Point{0, 0, 1}) continue;
    auto [T, img] = normalize_position(Q2, f);
    EXPECT_EQ(T.linear(), IntMatrix(3));
    EXPECT_EQ(img, Q2);
  }
}

TEST(Ehrhart, CountsAreCubicOnRandomPolytopes) {
  std::mt19937_64 rng(13);
  int checked = 0;
  while (checked < 15) {
    auto v = random_points3(rng, 6, -2, 2);
    if (!is_full3(v)) continue;
    auto P = convex_hull(v);
    std::vector<Int> f{1};
    for (Int k = 1; k <= 5; ++k) f.push_back(Int(P.lattice_points_scaled(k).size()));
    // fourth finite difference of a cubic vanishes; two windows over k = 0..5
    for (int s = 0; s <= 1; ++s) {
      Int d4 = f[s] - 4 * f[s + 1] + 6 * f[s + 2] - 4 * f[s + 3] + f[s + 4];
      EXPECT_EQ(d4, 0);
    }
    ++checked;
  }
}

TEST(ApplyMap, PreservesDilateCounts) {
  std::mt19937_64 rng(17);
  IntMatrix A = IntMatrix::from_rows({Point{1, 2, 0}, Point{0, 1, 1}, Point{1, 1, 0}}, 3);
  ASSERT_TRUE(A.det() == 1 || A.det() == -1);
  AffineUnimodularMap T(A, Point{3, -1, 2});
  for (int t = 0; t < 10; ++t) {
    auto P = convex_hull(random_points3(rng, 5, -2, 2));
    if (P.dim() != 3) continue;
    auto Q = apply_map(T, P);
    for (Int k = 1; k <= 3; ++k)
      EXPECT_EQ(P.lattice_points_scaled(k).size(), Q.lattice_points_scaled(k).size());
  }
}
