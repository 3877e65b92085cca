#include <gtest/gtest.h>

#include <map>
#include <random>

#include "latnorm/classify.hpp"
#include "oracles.hpp"

using namespace latnorm;

namespace {

Polytope reeve(Int q) { return convex_hull({Point{0, 0, 0}, Point{1, 0, 0}, Point{0, 1, 0}, Point{1, 1, q}}); }
Polytope bg(Int q) { return minkowski_sum(reeve(q), segment(Point{0, 0, 0}, Point{0, 0, 1})); }

Polytope unit_cube() {
  return convex_hull({Point{0, 0, 0}, Point{1, 0, 0}, Point{0, 1, 0}, Point{1, 1, 0}, Point{0, 0, 1},
                      Point{1, 0, 1}, Point{0, 1, 1}, Point{1, 1, 1}});
}

// Facet normals of a 3-D cone from pairs of rays, computed independently of
// the library hull.
std::vector<Point> oracle_cone_normals(const std::vector<Point>& rays) {
  std::vector<Point> out;
  for (std::size_t i = 0; i < rays.size(); ++i)
    for (std::size_t j = i + 1; j < rays.size(); ++j) {
      Point n = cross(rays[i], rays[j]);
      if (n.is_zero()) continue;
      bool pos = false, neg = false;
      for (const auto& r : rays) {
        Wide s = dot_wide(n, r);
        pos |= s > 0;
        neg |= s < 0;
      }
      if (pos && neg) continue;
      out.push_back(neg ? -n : n);
    }
  return out;
}

bool oracle_in(const std::vector<Point>& normals, const Point& x) {
  for (const auto& n : normals)
    if (dot_wide(n, x) < 0) return false;
  return true;
}

// Very ampleness by semigroup generation on a bounded region: every cone
// lattice point near the apex is a sum of lattice points of P - v.
bool oracle_very_ample(const Polytope& P, Int bound) {
  const auto pts = oracle::lattice_points3(P.vertices());
  for (const auto& v : P.vertices()) {
    std::vector<Point> rays;
    for (const auto& w : P.vertices())
      if (w != v) rays.push_back(w - v);
    auto normals = oracle_cone_normals(rays);
    std::vector<Point> gens;
    for (const auto& p : pts)
      if (p != v) gens.push_back(p - v);
    std::map<Point, bool> memo;
    auto generated = [&](auto&& self, const Point& x) -> bool {
      if (x.is_zero()) return true;
      if (auto it = memo.find(x); it != memo.end()) return it->second;
      bool ok = false;
      for (const auto& g : gens)
        if (oracle_in(normals, x - g) && self(self, x - g)) {
          ok = true;
          break;
        }
      memo[x] = ok;
      return ok;
    };
    for (Int x = -bound; x <= bound; ++x)
      for (Int y = -bound; y <= bound; ++y)
        for (Int z = -bound; z <= bound; ++z) {
          Point p{x, y, z};
          if (oracle_in(normals, p) && !generated(generated, p)) return false;
        }
  }
  return true;
}

AffineUnimodularMap random_map(std::mt19937_64& rng) {
  std::uniform_int_distribution<Int> d(-2, 2);
  while (true) {
    IntMatrix M = IntMatrix::from_rows({Point{d(rng), d(rng), d(rng)}, Point{d(rng), d(rng), d(rng)},
                                        Point{d(rng), d(rng), d(rng)}},
                                       3);
    if (M.det() == 1 || M.det() == -1) return {M, Point{d(rng), d(rng), d(rng)}};
  }
}

}  // namespace

TEST(IsSimple, Examples) {
  EXPECT_TRUE(is_simple(unit_cube()));
  auto pyramid = convex_hull({Point{0, 0, 0}, Point{1, 0, 0}, Point{0, 1, 0}, Point{1, 1, 0}, Point{0, 0, 1}});
  EXPECT_FALSE(is_simple(pyramid));
  EXPECT_EQ(pyramid.neighbors(*pyramid.vertex_index(Point{0, 0, 1})).size(), 4u);
  EXPECT_TRUE(is_simple(reeve(2)));
  EXPECT_THROW(is_simple(convex_hull({Point{0, 0, 0}, Point{1, 0, 0}, Point{0, 1, 0}})), GeometryError);
}

TEST(IsSmooth, Examples) {
  EXPECT_TRUE(is_smooth(unit_cube()));
  EXPECT_TRUE(is_smooth(reeve(1)));
  EXPECT_TRUE(is_smooth(reeve(-1)));
  for (Int q = 2; q <= 5; ++q) EXPECT_FALSE(is_smooth(reeve(q))) << q;
  EXPECT_TRUE(is_smooth(convex_hull({Point{0, 0}, Point{2, 0}, Point{0, 2}})));
  // det((0,-1),(2,-1)) = 2 at the vertex (0,1)
  EXPECT_FALSE(is_smooth(convex_hull({Point{0, 0}, Point{2, 0}, Point{0, 1}})));
}

TEST(IsBasicTriangle, Examples) {
  EXPECT_TRUE(is_basic_triangle(convex_hull({Point{0, 0}, Point{1, 0}, Point{0, 1}})));
  EXPECT_FALSE(is_basic_triangle(convex_hull({Point{0, 0}, Point{2, 0}, Point{0, 2}})));
  EXPECT_FALSE(is_basic_triangle(convex_hull({Point{0, 0}, Point{1, 0}, Point{0, 1}, Point{1, 1}})));
  EXPECT_TRUE(is_basic_triangle(convex_hull({Point{0, 0, 1}, Point{1, 0, 3}, Point{0, 1, 2}})));
  EXPECT_THROW(is_basic_triangle(unit_cube()), GeometryError);
}

TEST(HilbertBasis, UnimodularCone) {
  auto hb = hilbert_basis(VertexCone{Point{0, 0}, {Point{1, 0}, Point{0, 1}}});
  EXPECT_EQ(hb.elements, (std::vector<Point>{Point{0, 1}, Point{1, 0}}));
}

TEST(HilbertBasis, ReeveVertexConeContainsCenter) {
  auto Q2 = reeve(2);
  auto c = vertex_cone(Q2, *Q2.vertex_index(Point{0, 0, 0}));
  EXPECT_EQ(c.rays, (std::vector<Point>{Point{0, 1, 0}, Point{1, 0, 0}, Point{1, 1, 2}}));
  auto hb = hilbert_basis(c);
  EXPECT_EQ(hb.elements,
            (std::vector<Point>{Point{0, 1, 0}, Point{1, 0, 0}, Point{1, 1, 1}, Point{1, 1, 2}}));
}

TEST(HilbertBasis, PlanarConeMatchesBruteForce) {
  for (Int q = 1; q <= 5; ++q) {
    auto hb = hilbert_basis(VertexCone{Point{0, 0}, {Point{1, 0}, Point{1, q}}});
    auto brute = oracle::hilbert_basis_bruteforce(2, q + 2, [q](const Point& x) {
      return x[1] >= 0 && q * x[0] - x[1] >= 0;
    });
    EXPECT_EQ(hb.elements, brute) << "q=" << q;
  }
  // Frozen from the brute-force oracle at q = 3.
  auto hb3 = hilbert_basis(VertexCone{Point{0, 0}, {Point{1, 0}, Point{1, 3}}});
  EXPECT_EQ(hb3.elements, (std::vector<Point>{Point{1, 0}, Point{1, 1}, Point{1, 2}, Point{1, 3}}));
}

TEST(HilbertBasis, RandomConesMatchBruteForce) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<Int> d(-2, 2);
  std::uniform_int_distribution<int> nr(3, 4);
  int checked = 0;
  while (checked < 25) {
    // rays of a random pointed cone: vertex cone at 0 of a random polytope
    std::vector<Point> pts{Point{0, 0, 0}};
    int count = nr(rng);
    for (int i = 0; i < count; ++i) pts.push_back(Point{d(rng), d(rng), std::max<Int>(1, d(rng) + 2)});
    auto P = convex_hull(pts);
    if (P.dim() != 3) continue;
    auto at = P.vertex_index(Point{0, 0, 0});
    if (!at) continue;
    auto c = vertex_cone(P, *at);
    auto normals = oracle_cone_normals(c.rays);
    auto in = [&](const Point& x) { return oracle_in(normals, x); };
    Int bound = 0;
    for (const auto& r : c.rays) bound += std::max({std::abs(r[0]), std::abs(r[1]), std::abs(r[2])});
    auto brute = oracle::hilbert_basis_bruteforce(3, bound, in);
    EXPECT_EQ(hilbert_basis(c).elements, brute) << "cone " << checked;
    // bounded completeness: each cone point is a sum of basis elements
    const auto& hb = brute;
    std::map<Point, bool> memo;
    auto gen = [&](auto&& self, const Point& x) -> bool {
      if (x.is_zero()) return true;
      if (auto it = memo.find(x); it != memo.end()) return it->second;
      bool ok = false;
      for (const auto& h : hb)
        if (in(x - h) && self(self, x - h)) {
          ok = true;
          break;
        }
      return memo[x] = ok;
    };
    for (Int x = -3; x <= 3; ++x)
      for (Int y = -3; y <= 3; ++y)
        for (Int z = 0; z <= 3; ++z)
          EXPECT_TRUE(!in(Point{x, y, z}) || gen(gen, Point{x, y, z}));
    ++checked;
  }
}

TEST(HilbertBasis, RejectsNonPointed) {
  EXPECT_THROW(hilbert_basis(VertexCone{Point{0, 0}, {Point{1, 0}, Point{-1, 0}, Point{0, 1}}}), GeometryError);
}

TEST(VeryAmple, ReeveThresholds) {
  for (Int q = 1; q <= 5; ++q) {
    EXPECT_EQ(is_very_ample(reeve(q)), q == 1) << "Q_" << q;
    EXPECT_TRUE(is_very_ample(bg(q))) << "P_" << q;
  }
  EXPECT_TRUE(is_very_ample(unit_cube()));
}

TEST(VeryAmple, AgreesWithSemigroupOracle) {
  for (Int q = 1; q <= 3; ++q) {
    EXPECT_EQ(is_very_ample(reeve(q)), oracle_very_ample(reeve(q), 3));
    EXPECT_EQ(is_very_ample(bg(q)), oracle_very_ample(bg(q), 3));
  }
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<Int> d(0, 2);
  int checked = 0;
  while (checked < 12) {
    std::vector<Point> v;
    for (int i = 0; i < 5; ++i) v.push_back(Point{d(rng), d(rng), d(rng)});
    auto P = convex_hull(v);
    if (P.dim() != 3) continue;
    EXPECT_EQ(is_very_ample(P), oracle_very_ample(P, 3)) << checked;
    ++checked;
  }
}

TEST(Classify, SmoothImpliesSimpleAndMapInvariance) {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<Int> d(-2, 2);
  int checked = 0;
  while (checked < 40) {
    std::vector<Point> v;
    for (int i = 0; i < 6; ++i) v.push_back(Point{d(rng), d(rng), d(rng)});
    auto P = convex_hull(v);
    if (P.dim() != 3) continue;
    EXPECT_TRUE(!is_smooth(P) || is_simple(P));
    auto Q = apply_map(random_map(rng), P);
    EXPECT_EQ(is_smooth(P), is_smooth(Q));
    EXPECT_EQ(is_simple(P), is_simple(Q));
    EXPECT_EQ(is_very_ample(P), is_very_ample(Q));
    ++checked;
  }
  auto C = unit_cube();
  EXPECT_TRUE(is_smooth(apply_map(random_map(rng), C)));
}

TEST(Classify, SmoothInSpanForSpacePolygons) {
  EXPECT_TRUE(is_smooth_in_span(convex_hull({Point{0, 0, 0}, Point{2, 0, 0}, Point{0, 2, 2}})));
  EXPECT_TRUE(is_smooth_in_span(convex_hull({Point{0, 0, 1}, Point{1, 0, 1}, Point{0, 1, 2}, Point{1, 1, 2}})));
  EXPECT_FALSE(is_smooth_in_span(convex_hull({Point{0, 0, 0}, Point{1, 0, 0}, Point{1, 2, 0}})));
}
