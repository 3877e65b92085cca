#pragma once

// Example families and seeded random corpora.

#include <cstdint>
#include <random>
#include <vector>

#include "latnorm/classify.hpp"

namespace latnorm {

inline constexpr int kRetryBudget = 1000;

class GeneratorError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Conv{0, e1, e2, (1,1,q)}.
inline Polytope gen_reeve(Int q) {
  if (q < 1) throw GeometryError("gen_reeve: q must be >= 1");
  return convex_hull({Point{0, 0, 0}, Point{1, 0, 0}, Point{0, 1, 0}, Point{1, 1, q}});
}

/// Q_q + [0, e3].
inline Polytope gen_bruns_gubeladze(Int q) {
  if (q < 1) throw GeometryError("gen_bruns_gubeladze: q must be >= 1");
  return minkowski_sum(gen_reeve(q), segment(Point{0, 0, 0}, Point{0, 0, 1}));
}

namespace detail {

inline Int uniform(std::mt19937_64& rng, Int lo, Int hi) {
  return std::uniform_int_distribution<Int>(lo, hi)(rng);
}

/// Cuts the corner at cyclic vertex i of a smooth polygon at lattice depth t
/// along both edges (a toric blow-up, which keeps the polygon smooth).
inline std::vector<Point> chop_corner(const std::vector<Point>& cyc, std::size_t i, Int t) {
  const std::size_t n = cyc.size();
  const Point& v = cyc[i];
  const Point& prev = cyc[(i + n - 1) % n];
  const Point& next = cyc[(i + 1) % n];
  std::vector<Point> out;
  for (std::size_t j = 0; j < n; ++j) {
    if (j != i) {
      out.push_back(cyc[j]);
      continue;
    }
    out.push_back(v + t * (prev - v).primitive());
    out.push_back(v + t * (next - v).primitive());
  }
  return out;
}

inline bool within(const std::vector<Point>& pts, Int lo, Int hi) {
  for (const auto& p : pts)
    for (int i = 0; i < p.dim(); ++i)
      if (p[i] < lo || p[i] > hi) return false;
  return true;
}

inline std::vector<Point> smooth_polygon_vertices(std::mt19937_64& rng, Int bound) {
  std::vector<Point> cyc;
  if (bound >= 2 && uniform(rng, 0, 1) == 0) {
    const Int k = uniform(rng, 2, bound);
    cyc = {Point{0, 0}, Point{k, 0}, Point{0, k}};
  } else {
    const Int a = uniform(rng, 1, bound), b = uniform(rng, 1, bound);
    cyc = {Point{0, 0}, Point{a, 0}, Point{a, b}, Point{0, b}};
  }
  const Int chops = uniform(rng, 0, 6);
  for (Int c = 0; c < chops; ++c) {
    const std::size_t n = cyc.size();
    const std::size_t i = std::size_t(uniform(rng, 0, Int(n) - 1));
    const Int l1 = (cyc[(i + n - 1) % n] - cyc[i]).content();
    const Int l2 = (cyc[(i + 1) % n] - cyc[i]).content();
    const Int lim = std::min(l1, l2) - 1;
    if (lim < 1) continue;
    cyc = chop_corner(cyc, i, uniform(rng, 1, lim));
  }
  if (uniform(rng, 0, 1) == 1) {
    const Int s = uniform(rng, 0, 1) == 0 ? -1 : 1;
    std::vector<Point> sheared;
    Int minx = 0;
    for (const auto& p : cyc) {
      sheared.push_back(Point{p[0] + s * p[1], p[1]});
      minx = std::min(minx, sheared.back()[0]);
    }
    for (auto& p : sheared) p[0] -= minx;
    if (within(sheared, 0, bound)) cyc = sheared;
  }
  return cyc;
}

}  // namespace detail

/// A smooth lattice polygon with coordinates in [0, size_bound], obtained
/// from a dilated standard triangle or a rectangle by cutting corners, and
/// possibly sheared.  Never a basic triangle.
inline Polytope gen_random_smooth_polygon(std::uint64_t seed, Int size_bound) {
  if (size_bound < 1) throw GeometryError("gen_random_smooth_polygon: size_bound must be >= 1");
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
    Polytope A = convex_hull(detail::smooth_polygon_vertices(rng, size_bound));
    if (A.dim() == 2 && is_smooth(A) && !is_basic_triangle(A)) return A;
  }
  throw GeneratorError("gen_random_smooth_polygon: retry budget exhausted");
}

/// z <= c + gx x + gy y  (roof)  or  z >= c + gx x + gy y  (floor).
struct AffineHeight {
  Int c = 0, gx = 0, gy = 0;
  Int at(const Point& p) const { return c + gx * p[0] + gy * p[1]; }
};

struct FiberedShape {
  enum class Floor { flat, general } floor = Floor::flat;
  bool allow_corner_chop = true;
  /// Three roof facets meeting over an interior point, with that vertex cut
  /// off; the new roof triangle is basic and meets no side wall.
  bool isolated_basic_roof = false;
};

namespace detail {

struct Ineq {
  Point a;  // a . x >= b
  Int b;
};

/// Vertices of {x : a_i . x >= b_i}, or nullopt if some vertex is not a
/// lattice point.
inline std::optional<std::vector<Point>> lattice_vertices(const std::vector<Ineq>& hs) {
  std::vector<Point> out;
  for (std::size_t i = 0; i < hs.size(); ++i)
    for (std::size_t j = i + 1; j < hs.size(); ++j)
      for (std::size_t k = j + 1; k < hs.size(); ++k) {
        const Wide D = det3(hs[i].a, hs[j].a, hs[k].a);
        if (D == 0) continue;
        // Cramer: x_c = det(A with column c replaced by b) / D
        Wide num[3];
        for (int c = 0; c < 3; ++c) {
          Point r0 = hs[i].a, r1 = hs[j].a, r2 = hs[k].a;
          r0[c] = hs[i].b;
          r1[c] = hs[j].b;
          r2[c] = hs[k].b;
          num[c] = det3(r0, r1, r2);
        }
        Wide den = D;
        if (den < 0) {
          den = -den;
          for (auto& x : num) x = -x;
        }
        bool feasible = true;
        for (const auto& h : hs) {
          Wide s = 0;
          for (int c = 0; c < 3; ++c) s += Wide(h.a[c]) * num[c];
          if (s < Wide(h.b) * den) {
            feasible = false;
            break;
          }
        }
        if (!feasible) continue;
        for (auto x : num)
          if (x % den != 0) return std::nullopt;
        out.push_back(Point{narrow(num[0] / den), narrow(num[1] / den), narrow(num[2] / den)});
      }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Blows up an interior roof vertex whose three edges all have lattice
/// length >= 2, creating a basic roof triangle that meets no side wall.
inline std::optional<Polytope> chop_roof_vertex(const Polytope& P, const Polytope& B,
                                                std::mt19937_64& rng,
                                                std::optional<Point> at = std::nullopt) {
  std::vector<std::size_t> cands;
  for (std::size_t v = 0; v < P.vertices().size(); ++v) {
    const Point& p = P.vertices()[v];
    if (!B.relative_interior_scaled(Point{p[0], p[1]}, 1) || (at && p != *at)) continue;
    auto nb = P.neighbors(v);
    if (nb.size() != 3) continue;
    bool long_edges = true;
    for (auto j : nb)
      if ((P.vertices()[j] - p).content() < 2) long_edges = false;
    // only the upper vertex over an interior point can be chopped
    auto col = P.column_scaled(p[0], p[1], 1);
    if (long_edges && col && col->second == p[2]) cands.push_back(v);
  }
  if (cands.empty()) return std::nullopt;
  const std::size_t v = cands[std::size_t(uniform(rng, 0, Int(cands.size()) - 1))];
  const Point p = P.vertices()[v];
  std::vector<Point> pts;
  for (std::size_t w = 0; w < P.vertices().size(); ++w)
    if (w != v) pts.push_back(P.vertices()[w]);
  for (auto j : P.neighbors(v)) pts.push_back(p + (P.vertices()[j] - p).primitive());
  return convex_hull(pts);
}

}  // namespace detail

/// A smooth 3-polytope {(x,y) in B, floor <= z <= roof} over a smooth base
/// polygon B, with a concave piecewise-affine integral roof.  With the flat
/// floor the bottom facet is B x {0}.
inline Polytope gen_random_fibered_polytope(std::uint64_t seed, Int size_bound,
                                            FiberedShape shape = {}) {
  if (size_bound < 1) throw GeometryError("gen_random_fibered: size_bound must be >= 1");
  if (shape.isolated_basic_roof && size_bound < 6)
    throw GeometryError("gen_random_fibered: the isolated roof shape needs size_bound >= 6");
  std::mt19937_64 rng(seed);
  const int budget = shape.isolated_basic_roof ? 50 * kRetryBudget : kRetryBudget;
  for (int attempt = 0; attempt < budget; ++attempt) {
    auto cyc = detail::smooth_polygon_vertices(rng, std::max<Int>(1, size_bound - 1));
    Polytope B = convex_hull(cyc);
    if (B.dim() != 2 || !is_smooth(B)) continue;
    std::vector<detail::Ineq> hs;
    for (const auto& f : B.facets()) hs.push_back({Point{f.normal[0], f.normal[1], 0}, f.offset});

    auto random_affine = [&](Int grad, Int base_lo, Int base_hi, bool roof) {
      AffineHeight a{0, detail::uniform(rng, -grad, grad), detail::uniform(rng, -grad, grad)};
      Int ext = roof ? INT64_MAX : INT64_MIN;
      for (const auto& v : B.vertices())
        ext = roof ? std::min(ext, a.at(v)) : std::max(ext, a.at(v));
      a.c = detail::uniform(rng, base_lo, base_hi) - ext;
      return a;
    };

    std::vector<AffineHeight> floors;
    if (shape.floor == FiberedShape::Floor::general) {
      const Int nf = detail::uniform(rng, 1, 2);
      for (Int i = 0; i < nf; ++i) floors.push_back(random_affine(1, 0, 0, false));
    } else {
      floors.push_back({0, 0, 0});
    }
    Int floor_max = INT64_MIN;
    for (const auto& v : B.vertices())
      for (const auto& f : floors) floor_max = std::max(floor_max, f.at(v));

    std::vector<AffineHeight> roofs;
    std::optional<Point> peak;
    if (shape.isolated_basic_roof) {
      std::vector<Point> inner;
      for (const auto& p : B.lattice_points())
        if (B.relative_interior_scaled(p, 1)) inner.push_back(p);
      if (inner.empty()) continue;
      const Point p0 = inner[std::size_t(detail::uniform(rng, 0, Int(inner.size()) - 1))];
      static const Point bases[][2] = {{Point{1, 0}, Point{0, 1}}, {Point{1, 0}, Point{1, 1}},
                                       {Point{0, 1}, Point{1, 1}}, {Point{1, 0}, Point{-1, 1}}};
      const auto& ab = bases[detail::uniform(rng, 0, 3)];
      const Int s = detail::uniform(rng, 0, 1) ? 1 : -1;
      const Point g0{detail::uniform(rng, -1, 1) * (detail::uniform(rng, 0, 2) == 0),
                     detail::uniform(rng, -1, 1) * (detail::uniform(rng, 0, 2) == 0)};
      const Int H = detail::uniform(rng, floor_max + 3, std::max(floor_max + 3, size_bound));
      for (const Point& g : {g0, g0 + s * ab[0], g0 + s * ab[1]})
        roofs.push_back({H - g[0] * p0[0] - g[1] * p0[1], g[0], g[1]});
      peak = Point{p0[0], p0[1], H};
    } else {
      const Int nr = detail::uniform(rng, 1, 4);
      for (Int i = 0; i < nr; ++i) roofs.push_back(random_affine(2, floor_max + 1, floor_max + 4, true));
    }
    bool low_roof = false;
    for (const auto& v : B.vertices())
      for (const auto& r : roofs) low_roof = low_roof || r.at(v) <= floor_max;
    if (low_roof) continue;

    for (const auto& f : floors) hs.push_back({Point{-f.gx, -f.gy, 1}, f.c});
    for (const auto& r : roofs) hs.push_back({Point{r.gx, r.gy, -1}, -r.c});
    auto verts = detail::lattice_vertices(hs);
    if (!verts || verts->size() < 4) continue;
    Polytope P = convex_hull(*verts);
    if (P.dim() != 3 || !is_smooth(P)) continue;
    if (peak) {
      auto C = detail::chop_roof_vertex(P, B, rng, peak);
      if (!C || !is_smooth(*C)) continue;
      P = *C;
    } else if (shape.allow_corner_chop && detail::uniform(rng, 0, 2) == 0) {
      if (auto C = detail::chop_roof_vertex(P, B, rng); C && is_smooth(*C)) P = *C;
    }
    if (const Int zmin = P.bounding_box().first[2]; zmin != 0) P = translate(P, Point{0, 0, -zmin});
    const auto [lo, hi] = P.bounding_box();
    if (lo[0] < 0 || lo[1] < 0 || hi[0] > size_bound || hi[1] > size_bound || hi[2] > size_bound)
      continue;
    return P;
  }
  throw GeneratorError("gen_random_fibered: retry budget exhausted");
}

/// A random element of GL(3, Z) with small entries and a small translation.
inline AffineUnimodularMap gen_random_unimodular_map(std::mt19937_64& rng, int dim = 3) {
  for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
    IntMatrix M(dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) M(i, j) = detail::uniform(rng, -2, 2);
    if (M.det() != 1 && M.det() != -1) continue;
    Point t(dim);
    for (int i = 0; i < dim; ++i) t[i] = detail::uniform(rng, -3, 3);
    return {M, t};
  }
  throw GeneratorError("gen_random_unimodular_map: retry budget exhausted");
}

/// Hull of `count` random points of [0, bound]^3, full-dimensional.
inline Polytope gen_random_polytope(std::mt19937_64& rng, Int bound, int count = 6) {
  for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
    std::vector<Point> v;
    for (int i = 0; i < count; ++i)
      v.push_back(Point{detail::uniform(rng, 0, bound), detail::uniform(rng, 0, bound),
                        detail::uniform(rng, 0, bound)});
    Polytope P = convex_hull(v);
    if (P.dim() == 3) return P;
  }
  throw GeneratorError("gen_random_polytope: retry budget exhausted");
}

}  // namespace latnorm
