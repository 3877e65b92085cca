#pragma once

// Parallelogram covers of smooth polygons and basic triangulations.

#include <algorithm>
#include <optional>
#include <vector>

#include "latnorm/classify.hpp"

namespace latnorm {

/// Identifies the affine plane of a polygon in Z^3 with Z^2.
class PlaneChart {
public:
  explicit PlaneChart(const Polytope& A) {
    if (A.dim() != 2 || A.ambient_dim() != 3) throw GeometryError("PlaneChart needs a polygon in Z^3");
    const Vector n = A.plane_normal();
    const IntMatrix W = complete_to_unimodular(n);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) to_(i, j) = W(j, i);
    from_ = to_.unimodular_inverse();
    level_ = dot(n, A.vertices().front());
  }

  Point to_plane(const Point& x) const {
    Point y = to_.apply(x);
    if (y[2] != level_) throw GeometryError("point is not in the chart's plane");
    return Point{y[0], y[1]};
  }
  Point from_plane(const Point& p) const { return from_.apply(Point{p[0], p[1], level_}); }

  Polytope to_plane(const Polytope& A) const {
    std::vector<Point> v;
    for (const auto& p : A.vertices()) v.push_back(to_plane(p));
    return convex_hull(v);
  }
  Polytope from_plane(const Polytope& A) const {
    std::vector<Point> v;
    for (const auto& p : A.vertices()) v.push_back(from_plane(p));
    return convex_hull(v);
  }

private:
  IntMatrix to_{3}, from_{3};
  Int level_ = 0;
};

struct ParallelogramCover {
  Polytope base;
  std::vector<Polytope> pieces;
};

/// Four vertices with v0 + v2 = v1 + v3 in cyclic order.
inline bool is_lattice_parallelogram(const Polytope& Q) {
  if (Q.dim() != 2 || Q.vertices().size() != 4) return false;
  auto c = Q.cyclic_vertices();
  return c[0] + c[2] == c[1] + c[3];
}

/// Every point of (1/2) M in `target` lies in some piece.
inline std::optional<Point> half_integer_cover_gap(const Polytope& target,
                                                   const std::vector<Polytope>& pieces) {
  for (const auto& m : target.lattice_points_scaled(2)) {
    bool hit = false;
    for (const auto& p : pieces)
      if (p.contains_scaled(m, 2)) {
        hit = true;
        break;
      }
    if (!hit) return m;
  }
  return std::nullopt;
}

namespace detail {

/// Lattice distance of x from the supporting line of facet h.
inline Int lattice_distance(const HalfSpace& h, const Point& x) { return dot(h.normal, x) - h.offset; }

/// Cover of the strip A ∩ (0 <= dist_E <= 1) along facet f of a planar
/// polygon by parallelograms spanned between the two lattice rows.
inline void strip_cover(const Polytope& A, const std::vector<Point>& pts, std::size_t f,
                        std::vector<Polytope>& out) {
  const HalfSpace& h = A.facets()[f];
  const auto& fv = A.facet_vertices()[f];
  Point a0 = A.vertices()[fv[0]], a1 = A.vertices()[fv[1]];
  if (a1 < a0) std::swap(a0, a1);
  const Vector e = (a1 - a0).primitive();
  const Int len0 = (a1 - a0).content();
  std::vector<Point> row1;
  for (const auto& p : pts)
    if (lattice_distance(h, p) == 1) row1.push_back(p);
  if (row1.empty()) throw GeometryError("strip_cover: polygon has width < 1 over an edge");
  // row1 is a run of lattice points along e
  auto key = [&](const Point& p) { return dot(e, p); };
  std::sort(row1.begin(), row1.end(), [&](const Point& x, const Point& y) { return key(x) < key(y); });
  const Point b0 = row1.front();
  const Int len1 = Int(row1.size()) - 1;
  if (len1 == 0) throw GeometryError("strip_cover: strip is a triangle (polygon is basic or singular)");
  if (len0 <= len1) {
    for (Int j = 0; j + len0 <= len1; ++j)
      out.push_back(convex_hull({a0, a1, b0 + j * e, b0 + (j + len0) * e}));
  } else {
    for (Int i = 0; i + len1 <= len0; ++i)
      out.push_back(convex_hull({a0 + i * e, a0 + (i + len1) * e, b0, b0 + len1 * e}));
  }
}

/// conv of the lattice points of a polygon not on its boundary; nullopt if
/// there are none.
inline std::optional<Polytope> interior_hull(const Polytope& A, const std::vector<Point>& pts) {
  std::vector<Point> inner;
  for (const auto& p : pts)
    if (A.relative_interior_scaled(p, 1)) inner.push_back(p);
  if (inner.empty()) return std::nullopt;
  return convex_hull(inner);
}

inline Polytope cut_polygon(const std::vector<Point>& pts, const HalfSpace& h, Int min_dist) {
  std::vector<Point> kept;
  for (const auto& p : pts)
    if (lattice_distance(h, p) >= min_dist) kept.push_back(p);
  return convex_hull(kept);
}

inline void cover_planar(const Polytope& A, std::vector<Polytope>& out, int depth);

/// Step (c): A° is basic.  Cut one strip off so the rest has thin interior.
inline void cover_basic_interior(const Polytope& A, const std::vector<Point>& pts,
                                 std::vector<Polytope>& out, int depth) {
  for (std::size_t f = 0; f < A.facets().size(); ++f) {
    Polytope rest = cut_polygon(pts, A.facets()[f], 1);
    if (rest.dim() != 2 || !is_smooth(rest) || is_basic_triangle(rest)) continue;
    auto rest_pts = rest.lattice_points();
    auto inner = interior_hull(rest, rest_pts);
    if (inner && inner->dim() == 2) continue;
    strip_cover(A, pts, f, out);
    cover_planar(rest, out, depth + 1);
    return;
  }
  throw GeometryError("parallelogram_cover: no admissible edge for a basic interior polygon");
}

inline void cover_planar(const Polytope& A, std::vector<Polytope>& out, int depth) {
  if (depth > 64) throw GeometryError("parallelogram_cover: recursion did not terminate");
  if (!is_smooth(A)) throw GeometryError("parallelogram_cover: polygon is not smooth");
  if (is_lattice_parallelogram(A)) {
    out.push_back(A);
    return;
  }
  if (is_basic_triangle(A)) throw GeometryError("parallelogram_cover: polygon is a basic triangle");
  const auto pts = A.lattice_points();
  auto inner = interior_hull(A, pts);
  if (inner && inner->dim() == 2 && is_basic_triangle(*inner)) {
    cover_basic_interior(A, pts, out, depth);
    return;
  }
  for (std::size_t f = 0; f < A.facets().size(); ++f) strip_cover(A, pts, f, out);
  if (inner && inner->dim() == 2) {
    if (inner->normalized_area() >= A.normalized_area())
      throw GeometryError("parallelogram_cover: interior area did not decrease");
    cover_planar(*inner, out, depth + 1);
  }
}

inline void dedupe(std::vector<Polytope>& v) {
  std::vector<Polytope> r;
  for (auto& p : v)
    if (std::find(r.begin(), r.end(), p) == r.end()) r.push_back(std::move(p));
  v = std::move(r);
}

}  // namespace detail

/// Cover of a smooth, non-basic lattice polygon (in Z^2 or in a plane of
/// Z^3) by lattice parallelograms.
inline ParallelogramCover parallelogram_cover(const Polytope& A) {
  if (A.dim() != 2) throw GeometryError("parallelogram_cover: input is not a polygon");
  ParallelogramCover cov{A, {}};
  if (A.ambient_dim() == 2) {
    detail::cover_planar(A, cov.pieces, 0);
  } else {
    PlaneChart chart(A);
    std::vector<Polytope> flat;
    detail::cover_planar(chart.to_plane(A), flat, 0);
    for (const auto& q : flat) cov.pieces.push_back(chart.from_plane(q));
  }
  detail::dedupe(cov.pieces);
  return cov;
}

/// Splits a lattice polygon into basic triangles with vertices in B ∩ M by
/// repeatedly splitting at the lexicographically smallest extra lattice
/// point.  Triangles are returned in lexicographic order of their vertices.
inline std::vector<Polytope> basic_triangulation(const Polytope& B) {
  if (B.dim() != 2) throw GeometryError("basic_triangulation: input is not 2-dimensional");
  using Tri = std::array<Point, 3>;
  const auto cyc = B.cyclic_vertices();
  std::vector<Tri> work, done;
  for (std::size_t i = 1; i + 1 < cyc.size(); ++i) work.push_back({cyc[0], cyc[i], cyc[i + 1]});
  while (!work.empty()) {
    Tri t = work.back();
    work.pop_back();
    Polytope T = convex_hull({t[0], t[1], t[2]});
    std::optional<Point> extra;
    for (const auto& p : T.lattice_points())
      if (p != t[0] && p != t[1] && p != t[2]) {
        extra = p;
        break;
      }
    if (!extra) {
      std::sort(t.begin(), t.end());
      done.push_back(t);
      continue;
    }
    for (int i = 0; i < 3; ++i) {
      Tri s = t;
      s[i] = *extra;
      Point n = cross(lift3(s[1] - s[0]), lift3(s[2] - s[0]));
      if (!n.is_zero()) work.push_back(s);
    }
  }
  std::sort(done.begin(), done.end());
  std::vector<Polytope> out;
  for (const auto& t : done) out.push_back(convex_hull({t[0], t[1], t[2]}));
  return out;
}

}  // namespace latnorm
