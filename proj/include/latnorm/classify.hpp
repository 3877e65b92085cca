#pragma once

// Vertex-cone classification: simple, smooth, basic triangles, Hilbert
// bases and very ampleness.

#include <algorithm>
#include <vector>

#include "latnorm/polytope.hpp"

namespace latnorm {

/// The tangent cone of a polytope at a vertex, given by the primitive edge
/// directions leaving the apex.
struct VertexCone {
  Point apex;
  std::vector<Vector> rays;
};

struct HilbertBasis {
  std::vector<Vector> elements;  // lexicographic order
};

inline VertexCone vertex_cone(const Polytope& P, std::size_t vertex) {
  VertexCone c{P.vertices().at(vertex), {}};
  for (auto j : P.neighbors(vertex))
    c.rays.push_back((P.vertices()[j] - P.vertices()[vertex]).primitive());
  std::sort(c.rays.begin(), c.rays.end());
  return c;
}

namespace detail {

inline void require_full(const Polytope& P, const char* op) {
  if (!P.full_dimensional())
    throw GeometryError(std::string(op) + ": polytope is not full-dimensional");
}

/// Inward normals of the facets of a pointed full-dimensional cone.
inline std::vector<Vector> cone_inequalities(const std::vector<Vector>& rays) {
  const int n = rays.front().dim();
  std::vector<Point> pts{Point(n)};
  pts.insert(pts.end(), rays.begin(), rays.end());
  Polytope hull = convex_hull(pts);
  if (!hull.full_dimensional()) throw GeometryError("cone is not full-dimensional");
  std::vector<Vector> r;
  for (const auto& h : hull.facets())
    if (h.offset == 0) r.push_back(h.normal);
  return r;
}

inline bool in_cone(const std::vector<Vector>& ineqs, const Vector& x) {
  for (const auto& n : ineqs)
    if (dot_wide(n, x) < 0) return false;
  return true;
}

/// Rays of a pointed 3-D cone in cyclic order starting at the
/// lexicographically smallest ray.
inline std::vector<Vector> cyclic_rays(std::vector<Vector> rays) {
  std::sort(rays.begin(), rays.end());
  Point s(3);
  for (const auto& r : rays) s += r;
  const Vector r0 = rays.front();
  auto half = [&](const Vector& w) {
    if (w == r0) return 0;
    Wide side = det3(s, r0, w);
    return side > 0 ? 0 : 1;
  };
  std::stable_sort(rays.begin() + 1, rays.end(), [&](const Vector& a, const Vector& b) {
    int ha = half(a), hb = half(b);
    if (ha != hb) return ha < hb;
    return det3(s, a, b) > 0;
  });
  return rays;
}

/// Lattice points of the half-open parallelepiped sum [0,1) g_i of a
/// simplicial full-dimensional cone.
inline std::vector<Vector> parallelepiped_points(const std::vector<Vector>& gens) {
  const int n = gens.front().dim();
  std::vector<Vector> out;
  Point lo(n), hi(n);
  for (const auto& g : gens)
    for (int i = 0; i < n; ++i) (g[i] < 0 ? lo[i] : hi[i]) += g[i];
  Wide D;
  std::vector<Vector> dual;  // lambda_i * D = <dual_i, x>
  if (n == 1) {
    D = gens[0][0];
    dual = {Point{1}};
  } else if (n == 2) {
    D = det2(gens[0], gens[1]);
    dual = {Point{gens[1][1], -gens[1][0]}, Point{-gens[0][1], gens[0][0]}};
  } else {
    D = det3(gens[0], gens[1], gens[2]);
    dual = {cross(gens[1], gens[2]), cross(gens[2], gens[0]), cross(gens[0], gens[1])};
  }
  if (D == 0) throw GeometryError("degenerate simplicial cone");
  const Wide absD = D < 0 ? -D : D;
  Point x(n);
  auto scan = [&](auto&& self, int axis) -> void {
    if (axis == n) {
      for (const auto& d : dual) {
        Wide l = dot_wide(d, x);
        if (D < 0) l = -l;
        if (l < 0 || l >= absD) return;
      }
      out.push_back(x);
      return;
    }
    for (Int t = lo[axis]; t <= hi[axis]; ++t) {
      x[axis] = t;
      self(self, axis + 1);
    }
  };
  scan(scan, 0);
  return out;
}

}  // namespace detail

/// Minimal generating set of the semigroup (cone ∩ lattice) of a pointed
/// full-dimensional cone.
inline HilbertBasis hilbert_basis(const VertexCone& C) {
  if (C.rays.empty()) throw GeometryError("hilbert_basis: cone has no rays");
  const int n = C.rays.front().dim();
  std::vector<Vector> rays;
  for (const auto& r : C.rays) rays.push_back(r.primitive());
  std::sort(rays.begin(), rays.end());
  rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
  if (int(rays.size()) < n) throw GeometryError("hilbert_basis: cone is not full-dimensional");

  std::vector<std::vector<Vector>> simplices;
  if (n == 3 && rays.size() > 3) {
    auto cyc = detail::cyclic_rays(rays);
    for (std::size_t i = 1; i + 1 < cyc.size(); ++i) simplices.push_back({cyc[0], cyc[i], cyc[i + 1]});
  } else if (int(rays.size()) == n) {
    simplices.push_back(rays);
  } else {
    throw GeometryError("hilbert_basis: cone is not pointed");
  }
  const auto ineqs = detail::cone_inequalities(rays);

  std::vector<Vector> cand = rays;
  for (const auto& s : simplices)
    for (const auto& p : detail::parallelepiped_points(s))
      if (!p.is_zero()) cand.push_back(p);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  HilbertBasis hb;
  for (const auto& h : cand) {
    bool reducible = false;
    for (const auto& g : cand)
      if (g != h && detail::in_cone(ineqs, h - g)) {
        reducible = true;
        break;
      }
    if (!reducible) hb.elements.push_back(h);
  }
  return hb;
}

inline bool is_simple(const Polytope& P) {
  detail::require_full(P, "is_simple");
  for (std::size_t v = 0; v < P.vertices().size(); ++v)
    if (int(P.neighbors(v).size()) != P.dim()) return false;
  return true;
}

inline bool is_smooth(const Polytope& P) {
  detail::require_full(P, "is_smooth");
  const int n = P.dim();
  if (n <= 1) return true;
  for (std::size_t v = 0; v < P.vertices().size(); ++v) {
    auto c = vertex_cone(P, v);
    if (int(c.rays.size()) != n) return false;
    Wide d = n == 2 ? det2(c.rays[0], c.rays[1]) : det3(c.rays[0], c.rays[1], c.rays[2]);
    if (d != 1 && d != -1) return false;
  }
  return true;
}

/// Smoothness relative to the lattice of the affine hull; accepts faces
/// of any dimension (polygons in Z^3 in particular).
inline bool is_smooth_in_span(const Polytope& P) {
  if (P.full_dimensional()) return is_smooth(P);
  if (P.dim() <= 1) return true;
  if (P.dim() != 2) return false;
  for (std::size_t v = 0; v < P.vertices().size(); ++v) {
    auto c = vertex_cone(P, v);
    if (c.rays.size() != 2) return false;
    if (cross(lift3(c.rays[0]), lift3(c.rays[1])).content() != 1) return false;
  }
  return true;
}

/// A lattice triangle of normalized area 1 in the lattice of its plane.
inline bool is_basic_triangle(const Polytope& A) {
  if (A.dim() != 2) throw GeometryError("is_basic_triangle: input is not 2-dimensional");
  return A.vertices().size() == 3 && A.normalized_area() == 1;
}

/// Every vertex cone's Hilbert basis lies in P - v.
inline bool is_very_ample(const Polytope& P) {
  detail::require_full(P, "is_very_ample");
  for (std::size_t v = 0; v < P.vertices().size(); ++v) {
    const auto c = vertex_cone(P, v);
    for (const auto& h : hilbert_basis(c).elements)
      if (!P.contains(c.apex + h)) return false;
  }
  return true;
}

}  // namespace latnorm
