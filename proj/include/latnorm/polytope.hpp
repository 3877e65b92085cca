#pragma once

// Lattice polytopes in dimension <= 3: exact convex hulls, half-space
// representations, face data and lattice point enumeration.

#include <algorithm>
#include <array>
#include <cstdlib>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "latnorm/point.hpp"
#include "latnorm/unimodular.hpp"

namespace latnorm {

/// <normal, x> >= offset, normal primitive.
struct HalfSpace {
  Vector normal;
  Int offset = 0;

  /// x in k * (this half-space).
  bool contains_scaled(const Point& x, Int k) const {
    return dot_wide(normal, x) >= Wide(offset) * k;
  }
  bool contains(const Point& x) const { return contains_scaled(x, 1); }
  bool tight_scaled(const Point& x, Int k) const {
    return dot_wide(normal, x) == Wide(offset) * k;
  }
  friend bool operator==(const HalfSpace&, const HalfSpace&) = default;
  friend auto operator<=>(const HalfSpace&, const HalfSpace&) = default;
};

/// <normal, x> == value, normal primitive.
struct Equation {
  Vector normal;
  Int value = 0;
  bool holds_scaled(const Point& x, Int k) const {
    return dot_wide(normal, x) == Wide(value) * k;
  }
  friend bool operator==(const Equation&, const Equation&) = default;
};

class Polytope;
Polytope convex_hull(std::span<const Point> points);

class Polytope {
public:
  Polytope() = default;

  int ambient_dim() const { return ambient_; }
  int dim() const { return dim_; }
  bool full_dimensional() const { return dim_ == ambient_; }

  /// Vertices in lexicographic order.
  const std::vector<Point>& vertices() const { return vertices_; }
  /// One inward half-space per facet (relative to the affine hull).
  const std::vector<HalfSpace>& facets() const { return facets_; }
  /// Affine hull equations; empty when full-dimensional.
  const std::vector<Equation>& equations() const { return equations_; }
  /// Vertex indices on each facet; for polygons in cyclic order.
  const std::vector<std::vector<std::size_t>>& facet_vertices() const {
    return facet_vertices_;
  }
  /// Pairs of vertex indices, first < second.
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const {
    return edges_;
  }

  /// For polygons: vertices in cyclic order.
  std::vector<Point> cyclic_vertices() const {
    std::vector<Point> r;
    for (auto i : cycle_) r.push_back(vertices_[i]);
    return r;
  }

  /// x in k * P, for any k >= 1 (k = 2 gives membership of x / 2 in P).
  bool contains_scaled(const Point& x, Int k) const {
    if (x.dim() != ambient_) return false;
    for (const auto& e : equations_)
      if (!e.holds_scaled(x, k)) return false;
    for (const auto& h : facets_)
      if (!h.contains_scaled(x, k)) return false;
    return true;
  }
  bool contains(const Point& x) const { return contains_scaled(x, 1); }

  /// x in the relative interior of k * P.
  bool relative_interior_scaled(const Point& x, Int k) const {
    if (!contains_scaled(x, k)) return false;
    for (const auto& h : facets_)
      if (h.tight_scaled(x, k)) return false;
    return true;
  }

  /// Indices of facets whose boundary contains x / k.
  std::vector<std::size_t> tight_facets_scaled(const Point& x, Int k) const {
    std::vector<std::size_t> r;
    for (std::size_t i = 0; i < facets_.size(); ++i)
      if (facets_[i].tight_scaled(x, k)) r.push_back(i);
    return r;
  }

  /// Integer bounding box of k * P.
  std::pair<Point, Point> bounding_box(Int k = 1) const {
    Point lo = vertices_.front(), hi = vertices_.front();
    for (const auto& v : vertices_)
      for (int i = 0; i < ambient_; ++i) {
        lo[i] = std::min(lo[i], v[i]);
        hi[i] = std::max(hi[i], v[i]);
      }
    return {k * lo, k * hi};
  }

  /// (k * P) intersected with the lattice, in lexicographic order.
  std::vector<Point> lattice_points_scaled(Int k) const;
  std::vector<Point> lattice_points() const { return lattice_points_scaled(1); }

  /// Lattice points on the vertical line over (x, y) in k * P, as an
  /// inclusive z-range.  Requires ambient dimension 3.
  std::optional<std::pair<Int, Int>> column_scaled(Int x, Int y, Int k) const;

  /// Real z-range of the vertical line through (x, y, *) / k in P, with
  /// the endpoints scaled by k (i.e. the range in k * P).
  std::optional<std::pair<Fraction, Fraction>> column_extent_scaled(Int x, Int y,
                                                                    Int k) const;

  /// Normalized area of a polygon relative to the lattice of its plane
  /// (a basic triangle has area 1).
  Int normalized_area() const;

  /// Primitive normal of the affine plane spanned by a polygon in Z^3,
  /// or e3 for a polygon in Z^2.
  Vector plane_normal() const;

  /// Vertex indices adjacent to vertex i.
  std::vector<std::size_t> neighbors(std::size_t i) const {
    std::vector<std::size_t> r;
    for (auto [a, b] : edges_) {
      if (a == i) r.push_back(b);
      if (b == i) r.push_back(a);
    }
    std::sort(r.begin(), r.end());
    return r;
  }

  std::optional<std::size_t> vertex_index(const Point& p) const {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), p);
    if (it != vertices_.end() && *it == p) return std::size_t(it - vertices_.begin());
    return std::nullopt;
  }

  /// Polytope of one facet.
  Polytope facet_polytope(std::size_t f) const;

  friend bool operator==(const Polytope& a, const Polytope& b) {
    return a.ambient_ == b.ambient_ && a.vertices_ == b.vertices_;
  }

private:
  friend Polytope convex_hull(std::span<const Point> points);
  void build_faces_from_facets();

  int ambient_ = 0;
  int dim_ = -1;
  std::vector<Point> vertices_;
  std::vector<HalfSpace> facets_;
  std::vector<Equation> equations_;
  std::vector<std::vector<std::size_t>> facet_vertices_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::vector<std::size_t> cycle_;
};

namespace detail {

inline Wide orient3(const Point& a, const Point& b, const Point& c, const Point& d) {
  return det3(lift3(b) - lift3(a), lift3(c) - lift3(a), lift3(d) - lift3(a));
}

/// Affine rank of a point set (-1 for empty) plus a spanning subset.
inline std::pair<int, std::vector<std::size_t>> affine_basis(std::span<const Point> pts) {
  std::vector<std::size_t> basis;
  if (pts.empty()) return {-1, basis};
  basis.push_back(0);
  const Point o = lift3(pts[0]);
  for (std::size_t i = 1; i < pts.size() && basis.size() < 2; ++i)
    if (pts[i] != pts[0]) basis.push_back(i);
  if (basis.size() < 2) return {0, basis};
  const Point d1 = lift3(pts[basis[1]]) - o;
  for (std::size_t i = 1; i < pts.size() && basis.size() < 3; ++i)
    if (!cross(d1, lift3(pts[i]) - o).is_zero()) basis.push_back(i);
  if (basis.size() < 3) return {1, basis};
  const Point nrm = cross(d1, lift3(pts[basis[2]]) - o);
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (dot_wide(nrm, lift3(pts[i]) - o) != 0) {
      basis.push_back(i);
      return {3, basis};
    }
  return {2, basis};
}

/// Primitive vectors spanning the orthogonal complement of `dirs` in Z^n.
inline std::vector<Vector> orthogonal_complement(const std::vector<Vector>& dirs, int n) {
  std::vector<Vector> r;
  if (n == 1) {
    if (dirs.empty()) r.push_back(Point{1});
    return r;
  }
  if (n == 2) {
    if (dirs.empty()) {
      r.push_back(Point{1, 0});
      r.push_back(Point{0, 1});
    } else if (dirs.size() == 1) {
      r.push_back(Point{-dirs[0][1], dirs[0][0]}.primitive().sign_normalized());
    }
    return r;
  }
  if (dirs.empty()) {
    r.push_back(Point{1, 0, 0});
    r.push_back(Point{0, 1, 0});
    r.push_back(Point{0, 0, 1});
  } else if (dirs.size() == 1) {
    const std::array<Point, 3> units{Point{1, 0, 0}, Point{0, 1, 0}, Point{0, 0, 1}};
    for (const auto& u : units) {
      Point c = cross(dirs[0], u);
      if (c.is_zero()) continue;
      c = c.primitive().sign_normalized();
      if (r.empty() || !cross(r[0], c).is_zero()) r.push_back(c);
      if (r.size() == 2) break;
    }
  } else if (dirs.size() == 2) {
    r.push_back(cross(dirs[0], dirs[1]).primitive().sign_normalized());
  }
  return r;
}

/// Indices of the strict convex hull of 2-D points (x = coordinate ix,
/// y = coordinate iy), counter-clockwise in that projection.
inline std::vector<std::size_t> monotone_chain(std::span<const Point> pts, int ix, int iy) {
  std::vector<std::size_t> idx(pts.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::pair(pts[a][ix], pts[a][iy]) < std::pair(pts[b][ix], pts[b][iy]);
  });
  auto turn = [&](std::size_t o, std::size_t a, std::size_t b) {
    return (Wide(pts[a][ix]) - pts[o][ix]) * (Wide(pts[b][iy]) - pts[o][iy]) -
           (Wide(pts[a][iy]) - pts[o][iy]) * (Wide(pts[b][ix]) - pts[o][ix]);
  };
  std::vector<std::size_t> hull(2 * idx.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    while (k >= 2 && turn(hull[k - 2], hull[k - 1], idx[i]) <= 0) --k;
    hull[k++] = idx[i];
  }
  for (std::size_t i = idx.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && turn(hull[k - 2], hull[k - 1], idx[i]) <= 0) --k;
    hull[k++] = idx[i];
  }
  hull.resize(k > 1 ? k - 1 : k);
  return hull;
}

/// Incremental 3-D hull; returns outward-oriented triangles over `pts`.
inline std::vector<std::array<std::size_t, 3>> hull3_triangles(
    std::span<const Point> pts, const std::vector<std::size_t>& seed) {
  using Tri = std::array<std::size_t, 3>;
  std::vector<Tri> faces;
  const std::size_t a = seed[0], b = seed[1], c = seed[2], d = seed[3];
  auto add_oriented = [&](std::size_t i, std::size_t j, std::size_t k, std::size_t inner) {
    if (orient3(pts[i], pts[j], pts[k], pts[inner]) > 0)
      faces.push_back({i, k, j});
    else
      faces.push_back({i, j, k});
  };
  add_oriented(a, b, c, d);
  add_oriented(a, b, d, c);
  add_oriented(a, c, d, b);
  add_oriented(b, c, d, a);

  std::vector<std::pair<std::size_t, std::size_t>> dir_edges;
  std::vector<char> visible;
  for (std::size_t p = 0; p < pts.size(); ++p) {
    if (p == a || p == b || p == c || p == d) continue;
    visible.assign(faces.size(), 0);
    bool any = false;
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (orient3(pts[faces[f][0]], pts[faces[f][1]], pts[faces[f][2]], pts[p]) > 0) {
        visible[f] = 1;
        any = true;
      }
    if (!any) continue;
    dir_edges.clear();
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (visible[f])
        for (int e = 0; e < 3; ++e) dir_edges.emplace_back(faces[f][e], faces[f][(e + 1) % 3]);
    std::sort(dir_edges.begin(), dir_edges.end());
    std::vector<Tri> next;
    next.reserve(faces.size() + 8);
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (!visible[f]) next.push_back(faces[f]);
    for (auto [u, v] : dir_edges)
      if (!std::binary_search(dir_edges.begin(), dir_edges.end(), std::pair(v, u)))
        next.push_back({u, v, p});
    faces = std::move(next);
  }
  return faces;
}

}  // namespace detail

/// Convex hull of a nonempty list of lattice points of one dimension n <= 3.
inline Polytope convex_hull(std::span<const Point> input) {
  if (input.empty()) throw GeometryError("convex_hull of an empty point list");
  const int n = input[0].dim();
  for (const auto& p : input)
    if (p.dim() != n) throw GeometryError("convex_hull: mixed point dimensions");

  std::vector<Point> pts(input.begin(), input.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  Polytope P;
  P.ambient_ = n;
  auto [rank, basis] = detail::affine_basis(pts);
  P.dim_ = rank;
  const Point o3 = lift3(pts[0]);

  std::vector<Vector> dirs;
  for (std::size_t i = 1; i < basis.size() && int(dirs.size()) < std::min(rank, 2); ++i)
    dirs.push_back(lift3(pts[basis[i]]) - o3);
  if (rank < n) {
    std::vector<Vector> d_n;
    for (const auto& d : dirs) d_n.push_back(drop_to(d, n));
    for (const auto& nv : detail::orthogonal_complement(d_n, n))
      P.equations_.push_back({nv, dot(nv, pts[0])});
  }

  auto inward = [&](Vector nrm, const Point& on, const std::vector<Point>& others) {
    nrm = nrm.primitive();
    Int off = dot(nrm, on);
    for (const auto& q : others) {
      Wide s = dot_wide(nrm, q);
      if (s < off) {
        nrm = -nrm;
        off = -off;
        break;
      }
      if (s > off) break;
    }
    return HalfSpace{nrm, off};
  };

  if (rank == 0) {
    P.vertices_ = {pts[0]};
    P.cycle_ = {0};
  } else if (rank == 1) {
    P.vertices_ = {pts.front(), pts.back()};
    const Vector d = (pts.back() - pts.front()).primitive();
    P.facets_.push_back({d, dot(d, pts.front())});
    P.facets_.push_back({-d, -dot(d, pts.back())});
    P.facet_vertices_ = {{0}, {1}};
    P.edges_ = {{0, 1}};
    P.cycle_ = {0, 1};
  } else if (rank == 2) {
    const Vector nrm = cross(dirs[0], dirs[1]);
    int drop = 0;
    for (int i = 1; i < 3; ++i)
      if (std::llabs(nrm[i]) > std::llabs(nrm[drop])) drop = i;
    const int ix = drop == 0 ? 1 : 0, iy = drop == 2 ? 1 : 2;
    auto ring = detail::monotone_chain(pts, ix, iy);
    std::vector<Point> ring_pts;
    for (auto i : ring) ring_pts.push_back(pts[i]);
    P.vertices_ = ring_pts;
    std::sort(P.vertices_.begin(), P.vertices_.end());
    for (const auto& rp : ring_pts) P.cycle_.push_back(*P.vertex_index(rp));
    const std::size_t m = ring_pts.size();
    for (std::size_t i = 0; i < m; ++i) {
      const Point& a = ring_pts[i];
      const Point& b = ring_pts[(i + 1) % m];
      Vector en = n == 2 ? Point{-(b[1] - a[1]), b[0] - a[0]}
                         : drop_to(cross(nrm, lift3(b) - lift3(a)), 3);
      P.facets_.push_back(inward(en, a, {ring_pts[(i + 2) % m]}));
      std::size_t ia = *P.vertex_index(a), ib = *P.vertex_index(b);
      P.facet_vertices_.push_back({ia, ib});
      P.edges_.emplace_back(std::min(ia, ib), std::max(ia, ib));
    }
    std::sort(P.edges_.begin(), P.edges_.end());
  } else {
    auto tris = detail::hull3_triangles(pts, basis);
    std::vector<HalfSpace> planes;
    for (const auto& t : tris) {
      Vector out = cross(pts[t[1]] - pts[t[0]], pts[t[2]] - pts[t[0]]);
      if (out.is_zero()) continue;
      Vector in = -out.primitive();
      planes.push_back({in, dot(in, pts[t[0]])});
    }
    std::sort(planes.begin(), planes.end());
    planes.erase(std::unique(planes.begin(), planes.end()), planes.end());
    std::set<std::size_t> cand;
    for (const auto& t : tris) cand.insert(t.begin(), t.end());
    for (auto i : cand) {
      std::vector<Vector> tight;
      for (const auto& h : planes)
        if (h.tight_scaled(pts[i], 1)) tight.push_back(h.normal);
      bool extreme = false;
      for (std::size_t x = 0; x < tight.size() && !extreme; ++x)
        for (std::size_t y = x + 1; y < tight.size() && !extreme; ++y)
          for (std::size_t z = y + 1; z < tight.size() && !extreme; ++z)
            extreme = det3(tight[x], tight[y], tight[z]) != 0;
      if (extreme) P.vertices_.push_back(pts[i]);
    }
    std::sort(P.vertices_.begin(), P.vertices_.end());
    P.facets_ = std::move(planes);
    P.build_faces_from_facets();
  }
  return P;
}

inline Polytope convex_hull(std::initializer_list<Point> pts) {
  std::vector<Point> v(pts);
  return convex_hull(std::span<const Point>(v));
}

inline void Polytope::build_faces_from_facets() {
  facet_vertices_.assign(facets_.size(), {});
  std::vector<std::vector<std::size_t>> on(vertices_.size());
  for (std::size_t f = 0; f < facets_.size(); ++f)
    for (std::size_t v = 0; v < vertices_.size(); ++v)
      if (facets_[f].tight_scaled(vertices_[v], 1)) {
        facet_vertices_[f].push_back(v);
        on[v].push_back(f);
      }
  for (std::size_t f = 0; f < facets_.size(); ++f) {
    // cyclic order through the 2-D hull of the facet's vertices
    std::vector<Point> fp;
    for (auto v : facet_vertices_[f]) fp.push_back(vertices_[v]);
    Polytope poly = convex_hull(fp);
    std::vector<std::size_t> cyc;
    for (auto i : poly.cycle_) cyc.push_back(*vertex_index(poly.vertices_[i]));
    facet_vertices_[f] = cyc;
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      std::size_t a = cyc[i], b = cyc[(i + 1) % cyc.size()];
      edges_.emplace_back(std::min(a, b), std::max(a, b));
    }
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

inline Polytope Polytope::facet_polytope(std::size_t f) const {
  std::vector<Point> fp;
  for (auto v : facet_vertices_.at(f)) fp.push_back(vertices_[v]);
  return convex_hull(fp);
}

inline std::optional<std::pair<Fraction, Fraction>> Polytope::column_extent_scaled(
    Int x, Int y, Int k) const {
  if (ambient_ != 3) throw GeometryError("column queries need ambient dimension 3");
  std::optional<Fraction> lo, hi;
  auto bound = [&](const Vector& nrm, Wide rhs, bool is_eq) -> bool {
    // nrm.z * z >= rhs - nrm.x * x - nrm.y * y   (== for equations)
    Wide r = rhs - Wide(nrm[0]) * x - Wide(nrm[1]) * y;
    if (nrm[2] == 0) return is_eq ? r == 0 : r <= 0;
    Fraction f(narrow(r), nrm[2]);
    if (is_eq || nrm[2] > 0)
      if (!lo || f > *lo) lo = f;
    if (is_eq || nrm[2] < 0)
      if (!hi || f < *hi) hi = f;
    return true;
  };
  for (const auto& e : equations_)
    if (!bound(e.normal, Wide(e.value) * k, true)) return std::nullopt;
  for (const auto& h : facets_)
    if (!bound(h.normal, Wide(h.offset) * k, false)) return std::nullopt;
  if (!lo || !hi || *lo > *hi) return std::nullopt;
  return std::pair(*lo, *hi);
}

inline std::optional<std::pair<Int, Int>> Polytope::column_scaled(Int x, Int y, Int k) const {
  auto ext = column_extent_scaled(x, y, k);
  if (!ext) return std::nullopt;
  Int lo = ext->first.ceil(), hi = ext->second.floor();
  if (lo > hi) return std::nullopt;
  return std::pair(lo, hi);
}

inline std::vector<Point> Polytope::lattice_points_scaled(Int k) const {
  if (k < 1) throw GeometryError("dilation factor must be >= 1");
  std::vector<Point> out;
  auto [lo, hi] = bounding_box(k);
  if (ambient_ == 3) {
    for (Int x = lo[0]; x <= hi[0]; ++x)
      for (Int y = lo[1]; y <= hi[1]; ++y)
        if (auto col = column_scaled(x, y, k))
          for (Int z = col->first; z <= col->second; ++z) out.push_back(Point{x, y, z});
    return out;
  }
  Point p(ambient_);
  auto scan = [&](auto&& self, int axis) -> void {
    if (axis == ambient_) {
      if (contains_scaled(p, k)) out.push_back(p);
      return;
    }
    for (Int t = lo[axis]; t <= hi[axis]; ++t) {
      p[axis] = t;
      self(self, axis + 1);
    }
  };
  scan(scan, 0);
  return out;
}

inline Vector Polytope::plane_normal() const {
  if (dim_ != 2) throw GeometryError("plane_normal needs a polygon");
  if (ambient_ == 2) return Point{0, 0, 1};
  return equations_.front().normal;
}

inline Int Polytope::normalized_area() const {
  if (dim_ != 2) throw GeometryError("normalized_area needs a polygon");
  Point s(3);
  const Point o = lift3(vertices_[cycle_[0]]);
  for (std::size_t i = 1; i + 1 < cycle_.size(); ++i)
    s += cross(lift3(vertices_[cycle_[i]]) - o, lift3(vertices_[cycle_[i + 1]]) - o);
  return s.content();
}

// ---------------------------------------------------------------------------
// Constructions

inline Polytope minkowski_sum(const Polytope& P, const Polytope& Q) {
  if (P.ambient_dim() != Q.ambient_dim())
    throw GeometryError("minkowski_sum: ambient dimension mismatch");
  std::vector<Point> s;
  for (const auto& p : P.vertices())
    for (const auto& q : Q.vertices()) s.push_back(p + q);
  return convex_hull(s);
}

inline Polytope dilate(const Polytope& P, Int k) {
  if (k < 1) throw GeometryError("dilate: factor must be >= 1");
  std::vector<Point> s;
  for (const auto& v : P.vertices()) s.push_back(k * v);
  return convex_hull(s);
}

inline Polytope translate(const Polytope& P, const Vector& t) {
  std::vector<Point> s;
  for (const auto& v : P.vertices()) s.push_back(v + t);
  return convex_hull(s);
}

inline Polytope apply_map(const AffineUnimodularMap& T, const Polytope& P) {
  if (T.dim() != P.ambient_dim()) throw GeometryError("apply_map: dimension mismatch");
  std::vector<Point> s;
  for (const auto& v : P.vertices()) s.push_back(T(v));
  return convex_hull(s);
}

inline Polytope segment(const Point& a, const Point& b) { return convex_hull({a, b}); }

/// Moves facet `f` of a full-dimensional polytope into the hyperplane
/// x_n = 0 with the polytope on the side x_n >= 0.
inline std::pair<AffineUnimodularMap, Polytope> normalize_position(const Polytope& P,
                                                                    std::size_t f) {
  if (!P.full_dimensional() || f >= P.facets().size())
    throw GeometryError("normalize_position: not a facet of a full-dimensional polytope");
  const HalfSpace& h = P.facets()[f];
  // W has the normal as its last column, so W^T has it as its last row.
  const IntMatrix W = complete_to_unimodular(h.normal);
  IntMatrix U(P.ambient_dim());
  for (int i = 0; i < P.ambient_dim(); ++i)
    for (int j = 0; j < P.ambient_dim(); ++j) U(i, j) = W(j, i);
  Point t(P.ambient_dim());
  t[P.ambient_dim() - 1] = -h.offset;
  AffineUnimodularMap T(U, t);
  return {T, apply_map(T, P)};
}

}  // namespace latnorm
