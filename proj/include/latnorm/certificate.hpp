#pragma once

// Normality certificates: covers of a polytope by pieces that are normal for
// a checkable structural reason.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "latnorm/cover.hpp"
#include "latnorm/normality.hpp"

namespace latnorm {

enum class WitnessKind { parallelepiped, prism_A_plus_I, upright_prism_QA, slice, exhaustive };

inline std::string_view to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::parallelepiped: return "parallelepiped";
    case WitnessKind::prism_A_plus_I: return "prism_A_plus_I";
    case WitnessKind::upright_prism_QA: return "upright_prism_QA";
    case WitnessKind::slice: return "slice";
    case WitnessKind::exhaustive: return "exhaustive";
  }
  return "?";
}

inline std::optional<WitnessKind> parse_witness_kind(std::string_view s) {
  for (auto k : {WitnessKind::parallelepiped, WitnessKind::prism_A_plus_I, WitnessKind::upright_prism_QA,
                 WitnessKind::slice, WitnessKind::exhaustive})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

struct CertificatePiece {
  Polytope polytope;
  WitnessKind kind;
};

struct NormalityCertificate {
  Polytope target;
  std::vector<CertificatePiece> pieces;
};

namespace detail {

inline Vector segment_direction(const Polytope& I) {
  if (I.dim() != 1) throw GeometryError("expected a nondegenerate lattice segment");
  return I.vertices()[1] - I.vertices()[0];
}

/// Drops pieces contained in an earlier or larger piece, and duplicates.
inline void prune_pieces(std::vector<CertificatePiece>& pieces) {
  auto inside = [](const Polytope& a, const Polytope& b) {
    for (const auto& v : a.vertices())
      if (!b.contains(v)) return false;
    return true;
  };
  std::vector<CertificatePiece> out;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < pieces.size() && !redundant; ++j) {
      if (i == j || !inside(pieces[i].polytope, pieces[j].polytope)) continue;
      // equal pieces: keep the first
      redundant = !(pieces[i].polytope == pieces[j].polytope) || j < i;
    }
    if (!redundant) out.push_back(pieces[i]);
  }
  pieces = std::move(out);
}

}  // namespace detail

/// Certificate for A + I with A a smooth polygon in a plane of Z^3 and I a
/// segment transverse to that plane.
inline NormalityCertificate certify_prism(const Polytope& A, const Polytope& I) {
  if (A.dim() != 2 || A.ambient_dim() != 3) throw GeometryError("certify_prism: A must be a polygon in Z^3");
  const Vector d = detail::segment_direction(I);
  const Vector n = A.plane_normal();
  const Wide nd = dot_wide(n, d.primitive());
  if (nd == 0) throw GeometryError("certify_prism: I is parallel to the plane of A");
  if (!is_smooth_in_span(A)) throw GeometryError("certify_prism: A is not smooth");
  NormalityCertificate cert{minkowski_sum(A, I), {}};
  if (is_basic_triangle(A)) {
    if (nd != 1 && nd != -1)
      throw GeometryError("certify_prism: basic A and I do not span the lattice (|det| = " +
                          std::to_string(int64_t(nd < 0 ? -nd : nd)) + ")");
    cert.pieces.push_back({cert.target, WitnessKind::prism_A_plus_I});
    return cert;
  }
  for (const auto& par : parallelogram_cover(A).pieces)
    cert.pieces.push_back({minkowski_sum(par, I), WitnessKind::parallelepiped});
  return cert;
}

/// conv((pi(A) x {floor}) ∪ (A + I)) for vertical I.
inline Polytope build_QA(const Polytope& A, const Polytope& I, Int floor_level) {
  if (A.dim() != 2 || A.ambient_dim() != 3) throw GeometryError("build_QA: A must be a polygon in Z^3");
  const Vector d = detail::segment_direction(I);
  if (d[0] != 0 || d[1] != 0) throw GeometryError("build_QA: I must be vertical");
  std::vector<Point> pts;
  for (const auto& v : A.vertices()) pts.push_back(Point{v[0], v[1], floor_level});
  const Polytope AI = minkowski_sum(A, I);
  for (const auto& v : AI.vertices()) {
    if (v[2] < floor_level) throw GeometryError("build_QA: A + I reaches below the floor");
    pts.push_back(v);
  }
  if (convex_hull(pts).dim() != 3) throw GeometryError("build_QA: A is vertical");
  return convex_hull(pts);
}

/// Certificate for Q(A): A + I plus the sub-prisms over a basic
/// triangulation of pi(A).
inline NormalityCertificate certify_QA(const Polytope& A, const Polytope& I, Int floor_level = 0) {
  if (A.dim() != 2) throw GeometryError("certify_QA: A must be a polygon");
  if (is_basic_triangle(A)) throw GeometryError("certify_QA: A is a basic triangle");
  const Polytope Q = build_QA(A, I, floor_level);
  NormalityCertificate cert{Q, {}};
  cert.pieces = certify_prism(A, I).pieces;
  std::vector<Point> base;
  for (const auto& v : A.vertices()) base.push_back(Point{v[0], v[1]});
  for (const auto& Bi : basic_triangulation(convex_hull(base))) {
    std::vector<Point> pts;
    for (const auto& b : Bi.vertices()) {
      auto col = Q.column_scaled(b[0], b[1], 1);
      if (!col) throw GeometryError("certify_QA: empty column over a base vertex");
      pts.push_back(Point{b[0], b[1], std::max(col->first, floor_level)});
      pts.push_back(Point{b[0], b[1], col->second});
    }
    cert.pieces.push_back({convex_hull(pts), WitnessKind::upright_prism_QA});
  }
  detail::prune_pieces(cert.pieces);
  return cert;
}

/// Single-piece certificate backed by the exhaustive oracle; nullopt if P is
/// not normal.
inline std::optional<NormalityCertificate> certify_exhaustive(const Polytope& P) {
  if (!is_normal(P).normal) return std::nullopt;
  return NormalityCertificate{P, {{P, WitnessKind::exhaustive}}};
}

// ---------------------------------------------------------------------------
// Verification

namespace detail {

/// Vertices {v0 + sum eps_i g_i} for independent g_i.
inline bool is_parallelepiped(const Polytope& P) {
  const int d = P.dim();
  if (d < 1 || P.vertices().size() != (std::size_t(1) << d)) return false;
  const Point v0 = P.vertices().front();
  auto nb = P.neighbors(0);
  if (int(nb.size()) != d) return false;
  std::vector<Vector> g;
  for (auto j : nb) g.push_back(P.vertices()[j] - v0);
  if (d == 2 && cross(lift3(g[0]), lift3(g[1])).is_zero()) return false;
  if (d == 3 && det3(g[0], g[1], g[2]) == 0) return false;
  std::vector<Point> expect;
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    Point p = v0;
    for (int i = 0; i < d; ++i)
      if (mask & (1u << i)) p += g[i];
    expect.push_back(p);
  }
  std::sort(expect.begin(), expect.end());
  return expect == P.vertices();
}

/// The two triangular facets of a 3-polytope with six vertices whose
/// triangles are parallel.
inline std::optional<std::pair<Polytope, Polytope>> parallel_triangles(const Polytope& P) {
  if (P.dim() != 3 || P.vertices().size() != 6) return std::nullopt;
  std::vector<std::size_t> tri;
  for (std::size_t f = 0; f < P.facets().size(); ++f)
    if (P.facet_vertices()[f].size() == 3) tri.push_back(f);
  if (tri.size() != 2) return std::nullopt;
  if (P.facets()[tri[0]].normal != -P.facets()[tri[1]].normal) return std::nullopt;
  return std::pair(P.facet_polytope(tri[0]), P.facet_polytope(tri[1]));
}

inline bool is_basic_prism(const Polytope& P) {
  auto t = parallel_triangles(P);
  if (!t) return false;
  const auto& [T1, T2] = *t;
  if (!is_basic_triangle(T1)) return false;
  const Vector shift = T2.vertices().front() - T1.vertices().front();
  for (std::size_t i = 0; i < 3; ++i)
    if (T2.vertices()[i] - T1.vertices()[i] != shift) return false;
  const Wide nd = dot_wide(T1.plane_normal(), shift.primitive());
  return nd == 1 || nd == -1;
}

/// Prism-like piece over a basic triangle: the six vertices pair up along a
/// common lattice direction d, and projecting along d gives a basic
/// triangle.
inline bool is_upright_over_basic(const Polytope& P) {
  if (P.dim() != 3 || P.ambient_dim() != 3 || P.vertices().size() != 6) return false;
  const auto& V = P.vertices();
  for (std::size_t i = 0; i < V.size(); ++i)
    for (std::size_t j = i + 1; j < V.size(); ++j) {
      const Vector d = (V[j] - V[i]).primitive();
      const IntMatrix T = complete_to_unimodular(d).unimodular_inverse();
      std::map<Point, int> over;
      for (const auto& v : V) {
        const Point w = T.apply(v);
        ++over[Point{w[0], w[1]}];
      }
      if (over.size() != 3) continue;
      std::vector<Point> proj;
      for (const auto& [p, n] : over) {
        if (n != 2) break;
        proj.push_back(p);
      }
      if (proj.size() != 3) continue;
      const Polytope B = convex_hull(proj);
      if (B.dim() == 2 && is_basic_triangle(B)) return true;
    }
  return false;
}

/// conv(T1 ∪ T2) of a basic triangle and a parallel homothetic copy.
inline bool is_slice(const Polytope& P) {
  auto t = parallel_triangles(P);
  if (!t) return false;
  const auto& [T1, T2] = *t;
  const Polytope* small = is_basic_triangle(T1) ? &T1 : (is_basic_triangle(T2) ? &T2 : nullptr);
  if (!small) return false;
  const Polytope& big = small == &T1 ? T2 : T1;
  // homothety: edges of `big` are positive multiples of edges of `small`
  auto s = small->cyclic_vertices(), b = big.cyclic_vertices();
  for (std::size_t r = 0; r < 3; ++r) {
    bool ok = true;
    Int factor = 0;
    for (std::size_t i = 0; i < 3 && ok; ++i) {
      Vector es = s[(i + 1) % 3] - s[i];
      Vector eb = b[(r + i + 1) % 3] - b[(r + i) % 3];
      if (!cross(lift3(es), lift3(eb)).is_zero() || dot_wide(es, eb) <= 0) ok = false;
      Int f = eb.content() / es.content();
      if (factor == 0) factor = f;
      if (f != factor || eb != f * es) ok = false;
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace detail

inline bool structural_check(const CertificatePiece& piece) {
  switch (piece.kind) {
    case WitnessKind::parallelepiped: return detail::is_parallelepiped(piece.polytope);
    case WitnessKind::prism_A_plus_I: return detail::is_basic_prism(piece.polytope);
    case WitnessKind::upright_prism_QA: return detail::is_upright_over_basic(piece.polytope);
    case WitnessKind::slice: return detail::is_slice(piece.polytope);
    case WitnessKind::exhaustive: return true;
  }
  return false;
}

struct VerifyOptions {
  bool oracle = true;     // exhaustive normality test of every piece
  bool soundness = true;  // decompose every point of 2 * target inside a piece
  unsigned workers = 1;
};

struct CertificateCheck {
  bool valid = true;
  std::string failure;
  std::size_t points_checked = 0;
  explicit operator bool() const { return valid; }
};

/// Checks containment, half-integer coverage, per-piece witnesses and,
/// optionally, the oracle and the covering argument point by point.
inline CertificateCheck verify_certificate(const NormalityCertificate& cert, const VerifyOptions& opt = {}) {
  auto fail = [](std::string why) { return CertificateCheck{false, std::move(why), 0}; };
  if (cert.pieces.empty()) return fail("certificate has no pieces");
  for (std::size_t i = 0; i < cert.pieces.size(); ++i) {
    const auto& p = cert.pieces[i];
    for (const auto& v : p.polytope.vertices())
      if (!cert.target.contains(v)) return fail("piece " + std::to_string(i) + " leaves the target at " + v.str());
    if (!structural_check(p))
      return fail("piece " + std::to_string(i) + " is not a valid " + std::string(to_string(p.kind)));
  }
  std::vector<Polytope> polys;
  for (const auto& p : cert.pieces) polys.push_back(p.polytope);
  if (auto gap = half_integer_cover_gap(cert.target, polys))
    return fail("half-integer point " + gap->str() + "/2 is not covered");
  if (opt.oracle)
    for (std::size_t i = 0; i < cert.pieces.size(); ++i)
      if (!is_normal(cert.pieces[i].polytope).normal)
        return fail("piece " + std::to_string(i) + " is not normal");
  CertificateCheck ok;
  if (!opt.soundness) return ok;

  const auto targets = cert.target.lattice_points_scaled(2);
  const unsigned workers = std::max(1u, std::min<unsigned>(opt.workers, unsigned(targets.size() / 64 + 1)));
  std::vector<std::size_t> first_bad(workers, targets.size());
  auto run = [&](unsigned w) {
    for (std::size_t i = w; i < targets.size(); i += workers) {
      const Point& m = targets[i];
      bool done = false;
      for (const auto& p : polys) {
        if (!p.contains_scaled(m, 2)) continue;
        if (auto d = split_pair(p, m)) done = cert.target.contains(d->left) && cert.target.contains(d->right);
        break;
      }
      if (!done) {
        first_bad[w] = i;
        return;
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  const std::size_t bad = *std::min_element(first_bad.begin(), first_bad.end());
  if (bad != targets.size()) return fail("point " + targets[bad].str() + " of 2P does not split in its piece");
  ok.points_checked = targets.size();
  return ok;
}

}  // namespace latnorm
