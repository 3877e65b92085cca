#pragma once

// Smooth polytopes fibered over a polygon: detection, normality
// certificates, and constructive pair decompositions.

#include <map>
#include <optional>
#include <vector>

#include "latnorm/certificate.hpp"
#include "latnorm/generators.hpp"

namespace latnorm {

/// P with every vertex of B = pi(P) carrying a vertical edge, where pi drops
/// the fiber coordinate.
struct FiberedPrism {
  Polytope original;
  Vector axis;                      // primitive fiber direction, original coordinates
  AffineUnimodularMap to_standard;  // original -> standard position
  Polytope polytope;                // standard position: axis e3, min z = 0
  Polytope base;                    // B in Z^2
  bool irreducible_fiber = false;   // the bottom facet is B x {0}
  std::vector<std::size_t> roof, floor, sides;  // facet indices of `polytope`
};

namespace detail {

inline Point project(const Point& p) { return Point{p[0], p[1]}; }

inline Polytope project(const Polytope& P) {
  std::vector<Point> v;
  for (const auto& p : P.vertices()) v.push_back(project(p));
  return convex_hull(v);
}

inline bool vertical_edges_over_base(const Polytope& P, const Polytope& B) {
  for (const auto& b : B.vertices()) {
    int over = 0;
    for (const auto& v : P.vertices())
      if (v[0] == b[0] && v[1] == b[1]) ++over;
    if (over < 2) return false;
  }
  return true;
}

/// Standardizes P whose fibers are already vertical.  nullopt if P is not
/// fibered along e3.
inline std::optional<FiberedPrism> fibered_along_e3(const Polytope& original, const AffineUnimodularMap& T) {
  const Polytope Q = apply_map(T, original);
  if (Q.dim() != 3 || Q.ambient_dim() != 3) return std::nullopt;
  const Polytope B = project(Q);
  if (B.dim() != 2 || !vertical_edges_over_base(Q, B)) return std::nullopt;

  std::vector<HalfSpace> lower, upper;
  for (const auto& h : Q.facets()) {
    if (h.normal[2] > 0) lower.push_back(h);
    if (h.normal[2] < 0) upper.push_back(h);
  }
  IntMatrix L = IntMatrix::identity(3);
  Point t{0, 0, 0};
  bool irreducible = false;
  const HalfSpace* flat = nullptr;
  if (lower.size() == 1 && lower[0].normal[2] == 1) {
    flat = &lower[0];
  } else if (upper.size() == 1 && upper[0].normal[2] == -1) {
    flat = &upper[0];
  }
  if (flat) {
    // z' = <n, x> - offset, which is >= 0 on Q and vanishes on the facet
    L = IntMatrix::from_rows({Point{1, 0, 0}, Point{0, 1, 0}, flat->normal}, 3);
    t = Point{0, 0, -flat->offset};
    irreducible = true;
  }
  AffineUnimodularMap S(L, t);
  Polytope R = apply_map(S, Q);
  if (!irreducible) {
    const Int zmin = R.bounding_box().first[2];
    S = AffineUnimodularMap::translation(Point{0, 0, -zmin}).after(S);
    R = apply_map(S, Q);
  }
  FiberedPrism F;
  F.original = original;
  F.to_standard = S.after(T);
  F.axis = T.linear().unimodular_inverse().col(2);
  F.polytope = R;
  F.base = project(R);
  F.irreducible_fiber = irreducible;
  for (std::size_t f = 0; f < R.facets().size(); ++f) {
    const Int nz = R.facets()[f].normal[2];
    (nz < 0 ? F.roof : nz > 0 ? F.floor : F.sides).push_back(f);
  }
  return F;
}

}  // namespace detail

/// Tries the primitive edge directions of P in lexicographic order (after
/// normalizing signs) and returns the first fibration found, preferring one
/// whose fiber is irreducible.
inline std::optional<FiberedPrism> detect_fibered(const Polytope& P) {
  if (P.dim() != 3 || P.ambient_dim() != 3) return std::nullopt;
  std::vector<Vector> dirs;
  for (auto [a, b] : P.edges()) dirs.push_back((P.vertices()[b] - P.vertices()[a]).primitive().sign_normalized());
  std::sort(dirs.begin(), dirs.end());
  dirs.erase(std::unique(dirs.begin(), dirs.end()), dirs.end());
  std::optional<FiberedPrism> first;
  for (const auto& d : dirs) {
    const AffineUnimodularMap T(complete_to_unimodular(d).unimodular_inverse(), Point{0, 0, 0});
    auto F = detail::fibered_along_e3(P, T);
    if (!F) continue;
    if (F->irreducible_fiber) return F;
    if (!first) first = std::move(F);
  }
  return first;
}

/// P taken as fibered along e3 without searching for an axis.
inline std::optional<FiberedPrism> fibered_vertical(const Polytope& P) {
  return detail::fibered_along_e3(P, AffineUnimodularMap(3));
}

/// A random smooth polytope fibered along e3.
inline FiberedPrism gen_random_fibered(std::uint64_t seed, Int size_bound, FiberedShape shape = {}) {
  auto F = fibered_vertical(gen_random_fibered_polytope(seed, size_bound, shape));
  if (!F) throw GeneratorError("gen_random_fibered: generated polytope is not fibered");
  return *F;
}

// ---------------------------------------------------------------------------
// Certificates

/// Normality certificate for a smooth fibered polytope with irreducible
/// fiber, in standard coordinates.  Each roof facet A contributes Q(A), or
/// for a basic roof triangle not complemented by the fiber, the slice
/// between A and a parallel copy one lattice step inside plus Q of that copy.
inline NormalityCertificate certify_fibered(const FiberedPrism& F) {
  if (!F.irreducible_fiber) throw GeometryError("certify_fibered: the fiber is not irreducible");
  const Polytope& P = F.polytope;
  if (!is_smooth(P)) throw GeometryError("certify_fibered: polytope is not smooth");
  const Polytope I = segment(Point{0, 0, 0}, Point{0, 0, 1});
  const Point up{0, 0, 1};
  NormalityCertificate cert{P, {}};
  auto append = [&](const NormalityCertificate& c) {
    cert.pieces.insert(cert.pieces.end(), c.pieces.begin(), c.pieces.end());
  };
  for (auto f : F.roof) {
    const Polytope A = P.facet_polytope(f);
    const Int nz = P.facets()[f].normal[2];
    if (!is_basic_triangle(A)) {
      append(certify_QA(translate(A, -up), I, 0));
      continue;
    }
    if (nz == -1) {
      std::vector<Point> pts = A.vertices();
      for (const auto& v : A.vertices()) pts.push_back(Point{v[0], v[1], 0});
      cert.pieces.push_back({convex_hull(pts), WitnessKind::upright_prism_QA});
      continue;
    }
    std::vector<Point> inner;
    for (auto fi : P.facet_vertices()[f]) {
      const Point& v = P.vertices()[fi];
      for (auto j : P.neighbors(fi)) {
        const Point& w = P.vertices()[j];
        if (!A.contains(w)) inner.push_back(v + (w - v).primitive());
      }
    }
    const Polytope At = convex_hull(inner);
    if (inner.size() != 3 || At.dim() != 2 || is_basic_triangle(At))
      throw GeometryError("certify_fibered: no inner copy for the basic roof triangle");
    std::vector<Point> slice = A.vertices();
    slice.insert(slice.end(), inner.begin(), inner.end());
    cert.pieces.push_back({convex_hull(slice), WitnessKind::slice});
    append(certify_QA(translate(At, -up), I, 0));
  }
  detail::prune_pieces(cert.pieces);
  return cert;
}

/// Certificate pieces carried back to the original coordinates.
inline NormalityCertificate to_original(const FiberedPrism& F, const NormalityCertificate& cert) {
  const auto back = F.to_standard.inverse();
  NormalityCertificate out{apply_map(back, cert.target), {}};
  for (const auto& p : cert.pieces) out.pieces.push_back({apply_map(back, p.polytope), p.kind});
  return out;
}

// ---------------------------------------------------------------------------
// Pair decompositions

enum class FiberedRoute { boundary, slab, line, same_facet, rerouted, oracle_fallback };

inline std::string_view to_string(FiberedRoute r) {
  switch (r) {
    case FiberedRoute::boundary: return "boundary";
    case FiberedRoute::slab: return "slab";
    case FiberedRoute::line: return "line";
    case FiberedRoute::same_facet: return "same_facet";
    case FiberedRoute::rerouted: return "rerouted";
    case FiberedRoute::oracle_fallback: return "oracle_fallback";
  }
  return "?";
}

struct FiberedSplit {
  PairDecomposition pair;
  FiberedRoute route;
};

/// Splits points of 2P for a smooth fibered P (standard coordinates) into
/// two lattice points of P.  Boundary points use a basic triangulation of a
/// facet; where the column of 2P through m has height <= 2 the certificate
/// of P is used.  Other points are first split in the extension
/// P~ = {floor <= z <= d} (normal by certify_fibered after turning it upside
/// down), then moved onto adjacent or coinciding fibers and slid along a
/// common roof facet.  Points the construction cannot place are split by
/// exhaustive search and counted as oracle_fallback.
class FiberedPairDecomposer {
public:
  /// With check_smooth = false the construction also runs on fibered
  /// polytopes that are not smooth; results are still validated.
  explicit FiberedPairDecomposer(FiberedPrism F, bool check_smooth = true) : F_(std::move(F)) {
    const Polytope& P = F_.polytope;
    smooth_ = is_smooth(P);
    if (check_smooth && !smooth_) throw GeometryError("fibered decomposition: polytope is not smooth");
    top_ = P.bounding_box().second[2];
    side_[0] = make_side(P);
    std::vector<Point> flipped;
    for (const auto& v : P.vertices()) flipped.push_back(flip(v, 1));
    side_[1] = make_side(convex_hull(flipped));
  }

  const FiberedPrism& prism() const { return F_; }

  FiberedSplit split(const Point& m) {
    const Polytope& P = F_.polytope;
    if (!P.contains_scaled(m, 2)) throw GeometryError("fibered decomposition: " + m.str() + " is not in 2P");
    FiberedSplit r = route(m);
    if (r.pair.left + r.pair.right != m || !P.contains(r.pair.left) || !P.contains(r.pair.right))
      throw std::logic_error("fibered decomposition produced an invalid pair for " + m.str());
    ++counts_[r.route];
    return r;
  }

  const std::map<FiberedRoute, std::size_t>& route_counts() const { return counts_; }

  /// Extension heights used so far for the upright and flipped orientation.
  std::vector<Int> extension_heights(int orientation) const {
    std::vector<Int> r;
    for (const auto& [d, c] : side_[orientation].extensions) r.push_back(d);
    return r;
  }

private:
  struct Side {
    Polytope P;
    Polytope B;
    std::vector<Polytope> roof_bases;                       // pi(A_j)
    std::vector<std::vector<Polytope>> roof_triangulations; // basic triangles of pi(A_j)
    std::vector<Point> lower;                               // vertices on the floor
    Int max_floor = 0, min_roof = 0;                        // over vertices of B
    std::map<Int, std::optional<NormalityCertificate>> extensions;  // P~ upside down, by d
  };

  Point flip(const Point& p, Int k) const { return Point{p[0], p[1], k * top_ - p[2]}; }

  static Side make_side(const Polytope& P) {
    Side s;
    s.P = P;
    s.B = detail::project(P);
    for (std::size_t f = 0; f < P.facets().size(); ++f)
      if (P.facets()[f].normal[2] < 0) {
        s.roof_bases.push_back(detail::project(P.facet_polytope(f)));
        s.roof_triangulations.push_back(basic_triangulation(s.roof_bases.back()));
      }
    s.max_floor = INT64_MIN;
    s.min_roof = INT64_MAX;
    for (const auto& b : s.B.vertices()) {
      auto col = P.column_scaled(b[0], b[1], 1);
      s.max_floor = std::max(s.max_floor, col->first);
      s.min_roof = std::min(s.min_roof, col->second);
    }
    for (const auto& v : P.vertices())
      if (P.column_scaled(v[0], v[1], 1)->first == v[2]) s.lower.push_back(v);
    return s;
  }

  const std::vector<Polytope>& facet_triangles(std::size_t f) {
    auto it = facet_tris_.find(f);
    if (it != facet_tris_.end()) return it->second;
    const Polytope A = F_.polytope.facet_polytope(f);
    PlaneChart chart(A);
    std::vector<Polytope> tris;
    for (const auto& T : basic_triangulation(chart.to_plane(A))) tris.push_back(chart.from_plane(T));
    return facet_tris_[f] = std::move(tris);
  }

  /// m = v_i + v_j for the basic triangle (or segment) containing m / 2.
  static std::optional<PairDecomposition> split_in_triangles(const std::vector<Polytope>& tris, const Point& m) {
    for (const auto& T : tris) {
      if (!T.contains_scaled(m, 2)) continue;
      for (const auto& a : T.vertices())
        for (const auto& b : T.vertices())
          if (a + b == m) return PairDecomposition{m, a, b};
    }
    return std::nullopt;
  }

  /// m = (r1, a) + (r2, c - a) with both summands in P.
  static std::optional<PairDecomposition> slide(const Polytope& P, const Point& r1, const Point& r2, const Point& m) {
    auto c1 = P.column_scaled(r1[0], r1[1], 1), c2 = P.column_scaled(r2[0], r2[1], 1);
    if (!c1 || !c2) return std::nullopt;
    const Int c = m[2];
    const Int lo = std::max(c1->first, c - c2->second), hi = std::min(c1->second, c - c2->first);
    if (lo > hi) return std::nullopt;
    return PairDecomposition{m, Point{r1[0], r1[1], hi}, Point{r2[0], r2[1], c - hi}};
  }

  static std::optional<PairDecomposition> line(const Polytope& P, const Point& u0, const Point& m) {
    return slide(P, u0, u0, m);
  }

  std::optional<std::pair<PairDecomposition, FiberedRoute>> interior(Side& s, const Point& m) {
    const Point u = detail::project(m);
    const Int c = m[2];
    // extension P~ and a split inside it
    const Int d = std::max(ceil_div(c, 2), s.max_floor + 1);
    auto it = s.extensions.find(d);
    if (it == s.extensions.end()) {
      std::vector<Point> pts;
      for (const auto& v : s.lower) pts.push_back(Point{v[0], v[1], d - v[2]});
      for (const auto& b : s.B.vertices()) pts.push_back(Point{b[0], b[1], 0});
      auto Ft = fibered_vertical(convex_hull(pts));
      if (!Ft) throw std::logic_error("extension is not fibered");
      std::optional<NormalityCertificate> cert;
      try {
        cert = certify_fibered(*Ft);
      } catch (const GeometryError&) {
        // only reachable without the smoothness check
      }
      it = s.extensions.emplace(d, std::move(cert)).first;
    }
    const Point mt{m[0], m[1], 2 * d - c};
    std::optional<PairDecomposition> ext;
    if (it->second)
      for (const auto& piece : it->second->pieces)
        if (piece.polytope.contains_scaled(mt, 2)) {
          ext = split_pair(piece.polytope, mt);
          break;
        }
    std::optional<Point> u1, u2;
    if (ext) {
      u1 = detail::project(ext->left);
      u2 = detail::project(ext->right);
    }
    if (u1) {
      const Vector diff = *u2 - *u1;
      const Int D = diff.content();
      if (D % 2 == 0) {
        // both summands can share the lattice fiber through m / 2
        const Point half = D == 0 ? *u1 : *u1 + (D / 2) * diff.primitive();
        if (auto r = line(s.P, half, m)) return std::pair(*r, FiberedRoute::line);
      } else {
        const Vector delta = diff.primitive();
        const Point a1 = *u1 + ((D - 1) / 2) * delta, a2 = a1 + delta;
        for (const auto& Bj : s.roof_bases)
          if (Bj.contains(a1) && Bj.contains(a2)) {
            if (auto r = slide(s.P, a1, a2, m)) return std::pair(*r, FiberedRoute::same_facet);
            break;
          }
      }
    }
    // a basic triangle of a roof facet's shadow containing m / 2
    for (std::size_t j = 0; j < s.roof_bases.size(); ++j) {
      if (!s.roof_bases[j].contains_scaled(u, 2)) continue;
      for (const auto& R : s.roof_triangulations[j]) {
        if (!R.contains_scaled(u, 2)) continue;
        for (const auto& r1 : R.vertices())
          for (const auto& r2 : R.vertices())
            if (r1 <= r2 && r1 + r2 == u)
              if (auto r = slide(s.P, r1, r2, m)) return std::pair(*r, FiberedRoute::rerouted);
      }
    }
    return std::nullopt;
  }

  FiberedSplit route(const Point& m) {
    const Polytope& P = F_.polytope;
    if (auto tight = P.tight_facets_scaled(m, 2); !tight.empty())
      if (auto r = split_in_triangles(facet_triangles(tight.front()), m)) return {*r, FiberedRoute::boundary};
    const auto ext = *P.column_extent_scaled(m[0], m[1], 2);
    if (ext.second - ext.first <= Fraction(2) && F_.irreducible_fiber && smooth_) {
      if (!own_) own_ = certify_fibered(F_);
      for (const auto& piece : own_->pieces)
        if (piece.polytope.contains_scaled(m, 2)) {
          if (auto r = split_pair(piece.polytope, m)) return {*r, FiberedRoute::slab};
          break;
        }
    }
    const bool flipped = Fraction(2 * m[2]) > ext.first + ext.second;
    const Point mo = flipped ? flip(m, 2) : m;
    if (auto r = interior(side_[flipped ? 1 : 0], mo)) {
      PairDecomposition pd = r->first;
      if (flipped) pd = {m, flip(pd.left, 1), flip(pd.right, 1)};
      return {pd, r->second};
    }
    auto r = split_pair(P, m);
    if (!r) throw GeometryError("fibered decomposition: " + m.str() + " does not split; P is not normal");
    return {*r, FiberedRoute::oracle_fallback};
  }

  FiberedPrism F_;
  Int top_ = 0;
  bool smooth_ = false;
  Side side_[2];
  std::optional<NormalityCertificate> own_;  // certificate of P for thin columns
  std::map<std::size_t, std::vector<Polytope>> facet_tris_;
  std::map<FiberedRoute, std::size_t> counts_;
};

/// One-shot form of FiberedPairDecomposer::split.
inline FiberedSplit fibered_pair_decompose(const FiberedPrism& F, const Point& m, bool check_smooth = true) {
  FiberedPairDecomposer dec(F, check_smooth);
  return dec.split(m);
}

}  // namespace latnorm
