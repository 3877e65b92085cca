// Acceptance run: one PASS/FAIL line per criterion; exit 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "corpus.hpp"
#include "oracles.hpp"

using namespace latnorm;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

using Clock = std::chrono::steady_clock;

// 1. Very ampleness of Q_q and normality of P_q for q = 1..5.
Outcome thresholds() {
  Outcome o;
  std::ostringstream row;
  for (Int q = 1; q <= 5; ++q) {
    const auto Q = gen_reeve(q), P = gen_bruns_gubeladze(q);
    const bool qva = is_very_ample(Q), pva = is_very_ample(P), pn = is_normal(P).normal;
    if (qva != (q == 1)) o.fail("Q_" + std::to_string(q) + " very ample = " + (qva ? "yes" : "no"));
    if (!pva) o.fail("P_" + std::to_string(q) + " is not very ample");
    if (pn != (q < 4)) o.fail("P_" + std::to_string(q) + " normal = " + (pn ? "yes" : "no"));
    row << (q > 1 ? " " : "") << "q=" << q << ":" << (qva ? "VA" : "-") << "/" << (pn ? "N" : "-");
  }
  if (o.pass) o.detail = row.str();
  return o;
}

// 2. Reeve witness and the 16-pair exhaustive recheck.
Outcome reeve_witness() {
  Outcome o;
  const auto Q2 = gen_reeve(2);
  const Point w{1, 1, 1};
  auto r = pair_check(Q2, 1);
  if (r.holds || !r.witness || *r.witness != w) o.fail("pair_check(Q_2, 1) did not fail at (1,1,1)");
  if (decompose_point(Q2, w, 2)) o.fail("decompose_point found a decomposition of (1,1,1)");
  const auto pts = oracle::lattice_points3(Q2.vertices());
  std::size_t pairs = 0, hits = 0;
  for (const auto& a : pts)
    for (const auto& b : pts) {
      ++pairs;
      hits += a + b == w;
    }
  if (pairs != 16) o.fail("Q_2 has " + std::to_string(pts.size()) + " lattice points, expected 4");
  if (hits) o.fail(std::to_string(hits) + " pairs sum to (1,1,1)");
  if (!oracle::inside3(oracle::supporting_planes3(Q2.vertices()), w, 2)) o.fail("(1,1,1) is not in 2Q_2");
  if (o.pass) o.detail = "witness (1,1,1), 16/16 pairs miss";
  return o;
}

// 3. Smooth fibered polytopes: normal, certified, and every point of 2P split.
Outcome fibered_normality() {
  Outcome o;
  const std::size_t n = 200;
  std::map<FiberedRoute, std::size_t> routes;
  std::size_t points = 0, pieces = 0, isolated = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const Int bound = 6 + Int(i % 3);
    const auto shape = corpus::shape_for(i);
    isolated += shape.isolated_basic_roof;
    const auto F = gen_random_fibered(1000 + i, bound, shape);
    const std::string tag = "instance " + std::to_string(i) + " (seed " + std::to_string(1000 + i) + ")";
    if (!is_smooth(F.original) || !F.irreducible_fiber) {
      o.fail(tag + " is not a smooth fibered polytope with irreducible fiber");
      continue;
    }
    if (!is_normal(F.original).normal) o.fail(tag + " is not normal");
    try {
      const auto cert = to_original(F, certify_fibered(F));
      pieces += cert.pieces.size();
      auto check = verify_certificate(cert, {true, true, 1});
      if (!check.valid) o.fail(tag + ": certificate invalid: " + check.failure);
    } catch (const std::exception& e) {
      o.fail(tag + ": certify_fibered threw: " + e.what());
    }
    FiberedPairDecomposer dec(F);
    const auto& P = F.polytope;
    for (const auto& m : P.lattice_points_scaled(2)) {
      ++points;
      try {
        auto s = dec.split(m);
        if (s.pair.left + s.pair.right != m || !P.contains(s.pair.left) || !P.contains(s.pair.right))
          o.fail(tag + ": invalid split of " + m.str());
      } catch (const std::exception& e) {
        o.fail(tag + ": split of " + m.str() + " threw: " + e.what());
      }
    }
    for (const auto& [r, c] : dec.route_counts()) routes[r] += c;
  }
  std::ostringstream d;
  d << n << " instances (" << isolated << " isolated-roof), " << pieces << " pieces, " << points
    << " points of 2P; routes:";
  for (auto r : {FiberedRoute::boundary, FiberedRoute::slab, FiberedRoute::line, FiberedRoute::same_facet,
                 FiberedRoute::rerouted, FiberedRoute::oracle_fallback})
    d << " " << to_string(r) << "=" << routes[r];
  if (o.pass)
    o.detail = d.str();
  else
    o.detail += "; " + d.str();
  return o;
}

// 4. Parallelogram covers of smooth non-basic polygons.
Outcome polygon_covers() {
  Outcome o;
  std::size_t n = 0, pieces = 0;
  for (std::uint64_t s = 1; n < 200; ++s) {
    const auto A = gen_random_smooth_polygon(s, 8);
    if (is_basic_triangle(A)) continue;
    ++n;
    const std::string tag = "polygon seed " + std::to_string(s);
    ParallelogramCover cov;
    try {
      cov = parallelogram_cover(A);
    } catch (const std::exception& e) {
      o.fail(tag + ": " + e.what());
      continue;
    }
    pieces += cov.pieces.size();
    std::vector<std::vector<Point>> raw;
    for (const auto& q : cov.pieces) {
      raw.push_back(q.vertices());
      if (!is_lattice_parallelogram(q)) o.fail(tag + ": piece is not a lattice parallelogram");
      for (const auto& v : q.vertices())
        if (!A.contains(v)) o.fail(tag + ": piece leaves the polygon at " + v.str());
    }
    if (auto gap = oracle::cover_gap2(A.vertices(), raw)) o.fail(tag + ": " + gap->str() + "/2 not covered");
    if (auto gap = half_integer_cover_gap(A, cov.pieces)) o.fail(tag + ": library cover check fails");
  }
  if (o.pass) o.detail = std::to_string(n) + " polygons, " + std::to_string(pieces) + " parallelograms";
  return o;
}

// 5. Pair check at levels 2..4 on the corpus.
Outcome higher_levels() {
  Outcome o;
  const auto c = corpus::polytopes3();
  for (const auto& e : c)
    for (Int k : {2, 3, 4})
      if (!pair_check(e.polytope, k).holds) o.fail(e.label + " fails the pair check at k=" + std::to_string(k));
  if (o.pass) o.detail = std::to_string(c.size()) + " polytopes x k in {2,3,4}";
  return o;
}

// 6. Flags and normality are invariant under affine unimodular maps.
Outcome unimodular_invariance() {
  Outcome o;
  std::mt19937_64 rng(424242);
  const auto fib = corpus::fibered(20, 6, 500);
  for (int i = 0; i < 100; ++i) {
    Polytope P = i < 10 ? (i % 2 ? gen_bruns_gubeladze(1 + i / 2) : gen_reeve(1 + i / 2))
                 : i < 30 ? fib[i - 10].original
                          : gen_random_polytope(rng, 4, 5 + i % 4);
    const auto T = gen_random_unimodular_map(rng);
    const auto Q = apply_map(T, P);
    const std::string tag = "pair " + std::to_string(i);
    if (is_simple(P) != is_simple(Q)) o.fail(tag + ": is_simple differs");
    if (is_smooth(P) != is_smooth(Q)) o.fail(tag + ": is_smooth differs");
    if (is_very_ample(P) != is_very_ample(Q)) o.fail(tag + ": is_very_ample differs");
    if (is_normal(P).normal != is_normal(Q).normal) o.fail(tag + ": is_normal differs");
    if (P.lattice_points().size() != Q.lattice_points().size()) o.fail(tag + ": lattice point counts differ");
  }
  if (o.pass) o.detail = "100 pairs";
  return o;
}

// 7. A certificate is issued only for polytopes the oracle calls normal, and
// inputs meeting the hypotheses always certify.
Outcome oracle_certificate_equivalence() {
  Outcome o;
  std::size_t issued = 0, refused = 0;
  auto audit = [&](const std::string& tag, const std::function<NormalityCertificate()>& make, bool hypothesis) {
    std::optional<NormalityCertificate> c;
    try {
      c = make();
    } catch (const GeometryError&) {
    }
    if (!c) {
      ++refused;
      if (hypothesis) o.fail(tag + ": hypotheses hold but no certificate");
      return;
    }
    ++issued;
    if (!is_normal(c->target).normal) o.fail(tag + ": certificate for a polytope the oracle rejects");
    if (!verify_certificate(*c)) o.fail(tag + ": certificate does not verify");
  };
  for (const auto& e : corpus::polytopes3(40, 40)) {
    auto F = detect_fibered(e.polytope);
    if (!F) continue;
    audit(e.label + " fibered", [&] { return to_original(*F, certify_fibered(*F)); },
          F->irreducible_fiber && is_smooth(e.polytope));
  }
  const auto roofs = corpus::lifted_roofs(60, 17);
  const Polytope I = corpus::vertical_unit();
  for (std::size_t i = 0; i < roofs.size(); ++i) {
    const auto& A = roofs[i];
    const bool hyp = is_smooth_in_span(A) && !is_basic_triangle(A);
    audit("Q(A) #" + std::to_string(i), [&] { return certify_QA(A, I); }, hyp);
    audit("A+I #" + std::to_string(i), [&] { return certify_prism(A, I); }, hyp);
    audit("A+I' #" + std::to_string(i), [&] { return certify_prism(A, segment(Point{0, 0, 0}, Point{1, 2, 3})); },
          false);
  }
  for (Int q = 1; q <= 5; ++q) {
    const Polytope tri = convex_hull({Point{0, 0, 0}, Point{1, 0, 0}, Point{0, 1, 0}});
    audit("basic + [0,(1,1," + std::to_string(q) + ")]",
          [&] { return certify_prism(tri, segment(Point{0, 0, 0}, Point{1, 1, q})); }, q == 1);
    audit("P_" + std::to_string(q) + " fibered", [&] {
      auto F = detect_fibered(gen_bruns_gubeladze(q));
      if (!F) throw GeometryError("not fibered");
      return certify_fibered(*F);
    }, false);
  }
  if (o.pass) o.detail = std::to_string(issued) + " certificates issued, " + std::to_string(refused) + " refused";
  return o;
}

// 8. Lattice point counts of kP, k = 1..5, lie on one cubic with value 1 at 0.
Outcome ehrhart() {
  Outcome o;
  std::mt19937_64 rng(8080);
  for (int i = 0; i < 50; ++i) {
    const auto P = gen_random_polytope(rng, 2 + i % 4, 4 + i % 5);
    std::vector<Wide> L;
    for (Int k = 1; k <= 5; ++k) L.push_back(Wide(P.lattice_points_scaled(k).size()));
    const auto oracle_count = oracle::lattice_points3(P.vertices(), 3).size();
    if (Wide(oracle_count) != L[2]) o.fail("polytope " + std::to_string(i) + ": count of 3P disagrees with oracle");
    // fourth difference vanishes; cubic through k = 1..4 gives L(0) = 1
    const Wide d4 = L[4] - 4 * L[3] + 6 * L[2] - 4 * L[1] + L[0];
    const Wide at0 = 4 * L[0] - 6 * L[1] + 4 * L[2] - L[3];
    if (d4 != 0) o.fail("polytope " + std::to_string(i) + ": fourth difference " + std::to_string(Int(d4)));
    if (at0 != 1) o.fail("polytope " + std::to_string(i) + ": cubic value at 0 is " + std::to_string(Int(at0)));
  }
  if (o.pass) o.detail = "50 polytopes";
  return o;
}

struct Criterion {
  const char* name;
  Outcome (*run)();
  double limit_seconds;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"Q_q / P_q thresholds", thresholds, 10},
      {"Reeve witness", reeve_witness, 1},
      {"smooth fibered polytopes are normal", fibered_normality, 300},
      {"parallelogram covers", polygon_covers, 60},
      {"pair check at k = 2, 3, 4", higher_levels, 120},
      {"unimodular invariance", unimodular_invariance, 300},
      {"oracle / certificate equivalence", oracle_certificate_equivalence, 300},
      {"Ehrhart cubic fit", ehrhart, 300},
  };
  int failed = 0, i = 0;
  for (const auto& c : criteria) {
    ++i;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double s = std::chrono::duration<double>(Clock::now() - t0).count();
    if (s > c.limit_seconds) o.fail("took " + std::to_string(s) + " s, limit " + std::to_string(c.limit_seconds) + " s");
    failed += !o.pass;
    std::printf("%s [%d] %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i, c.name, o.detail.c_str(), s);
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
