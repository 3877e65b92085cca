#pragma once

// Exact normality decisions by exhaustive pair-sum search.

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <thread>
#include <unordered_set>
#include <vector>

#include "latnorm/polytope.hpp"

namespace latnorm {

/// target = left + right with left in kP and right in P.
struct PairDecomposition {
  Point target;
  Point left;
  Point right;
};

/// A lattice point of kP that is not a sum of k lattice points of P.
struct NonNormalityWitness {
  Int k = 2;
  Point point;
};

struct PairCheckResult {
  bool holds = true;
  std::optional<Point> witness;  // smallest failing point of (k+1)P
  explicit operator bool() const { return holds; }
};

struct NormalityResult {
  bool normal = true;
  std::optional<NonNormalityWitness> witness;
  explicit operator bool() const { return normal; }
};

namespace detail {

/// Splits m in (k+1)P as (kP) + P if possible.  `pts` is P ∩ M.
inline std::optional<Point> find_right_summand(const Polytope& P, const std::vector<Point>& pts,
                                               const Point& m, Int k) {
  // Try the point nearest m / (k+1) first; it almost always works.
  Point guess(m.dim());
  for (int i = 0; i < m.dim(); ++i) {
    Int q = floor_div(checked_add(checked_mul(2, m[i]), k + 1), checked_mul(2, k + 1));
    guess[i] = q;
  }
  if (P.contains(guess) && P.contains_scaled(m - guess, k)) return guess;
  for (const auto& p : pts)
    if (P.contains_scaled(m - p, k)) return p;
  return std::nullopt;
}

}  // namespace detail

/// Checks (kP ∩ M) + (P ∩ M) = (k+1)P ∩ M.  The search over (k+1)P is split
/// across `workers` threads; the witness is the global lexicographic
/// minimum regardless of the split.
inline PairCheckResult pair_check(const Polytope& P, Int k, unsigned workers = 1) {
  if (k < 1) throw GeometryError("pair_check: k must be >= 1");
  const auto pts = P.lattice_points();
  const auto targets = P.lattice_points_scaled(k + 1);
  workers = std::max(1u, std::min<unsigned>(workers, unsigned(targets.size() / 64 + 1)));

  std::vector<std::size_t> first_fail(workers, targets.size());
  auto run = [&](unsigned w) {
    for (std::size_t i = w; i < targets.size(); i += workers) {
      if (!detail::find_right_summand(P, pts, targets[i], k)) {
        first_fail[w] = i;
        break;
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  std::size_t fail = *std::min_element(first_fail.begin(), first_fail.end());
  if (fail == targets.size()) return {};
  return {false, targets[fail]};
}

/// Normality via the pair check for k = 1 .. max(1, n - 2); the levels
/// k >= n - 1 hold for every lattice polytope.
/// `paranoid` additionally checks k = 2, 3.
inline NormalityResult is_normal(const Polytope& P, bool paranoid = false, unsigned workers = 1) {
  Int top = std::max<Int>(1, P.dim() - 2);
  if (paranoid) top = std::max<Int>(top, 3);
  for (Int k = 1; k <= top; ++k) {
    auto r = pair_check(P, k, workers);
    if (!r.holds) return {false, NonNormalityWitness{k + 1, *r.witness}};
  }
  return {};
}

/// Writes m in kP as a sum of k lattice points of P (depth-first search in
/// lexicographic order, pruning residuals that leave the dilate).
/// Returns std::nullopt when no decomposition exists.
inline std::optional<std::vector<Point>> decompose_point(const Polytope& P, const Point& m, Int k) {
  if (k < 1) throw GeometryError("decompose_point: k must be >= 1");
  if (!P.contains_scaled(m, k)) throw GeometryError("decompose_point: point is not in kP");
  if (k == 1) return std::vector<Point>{m};
  const auto pts = P.lattice_points();
  std::vector<std::unordered_set<Point, PointHash>> dead(std::size_t(k) + 1);
  std::vector<Point> chosen;
  auto dfs = [&](auto&& self, const Point& rest, Int left) -> bool {
    if (left == 1) {
      if (!P.contains(rest)) return false;
      chosen.push_back(rest);
      return true;
    }
    if (dead[left].contains(rest)) return false;
    for (const auto& p : pts) {
      const Point r = rest - p;
      if (!P.contains_scaled(r, left - 1)) continue;
      chosen.push_back(p);
      if (self(self, r, left - 1)) return true;
      chosen.pop_back();
    }
    dead[left].insert(rest);
    return false;
  };
  if (dfs(dfs, m, k)) return chosen;
  return std::nullopt;
}

/// Self-test: the pair check at k = n-1 and k = n, which hold for every
/// lattice polytope.
inline bool nakagawa_consistency(const Polytope& P) {
  const Int n = P.dim();
  const Int k0 = std::max<Int>(1, n - 1);
  return pair_check(P, k0).holds && pair_check(P, k0 + 1).holds;
}

/// Pair decomposition of m in (k+1)P as (kP) + P, if one exists.
inline std::optional<PairDecomposition> split_pair(const Polytope& P, const Point& m, Int k = 1) {
  if (!P.contains_scaled(m, k + 1)) throw GeometryError("split_pair: point is not in (k+1)P");
  auto r = detail::find_right_summand(P, P.lattice_points(), m, k);
  if (!r) return std::nullopt;
  return PairDecomposition{m, m - *r, *r};
}

}  // namespace latnorm
