#pragma once

// Exact convex-hull oracles. Phase-one simplex over the rationals with
// Bland's rule on the system
//   sum_i g_i x_i = target,  sum_i g_i = 1,  g >= 0.
// No floating point is involved anywhere.

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "chipfire/chip.hpp"
#include "chipfire/combination.hpp"
#include "chipfire/error.hpp"
#include "chipfire/rational.hpp"

namespace chipfire {

struct LpProblem {
  std::vector<ChipConfig> columns;
  ChipConfig target;

  LpProblem(std::vector<ChipConfig> cols, ChipConfig tgt)
      : columns(std::move(cols)), target(std::move(tgt)) {
    if (columns.empty()) throw PreconditionError("hull membership needs at least one point");
    for (const auto& c : columns) {
      if (c.size() != target.size()) throw PreconditionError("point dimension mismatch");
    }
  }
};

struct HullMembership {
  bool inside = false;
  std::optional<ConvexCombination> witness;
  std::size_t pivots = 0;
};

inline constexpr std::size_t kSimplexPivotLimit = 1'000'000;

namespace detail {

/// Phase-one simplex with integer pivoting: the tableau is stored as
/// integers over a common denominator (the last pivot), so every entry is a
/// subdeterminant and every division is exact. Entering column and leaving
/// row follow Bland's rule.
template <class Int>
class Phase1Simplex {
 public:
  explicit Phase1Simplex(const LpProblem& lp)
      : d_(lp.target.size()),
        k_(static_cast<int>(lp.columns.size())),
        rows_(d_ + 1),
        cols_(k_ + rows_ + 1),
        tab_(static_cast<std::size_t>(rows_ + 1) * cols_, Int(0)),
        basis_(rows_),
        denom_(1) {
    // Rows 0..d-1: coordinates; row d: weights sum to one; row rows_ is the
    // phase-one objective (sum of artificials) in terms of nonbasics.
    for (int r = 0; r < rows_; ++r) {
      for (int j = 0; j < k_; ++j) at(r, j) = Int(r < d_ ? lp.columns[j][r] : 1);
      at(r, k_ + r) = Int(1);
      at(r, rhs()) = Int(r < d_ ? lp.target[r] : 1);
      basis_[r] = k_ + r;
    }
    for (int j = 0; j < k_; ++j) {
      Int s(0);
      for (int r = 0; r < rows_; ++r) s = s + at(r, j);
      at(rows_, j) = -s;
    }
    Int s(0);
    for (int r = 0; r < rows_; ++r) s = s + at(r, rhs());
    at(rows_, rhs()) = -s;
  }

  std::size_t solve() {
    std::size_t pivots = 0;
    while (true) {
      int enter = -1;
      for (int j = 0; j < rhs(); ++j) {
        if (at(rows_, j) < Int(0)) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return pivots;
      int leave = -1;
      for (int r = 0; r < rows_; ++r) {
        if (!(at(r, enter) > Int(0))) continue;
        if (leave < 0) {
          leave = r;
          continue;
        }
        // Compare rhs_r / a_r against rhs_leave / a_leave.
        Int lhs = at(r, rhs()) * at(leave, enter);
        Int rhs_value = at(leave, rhs()) * at(r, enter);
        if (lhs < rhs_value || (lhs == rhs_value && basis_[r] < basis_[leave])) leave = r;
      }
      if (leave < 0) throw TheoremViolation("phase-one simplex reported an unbounded ray");
      pivot(leave, enter);
      if (++pivots > kSimplexPivotLimit) {
        throw TheoremViolation("simplex pivot limit exceeded");
      }
    }
  }

  bool feasible() const { return at(rows_, rhs()) == Int(0); }

  std::vector<Rational> weights() const {
    std::vector<Rational> g(k_, Rational(0));
    for (int r = 0; r < rows_; ++r) {
      if (basis_[r] < k_) g[basis_[r]] = Rational(to_big(at(r, rhs())), to_big(denom_));
    }
    return g;
  }

 private:
  int rhs() const { return cols_ - 1; }
  Int& at(int r, int c) { return tab_[static_cast<std::size_t>(r) * cols_ + c]; }
  const Int& at(int r, int c) const { return tab_[static_cast<std::size_t>(r) * cols_ + c]; }

  void pivot(int p, int q) {
    const Int a = at(p, q);
    for (int r = 0; r <= rows_; ++r) {
      if (r == p) continue;
      const Int factor = at(r, q);
      for (int c = 0; c < cols_; ++c) {
        Int updated = at(r, c) * a;
        if (factor != Int(0) && at(p, c) != Int(0)) updated = updated - factor * at(p, c);
        at(r, c) = updated / denom_;
      }
    }
    denom_ = a;
    basis_[p] = q;
  }

  int d_, k_, rows_, cols_;
  std::vector<Int> tab_;
  std::vector<int> basis_;
  Int denom_;
};

template <class Int>
std::pair<bool, std::vector<Rational>> solve_phase1(const LpProblem& lp, std::size_t& pivots) {
  Phase1Simplex<Int> simplex(lp);
  pivots = simplex.solve();
  bool inside = simplex.feasible();
  return {inside, inside ? simplex.weights() : std::vector<Rational>{}};
}

}  // namespace detail

/// Decides target in conv(points). The witness, when present, reconstructs
/// the target exactly.
inline HullMembership in_convex_hull(std::span<const ChipConfig> points,
                                     const ChipConfig& target) {
  LpProblem lp(std::vector<ChipConfig>(points.begin(), points.end()), target);
  HullMembership out;
  std::vector<Rational> g;
  try {
    std::tie(out.inside, g) = detail::solve_phase1<detail::CheckedInt>(lp, out.pivots);
  } catch (const detail::CheckedInt::Overflow&) {
    std::tie(out.inside, g) = detail::solve_phase1<BigInt>(lp, out.pivots);
  }
  if (out.inside) {
    ConvexCombination combo;
    combo.point = target;
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (g[j] != 0) combo.terms.push_back({g[j], lp.columns[j]});
    }
    combo.canonicalize();
    if (auto err = combo.validate(); !err.empty()) {
      throw TheoremViolation("simplex witness invalid: " + err);
    }
    out.witness = std::move(combo);
  }
  return out;
}

/// True iff candidate is not in the hull of the other points. A singleton
/// set is its own vertex.
inline bool is_hull_vertex(std::span<const ChipConfig> points, const ChipConfig& candidate) {
  if (std::find(points.begin(), points.end(), candidate) == points.end()) {
    throw PreconditionError("candidate " + to_string(candidate) + " is not among the points");
  }
  std::vector<ChipConfig> others;
  for (const auto& p : points) {
    if (p.size() != candidate.size()) throw PreconditionError("point dimension mismatch");
    if (p != candidate) others.push_back(p);
  }
  if (others.empty()) return true;
  return !in_convex_hull(others, candidate).inside;
}

/// Vertex set of conv(points), lexicographically sorted and deduplicated.
/// Each point is tested against the points not yet shown to be
/// non-vertices; dropping a non-vertex never changes the hull.
inline std::vector<ChipConfig> hull_vertices(std::span<const ChipConfig> points) {
  std::vector<ChipConfig> pool(points.begin(), points.end());
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  // Points with a small largest coordinate tend to be interior; testing them
  // first shrinks the pool early.
  std::vector<std::size_t> schedule(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) schedule[i] = i;
  auto spread = [&](std::size_t i) {
    const auto& v = pool[i].vec();
    return v.empty() ? 0 : *std::max_element(v.begin(), v.end());
  };
  std::stable_sort(schedule.begin(), schedule.end(),
                   [&](std::size_t a, std::size_t b) { return spread(a) < spread(b); });
  std::vector<char> removed(pool.size(), 0);
  std::vector<ChipConfig> others;
  for (std::size_t idx : schedule) {
    others.clear();
    for (std::size_t j = 0; j < pool.size(); ++j) {
      if (j != idx && !removed[j]) others.push_back(pool[j]);
    }
    if (!others.empty() && in_convex_hull(others, pool[idx]).inside) removed[idx] = 1;
  }
  std::vector<ChipConfig> out;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (!removed[i]) out.push_back(pool[i]);
  }
  return out;
}

}  // namespace chipfire
