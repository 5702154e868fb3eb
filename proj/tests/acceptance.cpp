// One line per acceptance criterion. Exit status is nonzero if any fails.
// Bounds are pinned here; every check is exact, so no numeric tolerances.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "chipfire/verify.hpp"

using namespace chipfire;

namespace {

struct Criterion {
  int id;
  std::string what;
  std::function<std::vector<SuiteResult>()> run;
};

SweepBounds bounds(int n_max, int l_offset, int t_max = 3) {
  SweepBounds b;
  b.n_max = n_max;
  b.l_offset = l_offset;
  b.t_max = t_max;
  return b;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "counts match the recurrence, all trees n<=7, l<=n+3",
       [] { return std::vector{suite_counting(bounds(7, 3))}; }},
      {2, "2^(n-1) minimal configurations, all trees n<=8",
       [] { return std::vector{suite_minimal_count(bounds(8, 0))}; }},
      {3, "subtree criterion agrees with firing search, all trees n<=6, l<=n+2",
       [] { return std::vector{suite_criterion_vs_search(bounds(6, 0), 2)}; }},
      {4, "cube map has det 1 and image {0,1}^(n-1)x{0}, all trees n<=8",
       [] { return std::vector{suite_cube_map(bounds(8, 0))}; }},
      {5, "IDP splits and lattice points of t*CP_l, n<=5 (lattice n<=4), t<=3",
       [] {
         return std::vector{suite_idp(bounds(5, 2, 3)), suite_lattice_points(bounds(4, 2, 3))};
       }},
      {6, "vertex set equals the near-minimal construction, n<=5, l<=n+3",
       [] { return std::vector{suite_vertex_theorem(bounds(5, 3))}; }},
      {7, "golden path example", [] { return std::vector{suite_golden()}; }},
      {8, "structural properties",
       [] {
         const SweepBounds b = bounds(6, 3);
         return std::vector{suite_tree_invariants(b.with_n_max(7)),
                            suite_firing_invariants(b),
                            suite_dp_vs_naive(b),
                            suite_degree_bound(bounds(8, 3)),
                            suite_tight_closure(b),
                            suite_peeling(b.with_n_max(5)),
                            suite_chip_removal(b.with_n_max(5)),
                            suite_monotone(b.with_n_max(5)),
                            suite_subtree_restriction(b),
                            suite_leaf_equivalence(b),
                            suite_near_minimal(b.with_n_max(5)),
                            suite_near_minimal_stability(b.with_n_max(5)),
                            suite_leaf_lifting(b),
                            suite_vertex_decomposition(b.with_n_max(5)),
                            suite_vertex_count(b)};
       }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    auto results = c.run();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool ok = !results.empty();
    unsigned long long checked = 0;
    std::string detail;
    for (const auto& r : results) {
      checked += r.checked;
      if (!r.passed) {
        ok = false;
        detail += " [" + r.name + ": " + r.counterexample + "]";
      }
    }
    if (!ok) ++failures;
    std::printf("criterion %d %s  %s  (%llu checked, %.1fs)%s\n", c.id, ok ? "PASS" : "FAIL",
                c.what.c_str(), checked, secs, detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
