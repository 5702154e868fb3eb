#pragma once

// Exhaustive verification suites. Each suite sweeps every labeled tree up to
// a size bound and reports how many instances it checked and the first
// counterexample (in canonical tree order) if any. Failures are data: library
// errors raised inside a sweep are recorded as counterexamples.

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "chipfire/chip.hpp"
#include "chipfire/dilation.hpp"
#include "chipfire/enumeration.hpp"
#include "chipfire/exact_lp.hpp"
#include "chipfire/parallel.hpp"
#include "chipfire/polytope.hpp"
#include "chipfire/tree.hpp"

namespace chipfire {

struct SuiteResult {
  std::string name;
  std::string claim;
  bool passed = true;
  unsigned long long checked = 0;
  std::string counterexample;  // empty when passed
};

/// Replaceable criterion so a deliberately broken check can be fed through
/// the suites that compare it against an oracle.
using DilationChecker =
    std::function<bool(const Tree&, const LeafElimOrder&, const ChipConfig&, int)>;

inline bool default_dilation_checker(const Tree& t, const LeafElimOrder& ord,
                                     const ChipConfig& c, int tlevel) {
  return is_t_dilated(t, ord, c, tlevel);
}

struct SweepBounds {
  int n_min = 1;
  int n_max = 6;
  int l_offset = 3;            // l runs up to n + l_offset
  std::optional<int> l_max;    // absolute cap on l when set
  int t_max = 3;
  int jobs = 1;
  DilationChecker dilated = default_dilation_checker;

  long long l_hi(int n) const {
    long long hi = static_cast<long long>(n) + l_offset;
    return l_max ? std::min<long long>(hi, *l_max) : hi;
  }
  SweepBounds with_n_max(int cap) const {
    SweepBounds b = *this;
    b.n_max = std::min(n_max, cap);
    return b;
  }
};

namespace detail {

struct Finding {
  unsigned long long checked = 0;
  std::optional<std::string> counterexample;

  void fail(std::string what) {
    if (!counterexample) counterexample = std::move(what);
  }
  bool failed() const { return counterexample.has_value(); }
};

inline std::string tree_label(const Tree& t) {
  std::string out = "T(n=" + std::to_string(t.size());
  for (auto [u, v] : t.edges()) out += " " + std::to_string(u + 1) + "-" + std::to_string(v + 1);
  return out + ")";
}

inline std::string config_label(const ChipConfig& c) { return "(" + to_string(c) + ")"; }

inline std::string mask_label(SubtreeMask m) {
  std::string out = "{";
  bool first = true;
  for (Vertex v : m.members()) {
    if (!first) out += ",";
    out += std::to_string(v + 1);
    first = false;
  }
  return out + "}";
}

// Calls fn(vector<int>&) for every weak composition of total into n parts.
template <class Fn>
void for_each_composition(int n, long long total, Fn&& fn) {
  std::vector<int> c(n, 0);
  if (n == 0) {
    if (total == 0) fn(c);
    return;
  }
  auto rec = [&](auto& self, int i, long long left) -> void {
    if (i == n - 1) {
      c[i] = static_cast<int>(left);
      fn(c);
      c[i] = 0;
      return;
    }
    for (long long x = 0; x <= left; ++x) {
      c[i] = static_cast<int>(x);
      self(self, i + 1, left - x);
    }
    c[i] = 0;
  };
  rec(rec, 0, total);
}

// Sweeps all labeled trees with bounds.n_min <= n <= bounds.n_max. Work is
// split into chunks of consecutive tree indices; per_tree(tree, finding)
// should stop once finding has failed. Chunks after the first failing one
// are discarded, so the merged result does not depend on the job count.
template <class Fn>
Finding sweep_trees(const SweepBounds& bounds, Fn&& per_tree) {
  struct Chunk {
    int n;
    unsigned long long begin, end;
  };
  std::vector<Chunk> chunks;
  const unsigned long long pieces = bounds.jobs <= 1 ? 1 : 16ULL * bounds.jobs;
  for (int n = std::max(1, bounds.n_min); n <= bounds.n_max; ++n) {
    const unsigned long long count = labeled_tree_count(n);
    const unsigned long long step = std::max<unsigned long long>(1, (count + pieces - 1) / pieces);
    for (unsigned long long b = 0; b < count; b += step) {
      chunks.push_back({n, b, std::min(count, b + step)});
    }
  }
  std::vector<Finding> results(chunks.size());
  std::atomic<std::size_t> first_failure{std::numeric_limits<std::size_t>::max()};
  parallel_for(chunks.size(), bounds.jobs, [&](std::size_t i) {
    if (i > first_failure.load()) return;
    Finding& f = results[i];
    for (unsigned long long idx = chunks[i].begin; idx < chunks[i].end && !f.failed(); ++idx) {
      Tree t = labeled_tree_at(chunks[i].n, idx);
      try {
        per_tree(t, f);
      } catch (const std::exception& e) {
        f.fail(tree_label(t) + ": " + e.what());
      }
      if (f.counterexample && f.counterexample->rfind("T(", 0) != 0) {
        *f.counterexample = tree_label(t) + ": " + *f.counterexample;
      }
    }
    if (f.failed()) {
      std::size_t cur = first_failure.load();
      while (i < cur && !first_failure.compare_exchange_weak(cur, i)) {
      }
    }
  });
  Finding merged;
  for (std::size_t i = 0; i < results.size(); ++i) {
    merged.checked += results[i].checked;
    if (results[i].failed()) {
      merged.counterexample = results[i].counterexample;
      break;
    }
  }
  return merged;
}

inline SuiteResult finish(std::string name, std::string claim, const Finding& f) {
  SuiteResult r;
  r.name = std::move(name);
  r.claim = std::move(claim);
  r.checked = f.checked;
  r.passed = !f.failed();
  if (f.counterexample) r.counterexample = *f.counterexample;
  return r;
}

// Subtrees of t with their vertex lists, from the library enumerator.
struct SubtreeTable {
  std::vector<SubtreeMask> masks;
  std::vector<std::vector<Vertex>> members;

  explicit SubtreeTable(const Tree& t) : masks(enumerate_subtrees(t)) {
    for (auto m : masks) members.push_back(m.members());
  }
};

// Independent naive slack: min over subtrees S of chips(S) - t(|S| - 1),
// computed from the per-size minimum chip counts.
struct NaiveSlack {
  std::vector<long long> min_chips;  // index = subtree size

  NaiveSlack(const SubtreeTable& table, std::span<const int> c, int n)
      : min_chips(n + 1, std::numeric_limits<long long>::max()) {
    for (const auto& mem : table.members) {
      long long s = 0;
      for (Vertex v : mem) s += c[v];
      auto& slot = min_chips[mem.size()];
      if (s < slot) slot = s;
    }
  }
  long long slack(int tlevel) const {
    long long best = std::numeric_limits<long long>::max();
    for (std::size_t m = 1; m < min_chips.size(); ++m) {
      if (min_chips[m] == std::numeric_limits<long long>::max()) continue;
      best = std::min(best, min_chips[m] - static_cast<long long>(tlevel) * (static_cast<long long>(m) - 1));
    }
    return best;
  }
};

inline bool naive_dilated(const SubtreeTable& table, const ChipConfig& c, int tlevel) {
  for (const auto& mem : table.members) {
    long long s = 0;
    for (Vertex v : mem) s += c[v];
    if (s < static_cast<long long>(tlevel) * (static_cast<long long>(mem.size()) - 1)) return false;
  }
  return true;
}

// Copies a configuration of T \ leaf into T, leaving the leaf empty.
inline std::vector<int> embed(const Component& comp, const ChipConfig& local, int n) {
  std::vector<int> out(n, 0);
  for (int i = 0; i < local.size(); ++i) out[comp.to_original[i]] = local[i];
  return out;
}

inline bool contains_sorted(const std::vector<ChipConfig>& sorted, const ChipConfig& c) {
  return std::binary_search(sorted.begin(), sorted.end(), c);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Acceptance-level theorem suites

/// |S_l(T)| from enumeration equals the counting recurrence for every tree,
/// which also makes the count independent of the tree's shape.
inline SuiteResult suite_counting(const SweepBounds& b) {
  const int l_cap = static_cast<int>(std::max<long long>(0, b.l_hi(b.n_max)));
  const CountTable table = count_recurrence(l_cap, std::max(1, b.n_max));
  auto f = detail::sweep_trees(b, [&](const Tree& t, detail::Finding& f) {
    const int n = t.size();
    for (long long l = 0; l <= b.l_hi(n); ++l) {
      const auto count = enumerate_src(t, l).size();
      if (BigInt(count) != table(static_cast<int>(l), n)) {
        f.fail("l=" + std::to_string(l) + " enumerates " + std::to_string(count) +
               " but the recurrence gives " + table(static_cast<int>(l), n).str());
        return;
      }
      ++f.checked;
    }
  });
  return detail::finish("counting", "|S_l(T)| = C(l,n) for every tree", f);
}

/// |S_{n-1}(T)| = 2^(n-1).
inline SuiteResult suite_minimal_count(const SweepBounds& b) {
  auto f = detail::sweep_trees(b, [&](const Tree& t, detail::Finding& f) {
    const int n = t.size();
    const auto count = enumerate_src(t, n - 1).size();
    if (count != (std::size_t{1} << (n - 1))) {
      f.fail("found " + std::to_string(count) + " minimal configurations");
      return;
    }
    ++f.checked;
  });
  return detail::finish("minimal_count", "|S_{n-1}(T)| = 2^(n-1)", f);
}

/// Subtree criterion agrees with breadth-first firing search. Totals run up
/// to n + extra. Any "unknown" search result is a failure.
inline SuiteResult suite_criterion_vs_search(const SweepBounds& b, int extra = 2) {
  auto f = detail::sweep_trees(b, [&](const Tree& t, detail::Finding& f) {
    const int n = t.size();
    const auto ord = leaf_elim_order(t);
    for (long long total = 0; total <= n + extra && !f.failed(); ++total) {
      detail::for_each_composition(n, total, [&](const std::vector<int>& raw) {
        if (f.failed()) return;
        ChipConfig c(raw);
        const bool crit = b.dilated(t, ord, c, 1);
        const auto search = is_self_reachable_by_search(t, c);
        if (search.status == SearchStatus::Unknown) {
          f.fail(detail::config_label(c) + ": search hit its state cap");
          return;
        }
        const bool found = search.status == SearchStatus::SelfReachable;
        if (crit != found) {
          f.fail(detail::config_label(c) + ": criterion says " + (crit ? "yes" : "no") +
                 ", search says " + (found ? "yes" : "no"));
          return;
        }
        if (found && (search.witness->empty() || apply_sequence(t, c, *search.witness) != c)) {
          f.fail(detail::config_label(c) + ": firing witness does not return to the start");
          return;
        }
        ++f.checked;
      });
    }
  });
  return detail::finish("criterion_vs_search",
                        "subtree criterion agrees with firing search, no unknowns", f);
}

/// det(U) = 1 and the minimal configurations map bijectively onto
/// {0,1}^(n-1) x {0}.
inline SuiteResult suite_cube_map(const SweepBounds& b) {
  auto f = detail::sweep_trees(b, [&](const Tree& t, detail::Finding& f) {
    const int n = t.size();
    const auto m = cube_map(t);
    if (m.determinant() != 1) {
      f.fail("det(U) = " + m.determinant().str());
      return;
    }
    std::set<std::vector<long long>> image;
    const auto minimal = enumerate_src(t, n - 1);
    for (const auto& s : minimal) {
      auto y = m.apply(s.chips());
      bool cube = y[n - 1] == 0;
      for (int i = 0; i + 1 < n; ++i) cube = cube && (y[i] == 0 || y[i] == 1);
      if (!cube) {
        f.fail(detail::config_label(s) + " maps outside the cube");
        return;
      }
      image.insert(std::move(y));
    }
    if (image.size() != (std::size_t{1} << (n - 1)) || minimal.size() != image.size()) {
      f.fail("image has " + std::to_string(image.size()) + " points");
      return;
    }
    ++f.checked;
  });
  return detail::finish("cube_map", "unimodular map onto the unit cube", f);
}

/// Every t-dilated configuration with t*l chips splits into t self-reachable
/// parts with l chips each. l runs from n-1 to l_hi(n), t from 2 to t_max.
inline SuiteResult suite_idp(const SweepBounds& b) {
  auto f = detail::sweep_trees(b, [&](const Tree& t, detail::Finding& f) {
    const int n = t.size();
    const auto ord = leaf_elim_order(t);
    const detail::SubtreeTable table(t);
    for (int level = 2; level <= b.t_max; ++level) {
      for (long long l = n - 1; l <= b.l_hi(n); ++l) {
        for (const auto& w : enumerate_dilate_lattice_points(t, l, level)) {
          auto d = idp_decompose(t, ord, w, l, level);
          ChipConfig sum = ChipConfig::zeros(n);
          bool ok = static_cast<int>(d.parts.size()) == level;
          for (const auto& part : d.parts) {
            ok = ok && part.total() == l && detail::naive_dilated(table, part, 1);
            sum = sum + part;
          }
          if (!ok || sum != w) {
            f.fail(detail::config_label(w) + " at t=" + std::to_string(level) +
                   ", l=" + std::to_string(l) + ": parts do not form a valid decomposition");
            return;
          }
          ++f.checked;
        }
      }
    }
  });
  return detail::finish("idp", "integer decomposition of t-dilated configurations", f);
}

/// t-dilated with t*l chips iff the point lies in t * CP_l(T), decided by the
/// exact LP over every configuration with t*l chips. t runs from 1 (every
/// lattice point of CP_l(T) is self-reachable) to t_max.
inline SuiteResult suite_lattice_points(const SweepBounds& b) {
  auto f = detail::sweep_trees(b, [&](const Tree& t, detail::Finding& f) {
    const int n = t.size();
    const auto ord = leaf_elim_order(t);
    for (long long l = n - 1; l <= b.l_hi(n) && !f.failed(); ++l) {
      const auto hull = hull_vertices(enumerate_src(t, l));
      for (int level = 1; level <= b.t_max && !f.failed(); ++level) {
        std::vector<ChipConfig> scaled;
        for (const auto& v : hull) {
          std::vector<int> s = v.vec();
          for (int& x : s) x *= level;
          scaled.emplace_back(std::move(s));
        }
        detail::for_each_composition(n, l * level, [&](const std::vector<int>& raw) {
          if (f.failed()) return;
          ChipConfig w(raw);
          const bool dil = is_t_dilated(t, ord, w, level);
          const bool inside = in_convex_hull(scaled, w).inside;
          if (dil != inside) {
            f.fail(detail::config_label(w) + " at t=" + std::to_string(level) + ", l=" +
                   std::to_string(l) + ": " + (dil ? "dilated" : "not dilated") + " but " +
                   (inside ? "inside" : "outside") + " the dilated polytope");
            return;
          }
          ++f.checked;
        });
      }
    }
  });
  return detail::finish("lattice_points", "t-dilated iff lattice point of t*CP_l(T)", f);
}

/// The constructed vertex set equals the LP hull-vertex set of S_l(T).
inline SuiteResult suite_vertex_theorem(const SweepBounds& b) {
  auto f = detail::sweep_trees(b, [&](const Tree& t, detail::Finding& f) {
    const int n = t.size();
    for (long long l = n - 1; l <= b.l_hi(n); ++l) {
      const auto lp = hull_vertices(enumerate_src(t, l));
      const auto built = enumerate_vertices(t, l);
      if (lp != built) {
        f.fail("l=" + std::to_string(l) + ": LP finds " + std::to_string(lp.size()) +
               " vertices, construction gives " + std::to_string(built.size()));
        return;
      }
      ++f.checked;
    }
  });
  return detail::finish("vertex_theorem", "vertices of CP_l(T) are the near-minimal configurations",
                        f);
}

/// P3 with (1,2,3): the leaf-induction decomposition along the order
/// (1,2,3) is {1/6 (5,0,1), 1/6 (1,0,5), 4/15 (0,6,0), 2/5 (0,1,5)}, and
/// every term is a vertex.
inline SuiteResult suite_golden() {
  detail::Finding f;
  try {
    const Tree p3 = path_tree(3);
    const ChipConfig c{1, 2, 3};
    ConvexCombination expected;
    expected.point = c;
    expected.terms = {{Rational(1, 6), ChipConfig{5, 0, 1}},
                      {Rational(1, 6), ChipConfig{1, 0, 5}},
                      {Rational(4, 15), ChipConfig{0, 6, 0}},
                      {Rational(2, 5), ChipConfig{0, 1, 5}}};
    expected.canonicalize();
    const auto vertices = enumerate_vertices(p3, 6);
    auto check = [&](const ConvexCombination& combo, bool must_match) {
      if (auto err = combo.validate(); !err.empty()) {
        f.fail("reconstruction failed: " + err);
        return;
      }
      for (const auto& term : combo.terms) {
        if (!detail::contains_sorted(vertices, term.config) || term.weight <= 0) {
          f.fail("term " + detail::config_label(term.config) + " is not a vertex");
          return;
        }
      }
      if (must_match && combo.terms != expected.terms) f.fail("term multiset differs");
      ++f.checked;
    };
    check(decompose_into_vertices(p3, c), false);
    check(decompose_into_vertices(p3, leaf_elim_order_from(p3, {0, 1, 2}), c), true);
  } catch (const std::exception& e) {
    f.fail(e.what());
  }
  return detail::finish("golden", "P3 (1,2,3) decomposition", f);
}

// ---------------------------------------------------------------------------
// Structural sweeps

/// Tree DP agrees with the naive all-subtrees check for totals up to 2n and
/// t up to t_max; reported slack agrees, and witnesses really violate.
inline SuiteResult suite_dp_vs_naive(const SweepBounds& b) {
  auto f = detail::sweep_trees(b, [&](const Tree& t, detail::Finding& f) {
    const int n = t.size();
    const auto ord = leaf_elim_order(t);
    const detail::SubtreeTable table(t);
    for (long long total = 0; total <= 2LL * n && !f.failed(); ++total) {
      detail::for_each_composition(n, total, [&](const std::vector<int>& raw) {
        if (f.failed()) return;
        ChipConfig c(raw);
        const detail::NaiveSlack naive(table, raw, n);
        for (int level = 1; level <= b.t_max; ++level) {
          const long long slack = naive.slack(level);
          const bool dp = b.dilated(t, ord, c, level);
          const auto report = is_t_dilated_dp(t, ord, c, level);
          std::string where = detail::config_label(c) + " at t=" + std::to_string(level);
          if (dp != (slack >= 0) || report.ok != (slack >= 0)) {
            f.fail(where + ": DP says " + (dp ? "dilated" : "not dilated") +
                   ", naive slack is " + std::to_string(slack));
            return;
          }
          if (report.min_slack != slack) {
            f.fail(where + ": DP slack " + std::to_string(report.min_slack) + " vs naive " +
                   std::to_string(slack));
            return;
          }
          if (!report.ok) {
            const auto w = *report.witness;
            if (!is_connected_subset(t, w) ||
                c.chips_on(w) >= static_cast<long long>(level) * (w.size() - 1)) {
              f.fail(where + ": witness " + detail::mask_label(w) + " does not violate");
              return;
            }
          }
          ++f.checked;
        }
      });
    }
  });
  return detail::finish("dp_vs_naive", "dilation DP matches the all-subtrees definition", f);
}

/// Minimally self-reachable configurations hold at most deg(v) chips on v.
inline SuiteResult suite_degree_bound(const SweepBounds& b) {
  auto f = detail::sweep_trees(b, [&](const Tree& t, detail::Finding& f) {
    for (const auto& s : enumerate_src(t, t.size() - 1)) {
      for (Vertex v = 0; v < t.size(); ++v) {
        if (s[v] > t.degree(v)) {
          f.fail(detail::config_label(s) + " holds " + std::to_string(s[v]) + " chips on vertex " +
                 std::to_string(v + 1) + " of degree " + std::to_string(t.degree(v)));
          return;
        }
      }
      ++f.checked;
    }
  });
  return detail::finish("degree_bound", "minimal configurations respect vertex degrees", f);
}

/// For a t-dilated configuration, two overlapping tight subtrees (exactly
/// t(m-1) chips) have tight union and intersection. Totals t(n-1) to
/// t(n-1)+2.
inline SuiteResult suite_tight_closure(const SweepBounds& b) {
  auto f = detail::sweep_trees(b, [&](const Tree& t, detail::Finding& f) {
    const int n = t.size();
    const auto ord = leaf_elim_order(t);
    const auto subtrees = enumerate_subtrees(t);
    for (int level = 1; level <= b.t_max && !f.failed(); ++level) {
      auto tight_on = [&](const ChipConfig& c, SubtreeMask m) {
        return c.chips_on(m) == static_cast<long long>(level) * (m.size() - 1);
      };
      const long long base = static_cast<long long>(level) * (n - 1);
      for (long long total = base; total <= base + 2 && !f.failed(); ++total) {
        for_each_t_dilated(t, ord, total, level, [&](const std::vector<int>& raw) {
          if (f.failed()) return;
          ChipConfig c(raw);
          std::vector<SubtreeMask> tight;
          for (auto m : subtrees) {
            if (tight_on(c, m)) tight.push_back(m);
          }
          for (std::size_t i = 0; i < tight.size(); ++i) {
            for (std::size_t j = i + 1; j < tight.size(); ++j) {
              const std::uint64_t meet = tight[i].bits & tight[j].bits;
              if (meet == 0) continue;
              const SubtreeMask cap{meet}, cup{tight[i].bits | tight[j].bits};
              if (!is_connected_subset(t, cap) || !is_connected_subset(t, cup) ||
                  !tight_on(c, cap) || !tight_on(c, cup)) {
                f.fail(detail::config_label(c) + " at t=" + std::to_string(level) + ": " +
                       detail::mask_label(tight[i]) + " and " + detail::mask_label(tight[j]));
                return;
              }
            }
          }
          ++f.checked;
        });
      }
    }
  });
  return detail::finish("tight_closure", "tight subtrees closed under union and intersection",
                        f);
}

/// peel_minimal_src and reduce_to_L meet their postconditions, checked
/// against the naive definition. (t+1)-dilated inputs with up to 2 chips
/// above the minimum, t <= min(t_max, 2).
inline SuiteResult suite_peeling(const SweepBounds& b) {
  auto f = detail::sweep_trees(b, [&](const Tree& t, detail::Finding& f) {
    const int n = t.size();
    const auto ord = leaf_elim_order(t);
    const detail::SubtreeTable table(t);
    for (int level = 1; level <= std::min(b.t_max, 2) && !f.failed(); ++level) {
      const long long base = static_cast<long long>(level + 1) * (n - 1);
      for (long long total = base; total <= base + 2 && !f.failed(); ++total) {
        for_each_t_dilated(t, ord, total, level + 1, [&](const std::vector<int>& raw) {
          if (f.failed()) return;
          ChipConfig c(raw);
          std::string where = detail::config_label(c) + " at t=" + std::to_string(level);
          ChipConfig s = peel_minimal_src(t, ord, c, level);
          ChipConfig rest = c - s;
          if (s.total() != n - 1 || !detail::naive_dilated(table, s, 1) ||
              !c.dominates(s) || !detail::naive_dilated(table, rest, level)) {
            f.fail(where + ": peel gave " + detail::config_label(s));
            return;
          }
          for (long long L = n - 1; L <= total - static_cast<long long>(level) * (n - 1); ++L) {
            ChipConfig x = reduce_to_L(t, ord, c, level, L);
            if (x.total() != L || !c.dominates(x) || !detail::naive_dilated(table, x, 1) ||
                !detail::naive_dilated(table, c - x, level)) {
              f.fail(where + ", L=" + std::to_string(L) + ": reduce gave " +
                     detail::config_label(x));
              return;
            }
          }
          ++f.checked;
        });
      }
    }
  });
  return detail::finish("peeling", "peel and reduce postconditions", f);
}

/// A t-dilated configuration above the minimum loses a chip and stays
/// t-dilated. Totals t(n-1)+1 to t(n-1)+3.
inline SuiteResult suite_chip_removal(const SweepBounds& b) {
  auto f = detail::sweep_trees(b, [&](const Tree& t, detail::Finding& f) {
    const int n = t.size();
    const auto ord = leaf_elim_order(t);
    const detail::SubtreeTable table(t);
    for (int level = 1; level <= b.t_max && !f.failed(); ++level) {
      const long long base = static_cast<long long>(level) * (n - 1);
      for (long long total = base + 1; total <= base + 3 && !f.failed(); ++total) {
        for_each_t_dilated(t, ord, total, level, [&](const std::vector<int>& raw) {
          if (f.failed()) return;
          ChipConfig c(raw);
          Vertex i = remove_one_chip(t, ord, c, level);
          if (c[i] == 0 || !detail::naive_dilated(table, c.plus(i, -1), level)) {
            f.fail(detail::config_label(c) + " at t=" + std::to_string(level) +
                   ": removing from vertex " + std::to_string(i + 1) + " breaks dilation");
            return;
          }
          ++f.checked;
        });
      }
    }
  });
  return detail::finish("chip_removal", "non-minimal dilated configurations can shed a chip", f);
}

/// Adding a chip anywhere to a self-reachable configuration keeps it
/// self-reachable.
inline SuiteResult suite_monotone(const SweepBounds& b) {
  auto f = detail::sweep_trees(b, [&](const Tree& t, detail::Finding& f) {
    const int n = t.size();
    auto current = enumerate_src(t, 0);
    for (long long l = 0; l < b.l_hi(n); ++l) {
      auto next = enumerate_src(t, l + 1);
      for (const auto& c : current) {
        for (Vertex v = 0; v < n; ++v) {
          if (!detail::contains_sorted(next, c.plus(v, 1))) {
            f.fail(detail::config_label(c) + " plus a chip on vertex " + std::to_string(v + 1) +
                   " is not self-reachable");
            return;
          }
        }
        ++f.checked;
      }
      current = std::move(next);
    }
  });
  return detail::finish("monotone", "self-reachability is monotone in chips", f);
}

/// A self-reachable configuration restricts to a self-reachable one on every
/// subtree.
inline SuiteResult suite_subtree_restriction(const SweepBounds& b) {
  auto f = detail::sweep_trees(b, [&](const Tree& t, detail::Finding& f) {
    const int n = t.size();
    std::vector<Component> parts;
    std::vector<LeafElimOrder> orders;
    for (auto m : enumerate_subtrees(t)) {
      parts.push_back(induced_subtree(t, m));
      orders.push_back(leaf_elim_order(parts.back().tree));
    }
    for (long long l = n - 1; l <= b.l_hi(n); ++l) {
      for (const auto& c : enumerate_src(t, l)) {
        for (std::size_t k = 0; k < parts.size(); ++k) {
          std::vector<int> local;
          for (Vertex v : parts[k].to_original) local.push_back(c[v]);
          if (!is_t_dilated(parts[k].tree, orders[k], ChipConfig(local), 1)) {
            f.fail(detail::config_label(c) + " is not self-reachable on a subtree of size " +
                   std::to_string(parts[k].tree.size()));
            return;
          }
        }
        ++f.checked;
      }
    }
  });
  return detail::finish("subtree_restriction", "restriction to subtrees stays self-reachable", f);
}

/// For a leaf x attached to p: s on T \ x is self-reachable iff
/// (s + e_p, 0) is iff (s, 1) is, on T. All s with up to n+1 chips.
inline SuiteResult suite_leaf_equivalence(const SweepBounds& b) {
  SweepBounds bb = b;
  bb.n_min = std::max(2, b.n_min);
  auto f = detail::sweep_trees(bb, [&](const Tree& t, detail::Finding& f) {
    const int n = t.size();
    const auto ord = leaf_elim_order(t);
    for (Vertex x = 0; x < n && !f.failed(); ++x) {
      if (!t.is_leaf(x)) continue;
      const Vertex p = t.neighbors(x)[0];
      const auto comp = remove_vertex_components(t, x).at(0);
      const auto local_ord = leaf_elim_order(comp.tree);
      for (long long total = 0; total <= n + 1 && !f.failed(); ++total) {
        detail::for_each_composition(n - 1, total, [&](const std::vector<int>& raw) {
          if (f.failed()) return;
          ChipConfig s(raw);
          const bool small = is_t_dilated(comp.tree, local_ord, s, 1);
          auto up = detail::embed(comp, s, n);
          auto with_leaf = up;
          ++up[p];
          with_leaf[x] = 1;
          const bool pushed = is_t_dilated(t, ord, ChipConfig(up), 1);
          const bool leafed = is_t_dilated(t, ord, ChipConfig(with_leaf), 1);
          if (small != pushed || small != leafed) {
            f.fail("leaf " + std::to_string(x + 1) + ", " + detail::config_label(s) +
                   " on the smaller tree: the three statements disagree");
            return;
          }
          ++f.checked;
        });
      }
    }
  });
  return detail::finish("leaf_equivalence", "leaf extension equivalence", f);
}

/// The near-minimal configurations among S_l(T) are exactly the constructed
/// vertex set; near_minimal_about cross-checks its two characterizations.
inline SuiteResult suite_near_minimal(const SweepBounds& b) {
  auto f = detail::sweep_trees(b, [&](const Tree& t, detail::Finding& f) {
    const int n = t.size();
    const auto ord = leaf_elim_order(t);
    for (long long l = n; l <= b.l_hi(n); ++l) {
      std::vector<ChipConfig> near;
      for (const auto& c : enumerate_src(t, l)) {
        if (near_minimal_about(t, ord, c)) near.push_back(c);
        ++f.checked;
      }
      if (near != enumerate_vertices(t, l)) {
        f.fail("l=" + std::to_string(l) + ": near-minimal set differs from the vertex set");
        return;
      }
    }
  });
  return detail::finish("near_minimal", "near-minimal characterizations agree", f);
}

/// Adding L <= 3 chips on the about-vertex of a vertex gives a vertex about
/// the same vertex.
inline SuiteResult suite_near_minimal_stability(const SweepBounds& b) {
  auto f = detail::sweep_trees(b, [&](const Tree& t, detail::Finding& f) {
    const int n = t.size();
    const auto ord = leaf_elim_order(t);
    for (long long l = n; l <= b.l_hi(n); ++l) {
      std::vector<std::vector<ChipConfig>> later;
      for (int L = 1; L <= 3; ++L) later.push_back(enumerate_vertices(t, l + L));
      for (const auto& nu : enumerate_vertices(t, l)) {
        const Vertex a = near_minimal_about(t, ord, nu).value().about;
        for (int L = 1; L <= 3; ++L) {
          ChipConfig up = nu.plus(a, L);
          auto cert = near_minimal_about(t, ord, up);
          if (!detail::contains_sorted(later[L - 1], up) || !cert || cert->about != a) {
            f.fail(detail::config_label(nu) + " plus " + std::to_string(L) +
                   " chips on vertex " + std::to_string(a + 1) + " is not near-minimal there");
            return;
          }
        }
        ++f.checked;
      }
    }
  });
  return detail::finish("near_minimal_stability", "adding chips at the about-vertex", f);
}

/// Vertices of the tree with a leaf removed lift to vertices of the full
/// tree: by pushing a chip to the attachment vertex or to the leaf, by piling
/// chips on the attachment vertex, or by relocating the excess to the leaf.
inline SuiteResult suite_leaf_lifting(const SweepBounds& b) {
  SweepBounds bb = b;
  bb.n_min = std::max(2, b.n_min);
  auto f = detail::sweep_trees(bb, [&](const Tree& t, detail::Finding& f) {
    const int n = t.size();
    const auto ord = leaf_elim_order(t);
    std::map<long long, std::vector<ChipConfig>> vertex_sets;
    auto is_vertex_about = [&](const std::vector<int>& raw, Vertex v) {
      ChipConfig c(raw);
      if (!is_t_dilated(t, ord, c, 1)) return false;
      auto cert = near_minimal_about(t, ord, c);
      auto it = vertex_sets.find(c.total());
      if (it == vertex_sets.end()) {
        it = vertex_sets.emplace(c.total(), enumerate_vertices(t, c.total())).first;
      }
      return cert && cert->about == v && detail::contains_sorted(it->second, c);
    };
    for (Vertex x = 0; x < n && !f.failed(); ++x) {
      if (!t.is_leaf(x)) continue;
      const Vertex p = t.neighbors(x)[0];
      const auto comp = remove_vertex_components(t, x).at(0);
      const auto local_ord = leaf_elim_order(comp.tree);
      const int m = n - 1;
      for (long long l = m; l <= b.l_hi(m) && !f.failed(); ++l) {
        for (const auto& nu : enumerate_vertices(comp.tree, l)) {
          const Vertex la = near_minimal_about(comp.tree, local_ord, nu).value().about;
          const Vertex a = comp.to_original[la];
          const auto base = detail::embed(comp, nu, n);
          std::string where = "leaf " + std::to_string(x + 1) + ", " + detail::config_label(nu);
          if (a != p) {
            auto pushed = base;
            ++pushed[p];
            auto leafed = base;
            leafed[x] = 1;
            if (!is_vertex_about(pushed, a) || !is_vertex_about(leafed, a)) {
              f.fail(where + ": lifting with one more chip fails");
              return;
            }
          } else {
            for (int L = 1; L <= 3; ++L) {
              auto piled = base;
              piled[p] += L;
              if (!is_vertex_about(piled, p)) {
                f.fail(where + ": piling " + std::to_string(L) + " chips on the attachment fails");
                return;
              }
            }
          }
          const int d = comp.tree.degree(la);
          auto moved = base;
          const int excess = nu[la] - d;
          moved[a] -= excess;
          moved[x] = excess + 1;
          if (!is_vertex_about(moved, x)) {
            f.fail(where + ": relocating the excess to the leaf fails");
            return;
          }
          ++f.checked;
        }
      }
    }
  });
  return detail::finish("leaf_lifting", "vertices lift along leaf additions", f);
}

/// The leaf-induction decomposition reconstructs every self-reachable
/// configuration with l >= n chips from vertices of CP_l(T).
inline SuiteResult suite_vertex_decomposition(const SweepBounds& b) {
  auto f = detail::sweep_trees(b, [&](const Tree& t, detail::Finding& f) {
    const int n = t.size();
    const auto ord = leaf_elim_order(t);
    for (long long l = n; l <= b.l_hi(n); ++l) {
      const auto vertices = enumerate_vertices(t, l);
      for (const auto& c : enumerate_src(t, l)) {
        auto combo = decompose_into_vertices(t, ord, c);
        if (auto err = combo.validate(); !err.empty()) {
          f.fail(detail::config_label(c) + ": " + err);
          return;
        }
        for (const auto& term : combo.terms) {
          if (term.weight <= 0 || !detail::contains_sorted(vertices, term.config)) {
            f.fail(detail::config_label(c) + ": term " + detail::config_label(term.config) +
                   " is not a vertex");
            return;
          }
        }
        ++f.checked;
      }
    }
  });
  return detail::finish("vertex_decomposition", "exact convex decomposition into vertices", f);
}

/// |V(CP_l(T))| = sum over v of 2^(n-1-deg v) for l >= n, and 2^(n-1) at
/// l = n-1.
inline SuiteResult suite_vertex_count(const SweepBounds& b) {
  auto f = detail::sweep_trees(b, [&](const Tree& t, detail::Finding& f) {
    const int n = t.size();
    unsigned long long formula = 0;
    for (Vertex v = 0; v < n; ++v) formula += 1ULL << (n - 1 - t.degree(v));
    for (long long l = n - 1; l <= b.l_hi(n); ++l) {
      const auto count = enumerate_vertices(t, l).size();
      const unsigned long long want = l == n - 1 ? 1ULL << (n - 1) : formula;
      if (count != want) {
        f.fail("l=" + std::to_string(l) + ": " + std::to_string(count) + " vertices, expected " +
               std::to_string(want));
        return;
      }
      ++f.checked;
    }
  });
  return detail::finish("vertex_count", "vertex count formula", f);
}

/// Trees have n-1 edges and are connected; subtree enumeration matches a
/// brute-force scan of all vertex subsets; Laplacians are symmetric with
/// zero row sums; elimination orders attach each vertex by exactly one edge;
/// there are n^(n-2) distinct labeled trees.
inline SuiteResult suite_tree_invariants(const SweepBounds& b) {
  auto f = detail::sweep_trees(b, [&](const Tree& t, detail::Finding& f) {
    const int n = t.size();
    if (static_cast<int>(t.edges().size()) != n - 1) {
      f.fail("edge count");
      return;
    }
    std::vector<int> root(n);
    for (int i = 0; i < n; ++i) root[i] = i;
    auto find = [&](int x) {
      while (root[x] != x) x = root[x] = root[root[x]];
      return x;
    };
    for (auto [u, v] : t.edges()) root[find(u)] = find(v);
    for (int i = 0; i < n; ++i) {
      if (find(i) != find(0)) {
        f.fail("disconnected");
        return;
      }
    }
    // Brute force: a nonempty subset is connected iff it has one more
    // vertex than induced edges.
    unsigned long long brute = 0;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
      int inside = 0;
      for (auto [u, v] : t.edges()) inside += ((mask >> u) & 1) && ((mask >> v) & 1);
      brute += std::popcount(mask) == inside + 1;
    }
    if (enumerate_subtrees(t).size() != brute) {
      f.fail("subtree count " + std::to_string(enumerate_subtrees(t).size()) + " vs " +
             std::to_string(brute));
      return;
    }
    const auto lap = laplacian(t);
    for (int i = 0; i < n; ++i) {
      long long row = 0;
      for (int j = 0; j < n; ++j) {
        row += lap(i, j);
        if (lap(i, j) != lap(j, i)) {
          f.fail("Laplacian is not symmetric");
          return;
        }
      }
      if (row != 0) {
        f.fail("Laplacian row sum is " + std::to_string(row));
        return;
      }
    }
    const auto ord = leaf_elim_order(t);
    for (int k = 1; k < n; ++k) {
      int earlier = 0;
      for (Vertex u : t.neighbors(ord.order[k])) earlier += ord.position[u] < k;
      if (earlier != 1 || !t.adjacent(ord.order[k], ord.attach[k])) {
        f.fail("elimination order position " + std::to_string(k + 1));
        return;
      }
    }
    ++f.checked;
  });
  if (!f.failed()) {
    for (int n = std::max(1, b.n_min); n <= b.n_max && !f.failed(); ++n) {
      std::set<std::string> seen;
      for_each_labeled_tree(n, [&](const Tree& t) { seen.insert(to_string(t)); });
      if (seen.size() != labeled_tree_count(n)) {
        f.fail("n=" + std::to_string(n) + ": " + std::to_string(seen.size()) +
               " distinct labeled trees");
      }
    }
  }
  return detail::finish("tree_invariants", "tree structure sanity", f);
}

/// Random legal firing sequences: chips are conserved, the matrix form
/// c - L x matches step-by-step firing, and legal reorderings agree.
inline SuiteResult suite_firing_invariants(const SweepBounds& b, int cases = 2000) {
  detail::Finding f;
  std::mt19937_64 rng(20261014);
  for (int k = 0; k < cases && !f.failed() && b.n_max >= 1; ++k) {
    const int n = std::uniform_int_distribution<int>(std::max(1, b.n_min), b.n_max)(rng);
    const Tree t = labeled_tree_at(
        n, std::uniform_int_distribution<unsigned long long>(0, labeled_tree_count(n) - 1)(rng));
    std::vector<int> raw(n);
    for (int& x : raw) x = std::uniform_int_distribution<int>(0, 4)(rng);
    const ChipConfig start(raw);
    ChipConfig c = start;
    FiringSequence seq;
    const int steps = std::uniform_int_distribution<int>(0, 12)(rng);
    for (int s = 0; s < steps; ++s) {
      std::vector<Vertex> legal;
      for (Vertex v = 0; v < n; ++v) {
        if (is_legal_fire(t, c, v)) legal.push_back(v);
      }
      if (legal.empty()) break;
      const Vertex v = legal[std::uniform_int_distribution<std::size_t>(0, legal.size() - 1)(rng)];
      ChipConfig next = fire(t, c, v);
      if (next.total() != c.total()) {
        f.fail(detail::tree_label(t) + ": firing changed the chip total");
        break;
      }
      c = std::move(next);
      seq.push_back(v);
    }
    if (f.failed()) break;
    const auto matrix = apply_firing_counts(t, start, seq);
    for (int i = 0; i < n; ++i) {
      if (matrix[i] != c[i]) {
        f.fail(detail::tree_label(t) + ": matrix form disagrees for " +
               detail::config_label(start));
        break;
      }
    }
    if (f.failed()) break;
    FiringSequence shuffled = seq;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    try {
      if (apply_sequence(t, start, shuffled) != c) {
        f.fail(detail::tree_label(t) + ": legal reordering changed the result");
        break;
      }
    } catch (const IllegalSequence&) {
      // The reordering was not legal; nothing to compare.
    }
    ++f.checked;
  }
  return detail::finish("firing_invariants", "conservation and abelian firing", f);
}

// ---------------------------------------------------------------------------

/// Every suite, each with its size bound clamped to what it can afford:
/// n <= 8 for the minimal-configuration laws, n <= 7 for counting and tree
/// structure, n <= 6 for the dynamic and subtree sweeps, n <= 5 for IDP,
/// vertex and peeling sweeps, and n <= 4 for the LP lattice sweep.
inline std::vector<SuiteResult> verify_all(const SweepBounds& b) {
  std::vector<SuiteResult> out;
  out.push_back(suite_tree_invariants(b.with_n_max(7)));
  out.push_back(suite_firing_invariants(b.with_n_max(6)));
  out.push_back(suite_counting(b.with_n_max(7)));
  out.push_back(suite_minimal_count(b.with_n_max(8)));
  out.push_back(suite_degree_bound(b.with_n_max(8)));
  out.push_back(suite_criterion_vs_search(b.with_n_max(6)));
  out.push_back(suite_dp_vs_naive(b.with_n_max(6)));
  out.push_back(suite_cube_map(b.with_n_max(8)));
  out.push_back(suite_idp(b.with_n_max(5)));
  out.push_back(suite_lattice_points(b.with_n_max(4)));
  out.push_back(suite_vertex_theorem(b.with_n_max(5)));
  out.push_back(suite_golden());
  out.push_back(suite_monotone(b.with_n_max(5)));
  out.push_back(suite_subtree_restriction(b.with_n_max(6)));
  out.push_back(suite_leaf_equivalence(b.with_n_max(6)));
  out.push_back(suite_tight_closure(b.with_n_max(6)));
  out.push_back(suite_peeling(b.with_n_max(5)));
  out.push_back(suite_chip_removal(b.with_n_max(5)));
  out.push_back(suite_near_minimal(b.with_n_max(5)));
  out.push_back(suite_near_minimal_stability(b.with_n_max(5)));
  out.push_back(suite_leaf_lifting(b.with_n_max(6)));
  out.push_back(suite_vertex_decomposition(b.with_n_max(5)));
  out.push_back(suite_vertex_count(b.with_n_max(6)));
  return out;
}

}  // namespace chipfire
