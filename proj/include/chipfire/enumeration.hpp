#pragma once

// Enumeration of self-reachable and t-dilated configurations with a fixed
// number of chips, and the counting recurrence for |S_l(T)|.

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "chipfire/chip.hpp"
#include "chipfire/dilation.hpp"
#include "chipfire/rational.hpp"
#include "chipfire/tree.hpp"

namespace chipfire {

inline constexpr unsigned long long kDefaultEnumerationGuard = 50'000'000ULL;

/// Number of weak compositions of total into parts pieces, saturating at
/// limit + 1.
inline unsigned long long composition_count(long long total, int parts,
                                            unsigned long long limit) {
  if (parts <= 0) return total == 0 ? 1 : 0;
  // C(total + parts - 1, parts - 1), computed incrementally.
  unsigned long long value = 1;
  for (int k = 1; k < parts; ++k) {
    unsigned __int128 next = static_cast<unsigned __int128>(value) *
                             static_cast<unsigned long long>(total + k) / k;
    if (next > limit) return limit + 1;
    value = static_cast<unsigned long long>(next);
  }
  return value;
}

namespace detail {

// Depth-first assignment along the elimination order. After placing chips on
// order[0..k) the prefix is itself a subtree, so it must already be
// t-dilated; otherwise no completion can be. The unplaced vertices
// order[k..n) form a forest whose components each need t(|C| - 1) chips,
// which caps what the prefix may take.
template <class Fn>
void enumerate_dilated_rec(const LeafElimOrder& ord, int tlevel, int k, long long remaining,
                           const std::vector<long long>& suffix_need, std::vector<int>& chips,
                           std::vector<long long>& h, Fn& fn) {
  const int n = static_cast<int>(ord.order.size());
  Vertex v = ord.order[k];
  if (k == n - 1) {
    chips[v] = static_cast<int>(remaining);
    if (dilation_dp_prefix(ord, chips, tlevel, n, false, h).ok) fn(chips);
    chips[v] = 0;
    return;
  }
  for (long long x = 0; x + suffix_need[k + 1] <= remaining; ++x) {
    chips[v] = static_cast<int>(x);
    if (dilation_dp_prefix(ord, chips, tlevel, k + 1, false, h).ok) {
      enumerate_dilated_rec(ord, tlevel, k + 1, remaining - x, suffix_need, chips, h, fn);
    }
  }
  chips[v] = 0;
}

// need[k] = t * (|R| - components(R)) for R = order[k..n).
inline std::vector<long long> suffix_requirements(const Tree& t, const LeafElimOrder& ord,
                                                  int tlevel) {
  const int n = t.size();
  std::vector<long long> need(n + 1, 0);
  std::vector<int> root(n);
  std::vector<char> placed(n, 0);
  auto find = [&](int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  int components = 0;
  for (int k = n - 1; k >= 0; --k) {
    Vertex v = ord.order[k];
    root[v] = v;
    placed[v] = 1;
    ++components;
    for (Vertex u : t.neighbors(v)) {
      if (!placed[u]) continue;
      int a = find(u), b = find(v);
      if (a != b) {
        root[a] = b;
        --components;
      }
    }
    need[k] = static_cast<long long>(tlevel) * (n - k - components);
  }
  return need;
}

}  // namespace detail

/// Calls fn(const std::vector<int>&) for every t-dilated configuration with
/// exactly total chips, in no particular order.
template <class Fn>
void for_each_t_dilated(const Tree& t, const LeafElimOrder& ord, long long total, int tlevel,
                        Fn&& fn,
                        unsigned long long guard = kDefaultEnumerationGuard) {
  if (tlevel < 1) throw PreconditionError("dilation level must be at least 1");
  if (total < 0) throw PreconditionError("chip count must be nonnegative");
  if (composition_count(total, t.size(), guard) > guard) {
    throw CapExceeded("enumeration of " + std::to_string(total) + " chips on " +
                      std::to_string(t.size()) + " vertices exceeds guard " +
                      std::to_string(guard));
  }
  const auto need = detail::suffix_requirements(t, ord, tlevel);
  if (need[0] > total) return;
  std::vector<int> chips(t.size(), 0);
  std::vector<long long> h;
  detail::enumerate_dilated_rec(ord, tlevel, 0, total, need, chips, h, fn);
}

namespace detail {
inline std::vector<ChipConfig> sorted_dilated(const Tree& t, long long total, int tlevel,
                                              unsigned long long guard) {
  std::vector<ChipConfig> out;
  for_each_t_dilated(
      t, leaf_elim_order(t), total, tlevel,
      [&](const std::vector<int>& c) { out.emplace_back(c); }, guard);
  std::sort(out.begin(), out.end());
  return out;
}
}  // namespace detail

/// S_l(T) in lexicographic order.
inline std::vector<ChipConfig> enumerate_src(
    const Tree& t, long long chips, unsigned long long guard = kDefaultEnumerationGuard) {
  return detail::sorted_dilated(t, chips, 1, guard);
}

/// Number of self-reachable configurations with the given number of chips,
/// without materializing them.
inline unsigned long long count_src(const Tree& t, const LeafElimOrder& ord, long long chips,
                                    unsigned long long guard = kDefaultEnumerationGuard) {
  unsigned long long count = 0;
  for_each_t_dilated(t, ord, chips, 1, [&](const std::vector<int>&) { ++count; }, guard);
  return count;
}

/// Lattice points of t * CP_l(T): the t-dilated configurations with t*l
/// chips, lexicographic.
inline std::vector<ChipConfig> enumerate_dilate_lattice_points(
    const Tree& t, long long chips, int tlevel,
    unsigned long long guard = kDefaultEnumerationGuard) {
  if (chips < t.size() - 1) {
    throw PreconditionError("CP_l(T) is empty for l < n - 1");
  }
  return detail::sorted_dilated(t, chips * tlevel, tlevel, guard);
}

// ---------------------------------------------------------------------------
// Counting recurrence

/// C[l][n] for 0 <= l <= l_max, 1 <= n <= n_max.
class CountTable {
 public:
  CountTable(int l_max, int n_max) : l_max_(l_max), n_max_(n_max) {
    if (l_max < 0 || n_max < 0) throw PreconditionError("table bounds must be nonnegative");
    table_.assign(static_cast<std::size_t>(l_max + 1) * (n_max + 1), BigInt(0));
    for (int n = 1; n <= n_max; ++n) {
      for (int l = 0; l <= l_max; ++l) {
        BigInt value;
        if (n == 1) {
          value = 1;
        } else if (l == 0) {
          value = 0;
        } else if (l == 1) {
          value = n == 2 ? 2 : 0;
        } else {
          value = at(l - 1, n) + 2 * at(l - 1, n - 1) - at(l - 2, n - 1);
        }
        at(l, n) = value;
      }
    }
  }

  int l_max() const { return l_max_; }
  int n_max() const { return n_max_; }

  const BigInt& operator()(int l, int n) const {
    if (l < 0 || l > l_max_ || n < 1 || n > n_max_) {
      throw PreconditionError("count table index out of range");
    }
    return table_[index(l, n)];
  }

  /// CSV with header "l,n,count", rows sorted by (n, l).
  std::string to_csv() const {
    std::string out = "l,n,count\n";
    for (int n = 1; n <= n_max_; ++n) {
      for (int l = 0; l <= l_max_; ++l) {
        out += std::to_string(l) + "," + std::to_string(n) + "," + (*this)(l, n).str() + "\n";
      }
    }
    return out;
  }

 private:
  std::size_t index(int l, int n) const {
    return static_cast<std::size_t>(l) * (n_max_ + 1) + n;
  }
  BigInt& at(int l, int n) { return table_[index(l, n)]; }
  const BigInt& at(int l, int n) const { return table_[index(l, n)]; }

  int l_max_;
  int n_max_;
  std::vector<BigInt> table_;
};

inline CountTable count_recurrence(int l_max, int n_max) { return CountTable(l_max, n_max); }

}  // namespace chipfire
