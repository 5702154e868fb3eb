#pragma once

// t-dilated configurations: at least t(m-1) chips on every m-vertex subtree.
// 1-dilated is the same as self-reachable on a tree. Also holds the
// constructive chip-removal and peeling steps used by IDP decomposition.

#include <algorithm>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "chipfire/chip.hpp"
#include "chipfire/error.hpp"
#include "chipfire/tree.hpp"

namespace chipfire {

struct DilationReport {
  int t = 1;
  bool ok = true;
  std::optional<SubtreeMask> witness;  // set iff !ok
  long long min_slack = 0;             // min over S of chips(S) - t(|S|-1)
};

namespace detail {

inline void check_config(const Tree& t, const ChipConfig& c) {
  if (c.size() != t.size()) {
    throw PreconditionError("configuration has " + std::to_string(c.size()) +
                            " entries for a tree on " + std::to_string(t.size()) +
                            " vertices");
  }
}

inline void check_level(int tlevel) {
  if (tlevel < 1) throw PreconditionError("dilation level must be at least 1");
}

// Minimum slack over subtrees of the prefix tree order[0..k). With the
// prefix rooted at order[0], the best subtree topped at v has value
//   h(v) = (c_v - t) + sum over children u of min(0, h(u)),
// and the slack of that subtree is h(v) + t.
inline DilationReport dilation_dp_prefix(const LeafElimOrder& ord,
                                         std::span<const int> chips, int tlevel,
                                         int k, bool want_witness, std::vector<long long>& h) {
  h.assign(ord.order.size(), 0);
  for (int i = 0; i < k; ++i) h[ord.order[i]] = chips[ord.order[i]] - tlevel;
  long long best = std::numeric_limits<long long>::max();
  Vertex arg = -1;
  for (int i = k - 1; i >= 0; --i) {
    Vertex v = ord.order[i];
    if (h[v] < best || (h[v] == best && v < arg)) {
      best = h[v];
      arg = v;
    }
    if (i > 0 && h[v] < 0) h[ord.attach[i]] += h[v];
  }
  DilationReport r;
  r.t = tlevel;
  r.min_slack = best + tlevel;
  r.ok = r.min_slack >= 0;
  if (!r.ok && want_witness) {
    SubtreeMask mask;
    mask.bits = std::uint64_t{1} << arg;
    // Descendants of arg come later in the order; include a vertex when its
    // attachment point is included and its own value is negative.
    for (int i = ord.position[arg] + 1; i < k; ++i) {
      Vertex v = ord.order[i];
      if (h[v] < 0 && mask.contains(ord.attach[i])) mask.bits |= std::uint64_t{1} << v;
    }
    r.witness = mask;
  }
  return r;
}

}  // namespace detail

/// Linear-time tree DP. The witness (when violated) is the minimizing subtree
/// with the smallest top vertex.
inline DilationReport is_t_dilated_dp(const Tree& t, const LeafElimOrder& ord,
                                      const ChipConfig& c, int tlevel) {
  detail::check_config(t, c);
  detail::check_level(tlevel);
  std::vector<long long> h;
  return detail::dilation_dp_prefix(ord, c.chips(), tlevel, t.size(), t.size() <= 64, h);
}

inline DilationReport is_t_dilated_dp(const Tree& t, const ChipConfig& c, int tlevel) {
  return is_t_dilated_dp(t, leaf_elim_order(t), c, tlevel);
}

/// Direct check over every subtree. Oracle for the DP.
inline DilationReport is_t_dilated_naive(const Tree& t, const ChipConfig& c, int tlevel,
                                         std::size_t cap = kDefaultSubtreeCap) {
  detail::check_config(t, c);
  detail::check_level(tlevel);
  DilationReport r;
  r.t = tlevel;
  bool first = true;
  SubtreeMask worst;
  for_each_subtree(
      t,
      [&](SubtreeMask s) {
        long long slack = c.chips_on(s) - static_cast<long long>(tlevel) * (s.size() - 1);
        if (first || slack < r.min_slack) {
          r.min_slack = slack;
          worst = s;
          first = false;
        }
      },
      cap);
  r.ok = r.min_slack >= 0;
  if (!r.ok) r.witness = worst;
  return r;
}

inline bool is_t_dilated(const Tree& t, const LeafElimOrder& ord, const ChipConfig& c,
                         int tlevel) {
  detail::check_config(t, c);
  detail::check_level(tlevel);
  std::vector<long long> h;
  return detail::dilation_dp_prefix(ord, c.chips(), tlevel, t.size(), false, h).ok;
}

inline bool is_t_dilated(const Tree& t, const ChipConfig& c, int tlevel) {
  return is_t_dilated(t, leaf_elim_order(t), c, tlevel);
}

/// Subtree criterion: at least m-1 chips on every m-vertex subtree.
inline bool is_self_reachable(const Tree& t, const ChipConfig& c) {
  return is_t_dilated(t, c, 1);
}

inline bool is_minimally_t_dilated(const Tree& t, const ChipConfig& c, int tlevel) {
  detail::check_level(tlevel);
  return c.total() == static_cast<long long>(tlevel) * (t.size() - 1) &&
         is_t_dilated(t, c, tlevel);
}

inline bool is_minimally_self_reachable(const Tree& t, const ChipConfig& c) {
  return is_minimally_t_dilated(t, c, 1);
}

/// Smallest vertex i such that c - e_i stays t-dilated. Requires c to be
/// t-dilated but not minimally so.
inline Vertex remove_one_chip(const Tree& t, const LeafElimOrder& ord, const ChipConfig& c,
                              int tlevel) {
  detail::check_config(t, c);
  detail::check_level(tlevel);
  if (!is_t_dilated(t, ord, c, tlevel)) {
    throw PreconditionError("remove_one_chip: configuration is not " +
                            std::to_string(tlevel) + "-dilated");
  }
  if (c.total() == static_cast<long long>(tlevel) * (t.size() - 1)) {
    throw PreconditionError("remove_one_chip: configuration is minimally " +
                            std::to_string(tlevel) + "-dilated");
  }
  std::vector<int> work = c.vec();
  std::vector<long long> h;
  for (Vertex i = 0; i < t.size(); ++i) {
    if (work[i] == 0) continue;
    --work[i];
    bool ok = detail::dilation_dp_prefix(ord, work, tlevel, t.size(), false, h).ok;
    ++work[i];
    if (ok) return i;
  }
  throw TheoremViolation("no removable chip found in a non-minimal " +
                         std::to_string(tlevel) + "-dilated configuration " +
                         to_string(c));
}

inline Vertex remove_one_chip(const Tree& t, const ChipConfig& c, int tlevel) {
  return remove_one_chip(t, leaf_elim_order(t), c, tlevel);
}

namespace detail {

// Peeling induction on the prefix order[0..k). chips holds the current
// configuration on the prefix (entries outside are ignored); the result is
// written into s.
inline void peel_prefix(const LeafElimOrder& ord, std::vector<int> chips, int tlevel,
                        int k, std::vector<int>& s) {
  for (; k > 1; --k) {
    Vertex leaf = ord.order[k - 1];
    Vertex attach = ord.attach[k - 1];
    // s[leaf] already holds the chips its own children pushed onto it.
    if (chips[leaf] >= tlevel + 1) {
      ++s[leaf];
    } else {
      // The pair {attach, leaf} is a subtree, so attach has enough chips.
      chips[attach] -= tlevel + 1 - chips[leaf];
      if (chips[attach] < 0) {
        throw TheoremViolation("peeling produced a negative chip count");
      }
      ++s[attach];
    }
  }
}

}  // namespace detail

/// Minimally self-reachable s with c - s still t-dilated. Requires c to be
/// (t+1)-dilated. Built leaf by leaf along the elimination order: a leaf with
/// more than t chips keeps one chip of s, otherwise the chip goes to its
/// attachment vertex after topping the leaf's demand up from there.
inline ChipConfig peel_minimal_src(const Tree& t, const LeafElimOrder& ord, const ChipConfig& c,
                                   int tlevel) {
  detail::check_config(t, c);
  detail::check_level(tlevel);
  if (!is_t_dilated(t, ord, c, tlevel + 1)) {
    throw PreconditionError("peel_minimal_src: configuration is not " +
                            std::to_string(tlevel + 1) + "-dilated");
  }
  std::vector<int> s(t.size(), 0);
  detail::peel_prefix(ord, c.vec(), tlevel, t.size(), s);
  ChipConfig out(std::move(s));
  if (!is_minimally_self_reachable(t, out) || !is_t_dilated(t, ord, c - out, tlevel)) {
    throw TheoremViolation("peel_minimal_src postcondition failed for " + to_string(c) +
                           " at t=" + std::to_string(tlevel));
  }
  return out;
}

inline ChipConfig peel_minimal_src(const Tree& t, const ChipConfig& c, int tlevel) {
  return peel_minimal_src(t, leaf_elim_order(t), c, tlevel);
}

/// Self-reachable s with exactly L chips and c - s t-dilated. Requires c to
/// be (t+1)-dilated and n-1 <= L <= total(c) - t(n-1).
inline ChipConfig reduce_to_L(const Tree& t, const LeafElimOrder& ord, const ChipConfig& c,
                              int tlevel, long long L) {
  detail::check_config(t, c);
  detail::check_level(tlevel);
  const long long n = t.size();
  if (L < n - 1 || L > c.total() - tlevel * (n - 1)) {
    throw PreconditionError("reduce_to_L: L=" + std::to_string(L) + " outside [" +
                            std::to_string(n - 1) + ", " +
                            std::to_string(c.total() - tlevel * (n - 1)) + "]");
  }
  ChipConfig s = peel_minimal_src(t, ord, c, tlevel);
  ChipConfig rest = c - s;
  std::vector<int> extra(t.size(), 0);
  for (long long moved = n - 1; moved < L; ++moved) {
    Vertex i = remove_one_chip(t, ord, rest, tlevel);
    rest.add(i, -1);
    ++extra[i];
  }
  ChipConfig out = s + ChipConfig(std::move(extra));
  if (out.total() != L || !is_self_reachable(t, out) || !is_t_dilated(t, ord, rest, tlevel)) {
    throw TheoremViolation("reduce_to_L postcondition failed for " + to_string(c));
  }
  return out;
}

inline ChipConfig reduce_to_L(const Tree& t, const ChipConfig& c, int tlevel, long long L) {
  return reduce_to_L(t, leaf_elim_order(t), c, tlevel, L);
}

}  // namespace chipfire
