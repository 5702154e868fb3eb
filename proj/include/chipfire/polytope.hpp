#pragma once

// The polytope CP_l(T) = conv(S_l(T)): near-minimal configurations and the
// vertex set, exact decomposition of a self-reachable configuration into
// vertices, integer decomposition of dilate lattice points, and the
// unimodular map taking CP_{n-1}(T) to the unit cube.

#include <optional>
#include <string>
#include <vector>

#include "chipfire/chip.hpp"
#include "chipfire/combination.hpp"
#include "chipfire/dilation.hpp"
#include "chipfire/enumeration.hpp"
#include "chipfire/error.hpp"
#include "chipfire/rational.hpp"
#include "chipfire/tree.hpp"

namespace chipfire {

// ---------------------------------------------------------------------------
// Near-minimal configurations

struct NearMinimalCertificate {
  Vertex about = 0;
  long long chips_on_about = 0;  // l + deg(about) + 1 - n
};

/// Vertices i such that c - e_i is still self-reachable.
inline std::vector<Vertex> removable_vertices(const Tree& t, const LeafElimOrder& ord,
                                              const ChipConfig& c) {
  std::vector<Vertex> out;
  std::vector<int> work = c.vec();
  std::vector<long long> h;
  for (Vertex i = 0; i < t.size(); ++i) {
    if (work[i] == 0) continue;
    --work[i];
    if (detail::dilation_dp_prefix(ord, work, 1, t.size(), false, h).ok) out.push_back(i);
    ++work[i];
  }
  return out;
}

/// Structural test: c restricts to a minimally self-reachable configuration
/// on every component of T \ v, and holds at least deg(v) + 1 chips on v.
inline bool near_minimal_by_components(const Tree& t, const ChipConfig& c, Vertex v) {
  if (c[v] < t.degree(v) + 1) return false;
  for (const auto& comp : remove_vertex_components(t, v)) {
    std::vector<int> local;
    for (Vertex u : comp.to_original) local.push_back(c[u]);
    if (!is_minimally_self_reachable(comp.tree, ChipConfig(std::move(local)))) return false;
  }
  return true;
}

/// Counting test: v holds exactly l + deg(v) + 1 - n chips.
inline bool near_minimal_by_max_chips(const Tree& t, const ChipConfig& c, Vertex v) {
  return c[v] == c.total() + t.degree(v) + 1 - t.size();
}

/// Certificate when exactly one unit removal keeps c self-reachable.
/// Requires c self-reachable with at least n chips. The answer is checked
/// against both structural characterizations before returning.
inline std::optional<NearMinimalCertificate> near_minimal_about(const Tree& t,
                                                               const LeafElimOrder& ord,
                                                               const ChipConfig& c) {
  detail::check_config(t, c);
  if (c.total() < t.size()) {
    throw PreconditionError("near_minimal_about needs at least n chips");
  }
  if (!is_t_dilated(t, ord, c, 1)) {
    throw PreconditionError("near_minimal_about: " + to_string(c) + " is not self-reachable");
  }
  auto removable = removable_vertices(t, ord, c);
  std::optional<NearMinimalCertificate> out;
  if (removable.size() == 1) out = NearMinimalCertificate{removable[0], c[removable[0]]};
  for (Vertex v = 0; v < t.size(); ++v) {
    bool direct = out && out->about == v;
    if (near_minimal_by_components(t, c, v) != direct ||
        near_minimal_by_max_chips(t, c, v) != direct) {
      throw TheoremViolation("near-minimal characterizations disagree at vertex " +
                             std::to_string(v + 1) + " for " + to_string(c));
    }
  }
  return out;
}

inline std::optional<NearMinimalCertificate> near_minimal_about(const Tree& t,
                                                               const ChipConfig& c) {
  return near_minimal_about(t, leaf_elim_order(t), c);
}

// ---------------------------------------------------------------------------
// Vertex enumeration

/// Vertices of CP_l(T), lexicographic. For l = n-1 these are all minimal
/// self-reachable configurations; for l >= n, for each vertex v the
/// configurations with l + deg(v) + 1 - n chips on v and a minimal
/// self-reachable configuration on every component of T \ v.
inline std::vector<ChipConfig> enumerate_vertices(const Tree& t, long long chips) {
  const int n = t.size();
  if (chips < n - 1) throw PreconditionError("CP_l(T) is empty for l < n - 1");
  if (chips == n - 1) return enumerate_src(t, chips);
  std::vector<ChipConfig> out;
  for (Vertex v = 0; v < n; ++v) {
    const long long on_v = chips + t.degree(v) + 1 - n;
    std::vector<std::vector<int>> partial{std::vector<int>(n, 0)};
    partial[0][v] = static_cast<int>(on_v);
    for (const auto& comp : remove_vertex_components(t, v)) {
      auto minimal = enumerate_src(comp.tree, comp.tree.size() - 1);
      std::vector<std::vector<int>> next;
      next.reserve(partial.size() * minimal.size());
      for (const auto& base : partial) {
        for (const auto& m : minimal) {
          auto full = base;
          for (int i = 0; i < m.size(); ++i) full[comp.to_original[i]] = m[i];
          next.push_back(std::move(full));
        }
      }
      partial = std::move(next);
    }
    for (auto& p : partial) out.emplace_back(std::move(p));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Decomposition into vertices

namespace detail {

struct NearMinimalTerm {
  Rational weight;
  std::vector<int> chips;  // full length; entries outside the prefix are 0
  Vertex about;
};

// Induction on the prefix order[0..k) with the last vertex as the removed
// leaf. Every returned term is near-minimal on the prefix tree about
// `about`, and the weighted sum equals chips on the prefix.
inline std::vector<NearMinimalTerm> decompose_prefix(const Tree& t, const LeafElimOrder& ord,
                                                     std::vector<int> chips, long long total,
                                                     int k) {
  if (k == 1) return {{Rational(1), std::move(chips), ord.order[0]}};
  const Vertex leaf = ord.order[k - 1];
  const Vertex p = ord.attach[k - 1];
  const long long s = chips[leaf];
  const long long smaller = k - 1;  // vertices once the leaf is removed

  if (s == 0) {
    // (x, 0) on T corresponds to x - e_p on the smaller tree.
    chips[p] -= 1;
    if (chips[p] < 0) throw TheoremViolation("leaf case: attachment vertex holds no chip");
    auto inner = decompose_prefix(t, ord, std::move(chips), total - 1, k - 1);
    for (auto& term : inner) term.chips[p] += 1;
    return inner;
  }
  if (s == total + 1 - smaller) {
    return {{Rational(1), std::move(chips), leaf}};
  }
  if (s < 1 || s > total - smaller) {
    throw TheoremViolation("leaf holds " + std::to_string(s) +
                           " chips, outside every decomposition case");
  }
  chips[leaf] = 0;
  auto inner = decompose_prefix(t, ord, std::move(chips), total - s, k - 1);
  std::vector<NearMinimalTerm> out;
  for (auto& term : inner) {
    const Vertex a = term.about;
    const long long d = prefix_degree(t, ord, a, k - 1);
    const long long excess = term.chips[a] - d;
    if (excess < 1) {
      throw TheoremViolation("near-minimal term holds only " + std::to_string(term.chips[a]) +
                             " chips on its about-vertex");
    }
    // Keep: mass stays on a (or moves to p when a is the attachment vertex).
    // Move: a drops to d chips and the leaf takes the excess.
    std::vector<int> keep = term.chips;
    std::vector<int> move = term.chips;
    move[a] -= static_cast<int>(excess);
    move[leaf] = static_cast<int>(excess + s);
    Rational keep_weight;
    if (a != p) {
      keep[a] += static_cast<int>(s - 1);
      keep[leaf] = 1;
      keep_weight = Rational(excess, s - 1 + excess);
    } else {
      keep[p] += static_cast<int>(s);
      keep[leaf] = 0;
      keep_weight = Rational(excess, s + excess);
    }
    Rational move_weight = 1 - keep_weight;
    if (keep_weight != 0) out.push_back({term.weight * keep_weight, std::move(keep), a});
    if (move_weight != 0) out.push_back({term.weight * move_weight, std::move(move), leaf});
  }
  return out;
}

}  // namespace detail

/// Writes a self-reachable configuration with l >= n chips as an exact convex
/// combination of vertices of CP_l(T), following the leaf induction along the
/// given elimination order. Duplicate terms are merged and terms sorted.
inline ConvexCombination decompose_into_vertices(const Tree& t, const LeafElimOrder& ord,
                                                 const ChipConfig& c) {
  detail::check_config(t, c);
  if (c.total() < t.size()) {
    throw PreconditionError("decomposition into vertices needs at least n chips");
  }
  if (!is_t_dilated(t, ord, c, 1)) {
    throw PreconditionError(to_string(c) + " is not self-reachable");
  }
  ConvexCombination combo;
  combo.point = c;
  if (near_minimal_about(t, ord, c)) {
    combo.terms.push_back({Rational(1), c});
    return combo;
  }
  auto terms = detail::decompose_prefix(t, ord, c.vec(), c.total(), t.size());
  for (auto& term : terms) {
    ChipConfig config(std::move(term.chips));
    auto cert = near_minimal_about(t, ord, config);
    if (!cert || cert->about != term.about) {
      throw TheoremViolation("decomposition term " + to_string(config) +
                             " is not near-minimal about vertex " +
                             std::to_string(term.about + 1));
    }
    combo.terms.push_back({std::move(term.weight), std::move(config)});
  }
  combo.canonicalize();
  if (auto err = combo.validate(); !err.empty()) {
    throw TheoremViolation("decomposition of " + to_string(c) + " invalid: " + err);
  }
  return combo;
}

inline ConvexCombination decompose_into_vertices(const Tree& t, const ChipConfig& c) {
  return decompose_into_vertices(t, leaf_elim_order(t), c);
}

// ---------------------------------------------------------------------------
// Integer decomposition

struct IdpDecomposition {
  ChipConfig point;
  int t = 1;
  std::vector<ChipConfig> parts;  // in peel order
};

/// Splits a t-dilated configuration with t*l chips into t self-reachable
/// configurations with l chips each.
inline IdpDecomposition idp_decompose(const Tree& t, const LeafElimOrder& ord,
                                      const ChipConfig& w, long long chips, int tlevel) {
  detail::check_config(t, w);
  detail::check_level(tlevel);
  if (chips < t.size() - 1) throw PreconditionError("CP_l(T) is empty for l < n - 1");
  if (w.total() != chips * tlevel) {
    throw PreconditionError("point holds " + std::to_string(w.total()) + " chips, expected " +
                            std::to_string(chips * tlevel));
  }
  if (!is_t_dilated(t, ord, w, tlevel)) {
    throw PreconditionError(to_string(w) + " is not " + std::to_string(tlevel) + "-dilated");
  }
  IdpDecomposition out{w, tlevel, {}};
  ChipConfig rest = w;
  for (int level = tlevel - 1; level >= 1; --level) {
    ChipConfig part = reduce_to_L(t, ord, rest, level, chips);
    rest = rest - part;
    out.parts.push_back(std::move(part));
  }
  out.parts.push_back(rest);
  ChipConfig sum = ChipConfig::zeros(t.size());
  for (const auto& part : out.parts) {
    if (part.total() != chips || !is_t_dilated(t, ord, part, 1)) {
      throw TheoremViolation("IDP part " + to_string(part) +
                             " is not a self-reachable configuration with " +
                             std::to_string(chips) + " chips");
    }
    sum = sum + part;
  }
  if (sum != w) throw TheoremViolation("IDP parts do not sum to " + to_string(w));
  return out;
}

inline IdpDecomposition idp_decompose(const Tree& t, const ChipConfig& w, long long chips,
                                      int tlevel) {
  return idp_decompose(t, leaf_elim_order(t), w, chips, tlevel);
}

// ---------------------------------------------------------------------------
// Unit cube equivalence

/// x -> U x + b with integer U.
struct AffineUnimodularMap {
  std::vector<std::vector<long long>> U;
  std::vector<long long> b;

  std::vector<long long> apply(std::span<const int> x) const {
    std::vector<long long> y = b;
    for (std::size_t i = 0; i < U.size(); ++i) {
      for (std::size_t j = 0; j < x.size(); ++j) y[i] += U[i][j] * x[j];
    }
    return y;
  }

  /// Exact determinant by fraction-free elimination, on machine words
  /// unless an intermediate overflows.
  BigInt determinant() const {
    try {
      return detail::to_big(bareiss<detail::CheckedInt>());
    } catch (const detail::CheckedInt::Overflow&) {
      return bareiss<BigInt>();
    }
  }

 private:
  template <class Int>
  Int bareiss() const {
    const std::size_t n = U.size();
    if (n == 0) return Int(1);
    std::vector<std::vector<Int>> a(n, std::vector<Int>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) a[i][j] = Int(U[i][j]);
    }
    Int sign(1), prev(1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (a[k][k] == Int(0)) {
        std::size_t r = k + 1;
        while (r < n && a[r][k] == Int(0)) ++r;
        if (r == n) return Int(0);
        std::swap(a[k], a[r]);
        sign = -sign;
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        for (std::size_t j = k + 1; j < n; ++j) {
          a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        }
      }
      prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
  }
};

/// Affine map with det(U) = 1 sending the minimal self-reachable
/// configurations onto {0,1}^(n-1) x {0}. One elementary step per leaf of the
/// elimination order, last leaf first: with leaf x attached to p, add
/// coordinate x into coordinate p and subtract one from p. Afterwards the
/// root coordinate is identically zero; a final signed transposition moves
/// it to the last coordinate while keeping the determinant at 1.
inline AffineUnimodularMap cube_map(const Tree& t, const LeafElimOrder& ord) {
  const int n = t.size();
  AffineUnimodularMap m;
  m.U.assign(n, std::vector<long long>(n, 0));
  for (int i = 0; i < n; ++i) m.U[i][i] = 1;
  m.b.assign(n, 0);
  for (int k = n - 1; k >= 1; --k) {
    const Vertex x = ord.order[k];
    const Vertex p = ord.attach[k];
    for (int j = 0; j < n; ++j) m.U[p][j] += m.U[x][j];
    m.b[p] += m.b[x] - 1;
  }
  const Vertex root = ord.order[0];
  if (root != n - 1) {
    std::swap(m.U[root], m.U[n - 1]);
    std::swap(m.b[root], m.b[n - 1]);
    for (auto& entry : m.U[n - 1]) entry = -entry;
    m.b[n - 1] = -m.b[n - 1];
  }
  return m;
}

inline AffineUnimodularMap cube_map(const Tree& t) { return cube_map(t, leaf_elim_order(t)); }

}  // namespace chipfire
