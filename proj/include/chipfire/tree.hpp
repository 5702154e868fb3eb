#pragma once

// Labeled trees, subtree machinery, the graph Laplacian and exhaustive
// generation of labeled trees by Pruefer decoding.
//
// Vertices are 0-indexed inside the library. Every textual surface
// (tree files, configuration lists, witnesses) is 1-indexed.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chipfire/error.hpp"

namespace chipfire {

using Vertex = int;
using Edge = std::pair<Vertex, Vertex>;

class Tree {
 public:
  Tree() : Tree(1, {}) {}

  /// Builds a tree on vertices 0..n-1. Throws ParseError unless the edge
  /// list forms a spanning tree.
  Tree(int n, std::vector<Edge> edges) : n_(n) {
    if (n < 1) throw ParseError("tree must have at least one vertex");
    if (static_cast<int>(edges.size()) != n - 1) {
      throw ParseError("tree on " + std::to_string(n) + " vertices needs " +
                       std::to_string(n - 1) + " edges, got " +
                       std::to_string(edges.size()));
    }
    std::vector<int> root(n);
    std::iota(root.begin(), root.end(), 0);
    auto find = [&](int v) {
      while (root[v] != v) v = root[v] = root[root[v]];
      return v;
    };
    adjacency_.assign(n, {});
    for (auto& [u, v] : edges) {
      if (u < 0 || u >= n || v < 0 || v >= n) {
        throw ParseError("edge endpoint out of range");
      }
      if (u == v) throw ParseError("self-loop is not allowed in a tree");
      if (u > v) std::swap(u, v);
      int ru = find(u), rv = find(v);
      if (ru == rv) throw ParseError("edge list contains a cycle");
      root[ru] = rv;
      adjacency_[u].push_back(v);
      adjacency_[v].push_back(u);
    }
    for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
    std::sort(edges.begin(), edges.end());
    edges_ = std::move(edges);
  }

  int size() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_[v]; }
  int degree(Vertex v) const { return static_cast<int>(adjacency_[v].size()); }
  bool is_leaf(Vertex v) const { return degree(v) == 1; }
  bool adjacent(Vertex u, Vertex v) const {
    return std::binary_search(adjacency_[u].begin(), adjacency_[u].end(), v);
  }

  friend bool operator==(const Tree& a, const Tree& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> adjacency_;
};

/// Reads the edge-list format: first line n, then n-1 lines "u v" with
/// 1-indexed endpoints. Blank lines and surrounding whitespace are ignored.
inline Tree parse_tree(std::string_view text) {
  std::vector<std::string> lines;
  {
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      lines.push_back(line);
    }
  }
  if (lines.empty()) throw ParseError("empty tree document");
  auto parse_ints = [](const std::string& line, std::size_t expected,
                       std::size_t lineno) {
    std::istringstream in(line);
    std::vector<long long> values;
    std::string token;
    while (in >> token) {
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size()) {
        throw ParseError("line " + std::to_string(lineno) +
                         ": not an integer: '" + token + "'");
      }
      values.push_back(v);
    }
    if (values.size() != expected) {
      throw ParseError("line " + std::to_string(lineno) + ": expected " +
                       std::to_string(expected) + " integer(s)");
    }
    return values;
  };
  long long n = parse_ints(lines[0], 1, 1)[0];
  if (n < 1 || n > 1'000'000) throw ParseError("vertex count out of range");
  if (static_cast<long long>(lines.size()) - 1 != n - 1) {
    throw ParseError("expected " + std::to_string(n - 1) + " edge lines, got " +
                     std::to_string(lines.size() - 1));
  }
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto uv = parse_ints(lines[i], 2, i + 1);
    for (long long x : uv) {
      if (x < 1 || x > n) {
        throw ParseError("line " + std::to_string(i + 1) + ": vertex " +
                         std::to_string(x) + " outside 1.." + std::to_string(n));
      }
    }
    edges.emplace_back(static_cast<int>(uv[0] - 1), static_cast<int>(uv[1] - 1));
  }
  return Tree(static_cast<int>(n), std::move(edges));
}

/// Canonical serialization: edges sorted lexicographically, smaller endpoint
/// first, 1-indexed.
inline std::string to_string(const Tree& t) {
  std::string out = std::to_string(t.size()) + "\n";
  for (auto [u, v] : t.edges()) {
    out += std::to_string(u + 1) + " " + std::to_string(v + 1) + "\n";
  }
  return out;
}

inline Tree path_tree(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Tree(n, std::move(edges));
}

inline Tree star_tree(int n) {
  std::vector<Edge> edges;
  for (int i = 1; i < n; ++i) edges.emplace_back(0, i);
  return Tree(n, std::move(edges));
}

// ---------------------------------------------------------------------------
// Laplacian

class Laplacian {
 public:
  explicit Laplacian(const Tree& t) : n_(t.size()), entries_(n_ * n_, 0) {
    for (Vertex v = 0; v < n_; ++v) at(v, v) = t.degree(v);
    for (auto [u, v] : t.edges()) {
      at(u, v) = -1;
      at(v, u) = -1;
    }
  }

  int size() const { return n_; }
  int operator()(int i, int j) const { return entries_[i * n_ + j]; }

  std::vector<std::vector<int>> rows() const {
    std::vector<std::vector<int>> out(n_);
    for (int i = 0; i < n_; ++i) {
      out[i].assign(entries_.begin() + i * n_, entries_.begin() + (i + 1) * n_);
    }
    return out;
  }

 private:
  int& at(int i, int j) { return entries_[i * n_ + j]; }

  int n_;
  std::vector<int> entries_;
};

inline Laplacian laplacian(const Tree& t) { return Laplacian(t); }

// ---------------------------------------------------------------------------
// Subtrees

/// A connected vertex subset, stored as a bitmask. Limited to 64 vertices,
/// which is far beyond what subtree enumeration can reach anyway.
struct SubtreeMask {
  std::uint64_t bits = 0;

  bool contains(Vertex v) const { return (bits >> v) & 1U; }
  int size() const { return std::popcount(bits); }
  std::vector<Vertex> members() const {
    std::vector<Vertex> out;
    for (std::uint64_t b = bits; b != 0; b &= b - 1) {
      out.push_back(std::countr_zero(b));
    }
    return out;
  }
  static SubtreeMask of(std::initializer_list<Vertex> vs) {
    SubtreeMask m;
    for (Vertex v : vs) m.bits |= std::uint64_t{1} << v;
    return m;
  }

  friend bool operator==(SubtreeMask, SubtreeMask) = default;
};

/// True when the mask is nonempty and induces a connected subgraph.
inline bool is_connected_subset(const Tree& t, SubtreeMask mask) {
  if (mask.bits == 0) return false;
  std::uint64_t seen = mask.bits & (~mask.bits + 1);
  std::vector<Vertex> stack{std::countr_zero(mask.bits)};
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (Vertex u : t.neighbors(v)) {
      std::uint64_t bit = std::uint64_t{1} << u;
      if ((mask.bits & bit) && !(seen & bit)) {
        seen |= bit;
        stack.push_back(u);
      }
    }
  }
  return seen == mask.bits;
}

inline constexpr std::size_t kDefaultSubtreeCap = std::size_t{1} << 20;

namespace detail {

// Rooted expansion: every connected subset has a unique vertex closest to
// vertex 0 (its top). Subsets with top v are v plus, for each pending child,
// either nothing or a subset topped at that child.
template <class Fn>
void expand_subtrees(const std::vector<std::vector<Vertex>>& children,
                     std::uint64_t current, std::vector<Vertex>& pending,
                     std::size_t& emitted, std::size_t cap, Fn& fn) {
  if (pending.empty()) {
    if (++emitted > cap) {
      throw CapExceeded("subtree enumeration exceeded cap of " +
                        std::to_string(cap));
    }
    fn(SubtreeMask{current});
    return;
  }
  Vertex u = pending.back();
  pending.pop_back();
  expand_subtrees(children, current, pending, emitted, cap, fn);
  std::size_t mark = pending.size();
  pending.insert(pending.end(), children[u].begin(), children[u].end());
  expand_subtrees(children, current | (std::uint64_t{1} << u), pending, emitted,
                  cap, fn);
  pending.resize(mark);
  pending.push_back(u);
}

}  // namespace detail

/// Calls fn(SubtreeMask) once for every nonempty connected vertex subset.
template <class Fn>
void for_each_subtree(const Tree& t, Fn&& fn,
                      std::size_t cap = kDefaultSubtreeCap) {
  const int n = t.size();
  if (n > 64) throw CapExceeded("subtree enumeration supports at most 64 vertices");
  std::vector<std::vector<Vertex>> children(n);
  std::vector<int> parent(n, -1);
  std::vector<Vertex> order{0};
  for (std::size_t i = 0; i < order.size(); ++i) {
    Vertex v = order[i];
    for (Vertex u : t.neighbors(v)) {
      if (u != parent[v]) {
        parent[u] = v;
        children[v].push_back(u);
        order.push_back(u);
      }
    }
  }
  std::size_t emitted = 0;
  std::vector<Vertex> pending;
  for (Vertex top = 0; top < n; ++top) {
    pending.assign(children[top].begin(), children[top].end());
    detail::expand_subtrees(children, std::uint64_t{1} << top, pending, emitted,
                            cap, fn);
  }
}

inline std::vector<SubtreeMask> enumerate_subtrees(
    const Tree& t, std::size_t cap = kDefaultSubtreeCap) {
  std::vector<SubtreeMask> out;
  for_each_subtree(t, [&](SubtreeMask m) { out.push_back(m); }, cap);
  return out;
}

// ---------------------------------------------------------------------------
// Leaf elimination order

/// order[0] is the root (vertex 0). For k >= 1, order[k] has exactly one
/// neighbor among order[0..k-1], namely attach[k]; equivalently order[k] is a
/// leaf of the subtree induced by order[0..k].
struct LeafElimOrder {
  std::vector<Vertex> order;
  std::vector<Vertex> attach;    // attach[0] == -1
  std::vector<int> position;     // inverse of order
};

/// Grows the order from vertex 0, always adding the smallest vertex adjacent
/// to the part already placed.
inline LeafElimOrder leaf_elim_order(const Tree& t) {
  const int n = t.size();
  LeafElimOrder out;
  out.order.reserve(n);
  out.attach.reserve(n);
  out.position.assign(n, -1);
  std::vector<Vertex> via(n, -1);
  std::vector<char> frontier(n, 0);
  auto place = [&](Vertex v) {
    out.position[v] = static_cast<int>(out.order.size());
    out.order.push_back(v);
    out.attach.push_back(via[v]);
    frontier[v] = 0;
    for (Vertex u : t.neighbors(v)) {
      if (out.position[u] < 0) {
        frontier[u] = 1;
        via[u] = v;
      }
    }
  };
  place(0);
  while (static_cast<int>(out.order.size()) < n) {
    Vertex next = static_cast<Vertex>(
        std::find(frontier.begin(), frontier.end(), 1) - frontier.begin());
    place(next);
  }
  return out;
}

/// Validates a caller-supplied order: every vertex exactly once and each
/// vertex after the first adjacent to exactly one earlier vertex.
inline LeafElimOrder leaf_elim_order_from(const Tree& t, std::vector<Vertex> order) {
  const int n = t.size();
  if (static_cast<int>(order.size()) != n) {
    throw PreconditionError("elimination order must list every vertex once");
  }
  LeafElimOrder out;
  out.position.assign(n, -1);
  for (int k = 0; k < n; ++k) {
    Vertex v = order[k];
    if (v < 0 || v >= n || out.position[v] >= 0) {
      throw PreconditionError("elimination order must list every vertex once");
    }
    out.position[v] = k;
  }
  out.attach.assign(n, -1);
  for (int k = 1; k < n; ++k) {
    int earlier = 0;
    for (Vertex u : t.neighbors(order[k])) {
      if (out.position[u] < k) {
        ++earlier;
        out.attach[k] = u;
      }
    }
    if (earlier != 1) {
      throw PreconditionError("vertex " + std::to_string(order[k] + 1) +
                              " is not a leaf of the subtree induced by its prefix");
    }
  }
  out.order = std::move(order);
  return out;
}

/// Degree of v inside the prefix subtree order[0..k).
inline int prefix_degree(const Tree& t, const LeafElimOrder& ord, Vertex v, int k) {
  int d = 0;
  for (Vertex u : t.neighbors(v)) d += ord.position[u] < k;
  return d;
}

// ---------------------------------------------------------------------------
// Components of T minus a vertex

struct Component {
  Tree tree;
  std::vector<Vertex> to_original;  // local index -> original vertex
};

/// The deg(v) trees of T \ v, ordered by their smallest original vertex.
/// Local labels preserve the relative order of the original labels.
inline std::vector<Component> remove_vertex_components(const Tree& t, Vertex v) {
  if (v < 0 || v >= t.size()) throw PreconditionError("vertex out of range");
  std::vector<int> comp(t.size(), -1);
  comp[v] = -2;
  std::vector<std::vector<Vertex>> groups;
  for (Vertex s = 0; s < t.size(); ++s) {
    if (comp[s] != -1) continue;
    int id = static_cast<int>(groups.size());
    groups.emplace_back();
    std::vector<Vertex> stack{s};
    comp[s] = id;
    while (!stack.empty()) {
      Vertex x = stack.back();
      stack.pop_back();
      groups[id].push_back(x);
      for (Vertex y : t.neighbors(x)) {
        if (comp[y] == -1) {
          comp[y] = id;
          stack.push_back(y);
        }
      }
    }
  }
  std::vector<Component> out;
  for (auto& members : groups) {
    std::sort(members.begin(), members.end());
    std::vector<int> local(t.size(), -1);
    for (std::size_t i = 0; i < members.size(); ++i) local[members[i]] = static_cast<int>(i);
    std::vector<Edge> edges;
    for (auto [a, b] : t.edges()) {
      if (local[a] >= 0 && local[b] >= 0) edges.emplace_back(local[a], local[b]);
    }
    out.push_back({Tree(static_cast<int>(members.size()), std::move(edges)), members});
  }
  return out;
}

/// Induced subtree on a connected mask, with its local-to-original map.
inline Component induced_subtree(const Tree& t, SubtreeMask mask) {
  if (!is_connected_subset(t, mask)) {
    throw PreconditionError("mask does not induce a subtree");
  }
  auto members = mask.members();
  std::vector<int> local(t.size(), -1);
  for (std::size_t i = 0; i < members.size(); ++i) local[members[i]] = static_cast<int>(i);
  std::vector<Edge> edges;
  for (auto [a, b] : t.edges()) {
    if (local[a] >= 0 && local[b] >= 0) edges.emplace_back(local[a], local[b]);
  }
  return {Tree(static_cast<int>(members.size()), std::move(edges)), members};
}

// ---------------------------------------------------------------------------
// Labeled tree generation

inline constexpr int kLabeledTreeGuard = 9;

/// Decodes a Pruefer sequence (entries in 0..n-1, length n-2).
inline Tree tree_from_pruefer(int n, std::span<const int> code) {
  if (n == 1) return Tree(1, {});
  std::vector<int> degree(n, 1);
  for (int x : code) ++degree[x];
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  int ptr = 0;
  while (degree[ptr] != 1) ++ptr;
  int leaf = ptr;
  for (int x : code) {
    edges.emplace_back(leaf, x);
    if (--degree[x] == 1 && x < ptr) {
      leaf = x;
    } else {
      ++ptr;
      while (degree[ptr] != 1) ++ptr;
      leaf = ptr;
    }
  }
  edges.emplace_back(leaf, n - 1);
  return Tree(n, std::move(edges));
}

/// n^(n-2), the number of labeled trees on n vertices (1 for n <= 2).
inline unsigned long long labeled_tree_count(int n) {
  if (n < 1) throw PreconditionError("tree size must be at least 1");
  if (n > kLabeledTreeGuard + 6) throw CapExceeded("labeled tree count would overflow");
  unsigned long long count = 1;
  for (int i = 0; i < n - 2; ++i) count *= static_cast<unsigned long long>(n);
  return count;
}

/// The index-th tree of for_each_labeled_tree(n).
inline Tree labeled_tree_at(int n, unsigned long long index) {
  if (index >= labeled_tree_count(n)) throw PreconditionError("labeled tree index out of range");
  if (n <= 2) return n == 1 ? Tree(1, {}) : Tree(2, {{0, 1}});
  std::vector<int> code(n - 2, 0);
  for (int i = n - 3; i >= 0; --i) {
    code[i] = static_cast<int>(index % n);
    index /= n;
  }
  return tree_from_pruefer(n, code);
}

/// Calls fn(const Tree&) for each of the n^(n-2) labeled trees on n
/// vertices, in lexicographic order of Pruefer codes.
template <class Fn>
void for_each_labeled_tree(int n, Fn&& fn, bool force = false) {
  if (n < 1) throw PreconditionError("tree size must be at least 1");
  if (n > kLabeledTreeGuard && !force) {
    throw CapExceeded("labeled tree generation is guarded at n <= " +
                      std::to_string(kLabeledTreeGuard));
  }
  if (n <= 2) {
    fn(n == 1 ? Tree(1, {}) : Tree(2, {{0, 1}}));
    return;
  }
  std::vector<int> code(n - 2, 0);
  while (true) {
    fn(tree_from_pruefer(n, code));
    int i = n - 3;
    while (i >= 0 && code[i] == n - 1) code[i--] = 0;
    if (i < 0) break;
    ++code[i];
  }
}

inline std::vector<Tree> all_labeled_trees(int n, bool force = false) {
  std::vector<Tree> out;
  for_each_labeled_tree(n, [&](const Tree& t) { out.push_back(t); }, force);
  return out;
}

}  // namespace chipfire
