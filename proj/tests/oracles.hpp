#pragma once

// Slow, obviously-correct reference implementations used only by tests.
// Nothing here calls the library's algorithms beyond Tree accessors.

#include <bit>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <vector>

#include "chipfire/tree.hpp"

namespace oracle {

using chipfire::Tree;
using chipfire::Vertex;

// A nonempty subset of a tree is connected iff it induces |S| - 1 edges.
inline bool connected(const Tree& t, std::uint64_t mask) {
  if (mask == 0) return false;
  int inside = 0;
  for (auto [u, v] : t.edges()) inside += ((mask >> u) & 1) && ((mask >> v) & 1);
  return std::popcount(mask) == inside + 1;
}

inline std::vector<std::uint64_t> subtrees(const Tree& t) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << t.size()); ++m) {
    if (connected(t, m)) out.push_back(m);
  }
  return out;
}

inline long long chips_on(const std::vector<int>& c, std::uint64_t mask) {
  long long s = 0;
  for (int i = 0; i < static_cast<int>(c.size()); ++i) {
    if ((mask >> i) & 1) s += c[i];
  }
  return s;
}

// Minimum of chips(S) - t(|S| - 1) over every connected subset.
inline long long min_slack(const Tree& t, const std::vector<int>& c, int level) {
  long long best = 0;
  bool first = true;
  for (auto m : subtrees(t)) {
    long long s = chips_on(c, m) - static_cast<long long>(level) * (std::popcount(m) - 1);
    if (first || s < best) best = s;
    first = false;
  }
  return best;
}

inline bool dilated(const Tree& t, const std::vector<int>& c, int level) {
  return min_slack(t, c, level) >= 0;
}

inline std::vector<int> fire(const Tree& t, std::vector<int> c, Vertex v) {
  c[v] -= t.degree(v);
  for (Vertex u : t.neighbors(v)) ++c[u];
  return c;
}

// Every configuration reachable by one or more legal fires, by depth-first
// search over an ordered set.
inline std::set<std::vector<int>> reachable(const Tree& t, const std::vector<int>& c) {
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> stack{c};
  while (!stack.empty()) {
    auto cur = stack.back();
    stack.pop_back();
    for (Vertex v = 0; v < t.size(); ++v) {
      if (cur[v] < t.degree(v)) continue;
      auto next = fire(t, cur, v);
      if (seen.insert(next).second) stack.push_back(next);
    }
  }
  return seen;
}

inline bool self_reachable(const Tree& t, const std::vector<int>& c) {
  return reachable(t, c).count(c) > 0;
}

inline void compositions(int n, int total, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> c(n, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == n - 1) {
      c[i] = left;
      fn(c);
      return;
    }
    for (int x = 0; x <= left; ++x) {
      c[i] = x;
      rec(i + 1, left - x);
    }
  };
  if (n > 0) rec(0, total);
}

inline std::vector<std::vector<int>> src_bruteforce(const Tree& t, int total, int level = 1) {
  std::vector<std::vector<int>> out;
  compositions(t.size(), total, [&](const std::vector<int>& c) {
    if (dilated(t, c, level)) out.push_back(c);
  });
  return out;
}

// Uniform labeled tree from a random Pruefer code, decoded here directly.
inline Tree random_tree(int n, std::mt19937_64& rng) {
  if (n == 1) return Tree(1, {});
  if (n == 2) return Tree(2, {{0, 1}});
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::vector<int> code(n - 2);
  for (int& x : code) x = pick(rng);
  std::vector<int> degree(n, 1);
  for (int x : code) ++degree[x];
  std::vector<chipfire::Edge> edges;
  for (int x : code) {
    for (int leaf = 0; leaf < n; ++leaf) {
      if (degree[leaf] == 1) {
        edges.emplace_back(leaf, x);
        --degree[leaf];
        --degree[x];
        break;
      }
    }
  }
  int a = -1;
  for (int v = 0; v < n; ++v) {
    if (degree[v] == 1) {
      if (a < 0) {
        a = v;
      } else {
        edges.emplace_back(a, v);
      }
    }
  }
  return Tree(n, std::move(edges));
}

inline std::vector<int> random_config(int n, int max_chips, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, max_chips);
  std::vector<int> c(n);
  for (int& x : c) x = pick(rng);
  return c;
}

}  // namespace oracle
