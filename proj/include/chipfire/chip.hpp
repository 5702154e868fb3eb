#pragma once

// Chip configurations, legal firing, and the search-based self-reachability
// oracle. The oracle explores the finite configuration graph and never
// consults the subtree criterion.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "chipfire/error.hpp"
#include "chipfire/tree.hpp"

namespace chipfire {

/// Nonnegative chip counts, one per vertex, with the total cached.
class ChipConfig {
 public:
  ChipConfig() = default;
  explicit ChipConfig(std::vector<int> chips) : chips_(std::move(chips)) {
    for (int c : chips_) {
      if (c < 0) throw PreconditionError("chip counts must be nonnegative");
      total_ += c;
    }
  }
  ChipConfig(std::initializer_list<int> chips)
      : ChipConfig(std::vector<int>(chips)) {}

  static ChipConfig zeros(int n) { return ChipConfig(std::vector<int>(n, 0)); }

  int size() const { return static_cast<int>(chips_.size()); }
  long long total() const { return total_; }
  int operator[](int i) const { return chips_[i]; }
  std::span<const int> chips() const { return chips_; }
  const std::vector<int>& vec() const { return chips_; }

  /// Adds delta chips at vertex i. Throws if the count would go negative.
  ChipConfig& add(int i, int delta) {
    if (chips_[i] + delta < 0) {
      throw PreconditionError("vertex " + std::to_string(i + 1) +
                              " would hold a negative number of chips");
    }
    chips_[i] += delta;
    total_ += delta;
    return *this;
  }
  ChipConfig plus(int i, int delta) const {
    ChipConfig out = *this;
    return out.add(i, delta);
  }

  friend ChipConfig operator+(const ChipConfig& a, const ChipConfig& b) {
    require_same_size(a, b);
    std::vector<int> out(a.chips_);
    for (int i = 0; i < a.size(); ++i) out[i] += b.chips_[i];
    return ChipConfig(std::move(out));
  }
  friend ChipConfig operator-(const ChipConfig& a, const ChipConfig& b) {
    require_same_size(a, b);
    std::vector<int> out(a.chips_);
    for (int i = 0; i < a.size(); ++i) out[i] -= b.chips_[i];
    return ChipConfig(std::move(out));
  }
  friend bool operator==(const ChipConfig& a, const ChipConfig& b) {
    return a.chips_ == b.chips_;
  }
  friend auto operator<=>(const ChipConfig& a, const ChipConfig& b) {
    return a.chips_ <=> b.chips_;
  }

  /// True when every entry is at least the corresponding entry of other.
  bool dominates(const ChipConfig& other) const {
    require_same_size(*this, other);
    for (int i = 0; i < size(); ++i) {
      if (chips_[i] < other.chips_[i]) return false;
    }
    return true;
  }

  long long chips_on(SubtreeMask mask) const {
    long long sum = 0;
    for (Vertex v : mask.members()) sum += chips_[v];
    return sum;
  }

 private:
  static void require_same_size(const ChipConfig& a, const ChipConfig& b) {
    if (a.size() != b.size()) throw PreconditionError("configuration size mismatch");
  }

  std::vector<int> chips_;
  long long total_ = 0;
};

/// Parses "1,2,3". Whitespace around entries is allowed.
inline ChipConfig parse_config(std::string_view text) {
  std::vector<int> chips;
  std::string s(text);
  std::stringstream in(s);
  std::string token;
  while (std::getline(in, token, ',')) {
    auto b = token.find_first_not_of(" \t\r\n");
    auto e = token.find_last_not_of(" \t\r\n");
    if (b == std::string::npos) throw ParseError("empty entry in configuration");
    token = token.substr(b, e - b + 1);
    std::size_t used = 0;
    long long v = -1;
    try {
      v = std::stoll(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || v < 0 || v > 1'000'000'000) {
      throw ParseError("not a nonnegative chip count: '" + token + "'");
    }
    chips.push_back(static_cast<int>(v));
  }
  if (chips.empty()) throw ParseError("empty configuration");
  return ChipConfig(std::move(chips));
}

inline std::string to_string(const ChipConfig& c) {
  std::string out;
  for (int i = 0; i < c.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(c[i]);
  }
  return out;
}

/// Vertices fired in order, 0-indexed.
using FiringSequence = std::vector<Vertex>;

inline std::string sequence_to_string(const FiringSequence& seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(seq[i] + 1);
  }
  return out;
}

inline FiringSequence parse_sequence(std::string_view text) {
  FiringSequence seq;
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) return seq;
  const ChipConfig raw = parse_config(text);
  for (int v : raw.vec()) {
    if (v < 1) throw ParseError("firing sequence entries are 1-indexed");
    seq.push_back(v - 1);
  }
  return seq;
}

// ---------------------------------------------------------------------------
// Firing

namespace detail {
inline void check_vertex(const Tree& t, const ChipConfig& c, Vertex i) {
  if (c.size() != t.size()) {
    throw PreconditionError("configuration has " + std::to_string(c.size()) +
                            " entries for a tree on " + std::to_string(t.size()) +
                            " vertices");
  }
  if (i < 0 || i >= t.size()) {
    throw PreconditionError("vertex index " + std::to_string(i + 1) + " out of range");
  }
}
}  // namespace detail

inline bool is_legal_fire(const Tree& t, const ChipConfig& c, Vertex i) {
  detail::check_vertex(t, c, i);
  return c[i] >= t.degree(i);
}

/// c - Laplacian * e_i.
inline ChipConfig fire(const Tree& t, const ChipConfig& c, Vertex i) {
  if (!is_legal_fire(t, c, i)) {
    throw PreconditionError("illegal fire of vertex " + std::to_string(i + 1) +
                            ": holds " + std::to_string(c[i]) + " < degree " +
                            std::to_string(t.degree(i)));
  }
  std::vector<int> out = c.vec();
  out[i] -= t.degree(i);
  for (Vertex u : t.neighbors(i)) ++out[u];
  return ChipConfig(std::move(out));
}

/// Error raised by apply_sequence; position is 0-based within the sequence.
class IllegalSequence : public PreconditionError {
 public:
  IllegalSequence(std::size_t position, Vertex vertex)
      : PreconditionError("illegal fire at step " + std::to_string(position + 1) +
                          " (vertex " + std::to_string(vertex + 1) + ")"),
        position_(position),
        vertex_(vertex) {}
  std::size_t position() const { return position_; }
  Vertex vertex() const { return vertex_; }

 private:
  std::size_t position_;
  Vertex vertex_;
};

inline ChipConfig apply_sequence(const Tree& t, const ChipConfig& c,
                                 const FiringSequence& seq) {
  ChipConfig cur = c;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    detail::check_vertex(t, cur, seq[k]);
    if (cur[seq[k]] < t.degree(seq[k])) throw IllegalSequence(k, seq[k]);
    cur = fire(t, cur, seq[k]);
  }
  return cur;
}

/// Closed form c - Laplacian * (firing counts). Ignores legality.
inline std::vector<long long> apply_firing_counts(const Tree& t, const ChipConfig& c,
                                                  const FiringSequence& seq) {
  Laplacian lap(t);
  std::vector<long long> counts(t.size(), 0);
  for (Vertex v : seq) ++counts[v];
  std::vector<long long> out(c.vec().begin(), c.vec().end());
  for (int i = 0; i < t.size(); ++i) {
    for (int j = 0; j < t.size(); ++j) out[i] -= static_cast<long long>(lap(i, j)) * counts[j];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Configuration-graph search

inline constexpr std::size_t kDefaultStateCap = 1'000'000;

namespace detail {

// Configurations with a fixed total packed into one 64-bit word, a fixed
// number of bits per vertex. Used whenever the packing fits.
struct PackedLayout {
  int n = 0;
  int bits = 1;
  bool fits = false;
  std::uint64_t field = 1;

  PackedLayout(int vertices, long long total) : n(vertices) {
    while ((std::uint64_t{1} << bits) <= static_cast<std::uint64_t>(total)) ++bits;
    fits = static_cast<long long>(bits) * n <= 64 && bits < 63;
    field = (std::uint64_t{1} << bits) - 1;
  }
  std::uint64_t encode(std::span<const int> c) const {
    std::uint64_t key = 0;
    for (int i = n - 1; i >= 0; --i) key = (key << bits) | static_cast<std::uint64_t>(c[i]);
    return key;
  }
  std::vector<int> decode(std::uint64_t key) const {
    std::vector<int> c(n);
    for (int i = 0; i < n; ++i) c[i] = static_cast<int>((key >> (bits * i)) & field);
    return c;
  }
  int get(std::uint64_t key, int i) const {
    return static_cast<int>((key >> (bits * i)) & field);
  }
};

// Open-addressing map from packed state to its BFS index.
class PackedIndex {
 public:
  PackedIndex() { rehash(64); }

  // Returns {index, inserted}.
  std::pair<std::uint32_t, bool> try_emplace(std::uint64_t key, std::uint32_t value) {
    if ((size_ + 1) * 2 > slots_.size()) rehash(slots_.size() * 2);
    std::size_t i = probe(key);
    if (used_[i]) return {values_[i], false};
    used_[i] = 1;
    slots_[i] = key;
    values_[i] = value;
    ++size_;
    return {value, true};
  }

 private:
  std::size_t probe(std::uint64_t key) const {
    std::size_t mask = slots_.size() - 1;
    std::size_t i = static_cast<std::size_t>((key * 0x9E3779B97F4A7C15ULL) >> 20) & mask;
    while (used_[i] && slots_[i] != key) i = (i + 1) & mask;
    return i;
  }
  void rehash(std::size_t capacity) {
    std::vector<std::uint64_t> old_slots = std::move(slots_);
    std::vector<std::uint32_t> old_values = std::move(values_);
    std::vector<char> old_used = std::move(used_);
    slots_.assign(capacity, 0);
    values_.assign(capacity, 0);
    used_.assign(capacity, 0);
    for (std::size_t j = 0; j < old_slots.size(); ++j) {
      if (!old_used[j]) continue;
      std::size_t i = probe(old_slots[j]);
      used_[i] = 1;
      slots_[i] = old_slots[j];
      values_[i] = old_values[j];
    }
  }

  std::vector<std::uint64_t> slots_;
  std::vector<std::uint32_t> values_;
  std::vector<char> used_;
  std::size_t size_ = 0;
};

struct VectorHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = 1469598103934665603ULL;
    for (int x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ULL;
    return h;
  }
};

// Result of a breadth-first search over configurations reached by nonempty
// legal sequences. parent[i] is the BFS index of the predecessor (-1 for
// states one fire away from the start) and via[i] the vertex fired.
struct BfsTrace {
  std::vector<std::vector<int>> states;
  std::vector<std::ptrdiff_t> parent;
  std::vector<Vertex> via;
  std::ptrdiff_t hit = -1;  // index of the start configuration if re-reached
  bool complete = true;     // false when the cap stopped the search
};

inline BfsTrace bfs_packed(const Tree& t, const ChipConfig& start, std::size_t cap,
                           bool stop_on_return, const PackedLayout& layout) {
  const int n = t.size();
  std::vector<std::uint64_t> unit(n), cost(n);
  for (Vertex v = 0; v < n; ++v) {
    unit[v] = std::uint64_t{1} << (layout.bits * v);
    std::uint64_t gain = 0;
    for (Vertex u : t.neighbors(v)) gain += std::uint64_t{1} << (layout.bits * u);
    cost[v] = gain;  // added to neighbors; vertex v loses deg(v) * unit[v]
  }
  const std::uint64_t origin = layout.encode(start.chips());
  std::vector<std::uint64_t> keys;
  std::vector<std::ptrdiff_t> parent;
  std::vector<Vertex> via;
  PackedIndex index;
  BfsTrace trace;
  auto expand = [&](std::uint64_t from, std::ptrdiff_t from_index) -> bool {
    for (Vertex v = 0; v < n; ++v) {
      const int d = t.degree(v);
      if (layout.get(from, v) < d) continue;
      const std::uint64_t next = from - static_cast<std::uint64_t>(d) * unit[v] + cost[v];
      auto [idx, fresh] = index.try_emplace(next, static_cast<std::uint32_t>(keys.size()));
      if (!fresh) continue;
      if (keys.size() >= cap) {
        trace.complete = false;
        return true;
      }
      keys.push_back(next);
      parent.push_back(from_index);
      via.push_back(v);
      if (next == origin) {
        trace.hit = static_cast<std::ptrdiff_t>(idx);
        if (stop_on_return) return true;
      }
    }
    return false;
  };
  bool stopped = expand(origin, -1);
  for (std::size_t head = 0; !stopped && head < keys.size(); ++head) {
    stopped = expand(keys[head], static_cast<std::ptrdiff_t>(head));
  }
  trace.states.reserve(keys.size());
  for (std::uint64_t k : keys) trace.states.push_back(layout.decode(k));
  trace.parent = std::move(parent);
  trace.via = std::move(via);
  return trace;
}

inline BfsTrace bfs_vectors(const Tree& t, const ChipConfig& start, std::size_t cap,
                            bool stop_on_return) {
  const int n = t.size();
  std::unordered_map<std::vector<int>, std::size_t, VectorHash> index;
  BfsTrace trace;
  auto expand = [&](const std::vector<int>& from, std::ptrdiff_t from_index) -> bool {
    for (Vertex v = 0; v < n; ++v) {
      if (from[v] < t.degree(v)) continue;
      std::vector<int> next = from;
      next[v] -= t.degree(v);
      for (Vertex u : t.neighbors(v)) ++next[u];
      auto [it, fresh] = index.try_emplace(next, trace.states.size());
      if (!fresh) continue;
      if (trace.states.size() >= cap) {
        trace.complete = false;
        return true;
      }
      const bool back = next == start.vec();
      trace.states.push_back(std::move(next));
      trace.parent.push_back(from_index);
      trace.via.push_back(v);
      if (back) {
        trace.hit = static_cast<std::ptrdiff_t>(trace.states.size() - 1);
        if (stop_on_return) return true;
      }
    }
    return false;
  };
  bool stopped = expand(start.vec(), -1);
  for (std::size_t head = 0; !stopped && head < trace.states.size(); ++head) {
    std::vector<int> from = trace.states[head];
    stopped = expand(from, static_cast<std::ptrdiff_t>(head));
  }
  return trace;
}

inline BfsTrace bfs_reachable(const Tree& t, const ChipConfig& start, std::size_t cap,
                              bool stop_on_return) {
  PackedLayout layout(t.size(), start.total());
  if (layout.fits) return bfs_packed(t, start, cap, stop_on_return, layout);
  return bfs_vectors(t, start, cap, stop_on_return);
}

}  // namespace detail

/// R(c): every configuration reached by a nonempty legal firing sequence.
/// Throws CapExceeded when more than cap states are discovered.
inline std::set<ChipConfig> reachable_set(const Tree& t, const ChipConfig& c,
                                          std::size_t cap = kDefaultStateCap) {
  detail::check_vertex(t, c, 0);
  auto trace = detail::bfs_reachable(t, c, cap, false);
  if (!trace.complete) {
    throw CapExceeded("reachable set exceeded " + std::to_string(cap) + " states");
  }
  std::set<ChipConfig> out;
  for (auto& s : trace.states) out.insert(ChipConfig(std::move(s)));
  return out;
}

enum class SearchStatus { SelfReachable, NotSelfReachable, Unknown };

inline const char* to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::SelfReachable: return "self-reachable";
    case SearchStatus::NotSelfReachable: return "not-self-reachable";
    case SearchStatus::Unknown: return "unknown";
  }
  return "unknown";
}

struct SearchResult {
  SearchStatus status = SearchStatus::Unknown;
  std::optional<FiringSequence> witness;  // BFS-shortest return sequence
  std::size_t states_explored = 0;
};

/// Decides c in R(c) by breadth-first search. Exceeding the cap yields
/// Unknown, never a silent false.
inline SearchResult is_self_reachable_by_search(const Tree& t, const ChipConfig& c,
                                                std::size_t cap = kDefaultStateCap) {
  detail::check_vertex(t, c, 0);
  auto trace = detail::bfs_reachable(t, c, cap, true);
  SearchResult result;
  result.states_explored = trace.states.size();
  if (trace.hit >= 0) {
    FiringSequence seq;
    for (std::ptrdiff_t at = trace.hit; at >= 0; at = trace.parent[at]) seq.push_back(trace.via[at]);
    std::reverse(seq.begin(), seq.end());
    result.status = SearchStatus::SelfReachable;
    result.witness = std::move(seq);
  } else {
    result.status = trace.complete ? SearchStatus::NotSelfReachable : SearchStatus::Unknown;
  }
  return result;
}

}  // namespace chipfire
