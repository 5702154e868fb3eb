#pragma once

// Command implementations behind the chipfire binary. Each command returns
// its full output text and an exit code; the binary only parses flags,
// handles the cache and writes the text.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "chipfire/chip.hpp"
#include "chipfire/dilation.hpp"
#include "chipfire/enumeration.hpp"
#include "chipfire/error.hpp"
#include "chipfire/io.hpp"
#include "chipfire/polytope.hpp"
#include "chipfire/tree.hpp"
#include "chipfire/verify.hpp"

namespace chipfire::cli {

enum class Format { Json, Csv, Text };

inline const char* to_string(Format f) {
  switch (f) {
    case Format::Json: return "json";
    case Format::Csv: return "csv";
    case Format::Text: return "text";
  }
  return "?";
}

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitViolation = 2;

// Sweep guards; exceeding them needs --force.
inline constexpr int kVerifyNGuard = 9;
inline constexpr int kCountNGuard = 200;
inline constexpr int kCountLGuard = 400;
inline constexpr std::size_t kForcedStateCap = 100'000'000;

struct RunConfig {
  std::string command;
  std::string tree_path;
  std::optional<std::string> config;
  std::optional<long long> l;
  std::optional<int> t;
  std::optional<int> n_max;
  std::optional<int> l_max;
  std::optional<int> t_max;
  std::optional<Format> format;
  int jobs = 1;
  bool force = false;
};

struct CommandOutput {
  int exit_code = kExitOk;
  std::string text;
};

inline Format parse_format(const std::string& s) {
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  if (s == "text") return Format::Text;
  throw ParseError("unknown format '" + s + "' (json, csv or text)");
}

inline std::string read_file(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace detail {

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json big_to_json(const BigInt& x) {
  if (x >= std::numeric_limits<long long>::min() && x <= std::numeric_limits<long long>::max()) {
    return Json(x.convert_to<long long>());
  }
  return Json(x.str());
}

inline std::string csv_header(int n) {
  std::string out;
  for (int i = 1; i <= n; ++i) out += (i > 1 ? ",v" : "v") + std::to_string(i);
  return out + "\n";
}

class Context {
 public:
  explicit Context(const RunConfig& rc) : rc_(rc) {}

  const Tree& tree() {
    if (!tree_) {
      if (rc_.tree_path.empty()) throw ParseError(rc_.command + " needs --tree");
      tree_ = parse_tree(read_file(rc_.tree_path));
    }
    return *tree_;
  }
  ChipConfig config() {
    if (!rc_.config) throw ParseError(rc_.command + " needs --config");
    ChipConfig c = parse_config(*rc_.config);
    if (c.size() != tree().size()) {
      throw ParseError("--config has " + std::to_string(c.size()) + " entries for a tree on " +
                       std::to_string(tree().size()) + " vertices");
    }
    return c;
  }
  long long l() const {
    if (!rc_.l) throw ParseError(rc_.command + " needs --l");
    if (*rc_.l < 0) throw ParseError("--l must be nonnegative");
    return *rc_.l;
  }
  Format format(Format fallback, std::initializer_list<Format> allowed) const {
    Format f = rc_.format.value_or(fallback);
    for (Format a : allowed) {
      if (a == f) return f;
    }
    throw ParseError(rc_.command + " does not support --format " + to_string(f));
  }
  unsigned long long enumeration_guard() const {
    return rc_.force ? std::numeric_limits<unsigned long long>::max() - 1
                     : kDefaultEnumerationGuard;
  }
  const RunConfig& rc() const { return rc_; }

 private:
  const RunConfig& rc_;
  std::optional<Tree> tree_;
};

inline CommandOutput cmd_check(Context& ctx) {
  const Tree& t = ctx.tree();
  const ChipConfig c = ctx.config();
  const auto report = is_t_dilated_dp(t, c, 1);
  const auto search =
      is_self_reachable_by_search(t, c, ctx.rc().force ? kForcedStateCap : kDefaultStateCap);
  const bool known = search.status != SearchStatus::Unknown;
  const bool agree = known && report.ok == (search.status == SearchStatus::SelfReachable);
  CommandOutput out;
  if (known && !agree) out.exit_code = kExitViolation;
  const Format f = ctx.format(Format::Json, {Format::Json, Format::Text});
  if (f == Format::Json) {
    Json j;
    j["command"] = "check";
    j["tree"] = tree_to_json(t);
    j["config"] = config_to_json(c);
    j["self_reachable"] = report.ok;
    Json crit{{"self_reachable", report.ok}, {"min_slack", report.min_slack}};
    crit["violating_subtree"] = report.witness ? mask_to_json(*report.witness) : Json(nullptr);
    j["criterion"] = crit;
    Json s{{"status", to_string(search.status)}};
    s["firing_witness"] = search.witness ? Json(sequence_to_string(*search.witness)) : Json(nullptr);
    s["states_explored"] = search.states_explored;
    j["search"] = s;
    j["agreement"] = known ? Json(agree ? "agree" : "disagree") : Json("unknown");
    out.text = dump(j);
  } else {
    std::string s = "self-reachable: " + std::string(report.ok ? "yes" : "no") + "\n";
    s += "min slack: " + std::to_string(report.min_slack) + "\n";
    if (report.witness) {
      s += "violating subtree: ";
      bool first = true;
      for (Vertex v : report.witness->members()) {
        s += (first ? "" : ",") + std::to_string(v + 1);
        first = false;
      }
      s += "\n";
    }
    s += "search: " + std::string(to_string(search.status)) + " (" +
         std::to_string(search.states_explored) + " states)\n";
    if (search.witness) s += "firing witness: " + sequence_to_string(*search.witness) + "\n";
    s += "agreement: " + std::string(known ? (agree ? "agree" : "disagree") : "unknown") + "\n";
    out.text = s;
  }
  return out;
}

inline CommandOutput cmd_enumerate(Context& ctx) {
  const Tree& t = ctx.tree();
  const long long l = ctx.l();
  const int level = ctx.rc().t.value_or(1);
  if (level < 1) throw ParseError("--t must be at least 1");
  auto configs = level == 1 ? enumerate_src(t, l, ctx.enumeration_guard())
                            : enumerate_dilate_lattice_points(t, l, level, ctx.enumeration_guard());
  const Format f = ctx.format(Format::Json, {Format::Json, Format::Csv, Format::Text});
  CommandOutput out;
  if (f == Format::Json) {
    Json list = Json::array();
    for (const auto& c : configs) list.push_back(config_to_json(c));
    Json j{{"command", "enumerate"}, {"tree", tree_to_json(t)}, {"l", l}, {"t", level},
           {"count", configs.size()}, {"configs", list}};
    out.text = dump(j);
  } else if (f == Format::Csv) {
    out.text = csv_header(t.size());
    for (const auto& c : configs) out.text += to_string(c) + "\n";
  } else {
    out.text = std::to_string(configs.size()) + " configurations\n";
    for (const auto& c : configs) out.text += to_string(c) + "\n";
  }
  return out;
}

inline CommandOutput cmd_count(Context& ctx) {
  const RunConfig& rc = ctx.rc();
  const int l_max = rc.l_max.value_or(12);
  const int n_max = rc.n_max.value_or(10);
  if (l_max < 0 || n_max < 1) throw ParseError("count needs --l-max >= 0 and --n-max >= 1");
  if (!rc.force && (n_max > kCountNGuard || l_max > kCountLGuard)) {
    throw CapExceeded("count is guarded at n <= " + std::to_string(kCountNGuard) + ", l <= " +
                      std::to_string(kCountLGuard) + "; pass --force");
  }
  const auto table = count_recurrence(l_max, n_max);
  const Format f = ctx.format(Format::Csv, {Format::Json, Format::Csv, Format::Text});
  CommandOutput out;
  if (f == Format::Csv) {
    out.text = table.to_csv();
  } else if (f == Format::Json) {
    Json rows = Json::array();
    for (int n = 1; n <= n_max; ++n) {
      for (int l = 0; l <= l_max; ++l) {
        rows.push_back({{"l", l}, {"n", n}, {"count", big_to_json(table(l, n))}});
      }
    }
    out.text = dump(Json{{"command", "count"}, {"l_max", l_max}, {"n_max", n_max}, {"rows", rows}});
  } else {
    for (int n = 1; n <= n_max; ++n) {
      for (int l = 0; l <= l_max; ++l) {
        out.text += "C(" + std::to_string(l) + "," + std::to_string(n) + ") = " +
                    table(l, n).str() + "\n";
      }
    }
  }
  return out;
}

inline CommandOutput cmd_vertices(Context& ctx) {
  const Tree& t = ctx.tree();
  const long long l = ctx.l();
  const auto ord = leaf_elim_order(t);
  const auto vertices = enumerate_vertices(t, l);
  auto about = [&](const ChipConfig& v) -> std::optional<Vertex> {
    if (l < t.size()) return std::nullopt;
    auto cert = near_minimal_about(t, ord, v);
    if (!cert) throw TheoremViolation("constructed vertex " + to_string(v) + " is not near-minimal");
    return cert->about;
  };
  const Format f = ctx.format(Format::Json, {Format::Json, Format::Csv, Format::Text});
  CommandOutput out;
  if (f == Format::Json) {
    Json list = Json::array();
    for (const auto& v : vertices) {
      auto a = about(v);
      list.push_back({{"config", config_to_json(v)}, {"about", a ? Json(*a + 1) : Json(nullptr)}});
    }
    out.text = dump(Json{{"command", "vertices"}, {"tree", tree_to_json(t)}, {"l", l},
                         {"count", vertices.size()}, {"vertices", list}});
  } else if (f == Format::Csv) {
    std::string header = csv_header(t.size());
    header.pop_back();
    out.text = header + ",about\n";
    for (const auto& v : vertices) {
      auto a = about(v);
      out.text += to_string(v) + "," + (a ? std::to_string(*a + 1) : "") + "\n";
    }
  } else {
    out.text = std::to_string(vertices.size()) + " vertices\n";
    for (const auto& v : vertices) {
      auto a = about(v);
      out.text += to_string(v) + (a ? "  about " + std::to_string(*a + 1) : "") + "\n";
    }
  }
  return out;
}

inline CommandOutput cmd_decompose(Context& ctx) {
  const Tree& t = ctx.tree();
  const auto combo = decompose_into_vertices(t, ctx.config());
  const Format f = ctx.format(Format::Json, {Format::Json, Format::Text});
  CommandOutput out;
  if (f == Format::Json) {
    out.text = dump(combination_to_json(combo));
  } else {
    out.text = to_string(combo.point) + " =\n";
    for (const auto& term : combo.terms) {
      out.text += "  " + to_fraction_string(term.weight) + " * (" + to_string(term.config) + ")\n";
    }
  }
  return out;
}

inline CommandOutput cmd_idp(Context& ctx) {
  const Tree& t = ctx.tree();
  const ChipConfig w = ctx.config();
  if (!ctx.rc().t) throw ParseError("idp needs --t");
  const int level = *ctx.rc().t;
  if (level < 1) throw ParseError("--t must be at least 1");
  long long l;
  if (ctx.rc().l) {
    l = ctx.l();
  } else {
    if (w.total() % level != 0) {
      throw ParseError("chip total " + std::to_string(w.total()) + " is not divisible by t");
    }
    l = w.total() / level;
  }
  const auto d = idp_decompose(t, w, l, level);
  const Format f = ctx.format(Format::Json, {Format::Json, Format::Text});
  CommandOutput out;
  if (f == Format::Json) {
    out.text = dump(idp_to_json(d));
  } else {
    out.text = to_string(w) + " =\n";
    for (const auto& p : d.parts) out.text += "  (" + to_string(p) + ")\n";
  }
  return out;
}

inline CommandOutput cmd_cubemap(Context& ctx) {
  const Tree& t = ctx.tree();
  const int n = t.size();
  const auto m = cube_map(t);
  const BigInt det = m.determinant();
  bool onto = det == 1;
  std::set<std::vector<long long>> image;
  for (const auto& s : enumerate_src(t, n - 1, ctx.enumeration_guard())) {
    auto y = m.apply(s.chips());
    bool cube = y[n - 1] == 0;
    for (int i = 0; i + 1 < n; ++i) cube = cube && (y[i] == 0 || y[i] == 1);
    onto = onto && cube;
    image.insert(std::move(y));
  }
  onto = onto && n - 1 < 63 && image.size() == (std::size_t{1} << (n - 1));
  CommandOutput out;
  if (!onto) out.exit_code = kExitViolation;
  const Format f = ctx.format(Format::Json, {Format::Json, Format::Text});
  if (f == Format::Json) {
    Json j = cube_map_to_json(m);
    j["det"] = big_to_json(det);
    j["cube_image"] = onto;
    out.text = dump(j);
  } else {
    out.text = "det " + det.str() + "\n";
    for (std::size_t i = 0; i < m.U.size(); ++i) {
      for (std::size_t j = 0; j < m.U[i].size(); ++j) {
        out.text += (j ? " " : "") + std::to_string(m.U[i][j]);
      }
      out.text += " | " + std::to_string(m.b[i]) + "\n";
    }
    out.text += std::string("image is the unit cube: ") + (onto ? "yes" : "no") + "\n";
  }
  return out;
}

inline CommandOutput cmd_verify(Context& ctx) {
  const RunConfig& rc = ctx.rc();
  SweepBounds b;
  b.n_max = rc.n_max.value_or(6);
  b.t_max = rc.t_max.value_or(3);
  b.l_max = rc.l_max;
  b.jobs = rc.jobs;
  if (b.n_max < 1 || b.t_max < 1) throw ParseError("verify needs --n-max >= 1 and --t-max >= 1");
  if (b.n_max > kVerifyNGuard && !rc.force) {
    throw CapExceeded("verify is guarded at n <= " + std::to_string(kVerifyNGuard) +
                      "; pass --force");
  }
  const auto results = verify_all(b);
  bool all = true;
  for (const auto& r : results) all = all && r.passed;
  CommandOutput out;
  out.exit_code = all ? kExitOk : kExitViolation;
  const Format f = ctx.format(Format::Json, {Format::Json, Format::Csv, Format::Text});
  if (f == Format::Json) {
    Json suites = Json::array();
    for (const auto& r : results) {
      suites.push_back({{"name", r.name},
                        {"claim", r.claim},
                        {"passed", r.passed},
                        {"checked", r.checked},
                        {"counterexample", r.passed ? Json(nullptr) : Json(r.counterexample)}});
    }
    Json bounds{{"n_max", b.n_max}, {"t_max", b.t_max}};
    bounds["l_max"] = b.l_max ? Json(*b.l_max) : Json("n+3");
    out.text = dump(Json{{"command", "verify"}, {"bounds", bounds}, {"passed", all},
                         {"suites", suites}});
  } else if (f == Format::Csv) {
    out.text = "suite,passed,checked,counterexample\n";
    for (const auto& r : results) {
      std::string ce = r.counterexample;
      for (char& ch : ce) {
        if (ch == '"') ch = '\'';
      }
      out.text += r.name + "," + (r.passed ? "true" : "false") + "," + std::to_string(r.checked) +
                  ",\"" + ce + "\"\n";
    }
  } else {
    for (const auto& r : results) {
      out.text += (r.passed ? "PASS " : "FAIL ") + r.name + " (" + std::to_string(r.checked) +
                  " checked) " + r.claim + "\n";
      if (!r.passed) out.text += "  counterexample: " + r.counterexample + "\n";
    }
    out.text += all ? "all suites passed\n" : "some suites failed\n";
  }
  return out;
}

}  // namespace detail

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"check",     "enumerate", "count", "vertices",
                                              "decompose", "idp",       "cubemap", "verify"};
  return names;
}

/// Runs one command. Library errors map to exit codes: parse, precondition
/// and guard errors to 1, theorem violations to 2. The message goes to err.
inline CommandOutput run_command(const RunConfig& rc, std::string& err) {
  detail::Context ctx(rc);
  try {
    if (rc.command == "check") return detail::cmd_check(ctx);
    if (rc.command == "enumerate") return detail::cmd_enumerate(ctx);
    if (rc.command == "count") return detail::cmd_count(ctx);
    if (rc.command == "vertices") return detail::cmd_vertices(ctx);
    if (rc.command == "decompose") return detail::cmd_decompose(ctx);
    if (rc.command == "idp") return detail::cmd_idp(ctx);
    if (rc.command == "cubemap") return detail::cmd_cubemap(ctx);
    if (rc.command == "verify") return detail::cmd_verify(ctx);
    err = "unknown command '" + rc.command + "'";
    return {kExitUsage, {}};
  } catch (const TheoremViolation& e) {
    err = std::string("theorem violation: ") + e.what();
    return {kExitViolation, {}};
  } catch (const CapExceeded& e) {
    err = std::string("guard exceeded: ") + e.what();
    return {kExitUsage, {}};
  } catch (const Error& e) {
    err = e.what();
    return {kExitUsage, {}};
  }
}

// ---------------------------------------------------------------------------
// Content-addressed result cache

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

/// Key over the command, the canonical tree text and every parameter that
/// affects output. Job count is excluded since output does not depend on it.
inline std::string cache_key(const RunConfig& rc, const std::optional<Tree>& tree) {
  std::string material = "chipfire-cache-v1\n" + rc.command + "\n";
  material += tree ? to_string(*tree) : std::string("-\n");
  auto opt = [](const auto& o) { return o ? std::to_string(*o) : std::string("-"); };
  material += "config=" + (rc.config ? to_string(parse_config(*rc.config)) : std::string("-"));
  material += "\nl=" + opt(rc.l) + "\nt=" + opt(rc.t) + "\nn_max=" + opt(rc.n_max) +
              "\nl_max=" + opt(rc.l_max) + "\nt_max=" + opt(rc.t_max);
  material += "\nformat=" + std::string(rc.format ? to_string(*rc.format) : "default");
  material += "\nforce=" + std::string(rc.force ? "1" : "0") + "\n";
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a(material)));
  return hex;
}

/// CHIPFIRE_CACHE wins over --cache; empty means no caching.
inline std::string resolve_cache_dir(const std::string& flag) {
  if (const char* env = std::getenv("CHIPFIRE_CACHE"); env && *env) return env;
  return flag;
}

}  // namespace chipfire::cli
