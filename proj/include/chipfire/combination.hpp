#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "chipfire/chip.hpp"
#include "chipfire/rational.hpp"

namespace chipfire {

struct WeightedConfig {
  Rational weight;
  ChipConfig config;

  friend bool operator==(const WeightedConfig&, const WeightedConfig&) = default;
};

/// point = sum of weight * config, weights nonnegative and summing to one.
struct ConvexCombination {
  ChipConfig point;
  std::vector<WeightedConfig> terms;

  /// Merges equal configurations (adding weights), drops zero weights and
  /// sorts terms lexicographically by configuration.
  void canonicalize() {
    std::sort(terms.begin(), terms.end(),
              [](const WeightedConfig& a, const WeightedConfig& b) { return a.config < b.config; });
    std::vector<WeightedConfig> merged;
    for (auto& term : terms) {
      if (!merged.empty() && merged.back().config == term.config) {
        merged.back().weight += term.weight;
      } else {
        merged.push_back(std::move(term));
      }
    }
    std::erase_if(merged, [](const WeightedConfig& w) { return w.weight == 0; });
    terms = std::move(merged);
  }

  /// Empty string when valid, otherwise a description of the first failure.
  std::string validate() const {
    Rational total = 0;
    std::vector<Rational> sum(point.size(), Rational(0));
    for (const auto& term : terms) {
      if (term.weight < 0) return "negative weight " + to_fraction_string(term.weight);
      if (term.config.size() != point.size()) return "term dimension mismatch";
      total += term.weight;
      for (int i = 0; i < point.size(); ++i) sum[i] += term.weight * term.config[i];
    }
    if (total != 1) return "weights sum to " + to_fraction_string(total);
    for (int i = 0; i < point.size(); ++i) {
      if (sum[i] != point[i]) {
        return "coordinate " + std::to_string(i + 1) + " reconstructs to " +
               to_fraction_string(sum[i]) + " instead of " + std::to_string(point[i]);
      }
    }
    return {};
  }
};

}  // namespace chipfire
