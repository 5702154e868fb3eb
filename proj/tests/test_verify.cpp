#include <gtest/gtest.h>

#include "chipfire/verify.hpp"

using namespace chipfire;

namespace {

// Forgets the edge constraints: only subtrees other than single edges count.
bool skips_edges(const Tree& t, const LeafElimOrder&, const ChipConfig& c, int tlevel) {
  for (SubtreeMask m : enumerate_subtrees(t)) {
    if (m.size() == 2) continue;
    if (c.chips_on(m) < static_cast<long long>(tlevel) * (m.size() - 1)) return false;
  }
  return true;
}

SweepBounds small(int n_max) {
  SweepBounds b;
  b.n_max = n_max;
  b.t_max = 2;
  b.l_offset = 2;
  return b;
}

}  // namespace

TEST(Verify, AllSuitesPassOnSmallBounds) {
  for (const auto& r : verify_all(small(4))) {
    EXPECT_TRUE(r.passed) << r.name << ": " << r.counterexample;
    EXPECT_GT(r.checked, 0u) << r.name;
  }
}

TEST(Verify, GoldenSuitePasses) {
  auto r = suite_golden();
  EXPECT_TRUE(r.passed) << r.counterexample;
}

TEST(Verify, BrokenCriterionIsCaught) {
  SweepBounds b = small(4);
  b.dilated = skips_edges;
  auto dp = suite_dp_vs_naive(b);
  EXPECT_FALSE(dp.passed);
  EXPECT_FALSE(dp.counterexample.empty());
  auto search = suite_criterion_vs_search(b);
  EXPECT_FALSE(search.passed);
  EXPECT_NE(search.counterexample.find("criterion says yes"), std::string::npos)
      << search.counterexample;
}

TEST(Verify, CounterexampleIsTheFirstInSweepOrder) {
  SweepBounds b = small(5);
  b.dilated = skips_edges;
  b.jobs = 1;
  auto one = suite_criterion_vs_search(b);
  b.jobs = 3;
  auto three = suite_criterion_vs_search(b);
  EXPECT_EQ(one.counterexample, three.counterexample);
  EXPECT_EQ(one.checked, three.checked);
}

TEST(Verify, ResultsIndependentOfJobCount) {
  SweepBounds b = small(5);
  auto a = suite_counting(b);
  b.jobs = 3;
  auto c = suite_counting(b);
  EXPECT_TRUE(a.passed);
  EXPECT_EQ(a.checked, c.checked);
  EXPECT_EQ(suite_near_minimal(b).checked, suite_near_minimal(small(5)).checked);
}

TEST(Verify, ExceptionsBecomeCounterexamples) {
  SweepBounds b = small(3);
  b.dilated = [](const Tree& t, const LeafElimOrder&, const ChipConfig&, int) -> bool {
    if (t.size() == 3) throw PreconditionError("boom");
    return true;
  };
  b.n_min = 3;
  auto r = suite_dp_vs_naive(b);
  EXPECT_FALSE(r.passed);
  EXPECT_NE(r.counterexample.find("boom"), std::string::npos) << r.counterexample;
}
