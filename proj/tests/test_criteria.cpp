#include <gtest/gtest.h>

#include "carleman/criteria.hpp"
#include "carleman/transforms.hpp"

using namespace carleman;

namespace {

WeightSequence two_to_n_squared() {
  return WeightSequence::custom_rule("2^(n^2)", [](std::size_t n) {
    return PowerProduct::of_integer(Integer(2), Rational(static_cast<long>(n * n)));
  });
}

}  // namespace

TEST(DcPartialSum, AnalyticIsHarmonic) {
  Rational h(0);
  for (std::size_t N = 0; N <= 30; ++N) {
    h += Rational(1, static_cast<long>(N + 1));
    EXPECT_EQ(dc_partial_sum(WeightSequence::analytic(), N, Precision::exact()).exact(), h);
  }
}

TEST(DcPartialSum, GevreyOneIsBaselSumBelowTwo) {
  Rational s(0);
  for (std::size_t N = 0; N <= 40; ++N) {
    s += Rational(1, static_cast<long>((N + 1) * (N + 1)));
    Rational got = dc_partial_sum(WeightSequence::gevrey(1), N, Precision::exact()).exact();
    EXPECT_EQ(got, s);
    // 1 + sum 1/(n(n+1)) telescopes to 2 - 1/(N+1).
    EXPECT_LE(got, Rational(2) - Rational(1, static_cast<long>(N + 1)));
  }
}

TEST(DcPartialSum, IteratedLogPositiveIncreasing) {
  auto s = WeightSequence::iterated_log(2);
  Interval prev = dc_partial_sum(s, 0).interval();
  EXPECT_TRUE(prev.certainly_positive());
  for (std::size_t N = 1; N <= 64; ++N) {
    Interval cur = dc_partial_sum(s, N).interval();
    EXPECT_TRUE(certainly_lt(prev, cur)) << N;
    prev = cur;
  }
}

TEST(Quasianalytic, FamilyVerdicts) {
  struct Case {
    const char* seq;
    Outcome expected;
  };
  for (const auto& c : {Case{"analytic", Outcome::holds}, Case{"gevrey:1", Outcome::fails},
                        Case{"gevrey:0", Outcome::holds}, Case{"iterated_log:1", Outcome::holds},
                        Case{"iterated_log:2", Outcome::holds}, Case{"iterated_log:3", Outcome::holds},
                        Case{"powersub:2:iterated_log:1", Outcome::fails},
                        Case{"powersub:3:iterated_log:1", Outcome::fails},
                        Case{"powersub:2:iterated_log:2", Outcome::holds},
                        Case{"powersub:3:iterated_log:2", Outcome::holds},
                        Case{"powersub:2:iterated_log:3", Outcome::holds}}) {
    Verdict v = quasianalytic_verdict(parse_sequence(c.seq));
    EXPECT_EQ(v.outcome, c.expected) << c.seq;
    EXPECT_TRUE(v.global) << c.seq;
  }
}

TEST(Quasianalytic, CustomTableIsInconclusiveWithTrend) {
  Verdict v = quasianalytic_verdict(parse_sequence("custom:1,2,5,30,100"));
  EXPECT_EQ(v.outcome, Outcome::inconclusive);
  ASSERT_TRUE(v.trend.has_value());
  EXPECT_EQ(v.trend->direction, "increasing");
}

TEST(DerivationClosure, Examples) {
  auto a = derivation_closure_estimate(WeightSequence::analytic(), kDefaultWindow, Precision::exact());
  EXPECT_EQ(a.value.exact(), Rational(1));
  EXPECT_TRUE(a.verdict.holds());

  auto g = derivation_closure_estimate(WeightSequence::gevrey(1), kDefaultWindow, Precision::exact());
  EXPECT_EQ(g.value.exact(), Rational(2));
  EXPECT_EQ(g.argmax, 1);
  EXPECT_TRUE(g.verdict.holds());

  auto q = derivation_closure_estimate(two_to_n_squared(), kDefaultWindow, Precision::exact());
  EXPECT_EQ(q.value.exact(), Rational(8));
  EXPECT_EQ(q.argmax, 1);
  ASSERT_TRUE(q.verdict.trend.has_value());
  // Tail values 2^{2+1/n} settle near 4.
  EXPECT_NEAR(q.verdict.trend->growth_ratio, 1.0, 0.01);
}

TEST(DerivationClosure, IteratedLogOracle) {
  auto il = derivation_closure_estimate(WeightSequence::iterated_log(2));
  EXPECT_TRUE(il.verdict.holds());
  EXPECT_TRUE(il.value.interval().certainly_positive());
}

TEST(Inclusion, Examples) {
  auto same = inclusion_estimate(WeightSequence::gevrey(1), WeightSequence::gevrey(1), kDefaultWindow, Precision::exact());
  EXPECT_EQ(same.value.exact(), Rational(1));
  EXPECT_TRUE(same.verdict.holds());

  auto an = inclusion_estimate(WeightSequence::analytic(), WeightSequence::gevrey(1), kDefaultWindow, Precision::exact());
  EXPECT_EQ(an.value.exact(), Rational(1));
  EXPECT_EQ(an.argmax, 1);
  EXPECT_TRUE(an.verdict.holds());

  auto rev = inclusion_estimate(WeightSequence::gevrey(1), WeightSequence::analytic());
  EXPECT_EQ(rev.verdict.outcome, Outcome::inconclusive);
  ASSERT_TRUE(rev.verdict.trend.has_value());
  EXPECT_EQ(rev.verdict.trend->direction, "increasing");
  EXPECT_EQ(rev.argmax, kDefaultWindow.last);
}
