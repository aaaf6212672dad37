#include <gtest/gtest.h>

#include <cmath>

#include "carleman/seqcore.hpp"
#include "carleman/transforms.hpp"

using namespace carleman;

namespace {

Rational exact_value(const WeightSequence& s, std::size_t n) { return value(s, n, Precision::exact()).exact(); }

// log M_n for M_n = (log^{(k)}(n0 + n))^{n0 + n} / (log^{(k)} n0)^{n0}, in long double.
long double iterated_log_log_value(unsigned k, unsigned long n0, std::size_t n) {
  auto lk = [k](long double x) {
    for (unsigned i = 0; i < k; ++i) x = std::log(x);
    return x;
  };
  long double a = static_cast<long double>(n0 + n), b = static_cast<long double>(n0);
  return a * std::log(lk(a)) - b * std::log(lk(b));
}

}  // namespace

TEST(Value, ClosedFormFamilies) {
  EXPECT_EQ(exact_value(WeightSequence::analytic(), 7), Rational(1));
  EXPECT_EQ(exact_value(WeightSequence::gevrey(1), 4), Rational(24));
  EXPECT_EQ(exact_value(WeightSequence::gevrey(2), 3), Rational(36));
  for (unsigned k = 1; k <= 3; ++k) EXPECT_EQ(exact_value(WeightSequence::iterated_log(k), 0), Rational(1));
}

TEST(Value, GevreyFractionalOrderIsSymbolic) {
  auto s = WeightSequence::gevrey(Rational(1, 2));
  EXPECT_THROW(value(s, 3, Precision::exact()), std::domain_error);
  EXPECT_EQ(exact_value(s, 1), Rational(1));
  Interval m4 = value(s, 4).interval();
  EXPECT_TRUE((m4 * m4).contains(Rational(24)));
}

TEST(Value, IteratedLogMatchesLongDoubleOracle) {
  for (unsigned k = 1; k <= 2; ++k) {
    auto s = WeightSequence::iterated_log(k);
    unsigned long n0 = smallest_integer_above_tower(k);
    for (std::size_t n = 0; n <= 40; n += 3) {
      double oracle = static_cast<double>(iterated_log_log_value(k, n0, n));
      double got = s.log_enclose(n, 256).to_double();
      EXPECT_NEAR(got, oracle, 1e-9 * std::max(1.0, std::abs(oracle))) << "k=" << k << " n=" << n;
    }
  }
}

TEST(Value, FloatAndIntervalModesAgree) {
  auto s = WeightSequence::iterated_log(2);
  for (std::size_t n = 0; n <= 20; ++n) {
    Scalar f = value(s, n, Precision::floating(113));
    Scalar i = value(s, n, Precision::interval(256));
    double rel = std::abs(f.to_double() - i.to_double()) / i.to_double();
    EXPECT_LT(rel, 1e-15);
  }
}

TEST(Tower, SmallestIntegersAboveETowers) {
  EXPECT_EQ(smallest_integer_above_tower(1), 3UL);
  EXPECT_EQ(smallest_integer_above_tower(2), 16UL);
  EXPECT_EQ(smallest_integer_above_tower(3), 3814280UL);
  EXPECT_THROW(smallest_integer_above_tower(4), RangeError);
}

TEST(Derived, ExamplesAndZeroIndex) {
  auto d = [](const WeightSequence& s, std::size_t n) { return derived_value(s, n, Precision::exact()).exact(); };
  EXPECT_EQ(d(WeightSequence::analytic(), 5), Rational(120));
  EXPECT_EQ(d(WeightSequence::gevrey(1), 3), Rational(36));
  EXPECT_EQ(d(WeightSequence::gevrey(3), 0), Rational(1));
  EXPECT_EQ(d(WeightSequence::custom({Rational(3), Rational(7)}), 0), Rational(1));
}

TEST(Ratio, AnalyticRatioIsKPlusOne) {
  for (std::size_t k = 0; k < 20; ++k) {
    Rational brute = derived_value(WeightSequence::analytic(), k + 1, Precision::exact()).exact() /
                     derived_value(WeightSequence::analytic(), k, Precision::exact()).exact();
    EXPECT_EQ(brute, Rational(static_cast<long>(k + 1)));
    EXPECT_EQ(ratio(WeightSequence::analytic(), k, Precision::exact()).exact(), brute);
  }
}

TEST(Ratio, ZeroIndexAndGevrey) {
  auto g = WeightSequence::gevrey(1);
  EXPECT_EQ(ratio(g, 0, Precision::exact()).exact(), exact_value(g, 1));
  EXPECT_EQ(ratio(g, 2, Precision::exact()).exact(), Rational(9));
  Interval il = ratio_enclose(WeightSequence::iterated_log(2), 0, 256);
  EXPECT_TRUE(il.overlaps(WeightSequence::iterated_log(2).enclose(1, 256)));
}

TEST(Increasing, Examples) {
  EXPECT_TRUE(is_increasing(WeightSequence::analytic()).holds());
  EXPECT_TRUE(is_increasing(WeightSequence::iterated_log(1)).holds());
  auto bad = WeightSequence::custom({Rational(1), Rational(2), Rational(3, 2), Rational(5)});
  Verdict v = is_increasing(bad, Window{0, 2});
  ASSERT_TRUE(v.fails());
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_EQ(v.witness->at, std::vector<long>{1});
}

TEST(LogConvex, Examples) {
  EXPECT_TRUE(is_log_convex(WeightSequence::gevrey(1)).holds());
  Verdict lin = is_log_convex(WeightSequence::custom({Rational(1), Rational(2), Rational(3), Rational(4)}), Window{1, 2});
  ASSERT_TRUE(lin.fails());
  EXPECT_EQ(lin.witness->at, std::vector<long>{1});
  for (unsigned k = 1; k <= 3; ++k) {
    Verdict v = is_log_convex(WeightSequence::iterated_log(k));
    EXPECT_TRUE(v.holds()) << k;
    EXPECT_TRUE(v.global);
  }
}

TEST(LogConvex, OffsetThreeForDepthTwoFailsAtStart) {
  auto s = WeightSequence::iterated_log(2, 3);
  Verdict v = is_log_convex(s, Window{1, 8});
  ASSERT_TRUE(v.fails());
  EXPECT_EQ(v.witness->at, std::vector<long>{1});
}

TEST(LogConvex, WindowMustStartAtOne) {
  EXPECT_THROW(is_log_convex(WeightSequence::analytic(), Window{0, 3}), std::invalid_argument);
}

TEST(LogConvex, BaseImpliesDerived) {
  for (Rational s : {Rational(0), Rational(1, 3), Rational(1), Rational(5, 2)}) {
    auto g = WeightSequence::gevrey(s);
    ASSERT_TRUE(is_log_convex(g, Window{1, 30}).holds());
    EXPECT_TRUE(is_log_convex(g, Window{1, 30}, Which::derived).holds());
  }
}

TEST(LogConvex, RatiosNondecreasingForLogConvexFamilies) {
  for (const char* text : {"iterated_log:1", "iterated_log:2", "gevrey:1/2", "analytic"}) {
    auto s = parse_sequence(text);
    for (std::size_t k = 0; k + 1 < 30; ++k) {
      EXPECT_TRUE(certainly_le(ratio_enclose(s, k, 256), ratio_enclose(s, k + 1, 256))) << text << " k=" << k;
    }
  }
}

TEST(Sequence, CustomTableIsNormalizedAndBounded) {
  auto s = WeightSequence::custom({Rational(2), Rational(4), Rational(10)});
  EXPECT_EQ(exact_value(s, 1), Rational(2));
  EXPECT_EQ(s.last_index(), std::optional<std::size_t>(2));
  EXPECT_THROW(value(s, 3), std::out_of_range);
  EXPECT_THROW(WeightSequence::custom({Rational(1), Rational(0)}), std::domain_error);
}

TEST(Sequence, ParseRoundTripsDescriptions) {
  for (const char* text : {"analytic", "gevrey:1", "iterated_log:2", "powersub:2:iterated_log:1", "custom:1,2,4"}) {
    auto s = parse_sequence(text);
    auto again = parse_sequence(s.describe());
    for (std::size_t n = 0; n <= 2; ++n) {
      EXPECT_TRUE(s.enclose(n, 128).overlaps(again.enclose(n, 128))) << text;
    }
  }
  EXPECT_THROW(parse_sequence("bogus"), std::invalid_argument);
  EXPECT_THROW(parse_sequence("iterated_log:0"), std::domain_error);
}
