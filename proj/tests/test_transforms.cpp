#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "carleman/seqcore.hpp"
#include "carleman/transforms.hpp"

using namespace carleman;

namespace {

Rational exact_value(const WeightSequence& s, std::size_t n) { return value(s, n, Precision::exact()).exact(); }

// Greatest convex minorant of points (n, y_n) by brute force over all chords.
std::vector<double> brute_minorant(const std::vector<double>& y) {
  std::size_t N = y.size() - 1;
  std::vector<double> out(y);
  for (std::size_t n = 0; n <= N; ++n) {
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t j = n; j <= N; ++j) {
        if (i == j) continue;
        double t = static_cast<double>(n - i) / static_cast<double>(j - i);
        out[n] = std::min(out[n], (1 - t) * y[i] + t * y[j]);
      }
    }
  }
  return out;
}

std::vector<Rational> random_positive_table(std::mt19937_64& rng, std::size_t length) {
  std::vector<Rational> t{Rational(1)};
  for (std::size_t i = 1; i < length; ++i) {
    Rational q(static_cast<long>(rng() % 5000) + 1, static_cast<long>(rng() % 50) + 1);
    q.canonicalize();
    t.push_back(q);
  }
  return t;
}

}  // namespace

TEST(PowerSubstitution, Examples) {
  auto g = WeightSequence::gevrey(1);
  EXPECT_EQ(exact_value(power_substitution(g, 2), 3), Rational(720));
  EXPECT_EQ(exact_value(power_substitution(WeightSequence::iterated_log(2), 3), 0), Rational(1));
  auto il = WeightSequence::iterated_log(1);
  auto id = power_substitution(il, 1);
  for (std::size_t n = 0; n <= 20; ++n) EXPECT_TRUE(id.enclose(n, 128).overlaps(il.enclose(n, 128)));
}

TEST(PowerSubstitution, DerivedForm) {
  auto g = WeightSequence::gevrey(1);
  auto dv = [&](std::size_t n) { return derived_value(g, n, Precision::exact()).exact(); };
  auto dps = [&](unsigned long p, std::size_t n) { return derived_power_substitution(g, p, n, Precision::exact()).exact(); };
  for (std::size_t n = 0; n <= 6; ++n) EXPECT_EQ(dps(1, n), dv(n));
  for (unsigned long p = 1; p <= 4; ++p) EXPECT_EQ(dps(p, 1), dv(p));
  // n^{(p-1)n} at p = 2, n = 2 is 2^2 = 4.
  EXPECT_EQ(ipow(Integer(2), 2), Integer(4));
  EXPECT_EQ(dps(2, 2), dv(4) / Rational(4));
  EXPECT_EQ(dps(3, 0), Rational(1));
}

TEST(PowerSubstitution, CompositionMultipliesPowers) {
  auto s = WeightSequence::iterated_log(2);
  for (unsigned long p = 1; p <= 3; ++p) {
    for (unsigned long q = 1; q <= 3; ++q) {
      auto nested = power_substitution(power_substitution(s, p), q);
      auto flat = power_substitution(s, p * q);
      for (std::size_t n = 0; n <= 8; ++n) EXPECT_TRUE(nested.enclose(n, 192).overlaps(flat.enclose(n, 192)));
    }
  }
}

TEST(PowerSubstitution, KeepsLogConvexity) {
  for (unsigned long p = 2; p <= 4; ++p) {
    EXPECT_TRUE(is_log_convex(power_substitution(WeightSequence::iterated_log(1), p), Window{1, 20}).holds());
  }
}

TEST(Regularization, HullOfFourPoints) {
  auto s = WeightSequence::custom({Rational(1), Rational(8), Rational(2), Rational(64)});
  auto r = log_convex_regularization(s, Window{0, 3});
  EXPECT_EQ(exact_value(r, 0), Rational(1));
  EXPECT_EQ(exact_value(r, 2), Rational(2));
  EXPECT_EQ(exact_value(r, 3), Rational(64));
  EXPECT_THROW(value(r, 1, Precision::exact()), std::domain_error);
  Interval m1 = r.enclose(1, 256);
  EXPECT_TRUE((m1 * m1).contains(Rational(2)));
}

TEST(Regularization, FixesLogConvexInput) {
  auto g = WeightSequence::gevrey(1);
  auto r = log_convex_regularization(g, Window{0, 12});
  for (std::size_t n = 0; n <= 12; ++n) EXPECT_EQ(exact_value(r, n), exact_value(g, n));
}

TEST(Regularization, RejectsBadWindows) {
  auto g = WeightSequence::gevrey(1);
  EXPECT_THROW(log_convex_regularization(g, Window{1, 5}), std::invalid_argument);
  EXPECT_THROW(log_convex_regularization(g, Window{0, 1}), std::invalid_argument);
  EXPECT_THROW(log_convex_regularization(WeightSequence::custom({Rational(1), Rational(2), Rational(3)}), Window{0, 5}),
               std::out_of_range);
}

TEST(Regularization, MatchesBruteForceChordMinimum) {
  std::mt19937_64 rng(424242);
  for (int c = 0; c < 100; ++c) {
    auto table = random_positive_table(rng, 12);
    auto s = WeightSequence::custom(table);
    auto r = log_convex_regularization(s, Window{0, 11});
    std::vector<double> y;
    for (const auto& v : table) y.push_back(std::log(v.get_d()));
    auto expect = brute_minorant(y);
    for (std::size_t n = 0; n < table.size(); ++n) {
      EXPECT_NEAR(r.log_enclose(n, 128).to_double(), expect[n], 1e-9) << "case " << c << " n=" << n;
    }
  }
}

TEST(Regularization, IdempotentLogConvexMinorant) {
  std::mt19937_64 rng(99);
  for (int c = 0; c < 50; ++c) {
    auto s = WeightSequence::custom(random_positive_table(rng, 17));
    Window w{0, 16};
    auto r = log_convex_regularization(s, w);
    auto rr = log_convex_regularization(r, w);
    EXPECT_TRUE(is_log_convex(r, Window{1, 15}).holds());
    for (std::size_t n = 0; n <= 16; ++n) {
      auto cmp = compare(*r.exact_form(n), *s.exact_form(n));
      ASSERT_TRUE(cmp.has_value());
      EXPECT_LE(*cmp, 0);
      auto same = compare(*rr.exact_form(n), *r.exact_form(n));
      ASSERT_TRUE(same.has_value());
      EXPECT_EQ(*same, 0);
    }
  }
}
