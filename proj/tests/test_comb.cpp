#include <gtest/gtest.h>

#include <random>

#include "carleman/comb.hpp"

using namespace carleman;

namespace {

// c[k][n] = sum_i (1/i) c[k-1][n-i], c[0][0] = 1.
std::vector<std::vector<Rational>> coefficient_table(std::size_t K, std::size_t N) {
  std::vector<std::vector<Rational>> c(K + 1, std::vector<Rational>(N + 1));
  c[0][0] = 1;
  for (std::size_t k = 1; k <= K; ++k) {
    for (std::size_t n = 1; n <= N; ++n) {
      for (std::size_t i = 1; i <= n; ++i) c[k][n] += c[k - 1][n - i] / Rational(static_cast<long>(i));
    }
  }
  return c;
}

// binom(1/p, i) from the falling product.
Rational binom_inverse_p(unsigned long p, unsigned long i) {
  Rational r(1), a(1, static_cast<long>(p));
  for (unsigned long j = 0; j < i; ++j) r *= (a - Rational(static_cast<long>(j))) / Rational(static_cast<long>(j + 1));
  return r;
}

std::vector<Rational> naive_mul(const std::vector<Rational>& a, const std::vector<Rational>& b, std::size_t N) {
  std::vector<Rational> out(N + 1);
  for (std::size_t i = 0; i <= N; ++i) {
    for (std::size_t j = 0; i + j <= N; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Polynomial random_poly(std::mt19937_64& rng, std::size_t degree) {
  std::vector<Rational> c;
  for (std::size_t i = 0; i <= degree; ++i) {
    Rational q(static_cast<long>(rng() % 21) - 10, static_cast<long>(rng() % 5) + 1);
    q.canonicalize();
    c.push_back(q);
  }
  return Polynomial(c);
}

}  // namespace

TEST(LogPowerCoefficients, Examples) {
  auto c1 = log_power_coefficients(1, 12);
  for (std::size_t n = 1; n <= 12; ++n) EXPECT_EQ(c1.coefficient(n), Rational(1, static_cast<long>(n)));
  auto c2 = log_power_coefficients(2, 4);
  EXPECT_EQ(c2.coefficient(2), Rational(1));
  EXPECT_EQ(c2.coefficient(3), Rational(1));
  EXPECT_EQ(c2.coefficient(4), Rational(11, 12));
  for (unsigned long k = 1; k <= 10; ++k) EXPECT_EQ(log_power_coefficients(k, k).coefficient(k), Rational(1));
  EXPECT_EQ(c2.valuation(), 2U);
}

TEST(LogPowerCoefficients, MatchRecurrenceAndCompositions) {
  auto table = coefficient_table(6, 18);
  for (unsigned long k = 1; k <= 6; ++k) {
    auto series = log_power_coefficients(k, 18);
    for (unsigned long n = k; n <= 18; ++n) {
      EXPECT_EQ(series.coefficient(n), table[k][n]) << k << "," << n;
      EXPECT_EQ(composition_sum_oracle(k, n), table[k][n]) << k << "," << n;
    }
  }
}

TEST(CompositionOracle, ExamplesAndGuard) {
  EXPECT_EQ(composition_sum_oracle(2, 4), Rational(11, 12));
  EXPECT_EQ(composition_sum_oracle(2, 3), Rational(1));
  EXPECT_EQ(composition_sum_oracle(1, 7), Rational(1, 7));
  EXPECT_THROW(composition_sum_oracle(2, kCompositionGuard + 1), std::invalid_argument);
}

TEST(CoefficientBound, ExamplesAndSweep) {
  EXPECT_TRUE(lemma1_check(1, 1).holds());
  EXPECT_TRUE(lemma1_check(2, 2).holds());
  Verdict v = lemma1_check(40, 40);
  EXPECT_TRUE(v.holds());
}

TEST(RootSeries, BinomialCoefficients) {
  for (unsigned long p : {2UL, 3UL, 5UL, 7UL}) {
    auto a = root_series_coefficients(p, 25);
    EXPECT_EQ(a.coefficient(0), Rational(0));
    EXPECT_EQ(a.coefficient(1), Rational(1, static_cast<long>(p)));
    for (unsigned long i = 1; i <= 25; ++i) {
      EXPECT_EQ(a.coefficient(i), binom_inverse_p(p, i)) << p << "," << i;
      EXPECT_EQ(root_coefficient_magnitude(p, i), abs(a.coefficient(i)));
      EXPECT_LE(abs(a.coefficient(i)), Rational(1, static_cast<long>(i)));
    }
  }
  EXPECT_EQ(root_series_coefficients(2, 2).coefficient(2), Rational(-1, 8));
}

TEST(AlphaB, MatchesNaivePowers) {
  for (unsigned long p : {2UL, 3UL}) {
    std::vector<Rational> a(13);
    for (std::size_t i = 1; i <= 12; ++i) a[i] = binom_inverse_p(p, i);
    std::vector<Rational> power(13);
    power[0] = 1;
    for (unsigned long k = 1; k <= 6; ++k) {
      power = naive_mul(power, a, 12);
      auto b = alpha_b_coefficients(p, k, 12);
      for (std::size_t j = 0; j <= 12; ++j) {
        EXPECT_EQ(b.coefficient(j), power[j] / Rational(factorial(k))) << p << "," << k << "," << j;
      }
    }
  }
  auto b1 = alpha_b_coefficients(2, 1, 6), a = root_series_coefficients(2, 6);
  for (std::size_t j = 0; j <= 6; ++j) EXPECT_EQ(b1.coefficient(j), a.coefficient(j));
  EXPECT_EQ(alpha_b_coefficients(2, 2, 2).coefficient(2), Rational(1, 8));
}

TEST(AlphaDiag, ExamplesAndScaling) {
  EXPECT_EQ(alpha_diag_derivative(2, 1, 1, Rational(1), Precision::exact()).exact(), Rational(1, 2));
  for (unsigned long n = 1; n <= 6; ++n) {
    for (unsigned long k = 1; k <= n; ++k) {
      Rational at1 = alpha_diag_derivative(2, k, n, Rational(1), Precision::exact()).exact();
      Rational at4 = alpha_diag_derivative(2, k, n, Rational(4), Precision::exact()).exact();
      EXPECT_EQ(at4, at1 * ipow(Rational(2), -static_cast<long>(2 * n - k)));
      Interval at3 = alpha_diag_derivative(3, k, n, Rational(3)).interval();
      Interval expect = Interval::exact(alpha_diag_derivative(3, k, n, Rational(1), Precision::exact()).exact(), 256) *
                        pow(root(Interval::from_long(3, 256), 3), -static_cast<long>(3 * n - k));
      EXPECT_TRUE(at3.overlaps(expect));
    }
  }
  EXPECT_EQ(alpha_diag_derivative(2, 3, 2, Rational(1), Precision::exact()).exact(), Rational(0));
}

TEST(AlphaBound, ExamplesAndSweep) {
  EXPECT_TRUE(lemma2_check({2}, 1, {Rational(1)}).holds());
  EXPECT_TRUE(lemma2_check({2, 3, 5}, 25, {Rational(1, 4), Rational(1, 2), Rational(1), Rational(2)}).holds());
  EXPECT_TRUE(b_bound_check({2, 3, 5}, 30).holds());
}

TEST(Stirling, ExamplesAndSweep) {
  EXPECT_TRUE(stirling_ineq_check(2, 1, 1).holds());
  EXPECT_TRUE(stirling_ineq_check(2, 1, 0).holds());
  EXPECT_TRUE(stirling_sweep({2, 3, 5}, 60).holds());
}

TEST(FaaDiBruno, IdentityAndChainRule) {
  std::mt19937_64 rng(5);
  Polynomial f = random_poly(rng, 6);
  Rational x(1, 3);
  Polynomial id = Polynomial::monomial(1);
  for (std::size_t n = 1; n <= 6; ++n) {
    EXPECT_EQ(composite_derivative(f.jet(id(x), n), id.jet(x, n), n), f.derivative(n)(x));
  }
  Polynomial g = random_poly(rng, 3);
  EXPECT_EQ(composite_derivative(f.jet(g(x), 1), g.jet(x, 1), 1), f.derivative()(g(x)) * g.derivative()(x));
}

TEST(FaaDiBruno, CubicsMatchExpandedComposition) {
  Polynomial f({Rational(1), Rational(-2), Rational(3, 2), Rational(5)});
  Polynomial g({Rational(0), Rational(1, 3), Rational(2), Rational(-1)});
  Polynomial fg = f.compose(g);
  Rational x(1, 2);
  for (std::size_t n = 1; n <= 9; ++n) {
    EXPECT_EQ(composite_derivative(f.jet(g(x), n), g.jet(x, n), n), fg.derivative(n)(x)) << n;
  }
}

TEST(Remainder, DegreeBelowOrderGivesZero) {
  Polynomial f({Rational(2), Rational(-1), Rational(1, 3)});
  Rational xi(1, 2), x = xi * xi;
  Polynomial F = f.substitute_power(2);
  for (std::size_t n = 3; n <= 6; ++n) {
    EXPECT_EQ(taylor_remainder_reconstruct(f.jet(Rational(0), n - 1), F.jet(xi, n), 2, x, xi), Rational(0));
  }
}

TEST(Remainder, MonomialGivesFactorial) {
  Rational xi(1, 2), x(1, 4);
  for (std::size_t n = 1; n <= 8; ++n) {
    Polynomial f = Polynomial::monomial(n);
    Polynomial F = f.substitute_power(2);
    EXPECT_EQ(taylor_remainder_reconstruct(f.jet(Rational(0), n - 1), F.jet(xi, n), 2, x, xi), Rational(factorial(n)));
  }
}

TEST(Remainder, CubicWithCubeRoot) {
  Polynomial f({Rational(1), Rational(2), Rational(-3), Rational(7, 2)});
  Rational xi(2, 3), x = ipow(xi, 3);
  Polynomial F = f.substitute_power(3);
  for (std::size_t n = 1; n <= 5; ++n) {
    EXPECT_EQ(taylor_remainder_reconstruct(f.jet(Rational(0), n - 1), F.jet(xi, n), 3, x, xi), f.derivative(n)(x)) << n;
  }
}

TEST(Remainder, RejectsInconsistentInput) {
  Polynomial f = Polynomial::monomial(2);
  auto F = f.substitute_power(2).jet(Rational(1, 2), 2);
  EXPECT_THROW(taylor_remainder_reconstruct(f.jet(Rational(0), 1), F, 2, Rational(1, 3), Rational(1, 2)),
               std::invalid_argument);
  EXPECT_THROW(taylor_remainder_reconstruct(f.jet(Rational(0), 1), F, 1, Rational(1, 2), Rational(1, 2)),
               std::invalid_argument);
}
