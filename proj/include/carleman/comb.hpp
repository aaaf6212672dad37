#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "carleman/interval.hpp"
#include "carleman/rational.hpp"
#include "carleman/scalar.hpp"
#include "carleman/series.hpp"
#include "carleman/verdict.hpp"

namespace carleman {

// (sum_{i>=1} x^i / i)^k up to x^N; the coefficient of x^n is c_{k,n}.
inline TruncatedPowerSeries log_power_coefficients(unsigned long k, std::size_t N) {
  if (k < 1 || k > N) throw std::invalid_argument("log_power_coefficients needs 1 <= k <= N");
  std::vector<Rational> d(N + 1);
  for (std::size_t i = 1; i <= N; ++i) d[i] = Rational(1, static_cast<unsigned long>(i));
  return TruncatedPowerSeries(std::move(d)).pow(k);
}

inline constexpr unsigned long kCompositionGuard = 25;

namespace detail {

inline void sum_compositions(unsigned long parts_left, unsigned long remaining, const Rational& prod, Rational& acc) {
  if (parts_left == 1) {
    acc += prod / Rational(remaining);
    return;
  }
  for (unsigned long i = 1; i + (parts_left - 1) <= remaining; ++i) {
    sum_compositions(parts_left - 1, remaining - i, prod / Rational(i), acc);
  }
}

}  // namespace detail

// sum over compositions i_1 + ... + i_k = n of 1/(i_1 ... i_k), by enumeration.
inline Rational composition_sum_oracle(unsigned long k, unsigned long n) {
  if (k < 1 || k > n) throw std::invalid_argument("composition_sum_oracle needs 1 <= k <= n");
  if (n > kCompositionGuard) {
    throw std::invalid_argument("composition enumeration refused for n > " + std::to_string(kCompositionGuard));
  }
  Rational acc = 0;
  detail::sum_compositions(k, n, Rational(1), acc);
  return acc;
}

// Certifies  c_{k,n} <= (2e)^n k! / n^k  and  e^n > n^k / k!  for 1 <= k <= min(n, k_max),
// 1 <= n <= n_max. The exact left side is compared against a rational lower
// bound of the right side; a failure is reported only if it also exceeds the
// upper bound.
inline Verdict lemma1_check(unsigned long k_max, unsigned long n_max, unsigned bits = default_precision_bits()) {
  Window w{1, static_cast<long>(n_max)};
  if (k_max < 1 || n_max < 1) throw std::invalid_argument("lemma1_check needs k_max, n_max >= 1");
  std::optional<unsigned long> unresolved;
  for (unsigned long k = 1; k <= std::min(k_max, n_max); ++k) {
    TruncatedPowerSeries c = log_power_coefficients(k, n_max);
    Rational kfact(factorial(k));
    for (unsigned long n = k; n <= n_max; ++n) {
      Rational lhs = c.coefficient(n);
      Rational nk(ipow(Integer(n), k));
      auto coeff_ok = certify_le([&](unsigned) { return Interval::exact(lhs, bits); },
                                 [&](unsigned b) { return pow(e_interval(b) * Rational(2), n) * (kfact / nk); }, bits);
      auto power_ok = certify_le([&](unsigned b) { return Interval::exact(nk / kfact, b); },
                                 [&](unsigned b) { return pow(e_interval(b), n); }, bits);
      if (coeff_ok == false) {
        return Verdict::failing(w, Witness{{static_cast<long>(k), static_cast<long>(n)}, "c_{k,n} = " + to_string(lhs),
                                           "(2e)^n k!/n^k", "coefficient bound violated"});
      }
      if (power_ok == false) {
        return Verdict::failing(w, Witness{{static_cast<long>(k), static_cast<long>(n)}, "n^k/k! = " + to_string(nk / kfact),
                                           "e^n", "e^n > n^k/k! violated"});
      }
      if (!coeff_ok || !power_ok) unresolved = n;
    }
  }
  if (unresolved) return Verdict::inconclusive(w, std::nullopt, "unresolved at n=" + std::to_string(*unresolved));
  return Verdict::holding(w, "c_{k,n} <= (2e)^n k!/n^k and e^n > n^k/k! for 1 <= k <= min(n, " +
                                 std::to_string(k_max) + ")");
}

// Coefficients a_i of (1+u)^{1/p} - 1 = sum_{i>=1} binom(1/p, i) u^i up to u^N.
inline TruncatedPowerSeries root_series_coefficients(unsigned long p, std::size_t N) {
  if (p < 2) throw std::invalid_argument("root series needs p >= 2");
  if (N < 1) throw std::invalid_argument("root series needs N >= 1");
  std::vector<Rational> d(N + 1);
  Rational inv_p(1, p), c = 1;
  for (std::size_t i = 1; i <= N; ++i) {
    c *= (inv_p - Rational(static_cast<unsigned long>(i - 1))) / Rational(static_cast<unsigned long>(i));
    d[i] = c;
  }
  return TruncatedPowerSeries(std::move(d));
}

// (1/i!) (p-1)(2p-1)...((i-1)p-1) / p^i, the unsigned magnitude of a_i.
inline Rational root_coefficient_magnitude(unsigned long p, unsigned long i) {
  Integer num = 1;
  for (unsigned long j = 1; j < i; ++j) num *= j * p - 1;
  return fraction(num, factorial(i) * ipow(Integer(p), i));
}

// b_j = (1/k!) [u^j] (sum_i a_i u^i)^k.
inline TruncatedPowerSeries alpha_b_coefficients(unsigned long p, unsigned long k, std::size_t N) {
  if (k < 1) throw std::invalid_argument("alpha_b_coefficients needs k >= 1");
  return root_series_coefficients(p, N).pow(k).scaled(Rational(1) / Rational(factorial(k)));
}

namespace detail {

// x^{-(pn-k)/p}: exact when x is a perfect p-th power.
inline Scalar diagonal_scale(unsigned long p, unsigned long k, unsigned long n, const Rational& x, unsigned bits) {
  long e = -(static_cast<long>(p * n) - static_cast<long>(k));
  if (auto xi = exact_root(x, p)) return Scalar(ipow(*xi, e));
  return Scalar(carleman::pow(root(Interval::exact(x, bits + 16), p), e));
}

inline Scalar scale_by(const Rational& q, const Scalar& s, unsigned bits) {
  if (s.is_exact()) return Scalar(q * s.exact());
  return Scalar(q * s.enclose(bits));
}

}  // namespace detail

// alpha_k^{(n)}(x, x) = n! b_n x^{-(pn-k)/p} for alpha_k(X, x) = (X^{1/p} - x^{1/p})^k / k!.
inline Scalar alpha_diag_derivative(unsigned long p, unsigned long k, unsigned long n, const Rational& x,
                                    const Precision& prec = Precision::interval()) {
  if (p < 2 || k < 1 || n < 1) throw std::invalid_argument("alpha_diag_derivative needs p >= 2, k >= 1, n >= 1");
  if (x <= 0) throw std::domain_error("alpha_diag_derivative needs x > 0");
  Rational bn = n < k ? Rational(0) : alpha_b_coefficients(p, k, n).coefficient(n);
  Rational coeff = Rational(factorial(n)) * bn;
  Scalar s = detail::scale_by(coeff, detail::diagonal_scale(p, k, n, x, prec.bits), prec.bits);
  if (s.is_exact()) return render(s.exact(), prec);
  return render(s.interval(), prec);
}

// Certifies |alpha_k^{(n)}(x,x)| <= (2e)^n n^{n-k} x^{-(pn-k)/p} for p in p_set,
// 1 <= k <= n_max, 1 <= n <= n_max (n < k is the vanishing case) and x in x_grid.
inline Verdict lemma2_check(const std::vector<unsigned long>& p_set, unsigned long n_max,
                            const std::vector<Rational>& x_grid, unsigned bits = default_precision_bits()) {
  Window w{1, static_cast<long>(n_max)};
  for (const auto& x : x_grid) {
    if (x <= 0) throw std::domain_error("lemma2_check needs x > 0");
  }
  for (unsigned long p : p_set) {
    if (p < 2) throw std::invalid_argument("lemma2_check needs p >= 2");
    for (unsigned long k = 1; k <= n_max; ++k) {
      TruncatedPowerSeries b = alpha_b_coefficients(p, k, n_max);
      for (unsigned long n = 1; n <= n_max; ++n) {
        Rational lhs_coeff = Rational(factorial(n)) * abs(b.coefficient(n));
        Rational npow = ipow(Rational(Integer(n)), static_cast<long>(n) - static_cast<long>(k));
        for (const auto& x : x_grid) {
          auto ok = certify_le(
              [&](unsigned bb) { return detail::scale_by(lhs_coeff, detail::diagonal_scale(p, k, n, x, bb), bb).enclose(bb); },
              [&](unsigned bb) {
                return pow(e_interval(bb) * Rational(2), n) *
                       detail::scale_by(npow, detail::diagonal_scale(p, k, n, x, bb), bb).enclose(bb);
              },
              bits);
          if (!ok) {
            if (ok.has_value()) {
              return Verdict::failing(w, Witness{{static_cast<long>(p), static_cast<long>(k), static_cast<long>(n)},
                                                 "n!|b_n| x^{-(pn-k)/p} with n!|b_n| = " + to_string(lhs_coeff),
                                                 "(2e)^n n^{n-k} x^{-(pn-k)/p}", "x = " + to_string(x)});
            }
            return Verdict::inconclusive(w, std::nullopt, "unresolved at p=" + std::to_string(p) + ", k=" +
                                                              std::to_string(k) + ", n=" + std::to_string(n) +
                                                              ", x=" + to_string(x));
          }
        }
      }
    }
  }
  return Verdict::holding(w, "|alpha_k^(n)(x,x)| <= (2e)^n n^(n-k) x^(-(pn-k)/p) on the sweep");
}

// Certifies |b_n| <= (2e)^n / n^k for p in p_set and 1 <= k, n <= n_max.
inline Verdict b_bound_check(const std::vector<unsigned long>& p_set, unsigned long n_max,
                             unsigned bits = default_precision_bits()) {
  Window w{1, static_cast<long>(n_max)};
  for (unsigned long p : p_set) {
    for (unsigned long k = 1; k <= n_max; ++k) {
      TruncatedPowerSeries b = alpha_b_coefficients(p, k, n_max);
      for (unsigned long n = 1; n <= n_max; ++n) {
        Rational lhs = abs(b.coefficient(n));
        Rational nk(ipow(Integer(n), k));
        auto ok = certify_le([&](unsigned bb) { return Interval::exact(lhs, bb); },
                             [&](unsigned bb) { return pow(e_interval(bb) * Rational(2), n) / nk; }, bits);
        if (ok == false) {
          return Verdict::failing(w, Witness{{static_cast<long>(p), static_cast<long>(k), static_cast<long>(n)},
                                             "|b_n| = " + to_string(lhs), "(2e)^n/n^k", "b-coefficient bound violated"});
        }
        if (!ok) return Verdict::inconclusive(w, std::nullopt, "unresolved b-bound comparison");
      }
    }
  }
  return Verdict::holding(w, "|b_n| <= (2e)^n/n^k on the sweep");
}

// Certifies 1/(pn-k)! <= e^{pn}/n^{pn-k}, i.e. n^{pn-k}/(pn-k)! <= e^{pn}.
inline Verdict stirling_ineq_check(unsigned long p, unsigned long n, unsigned long k,
                                   unsigned bits = default_precision_bits()) {
  if (p < 2 || n < 1 || k >= p * n) throw std::invalid_argument("stirling_ineq_check needs p >= 2, n >= 1, k < pn");
  Window w{static_cast<long>(n), static_cast<long>(n)};
  unsigned long m = p * n - k;
  Rational lhs = fraction(ipow(Integer(n), m), factorial(m));
  auto ok = certify_le([&](unsigned b) { return Interval::exact(lhs, b); },
                       [&](unsigned b) { return exp(Interval::from_long(static_cast<long>(p * n), b)); }, bits);
  Witness wit{{static_cast<long>(p), static_cast<long>(n), static_cast<long>(k)},
              "n^{pn-k}/(pn-k)! = " + Scalar(Interval::exact(lhs, 128)).to_string(20), "e^{pn}", ""};
  if (!ok) {
    if (ok.has_value()) return Verdict::failing(w, wit, "1/(pn-k)! > e^{pn}/n^{pn-k}");
    return Verdict::inconclusive(w, std::nullopt, "unresolved at maximum precision");
  }
  return Verdict::holding(w, "1/(pn-k)! <= e^{pn}/n^{pn-k}");
}

inline Verdict stirling_sweep(const std::vector<unsigned long>& p_set, unsigned long n_max,
                              unsigned bits = default_precision_bits()) {
  Window w{1, static_cast<long>(n_max)};
  for (unsigned long p : p_set) {
    for (unsigned long n = 1; n <= n_max; ++n) {
      // One enclosure of e^{pn} serves every k; refinement only on a near-tie.
      Interval rhs = exp(Interval::from_long(static_cast<long>(p * n), bits));
      for (unsigned long k = 0; k < p * n; ++k) {
        unsigned long m = p * n - k;
        Rational lhs = fraction(ipow(Integer(n), m), factorial(m));
        if (certainly_le(lhs, rhs)) continue;
        Verdict v = stirling_ineq_check(p, n, k, bits * 2);
        if (!v.holds()) {
          v.window = w;
          return v;
        }
      }
    }
  }
  return Verdict::holding(w, "1/(pn-k)! <= e^{pn}/n^{pn-k} for all k < pn on the sweep");
}

// Weights w_k with (f o g)^{(n)}(x) = sum_{k=1}^{n} f^{(k)}(g(x)) w_k, where
// w_k = (1/k!) d^n/dX^n (g(X) - g(x))^k at X = x. Entry 0 is unused.
inline std::vector<Rational> faa_di_bruno_weights(const std::vector<Rational>& inner_jet, std::size_t n) {
  if (n < 1) throw std::invalid_argument("composite derivative needs n >= 1");
  if (inner_jet.size() < n + 1) throw std::invalid_argument("inner jet too short for order " + std::to_string(n));
  std::vector<Rational> shifted(n + 1);
  for (std::size_t j = 1; j <= n; ++j) shifted[j] = inner_jet[j] / Rational(factorial(j));
  TruncatedPowerSeries s(std::move(shifted)), power = TruncatedPowerSeries::one(n);
  Rational nfact(factorial(n));
  std::vector<Rational> w(n + 1);
  for (std::size_t k = 1; k <= n; ++k) {
    power = power * s;
    w[k] = nfact * power.coefficient(n) / Rational(factorial(k));
  }
  return w;
}

inline Rational composite_derivative(const std::vector<Rational>& outer_jet, const std::vector<Rational>& inner_jet,
                                     std::size_t n) {
  if (outer_jet.size() < n + 1) throw std::invalid_argument("outer jet too short for order " + std::to_string(n));
  auto w = faa_di_bruno_weights(inner_jet, n);
  Rational acc = 0;
  for (std::size_t k = 1; k <= n; ++k) acc += outer_jet[k] * w[k];
  return acc;
}

inline Interval composite_derivative(const std::vector<Interval>& outer_jet, const std::vector<Rational>& inner_jet,
                                     std::size_t n) {
  if (outer_jet.size() < n + 1) throw std::invalid_argument("outer jet too short for order " + std::to_string(n));
  auto w = faa_di_bruno_weights(inner_jet, n);
  Interval acc = Interval::from_long(0, outer_jet[0].precision());
  for (std::size_t k = 1; k <= n; ++k) acc += outer_jet[k] * w[k];
  return acc;
}

// Recovers f^{(n)}(x), n = f_jet_at_0.size(), from F(xi) = f(xi^p) through
//   f^{(n)}(x) = sum_{k=1}^{n} (F^{(k)}(xi) - P_n^{(k)}(xi)) alpha_k^{(n)}(x, x),
// with P_n(xi) = sum_{j<n} f^{(j)}(0) xi^{pj} / j! and x = xi^p.
inline Rational taylor_remainder_reconstruct(const std::vector<Rational>& f_jet_at_0,
                                             const std::vector<Rational>& F_jet_at_xi, unsigned long p,
                                             const Rational& x, const Rational& xi) {
  std::size_t n = f_jet_at_0.size();
  if (n < 1) throw std::invalid_argument("need at least one Taylor coefficient");
  if (F_jet_at_xi.size() < n + 1) throw std::invalid_argument("F jet too short for order " + std::to_string(n));
  if (p < 2) throw std::invalid_argument("reconstruction needs p >= 2");
  if (xi <= 0) throw std::domain_error("reconstruction needs xi > 0");
  if (ipow(xi, static_cast<long>(p)) != x) throw std::invalid_argument("inconsistent xi and x: xi^p != x");

  std::vector<Rational> pc(p * (n - 1) + 1);
  for (std::size_t j = 0; j < n; ++j) pc[j * p] = f_jet_at_0[j] / Rational(factorial(j));
  std::vector<Rational> P_jet = Polynomial(std::move(pc)).jet(xi, n);

  Rational nfact(factorial(n)), acc = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    Rational bn = alpha_b_coefficients(p, k, n).coefficient(n);
    if (bn == 0) continue;
    long e = -(static_cast<long>(p * n) - static_cast<long>(k));
    acc += (F_jet_at_xi[k] - P_jet[k]) * nfact * bn * ipow(xi, e);
  }
  return acc;
}

}  // namespace carleman
