// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "carleman/bang.hpp"
#include "carleman/comb.hpp"
#include "carleman/criteria.hpp"
#include "carleman/transforms.hpp"
#include "carleman/verify_suite.hpp"

using namespace carleman;

namespace {

struct Result {
  bool pass = false;
  std::string detail;
};

Result verdict_outcome(const Verdict& v, const std::string& what) {
  std::string d = what + ": " + to_string(v.outcome);
  if (!v.holds()) d += " " + witness_text(v);
  return {v.holds(), d};
}

Result ac1() {
  auto t0 = std::chrono::steady_clock::now();
  for (unsigned long k = 1; k <= 6; ++k) {
    auto series = log_power_coefficients(k, 18);
    for (unsigned long n = k; n <= 18; ++n) {
      if (series.coefficient(n) != composition_sum_oracle(k, n)) {
        return {false, "mismatch at k=" + std::to_string(k) + ", n=" + std::to_string(n)};
      }
    }
  }
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char buf[96];
  std::snprintf(buf, sizeof buf, "exact equality for 1<=k<=6, k<=n<=18 in %.3f s (limit 60 s)", s);
  return {s < 60, buf};
}

Result ac2() { return verdict_outcome(lemma1_check(40, 40), "c_{k,n} <= (2e)^n k!/n^k, 1<=k<=n<=40"); }

Result ac3() {
  return verdict_outcome(lemma2_check({2, 3, 5}, 25, {Rational(1, 4), Rational(1, 2), Rational(1), Rational(2)}),
                         "alpha bound, p in {2,3,5}, n<=25, x in {1/4,1/2,1,2}");
}

Result ac4() { return verdict_outcome(stirling_sweep({2, 3, 5}, 60), "1/(pn-k)! <= e^(pn)/n^(pn-k), n<=60, k<pn"); }

Result ac5() {
  auto seq = WeightSequence::iterated_log(2);
  BangFunction cosine = BangFunction::build(seq);
  BangOptions o;
  o.oscillator = Oscillator::cp;
  o.p = 3;
  BangFunction cp3 = BangFunction::build(seq, o);
  for (std::size_t n = 0; n <= 10; ++n) {
    Verdict v = bang_lower_bound_certify(cosine, n);
    if (!v.holds()) return verdict_outcome(v, "cosine |F^(2n)(0)| >= M'_2n at n=" + std::to_string(n));
  }
  for (std::size_t n = 0; n <= 6; ++n) {
    Verdict v = bang_lower_bound_certify(cp3, n);
    if (!v.holds()) return verdict_outcome(v, "C_3 |F^(3n)(0)| >= M'_3n at n=" + std::to_string(n));
  }
  Rational cap = ipow(Rational(2), -64);
  if (cosine.relative_tail(20) > cap) return {false, "cosine tail at order 20 above 2^-64"};
  if (cp3.relative_tail(18) > cap) return {false, "C_3 tail at order 18 above 2^-64"};
  if (!cosine.tail_global() || !cp3.tail_global()) return {false, "tail bound not backed by global log-convexity"};
  return {true, "cosine n<=10 and C_3 n<=6 certified; relative tails 2^" +
                    std::to_string(20 - static_cast<long>(cosine.terms()) + 1) + " and 2^" +
                    std::to_string(18 - static_cast<long>(cp3.terms()) + 1)};
}

Result ac6() {
  auto seq = WeightSequence::iterated_log(2);
  DifferentiableModel m = BangModel{std::make_shared<const BangFunction>(BangFunction::build(seq))};
  return verdict_outcome(envelope_check(m, seq, bang_envelope(), 12, 101),
                         "|F^(n)| <= 2^(n+1) M'_n, 101 points on [-1,1], n<=12");
}

Result ac7() {
  Verdict b = cp_bound_check(5, 51);
  if (!b.holds()) return verdict_outcome(b, "|C_p^(n)| <= e");
  return verdict_outcome(cp_periodicity_check(5, 51), "|C_p^(n)| <= e for p<=5, n<=4p; C_p^(p) = C_p within 2^-64");
}

Result ac8() {
  std::mt19937_64 rng(20240601);
  auto draw = [&](long lo, long hi) { return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); };
  for (int c = 0; c < 200; ++c) {
    long degree = draw(0, 8);
    std::vector<Rational> coeffs;
    for (long i = 0; i <= degree; ++i) coeffs.push_back(fraction(Integer(draw(-20, 20)), Integer(draw(1, 9))));
    Polynomial f(coeffs);
    unsigned long p = static_cast<unsigned long>(draw(2, 3));
    long den = draw(2, 12);
    Rational xi = fraction(Integer(draw(1, den - 1)), Integer(den));
    Rational x = ipow(xi, static_cast<long>(p));
    auto n = static_cast<std::size_t>(draw(1, 8));
    Polynomial F = f.substitute_power(p);
    Rational got = taylor_remainder_reconstruct(f.jet(Rational(0), n - 1), F.jet(xi, n), p, x, xi);
    Rational want = f.derivative(n)(x);
    if (got != want) {
      return {false, "case " + std::to_string(c) + ": reconstructed " + to_string(got) + " vs " + to_string(want)};
    }
  }
  return {true, "200 random polynomials, degree<=8, p in {2,3}, xi in (0,1), n<=8: exact equality"};
}

Result ac9() {
  struct Claim {
    const char* seq;
    carleman::Outcome want;
  };
  std::vector<Claim> claims = {{"iterated_log:1", carleman::Outcome::holds},
                               {"iterated_log:2", carleman::Outcome::holds},
                               {"iterated_log:3", carleman::Outcome::holds},
                               {"powersub:2:iterated_log:2", carleman::Outcome::holds},
                               {"powersub:3:iterated_log:2", carleman::Outcome::holds},
                               {"powersub:5:iterated_log:3", carleman::Outcome::holds},
                               {"powersub:2:iterated_log:1", carleman::Outcome::fails},
                               {"powersub:3:iterated_log:1", carleman::Outcome::fails},
                               {"gevrey:1", carleman::Outcome::fails},
                               {"analytic", carleman::Outcome::holds}};
  for (const auto& c : claims) {
    Verdict v = quasianalytic_verdict(parse_sequence(c.seq));
    if (v.outcome != c.want) return {false, std::string(c.seq) + " gave " + to_string(v.outcome)};
  }
  return {true, std::to_string(claims.size()) + " family verdicts match"};
}

Result ac10() {
  return verdict_outcome(checks::transform_laws(20240601, 1000, 32, default_precision_bits()),
                         "PowerSub identity/composition, regularization minorant/log-convex/idempotent, 1000 tables on [0,32]");
}

Result ac11() {
  auto seq = WeightSequence::iterated_log(2);
  for (unsigned long p : {2UL, 3UL}) {
    BangOptions o;
    o.p = p;
    o.oscillator = p == 2 ? Oscillator::cosine : Oscillator::cp;
    BangFunction B = BangFunction::build(seq, o);
    for (std::size_t n = 0; n <= 8; ++n) {
      Verdict v = induced_f_derivative(B, n).lower_bound;
      if (!v.holds()) return verdict_outcome(v, "p=" + std::to_string(p) + ", n=" + std::to_string(n));
    }
  }
  return {true, "n! M'_pn/(pn)! <= |f^(n)(0)| for n<=8, p in {2,3}"};
}

}  // namespace

int main() {
  std::vector<std::pair<const char*, std::function<Result()>>> criteria = {
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4},   {"AC5", ac5},   {"AC6", ac6},
      {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10}, {"AC11", ac11},
  };
  int failures = 0;
  for (const auto& [id, fn] : criteria) {
    Result o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
