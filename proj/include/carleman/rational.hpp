#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace carleman {

using Integer = mpz_class;
using Rational = mpq_class;

inline Integer factorial(unsigned long n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

inline Integer ipow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Rational ipow(const Rational& base, long e) {
  if (e < 0) {
    if (base == 0) throw std::domain_error("ipow: zero to a negative power");
    Rational inv = 1 / base;
    return ipow(inv, -e);
  }
  Rational r(ipow(base.get_num(), static_cast<unsigned long>(e)),
             ipow(base.get_den(), static_cast<unsigned long>(e)));
  r.canonicalize();
  return r;
}

// num/den in canonical form; the two-argument mpq_class constructor does not reduce.
inline Rational fraction(const Integer& num, const Integer& den) {
  if (den == 0) throw std::domain_error("fraction: zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Integer binomial(unsigned long n, unsigned long k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

// Exact p-th root of a nonnegative rational, when one exists.
inline std::optional<Rational> exact_root(const Rational& x, unsigned long p) {
  if (p == 0) throw std::domain_error("exact_root: p = 0");
  if (x < 0) return std::nullopt;
  Integer num, den;
  if (mpz_root(num.get_mpz_t(), x.get_num_mpz_t(), p) == 0) return std::nullopt;
  if (mpz_root(den.get_mpz_t(), x.get_den_mpz_t(), p) == 0) return std::nullopt;
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline bool is_integral(const Rational& x) { return x.get_den() == 1; }

inline Integer floor_of(const Rational& x) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

inline Integer lcm(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline std::size_t bit_size(const Rational& x) {
  return mpz_sizeinbase(x.get_num_mpz_t(), 2) + mpz_sizeinbase(x.get_den_mpz_t(), 2);
}

// Parses "7", "-3/4", "1.25" or "2.5e-3" into an exact rational.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  try {
    if (s.find('/') != std::string::npos) {
      Rational r(s);
      if (r.get_den() == 0) throw std::invalid_argument("zero denominator");
      r.canonicalize();
      return r;
    }
    std::size_t epos = s.find_first_of("eE");
    long exponent = 0;
    std::string mantissa = s;
    if (epos != std::string::npos) {
      std::size_t used = 0;
      exponent = std::stol(s.substr(epos + 1), &used);
      if (used != s.size() - epos - 1) throw std::invalid_argument("bad exponent");
      mantissa = s.substr(0, epos);
    }
    std::size_t dot = mantissa.find('.');
    if (dot != std::string::npos) {
      std::string frac = mantissa.substr(dot + 1);
      mantissa = mantissa.substr(0, dot) + frac;
      exponent -= static_cast<long>(frac.size());
    }
    if (mantissa.empty() || mantissa == "-" || mantissa == "+") throw std::invalid_argument("no digits");
    if (mantissa[0] == '+') mantissa.erase(0, 1);
    Integer m(mantissa, 10);
    Rational r(m);
    r *= ipow(Rational(10), exponent);
    return r;
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("not a rational literal: '" + s + "'");
  } catch (const std::out_of_range&) {
    throw std::invalid_argument("not a rational literal: '" + s + "'");
  }
}

inline std::string to_string(const Rational& x) { return x.get_str(); }

}  // namespace carleman
