#pragma once

#include <mpfr.h>

#include <algorithm>
#include <initializer_list>
#include <stdexcept>
#include <string>

#include "carleman/bigfloat.hpp"
#include "carleman/rational.hpp"

namespace carleman {

// Closed interval [lower, upper] with binary-float endpoints. Every operation
// rounds the lower endpoint down and the upper endpoint up, so the result
// always encloses the exact result for any choice of points in the operands.
class Interval {
 public:
  explicit Interval(unsigned bits = kDefaultBits) : lo_(bits), hi_(bits) {}

  Interval(BigFloat lo, BigFloat hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_.is_nan() || hi_.is_nan()) throw std::domain_error("Interval: NaN endpoint");
    if (compare(lo_, hi_) > 0) throw std::domain_error("Interval: lower > upper");
  }

  static Interval exact(const Rational& q, unsigned bits) {
    return {BigFloat::from_rational(q, bits, MPFR_RNDD), BigFloat::from_rational(q, bits, MPFR_RNDU)};
  }
  static Interval from_long(long x, unsigned bits) {
    return {BigFloat::from_long(x, bits, MPFR_RNDD), BigFloat::from_long(x, bits, MPFR_RNDU)};
  }
  static Interval from_float(const BigFloat& x) { return {x, x}; }
  static Interval symmetric(const BigFloat& radius, unsigned bits) {
    BigFloat lo(bits), hi(bits);
    mpfr_neg(lo.get(), radius.get(), MPFR_RNDD);
    mpfr_set(hi.get(), radius.get(), MPFR_RNDU);
    return {std::move(lo), std::move(hi)};
  }

  const BigFloat& lower() const { return lo_; }
  const BigFloat& upper() const { return hi_; }
  unsigned precision() const { return std::max(lo_.precision(), hi_.precision()); }

  Rational lower_rational() const { return lo_.to_rational(); }
  Rational upper_rational() const { return hi_.to_rational(); }

  bool is_point() const { return lo_ == hi_; }
  bool contains(const Rational& q) const { return compare(lo_, q) <= 0 && compare(hi_, q) >= 0; }
  bool contains(const BigFloat& x) const { return compare(lo_, x) <= 0 && compare(hi_, x) >= 0; }
  bool contains(const Interval& o) const { return compare(lo_, o.lo_) <= 0 && compare(hi_, o.hi_) >= 0; }
  bool overlaps(const Interval& o) const { return compare(lo_, o.hi_) <= 0 && compare(o.lo_, hi_) <= 0; }
  bool contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }
  bool certainly_positive() const { return lo_.sign() > 0; }
  bool certainly_negative() const { return hi_.sign() < 0; }
  bool certainly_nonnegative() const { return lo_.sign() >= 0; }

  BigFloat width() const {
    BigFloat w(precision());
    mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
    return w;
  }
  BigFloat midpoint() const {
    BigFloat m(precision() + 1);
    mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
    mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
    return m;
  }
  double to_double() const { return midpoint().to_double(); }

  // [lower - r, upper + r] for r >= 0.
  Interval widened(const BigFloat& r) const {
    unsigned bits = precision();
    BigFloat lo(bits), hi(bits);
    mpfr_sub(lo.get(), lo_.get(), r.get(), MPFR_RNDD);
    mpfr_add(hi.get(), hi_.get(), r.get(), MPFR_RNDU);
    return {std::move(lo), std::move(hi)};
  }

  std::string lower_string(int digits = 30) const { return lo_.to_string(digits, MPFR_RNDD); }
  std::string upper_string(int digits = 30) const { return hi_.to_string(digits, MPFR_RNDU); }

  friend Interval operator-(const Interval& a) {
    BigFloat lo(a.precision()), hi(a.precision());
    mpfr_neg(lo.get(), a.hi_.get(), MPFR_RNDD);
    mpfr_neg(hi.get(), a.lo_.get(), MPFR_RNDU);
    return {std::move(lo), std::move(hi)};
  }
  friend Interval operator+(const Interval& a, const Interval& b) {
    unsigned bits = std::max(a.precision(), b.precision());
    BigFloat lo(bits), hi(bits);
    mpfr_add(lo.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
    mpfr_add(hi.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
    return {std::move(lo), std::move(hi)};
  }
  friend Interval operator-(const Interval& a, const Interval& b) {
    unsigned bits = std::max(a.precision(), b.precision());
    BigFloat lo(bits), hi(bits);
    mpfr_sub(lo.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDD);
    mpfr_sub(hi.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDU);
    return {std::move(lo), std::move(hi)};
  }
  friend Interval operator*(const Interval& a, const Interval& b) {
    unsigned bits = std::max(a.precision(), b.precision());
    BigFloat lo = BigFloat::infinity(bits, 1), hi = BigFloat::infinity(bits, -1), t(bits);
    for (const BigFloat* x : {&a.lo_, &a.hi_}) {
      for (const BigFloat* y : {&b.lo_, &b.hi_}) {
        mpfr_mul(t.get(), x->get(), y->get(), MPFR_RNDD);
        if (compare(t, lo) < 0) lo = t;
        mpfr_mul(t.get(), x->get(), y->get(), MPFR_RNDU);
        if (compare(t, hi) > 0) hi = t;
      }
    }
    return {std::move(lo), std::move(hi)};
  }
  friend Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains_zero()) throw std::domain_error("Interval: division by an interval containing zero");
    unsigned bits = std::max(a.precision(), b.precision());
    BigFloat lo = BigFloat::infinity(bits, 1), hi = BigFloat::infinity(bits, -1), t(bits);
    for (const BigFloat* x : {&a.lo_, &a.hi_}) {
      for (const BigFloat* y : {&b.lo_, &b.hi_}) {
        mpfr_div(t.get(), x->get(), y->get(), MPFR_RNDD);
        if (compare(t, lo) < 0) lo = t;
        mpfr_div(t.get(), x->get(), y->get(), MPFR_RNDU);
        if (compare(t, hi) > 0) hi = t;
      }
    }
    return {std::move(lo), std::move(hi)};
  }

  friend Interval operator+(const Interval& a, const Rational& q) { return a + exact(q, a.precision()); }
  friend Interval operator-(const Interval& a, const Rational& q) { return a - exact(q, a.precision()); }
  friend Interval operator*(const Interval& a, const Rational& q) { return a * exact(q, a.precision()); }
  friend Interval operator/(const Interval& a, const Rational& q) { return a / exact(q, a.precision()); }
  friend Interval operator*(const Rational& q, const Interval& a) { return exact(q, a.precision()) * a; }
  friend Interval operator/(const Rational& q, const Interval& a) { return exact(q, a.precision()) / a; }

  Interval& operator+=(const Interval& o) { return *this = *this + o; }
  Interval& operator-=(const Interval& o) { return *this = *this - o; }
  Interval& operator*=(const Interval& o) { return *this = *this * o; }
  Interval& operator/=(const Interval& o) { return *this = *this / o; }

 private:
  BigFloat lo_;
  BigFloat hi_;
};

namespace detail {

template <class Fn>
Interval monotone_increasing(const Interval& x, Fn fn) {
  unsigned bits = x.precision();
  BigFloat lo(bits), hi(bits);
  fn(lo.get(), x.lower().get(), MPFR_RNDD);
  fn(hi.get(), x.upper().get(), MPFR_RNDU);
  return {std::move(lo), std::move(hi)};
}

}  // namespace detail

inline Interval pi_interval(unsigned bits) {
  BigFloat lo(bits), hi(bits);
  mpfr_const_pi(lo.get(), MPFR_RNDD);
  mpfr_const_pi(hi.get(), MPFR_RNDU);
  return {std::move(lo), std::move(hi)};
}

inline Interval e_interval(unsigned bits) {
  Interval one = Interval::from_long(1, bits);
  return detail::monotone_increasing(one, [](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t rnd) { mpfr_exp(r, a, rnd); });
}

inline Interval exp(const Interval& x) {
  return detail::monotone_increasing(x, [](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t rnd) { mpfr_exp(r, a, rnd); });
}

inline Interval log(const Interval& x) {
  if (!x.certainly_positive()) throw std::domain_error("log: interval not certainly positive");
  return detail::monotone_increasing(x, [](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t rnd) { mpfr_log(r, a, rnd); });
}

// Principal p-th root of a nonnegative interval.
inline Interval root(const Interval& x, unsigned long p) {
  if (p == 0) throw std::domain_error("root: p = 0");
  if (!x.certainly_nonnegative()) throw std::domain_error("root: interval not certainly nonnegative");
  return detail::monotone_increasing(x, [p](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t rnd) { mpfr_rootn_ui(r, a, p, rnd); });
}

inline Interval abs(const Interval& x) {
  if (x.certainly_nonnegative()) return x;
  if (x.upper().sign() <= 0) return -x;
  unsigned bits = x.precision();
  BigFloat hi(bits);
  mpfr_neg(hi.get(), x.lower().get(), MPFR_RNDU);
  if (compare(x.upper(), hi) > 0) hi = x.upper();
  return {BigFloat(bits), std::move(hi)};
}

inline Interval pow(const Interval& x, unsigned long n) {
  if (n == 0) return Interval::from_long(1, x.precision());
  auto up = [n](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t rnd) { mpfr_pow_ui(r, a, n, rnd); };
  if (x.certainly_nonnegative()) return detail::monotone_increasing(x, up);
  if (n % 2 == 1) return detail::monotone_increasing(x, up);
  return pow(abs(x), n);
}

inline Interval pow(const Interval& x, long n) {
  if (n >= 0) return pow(x, static_cast<unsigned long>(n));
  return Interval::from_long(1, x.precision()) / pow(x, static_cast<unsigned long>(-n));
}

inline Interval pow(const Interval& x, int n) { return pow(x, static_cast<long>(n)); }

// x^q for x > 0 and rational q.
inline Interval pow(const Interval& x, const Rational& q) {
  if (is_integral(q) && q.get_num().fits_slong_p()) return pow(x, q.get_num().get_si());
  if (!x.certainly_positive()) throw std::domain_error("pow: rational exponent needs a positive base");
  return exp(log(x) * q);
}

inline Interval hull(const Interval& a, const Interval& b) {
  BigFloat lo = compare(a.lower(), b.lower()) <= 0 ? a.lower() : b.lower();
  BigFloat hi = compare(a.upper(), b.upper()) >= 0 ? a.upper() : b.upper();
  return {std::move(lo), std::move(hi)};
}

// Enclosure of max(x, y) over all points of the operands.
inline Interval max(const Interval& a, const Interval& b) {
  BigFloat lo = compare(a.lower(), b.lower()) >= 0 ? a.lower() : b.lower();
  BigFloat hi = compare(a.upper(), b.upper()) >= 0 ? a.upper() : b.upper();
  return {std::move(lo), std::move(hi)};
}

namespace detail {

// Range of cos (sine == false) or sin over x. Interior extrema sit where
// t = x/pi (cos) or t = x/pi - 1/2 (sin) is an integer k, with value (-1)^k.
inline Interval trig(const Interval& x, bool sine) {
  unsigned bits = x.precision();
  Interval one = Interval::from_long(1, bits);
  Interval full(BigFloat::from_long(-1, bits, MPFR_RNDD), BigFloat::from_long(1, bits, MPFR_RNDU));
  Interval t = x / pi_interval(bits + 32);
  if (sine) t = t - Rational(1, 2);
  BigFloat span = t.width();
  if (compare(span, Rational(2)) >= 0) return full;

  auto f = [sine](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t rnd) {
    if (sine) {
      mpfr_sin(r, a, rnd);
    } else {
      mpfr_cos(r, a, rnd);
    }
  };
  BigFloat a_lo(bits), a_hi(bits), b_lo(bits), b_hi(bits);
  f(a_lo.get(), x.lower().get(), MPFR_RNDD);
  f(a_hi.get(), x.lower().get(), MPFR_RNDU);
  f(b_lo.get(), x.upper().get(), MPFR_RNDD);
  f(b_hi.get(), x.upper().get(), MPFR_RNDU);
  BigFloat lo = compare(a_lo, b_lo) <= 0 ? a_lo : b_lo;
  BigFloat hi = compare(a_hi, b_hi) >= 0 ? a_hi : b_hi;

  BigFloat kmin(bits), kmax(bits);
  mpfr_ceil(kmin.get(), t.lower().get());
  mpfr_floor(kmax.get(), t.upper().get());
  if (!mpfr_fits_slong_p(kmin.get(), MPFR_RNDN) || !mpfr_fits_slong_p(kmax.get(), MPFR_RNDN)) return full;
  long k0 = mpfr_get_si(kmin.get(), MPFR_RNDN);
  long k1 = mpfr_get_si(kmax.get(), MPFR_RNDN);
  for (long k = k0; k <= k1; ++k) {
    if (k % 2 == 0) {
      hi = one.upper();
    } else {
      mpfr_set_si(lo.get(), -1, MPFR_RNDD);
    }
  }
  if (compare(lo, Rational(-1)) < 0) mpfr_set_si(lo.get(), -1, MPFR_RNDD);
  if (compare(hi, Rational(1)) > 0) mpfr_set_si(hi.get(), 1, MPFR_RNDU);
  return {std::move(lo), std::move(hi)};
}

}  // namespace detail

inline Interval cos(const Interval& x) { return detail::trig(x, false); }
inline Interval sin(const Interval& x) { return detail::trig(x, true); }

inline bool certainly_le(const Interval& a, const Interval& b) { return compare(a.upper(), b.lower()) <= 0; }
inline bool certainly_lt(const Interval& a, const Interval& b) { return compare(a.upper(), b.lower()) < 0; }
inline bool certainly_le(const Rational& a, const Interval& b) { return compare(b.lower(), a) >= 0; }
inline bool certainly_le(const Interval& a, const Rational& b) { return compare(a.upper(), b) <= 0; }
inline bool certainly_gt(const Interval& a, const Interval& b) { return certainly_lt(b, a); }

}  // namespace carleman
