#pragma once

#include <mpfr.h>

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "carleman/rational.hpp"

namespace carleman {

inline constexpr unsigned kDefaultBits = 256;

// Owning wrapper around an mpfr_t. Every operation that produces a value
// takes an explicit rounding direction; nothing rounds implicitly.
class BigFloat {
 public:
  explicit BigFloat(unsigned bits = kDefaultBits) {
    mpfr_init2(v_, static_cast<mpfr_prec_t>(bits));
    mpfr_set_zero(v_, 1);
  }
  BigFloat(const BigFloat& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& other) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, other.v_);
  }
  BigFloat& operator=(const BigFloat& other) {
    if (this != &other) {
      mpfr_set_prec(v_, mpfr_get_prec(other.v_));
      mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigFloat& operator=(BigFloat&& other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  static BigFloat from_rational(const Rational& q, unsigned bits, mpfr_rnd_t rnd) {
    BigFloat r(bits);
    mpfr_set_q(r.v_, q.get_mpq_t(), rnd);
    return r;
  }
  static BigFloat from_long(long x, unsigned bits, mpfr_rnd_t rnd) {
    BigFloat r(bits);
    mpfr_set_si(r.v_, x, rnd);
    return r;
  }
  static BigFloat infinity(unsigned bits, int sign) {
    BigFloat r(bits);
    mpfr_set_inf(r.v_, sign);
    return r;
  }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  unsigned precision() const { return static_cast<unsigned>(mpfr_get_prec(v_)); }

  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  long exponent() const { return is_zero() || !is_finite() ? 0 : static_cast<long>(mpfr_get_exp(v_)); }

  // Exact value; every finite binary float is a dyadic rational.
  Rational to_rational() const {
    if (!is_finite()) throw std::domain_error("BigFloat: non-finite value has no rational form");
    Rational q;
    mpfr_get_q(q.get_mpq_t(), v_);
    return q;
  }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  // Scientific decimal string with `digits` significant digits, rounded in `rnd`.
  std::string to_string(int digits, mpfr_rnd_t rnd) const {
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
    char* buf = nullptr;
    int n = 0;
    switch (rnd) {
      case MPFR_RNDD: n = mpfr_asprintf(&buf, "%.*RDe", digits - 1, v_); break;
      case MPFR_RNDU: n = mpfr_asprintf(&buf, "%.*RUe", digits - 1, v_); break;
      case MPFR_RNDZ: n = mpfr_asprintf(&buf, "%.*RZe", digits - 1, v_); break;
      default: n = mpfr_asprintf(&buf, "%.*RNe", digits - 1, v_); break;
    }
    if (n < 0 || buf == nullptr) throw std::runtime_error("mpfr_asprintf failed");
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
  }

  friend int compare(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_); }
  friend int compare(const BigFloat& a, const Rational& b) { return mpfr_cmp_q(a.v_, b.get_mpq_t()); }
  friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

 private:
  mpfr_t v_;
};

}  // namespace carleman
