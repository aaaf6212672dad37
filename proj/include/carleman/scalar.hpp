#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>
#include <variant>

#include "carleman/bigfloat.hpp"
#include "carleman/interval.hpp"
#include "carleman/rational.hpp"

namespace carleman {

enum class Mode { exact, floating, interval };

inline const char* to_string(Mode m) {
  switch (m) {
    case Mode::exact: return "exact";
    case Mode::floating: return "float";
    case Mode::interval: return "interval";
  }
  return "?";
}

// Mantissa bits used when nothing else is requested. CARLEMAN_PRECISION
// overrides the compiled-in default.
inline unsigned default_precision_bits() {
  static const unsigned bits = [] {
    if (const char* env = std::getenv("CARLEMAN_PRECISION")) {
      char* end = nullptr;
      unsigned long v = std::strtoul(env, &end, 10);
      if (end != env && *end == '\0' && v >= 64 && v <= (1UL << 20)) return static_cast<unsigned>(v);
    }
    return kDefaultBits;
  }();
  return bits;
}

struct Precision {
  Mode mode = Mode::interval;
  unsigned bits = kDefaultBits;

  static Precision exact() { return {Mode::exact, kDefaultBits}; }
  static Precision floating(unsigned bits) { return {Mode::floating, bits}; }
  static Precision interval(unsigned bits = default_precision_bits()) { return {Mode::interval, bits}; }
};

// Float mode keeps a binary128-sized exponent range so that it behaves like a
// fixed-format float with a long mantissa; values outside it are range errors.
inline constexpr long kFloatMaxExponent = 16384;

class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

// A real quantity in one of three representations: an exact rational, a
// round-to-nearest float, or a certified enclosure.
class Scalar {
 public:
  Scalar() : v_(Rational(0)) {}
  Scalar(Rational q) : v_(std::move(q)) {}  // NOLINT(google-explicit-constructor)
  Scalar(BigFloat f) : v_(std::move(f)) {}  // NOLINT(google-explicit-constructor)
  Scalar(Interval i) : v_(std::move(i)) {}  // NOLINT(google-explicit-constructor)

  Mode mode() const {
    switch (v_.index()) {
      case 0: return Mode::exact;
      case 1: return Mode::floating;
      default: return Mode::interval;
    }
  }
  bool is_exact() const { return v_.index() == 0; }

  const Rational& exact() const {
    if (const auto* q = std::get_if<Rational>(&v_)) return *q;
    throw std::logic_error("Scalar: not an exact rational");
  }
  const BigFloat& floating() const {
    if (const auto* f = std::get_if<BigFloat>(&v_)) return *f;
    throw std::logic_error("Scalar: not a float");
  }
  const Interval& interval() const {
    if (const auto* i = std::get_if<Interval>(&v_)) return *i;
    throw std::logic_error("Scalar: not an interval");
  }

  // Interval view. Exact values are enclosed outward; a float is taken as a point.
  Interval enclose(unsigned bits = kDefaultBits) const {
    switch (v_.index()) {
      case 0: return Interval::exact(std::get<Rational>(v_), bits);
      case 1: return Interval::from_float(std::get<BigFloat>(v_));
      default: return std::get<Interval>(v_);
    }
  }

  std::string lower_string(int digits = 30) const {
    if (is_exact()) return Interval::exact(exact(), 4 * digits + 64).lower_string(digits);
    if (mode() == Mode::floating) return floating().to_string(digits, MPFR_RNDD);
    return interval().lower_string(digits);
  }
  std::string upper_string(int digits = 30) const {
    if (is_exact()) return Interval::exact(exact(), 4 * digits + 64).upper_string(digits);
    if (mode() == Mode::floating) return floating().to_string(digits, MPFR_RNDU);
    return interval().upper_string(digits);
  }
  std::string to_string(int digits = 30) const {
    if (is_exact()) return exact().get_str();
    if (mode() == Mode::floating) return floating().to_string(digits, MPFR_RNDN);
    return "[" + interval().lower_string(digits) + ", " + interval().upper_string(digits) + "]";
  }
  double to_double() const {
    if (is_exact()) return exact().get_d();
    if (mode() == Mode::floating) return floating().to_double();
    return interval().to_double();
  }

 private:
  std::variant<Rational, BigFloat, Interval> v_;
};

// Converts a certified enclosure into the representation requested by `prec`.
// Float mode rounds the midpoint to the requested mantissa and enforces the
// float exponent range.
inline Scalar render(const Interval& x, const Precision& prec) {
  switch (prec.mode) {
    case Mode::exact:
      if (x.is_point()) return Scalar(x.lower_rational());
      throw std::domain_error("value is not known to be rational; request float or interval mode");
    case Mode::floating: {
      BigFloat f(prec.bits);
      mpfr_set(f.get(), x.midpoint().get(), MPFR_RNDN);
      if (!f.is_finite() || std::labs(f.exponent()) > kFloatMaxExponent) {
        throw RangeError("float mode overflow (exponent beyond " + std::to_string(kFloatMaxExponent) +
                         " bits); use interval mode, which works in a wider exponent range");
      }
      return Scalar(std::move(f));
    }
    case Mode::interval: return Scalar(x);
  }
  return Scalar(x);
}

inline Scalar render(const Rational& q, const Precision& prec) {
  if (prec.mode == Mode::exact) return Scalar(q);
  // Extra guard bits so the float rounding below is the only rounding.
  return render(Interval::exact(q, prec.mode == Mode::floating ? prec.bits + 64 : prec.bits), prec);
}

}  // namespace carleman
