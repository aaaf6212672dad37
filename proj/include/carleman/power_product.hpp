#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "carleman/interval.hpp"
#include "carleman/rational.hpp"

namespace carleman {

// Exact symbolic value  prod_i b_i^{e_i}  with integer bases b_i > 1 and
// nonzero rational exponents. Closed under products, quotients and rational
// powers, and two such values can be compared exactly by clearing exponent
// denominators. Used for every weight-sequence value that is algebraic over
// the rationals (Gevrey with rational order, tables, hull interpolants).
class PowerProduct {
 public:
  struct Factor {
    Integer base;
    Rational exponent;
  };

  PowerProduct() = default;

  explicit PowerProduct(const Rational& value, const Rational& exponent = 1) {
    if (value <= 0) throw std::domain_error("PowerProduct: base must be positive");
    push(value.get_num(), exponent);
    push(value.get_den(), -exponent);
    normalize();
  }

  static PowerProduct of_integer(const Integer& base, const Rational& exponent = 1) {
    return PowerProduct(Rational(base), exponent);
  }

  const std::vector<Factor>& factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }

  PowerProduct& operator*=(const PowerProduct& o) {
    factors_.insert(factors_.end(), o.factors_.begin(), o.factors_.end());
    normalize();
    return *this;
  }
  PowerProduct& operator/=(const PowerProduct& o) {
    for (const auto& f : o.factors_) factors_.push_back({f.base, -f.exponent});
    normalize();
    return *this;
  }
  friend PowerProduct operator*(PowerProduct a, const PowerProduct& b) { return a *= b; }
  friend PowerProduct operator/(PowerProduct a, const PowerProduct& b) { return a /= b; }

  PowerProduct pow(const Rational& e) const {
    PowerProduct r;
    if (e == 0) return r;
    for (const auto& f : factors_) r.factors_.push_back({f.base, f.exponent * e});
    r.normalize();
    return r;
  }

  bool all_exponents_integral() const {
    return std::all_of(factors_.begin(), factors_.end(), [](const Factor& f) { return is_integral(f.exponent); });
  }

  // The rational value, when every exponent is an integer.
  std::optional<Rational> exact() const {
    if (!all_exponents_integral()) return std::nullopt;
    Integer num = 1, den = 1;
    for (const auto& f : factors_) {
      long e = f.exponent.get_num().get_si();
      if (e > 0) {
        num *= ipow(f.base, static_cast<unsigned long>(e));
      } else {
        den *= ipow(f.base, static_cast<unsigned long>(-e));
      }
    }
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  Interval enclose(unsigned bits) const {
    if (auto q = exact()) return Interval::exact(*q, bits);
    unsigned work = bits + 32;
    Interval acc = Interval::from_long(1, work);
    for (const auto& f : factors_) {
      Interval b = Interval::exact(Rational(f.base), work);
      if (is_integral(f.exponent)) {
        acc *= carleman::pow(b, f.exponent.get_num().get_si());
      } else {
        Interval r = root(b, f.exponent.get_den().get_ui());
        acc *= carleman::pow(r, f.exponent.get_num().get_si());
      }
    }
    return acc;
  }

  Interval log_enclose(unsigned bits) const {
    unsigned work = bits + 32;
    Interval acc = Interval::from_long(0, work);
    for (const auto& f : factors_) acc += log(Interval::exact(Rational(f.base), work)) * f.exponent;
    return acc;
  }

  // Exact sign of log(a) - log(b). nullopt when the cleared integer powers
  // would exceed `budget_bits`.
  friend std::optional<int> compare(const PowerProduct& a, const PowerProduct& b,
                                    std::size_t budget_bits = std::size_t{1} << 24) {
    PowerProduct q = a / b;
    if (q.is_one()) return 0;
    Integer denom_lcm = 1;
    for (const auto& f : q.factors_) denom_lcm = lcm(denom_lcm, f.exponent.get_den());
    std::size_t cost = 0;
    for (const auto& f : q.factors_) {
      Rational scaled = f.exponent * denom_lcm;
      Integer mag = abs(scaled.get_num());
      if (!mag.fits_ulong_p()) return std::nullopt;
      cost += mag.get_ui() * mpz_sizeinbase(f.base.get_mpz_t(), 2);
      if (cost > budget_bits) return std::nullopt;
    }
    Integer pos = 1, neg = 1;
    for (const auto& f : q.factors_) {
      Rational scaled = f.exponent * denom_lcm;
      const Integer& e = scaled.get_num();
      if (e > 0) {
        pos *= ipow(f.base, e.get_ui());
      } else {
        Integer m = -e;
        neg *= ipow(f.base, m.get_ui());
      }
    }
    int c = cmp(pos, neg);
    return c > 0 ? 1 : (c < 0 ? -1 : 0);
  }

 private:
  void push(const Integer& base, const Rational& exponent) {
    if (base > 1 && exponent != 0) factors_.push_back({base, exponent});
  }

  void normalize() {
    std::sort(factors_.begin(), factors_.end(), [](const Factor& x, const Factor& y) { return x.base < y.base; });
    std::vector<Factor> merged;
    for (auto& f : factors_) {
      if (!merged.empty() && merged.back().base == f.base) {
        merged.back().exponent += f.exponent;
      } else {
        merged.push_back(std::move(f));
      }
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(), [](const Factor& f) { return f.exponent == 0; }),
                 merged.end());
    factors_ = std::move(merged);
  }

  std::vector<Factor> factors_;
};

}  // namespace carleman
