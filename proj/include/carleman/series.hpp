#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "carleman/rational.hpp"

namespace carleman {

// Exact power series  sum_{n=v}^{N} c_n x^n  truncated at order N. Products and
// powers truncate at the smaller order of their operands.
class TruncatedPowerSeries {
 public:
  TruncatedPowerSeries() = default;

  // Dense coefficients c_0..c_N; leading zeros raise the valuation.
  explicit TruncatedPowerSeries(std::vector<Rational> dense) {
    if (dense.empty()) throw std::invalid_argument("series needs at least one coefficient");
    order_ = dense.size() - 1;
    std::size_t v = 0;
    while (v < dense.size() && dense[v] == 0) ++v;
    valuation_ = v;
    coeffs_.assign(dense.begin() + static_cast<long>(v), dense.end());
  }

  static TruncatedPowerSeries zero(std::size_t order) { return TruncatedPowerSeries(std::vector<Rational>(order + 1)); }
  static TruncatedPowerSeries one(std::size_t order) {
    std::vector<Rational> c(order + 1);
    c[0] = 1;
    return TruncatedPowerSeries(std::move(c));
  }

  std::size_t valuation() const { return valuation_; }
  std::size_t order() const { return order_; }
  bool is_zero() const { return coeffs_.empty(); }
  // Stored coefficients c_v..c_N; empty for the zero series.
  const std::vector<Rational>& stored() const { return coeffs_; }

  Rational coefficient(std::size_t n) const {
    if (n > order_) throw std::out_of_range("coefficient " + std::to_string(n) + " beyond order " + std::to_string(order_));
    if (n < valuation_) return 0;
    return coeffs_[n - valuation_];
  }

  std::vector<Rational> dense() const {
    std::vector<Rational> d(order_ + 1);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) d[valuation_ + i] = coeffs_[i];
    return d;
  }

  TruncatedPowerSeries truncated(std::size_t order) const {
    auto d = dense();
    d.resize(std::min(order, order_) + 1);
    return TruncatedPowerSeries(std::move(d));
  }

  TruncatedPowerSeries scaled(const Rational& q) const {
    auto d = dense();
    for (auto& c : d) c *= q;
    return TruncatedPowerSeries(std::move(d));
  }

  friend TruncatedPowerSeries operator+(const TruncatedPowerSeries& a, const TruncatedPowerSeries& b) {
    std::size_t N = std::min(a.order_, b.order_);
    std::vector<Rational> d(N + 1);
    for (std::size_t n = 0; n <= N; ++n) d[n] = a.coefficient(n) + b.coefficient(n);
    return TruncatedPowerSeries(std::move(d));
  }

  friend TruncatedPowerSeries operator*(const TruncatedPowerSeries& a, const TruncatedPowerSeries& b) {
    std::size_t N = std::min(a.order_, b.order_);
    std::vector<Rational> d(N + 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      std::size_t ei = a.valuation_ + i;
      if (ei > N) break;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
        std::size_t e = ei + b.valuation_ + j;
        if (e > N) break;
        d[e] += a.coeffs_[i] * b.coeffs_[j];
      }
    }
    return TruncatedPowerSeries(std::move(d));
  }

  TruncatedPowerSeries pow(unsigned long k) const {
    TruncatedPowerSeries result = one(order_), base = *this;
    while (k > 0) {
      if (k & 1) result = result * base;
      k >>= 1;
      if (k > 0) base = base * base;
    }
    return result;
  }

  friend bool operator==(const TruncatedPowerSeries& a, const TruncatedPowerSeries& b) {
    return a.order_ == b.order_ && a.valuation_ == b.valuation_ && a.coeffs_ == b.coeffs_;
  }

 private:
  std::vector<Rational> coeffs_;
  std::size_t valuation_ = 0;
  std::size_t order_ = 0;
};

// Polynomial with exact rational coefficients, lowest degree first.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Polynomial monomial(std::size_t degree, const Rational& coeff = 1) {
    std::vector<Rational> c(degree + 1);
    c[degree] = coeff;
    return Polynomial(std::move(c));
  }

  const std::vector<Rational>& coefficients() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  long degree() const { return static_cast<long>(c_.size()) - 1; }

  Rational operator()(const Rational& x) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Polynomial derivative(std::size_t times = 1) const {
    if (c_.size() <= times) return {};
    std::vector<Rational> d(c_.size() - times);
    for (std::size_t i = 0; i < d.size(); ++i) {
      Integer falling = 1;
      for (std::size_t j = 0; j < times; ++j) falling *= static_cast<unsigned long>(i + times - j);
      d[i] = c_[i + times] * Rational(falling);
    }
    return Polynomial(std::move(d));
  }

  // f(x), f'(x), ..., f^{(n)}(x).
  std::vector<Rational> jet(const Rational& x, std::size_t n) const {
    std::vector<Rational> out;
    Polynomial d = *this;
    for (std::size_t k = 0; k <= n; ++k) {
      out.push_back(d(x));
      d = d.derivative();
    }
    return out;
  }

  // x -> f(x^p).
  Polynomial substitute_power(unsigned long p) const {
    if (p == 0) throw std::invalid_argument("power substitution needs p >= 1");
    if (c_.empty()) return {};
    std::vector<Rational> d((c_.size() - 1) * p + 1);
    for (std::size_t i = 0; i < c_.size(); ++i) d[i * p] = c_[i];
    return Polynomial(std::move(d));
  }

  // x -> f(g(x)).
  Polynomial compose(const Polynomial& g) const {
    Polynomial acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * g + Polynomial({*it});
    return acc;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Rational> d(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < a.c_.size(); ++i) d[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) d[i] += b.c_[i];
    return Polynomial(std::move(d));
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> d(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      for (std::size_t j = 0; j < b.c_.size(); ++j) d[i + j] += a.c_[i] * b.c_[j];
    }
    return Polynomial(std::move(d));
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<Rational> c_;
};

}  // namespace carleman
