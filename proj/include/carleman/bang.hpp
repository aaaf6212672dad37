#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "carleman/comb.hpp"
#include "carleman/interval.hpp"
#include "carleman/rational.hpp"
#include "carleman/scalar.hpp"
#include "carleman/seqcore.hpp"
#include "carleman/series.hpp"
#include "carleman/verdict.hpp"
#include "carleman/weight_sequence.hpp"

namespace carleman {

namespace detail {

// sum_{e = e0, e0+p, ...} x^e / e!  for |x| <= 1, with the exponential tail
// sum_{i >= m} |x|^i / i! <= |x|^m / m! / (1 - |x|/(m+1)) added as a radius.
inline Interval stepped_exp_series(unsigned long e0, unsigned long p, const Rational& x, unsigned bits) {
  Rational ax = abs(x);
  if (ax > 1) throw std::domain_error("C_p series is evaluated on [-1, 1] only");
  Rational sum = 0, threshold(1);
  threshold /= Rational(ipow(Integer(2), bits + 8));
  unsigned long e = e0;
  Rational tail;
  while (true) {
    sum += ipow(x, static_cast<long>(e)) / Rational(factorial(e));
    e += p;
    tail = ipow(ax, static_cast<long>(e)) / Rational(factorial(e)) / (Rational(1) - ax / Rational(e + 1));
    if (tail <= threshold) break;
  }
  BigFloat radius = BigFloat::from_rational(tail, bits, MPFR_RNDU);
  return Interval::exact(sum, bits).widened(radius);
}

}  // namespace detail

// C_p^{(n)}(x) = sum_{jp >= n} x^{jp-n} / (jp-n)!  for x in [-1, 1].
inline Interval cp_derivative_enclose(unsigned long p, unsigned long n, const Rational& x, unsigned bits) {
  if (p < 1) throw std::invalid_argument("C_p needs p >= 1");
  unsigned long e0 = (p - n % p) % p;
  return detail::stepped_exp_series(e0, p, x, bits);
}

inline Scalar cp_eval(unsigned long p, const Rational& x, const Precision& prec = Precision::interval()) {
  if (x == 0) return render(Rational(1), prec);
  return render(cp_derivative_enclose(p, 0, x, prec.bits + 16), prec);
}

inline Scalar cp_derivative(unsigned long p, unsigned long n, const Rational& x,
                            const Precision& prec = Precision::interval()) {
  if (x == 0) return render(Rational(n % p == 0 ? 1 : 0), prec);
  return render(cp_derivative_enclose(p, n, x, prec.bits + 16), prec);
}

inline std::vector<Rational> uniform_grid(const Rational& lo, const Rational& hi, std::size_t points) {
  if (points == 0) throw std::invalid_argument("grid needs at least one point");
  if (hi < lo) throw std::invalid_argument("grid interval is reversed");
  std::vector<Rational> g;
  if (points == 1) return {lo};
  for (std::size_t i = 0; i < points; ++i) {
    g.push_back(lo + (hi - lo) * fraction(Integer(static_cast<unsigned long>(i)), Integer(static_cast<unsigned long>(points - 1))));
  }
  return g;
}

// |C_p^{(n)}(x)| <= e for 1 <= p <= p_max, 0 <= n <= 4p, x on a uniform grid of
// [-1, 1]. For p = 1 the value is e^x, and e^x <= e is decided exactly by x <= 1.
inline Verdict cp_bound_check(unsigned long p_max, std::size_t grid_points, unsigned bits = default_precision_bits()) {
  Window w{0, static_cast<long>(4 * p_max)};
  auto grid = uniform_grid(-1, 1, grid_points);
  Interval e = e_interval(bits);
  for (unsigned long p = 1; p <= p_max; ++p) {
    for (unsigned long n = 0; n <= 4 * p; ++n) {
      for (const auto& x : grid) {
        if (p == 1) {
          if (x > 1) return Verdict::failing(w, Witness{{1, static_cast<long>(n)}, "e^x", "e", "x > 1"});
          continue;
        }
        Interval v = abs(cp_derivative_enclose(p, n, x, bits));
        if (certainly_le(v, e)) continue;
        Witness wit{{static_cast<long>(p), static_cast<long>(n)}, "|C_p^(n)(x)| in " + Scalar(v).to_string(20), "e",
                    "x = " + to_string(x)};
        if (certainly_gt(v, e)) return Verdict::failing(w, wit);
        return Verdict::inconclusive(w, std::nullopt, "unresolved at p=" + std::to_string(p) + ", x=" + to_string(x));
      }
    }
  }
  return Verdict::holding(w, "|C_p^(n)(x)| <= e on the grid");
}

// C_p^{(p)}(x) against C_p(x): the enclosures must overlap and each be narrower
// than 2^-64.
inline Verdict cp_periodicity_check(unsigned long p_max, std::size_t grid_points, unsigned bits = default_precision_bits()) {
  Window w{1, static_cast<long>(p_max)};
  auto grid = uniform_grid(-1, 1, grid_points);
  BigFloat width_cap = BigFloat::from_rational(Rational(1) / Rational(ipow(Integer(2), 64)), 64, MPFR_RNDD);
  for (unsigned long p = 1; p <= p_max; ++p) {
    for (const auto& x : grid) {
      Interval a = cp_derivative_enclose(p, p, x, bits), b = cp_derivative_enclose(p, 0, x, bits);
      if (!a.overlaps(b) || compare(a.width(), width_cap) > 0 || compare(b.width(), width_cap) > 0) {
        return Verdict::failing(w, Witness{{static_cast<long>(p)}, "C_p^(p)(x) in " + Scalar(a).to_string(20),
                                           "C_p(x) in " + Scalar(b).to_string(20), "x = " + to_string(x)});
      }
    }
  }
  return Verdict::holding(w, "C_p^(p) = C_p within enclosures of width <= 2^-64");
}

enum class Oscillator { cosine, cp };

inline const char* to_string(Oscillator o) { return o == Oscillator::cosine ? "cosine" : "cp"; }

struct BangOptions {
  Oscillator oscillator = Oscillator::cosine;
  unsigned long p = 2;
  std::size_t max_order = 24;        // highest derivative order served at the tail target
  unsigned tail_bits = 64;           // tail <= 2^-tail_bits * M'_n up to max_order
  std::optional<std::size_t> terms;  // overrides the computed truncation K
  unsigned bits = default_precision_bits();
};

class BangConstructionError : public std::domain_error {
 public:
  BangConstructionError(const std::string& what, Verdict gate) : std::domain_error(what), gate_(std::move(gate)) {}
  const Verdict& gate() const { return gate_; }

 private:
  Verdict gate_;
};

// F(xi) = sum_{k<K} M'_k / (2 m_k)^k osc(2 m_k xi), osc = cos or C_p.
class BangFunction {
 public:
  static BangFunction build(const WeightSequence& seq, const BangOptions& opt = {}) {
    if (opt.oscillator == Oscillator::cosine && opt.p != 2) {
      throw std::invalid_argument("cosine oscillator is the p = 2 construction");
    }
    if (opt.p < 1) throw std::invalid_argument("Bang function needs p >= 1");
    BangFunction B;
    B.seq_ = seq;
    B.opt_ = opt;
    B.K_ = opt.terms ? *opt.terms : opt.max_order + opt.tail_bits + 1;
    if (B.K_ < 1) throw std::invalid_argument("Bang function needs at least one term");
    if (auto last = seq.last_index()) {
      // A table gives a finite sum: every term with m_k defined, nothing beyond.
      if (*last < 1) throw std::invalid_argument("table too short for a Bang function");
      B.K_ = std::min(B.K_, *last);
      B.finite_ = true;
    }
    long gate_end = static_cast<long>(B.finite_ ? B.K_ - 1 : B.K_);
    if (gate_end >= 1) {
      Verdict gate = is_log_convex(seq, Window{1, gate_end}, Which::derived, opt.bits);
      if (!gate.holds()) {
        throw BangConstructionError("derived sequence M'_n is not certified log-convex on [1, " +
                                        std::to_string(gate_end) + "]",
                                    gate);
      }
    }
    B.tail_global_ = B.finite_ || oracle::log_convex_globally(seq).has_value();
    unsigned work = opt.bits + 32;
    for (std::size_t k = 0; k <= B.K_; ++k) B.derived_.push_back(seq.derived_enclose(k, work));
    for (std::size_t k = 0; k < B.K_; ++k) B.m_.push_back(B.derived_[k + 1] / B.derived_[k]);
    return B;
  }

  const WeightSequence& sequence() const { return seq_; }
  const BangOptions& options() const { return opt_; }
  Oscillator oscillator() const { return opt_.oscillator; }
  unsigned long p() const { return opt_.p; }
  std::size_t terms() const { return K_; }
  bool finite() const { return finite_; }
  // True when the tail bound rests on log-convexity of M' for every index.
  bool tail_global() const { return tail_global_; }
  const Interval& derived(std::size_t k) const { return derived_.at(k); }
  const Interval& m(std::size_t k) const { return m_.at(k); }
  unsigned bits() const { return opt_.bits; }

  // Tail / M'_n: 2^{n-K+1}, or 0 for a finite sum.
  Rational relative_tail(std::size_t n) const {
    if (finite_) return 0;
    require_order(n);
    return ipow(Rational(2), static_cast<long>(n) - static_cast<long>(K_) + 1);
  }

  Interval tail_bound(std::size_t n) const {
    unsigned work = opt_.bits + 32;
    if (finite_) return Interval::from_long(0, work);
    return derived_[n] * relative_tail(n);
  }

  // |term_k^{(n)}| at 0 before the oscillator factor: M'_k (2 m_k)^{n-k}.
  Interval term_magnitude(std::size_t k, std::size_t n) const {
    return derived_[k] * pow(m_[k] * Rational(2), static_cast<long>(n) - static_cast<long>(k));
  }

  void require_order(std::size_t n) const {
    if (n > K_) throw std::out_of_range("derivative order " + std::to_string(n) + " exceeds truncation K = " + std::to_string(K_));
  }

 private:
  WeightSequence seq_ = WeightSequence::analytic();
  BangOptions opt_;
  std::size_t K_ = 0;
  bool finite_ = false;
  bool tail_global_ = false;
  std::vector<Interval> derived_;  // M'_0 .. M'_K
  std::vector<Interval> m_;        // m_0 .. m_{K-1}
};

namespace detail {

// cos(t + n pi/2) by exact quarter-period shifts.
inline Interval shifted_cos(const Interval& t, std::size_t n) {
  switch (n % 4) {
    case 0: return cos(t);
    case 1: return -sin(t);
    case 2: return -cos(t);
    default: return sin(t);
  }
}

inline Interval bang_partial_sum(const BangFunction& B, std::size_t n, const Rational& xi) {
  unsigned work = B.bits() + 32;
  Interval sum = Interval::from_long(0, work);
  for (std::size_t k = 0; k < B.terms(); ++k) {
    Interval osc(work);
    if (B.oscillator() == Oscillator::cosine) {
      if (xi == 0) {
        long c = n % 4 == 0 ? 1 : (n % 4 == 2 ? -1 : 0);
        if (c == 0) continue;
        osc = Interval::from_long(c, work);
      } else {
        osc = shifted_cos(B.m(k) * (Rational(2) * xi), n);
      }
    } else {
      if (n % B.p() != 0) continue;
      osc = Interval::from_long(1, work);
    }
    sum += B.term_magnitude(k, n) * osc;
  }
  return sum;
}

}  // namespace detail

// F^{(n)}(xi), widened by the tail bound M'_n 2^{n-K+1}. The C_p variant is
// evaluated at xi = 0 only, where C_p^{(n)}(0) is 1 when p divides n and 0
// otherwise; away from 0 its series in k diverges.
inline Interval bang_derivative_enclose(const BangFunction& B, std::size_t n, const Rational& xi) {
  B.require_order(n);
  if (xi < -1 || xi > 1) throw std::domain_error("Bang function is evaluated on [-1, 1]");
  if (B.oscillator() == Oscillator::cp && xi != 0) throw std::domain_error("C_p variant is evaluated at xi = 0 only");
  Interval s = detail::bang_partial_sum(B, n, xi);
  if (B.finite()) return s;
  return s.widened(B.tail_bound(n).upper());
}

inline Scalar bang_derivative(const BangFunction& B, std::size_t n, const Rational& xi,
                              const Precision& prec = Precision::interval()) {
  return render(bang_derivative_enclose(B, n, xi), prec);
}

// |F^{(pn)}(0)| >= M'_{pn}. At 0 every surviving term has the same sign, so the
// partial sum alone is a valid lower bound and no tail enters.
inline Verdict bang_lower_bound_certify(const BangFunction& B, std::size_t n) {
  std::size_t order = B.p() * n;
  Window w{static_cast<long>(n), static_cast<long>(n)};
  if (order >= B.terms()) {
    throw std::out_of_range("lower bound at order " + std::to_string(order) + " needs K > " + std::to_string(order));
  }
  Interval lower = abs(detail::bang_partial_sum(B, order, Rational(0)));
  const Interval& target = B.derived(order);
  if (certainly_le(target, lower)) {
    return Verdict::holding(w, "same-sign partial sum over k < " + std::to_string(B.terms()) + " dominates M'_pn");
  }
  Witness wit{{static_cast<long>(n)}, "|F^(pn)(0)| >= " + Scalar(lower).lower_string(20),
              "M'_pn = " + Scalar(target).to_string(20), "partial sum below M'_pn"};
  if (certainly_lt(lower, target)) return Verdict::failing(w, wit);
  return Verdict::inconclusive(w, std::nullopt, "enclosures overlap at working precision");
}

struct InducedDerivative {
  Scalar value;         // f^{(n)}(0) = n!/(pn)! F^{(pn)}(0)
  Scalar lower_target;  // n! M'_{pn} / (pn)!
  Verdict lower_bound;  // |f^{(n)}(0)| >= n! M'_{pn} / (pn)!
};

inline InducedDerivative induced_f_derivative(const BangFunction& B, std::size_t n,
                                              const Precision& prec = Precision::interval()) {
  std::size_t order = B.p() * n;
  Rational scale = fraction(factorial(n), factorial(order));
  InducedDerivative out;
  out.value = render(bang_derivative_enclose(B, order, Rational(0)) * scale, prec);
  Interval target = B.derived(order) * scale;
  out.lower_target = render(target, prec);
  Verdict v = bang_lower_bound_certify(B, n);
  v.provenance = v.holds() ? "n!/(pn)! |F^(pn)(0)| >= n! M'_pn/(pn)!" : v.provenance;
  out.lower_bound = std::move(v);
  return out;
}

// n (2e)^n (eA)^{pn} M'_{pn} / n^{(p-1)n}.
inline Scalar theorem1_bound(const WeightSequence& seq, const Rational& A, unsigned long p, unsigned long n,
                             const Precision& prec = Precision::interval()) {
  if (A <= 0) throw std::domain_error("theorem1_bound needs A > 0");
  if (p < 2 || n < 1) throw std::invalid_argument("theorem1_bound needs p >= 2, n >= 1");
  unsigned work = prec.bits + 32;
  Interval e = e_interval(work);
  Interval v = pow(e * Rational(2), n) * pow(e * A, p * n) * seq.derived_enclose(p * n, work);
  v = v * Rational(static_cast<unsigned long>(n)) / Rational(ipow(Integer(n), (p - 1) * n));
  return render(v, prec);
}

// Growth data C R^n n! M_n on the interval [lo, hi], with norm radius r.
struct GrowthEnvelope {
  Rational C = 1;
  Rational R = 1;
  Rational r = 1;
  Rational lo = -1;
  Rational hi = 1;

  Interval bound(const WeightSequence& seq, std::size_t n, unsigned bits) const {
    return seq.derived_enclose(n, bits) * (C * ipow(R, static_cast<long>(n)));
  }
};

// |F^{(n)}| <= 2^{n+1} M'_n on [-1, 1]: term k contributes at most 2^{n-k} M'_n.
inline GrowthEnvelope bang_envelope() { return GrowthEnvelope{2, 2, 2, -1, 1}; }

struct CpModel {
  unsigned long p = 1;
};
struct BangModel {
  std::shared_ptr<const BangFunction> function;
};
struct PowerSubstitutedModel;
using DifferentiableModel = std::variant<Polynomial, CpModel, BangModel, std::shared_ptr<const PowerSubstitutedModel>>;
// xi -> inner(xi^p).
struct PowerSubstitutedModel {
  DifferentiableModel inner;
  unsigned long p = 1;
};

inline DifferentiableModel power_substituted_model(DifferentiableModel inner, unsigned long p) {
  if (p < 1) throw std::invalid_argument("power substitution needs p >= 1");
  return std::make_shared<const PowerSubstitutedModel>(PowerSubstitutedModel{std::move(inner), p});
}

inline Interval model_derivative(const DifferentiableModel& model, std::size_t n, const Rational& x, unsigned bits) {
  struct Visitor {
    std::size_t n;
    const Rational& x;
    unsigned bits;
    Interval operator()(const Polynomial& f) const { return Interval::exact(f.derivative(n)(x), bits); }
    Interval operator()(const CpModel& c) const { return cp_derivative(c.p, n, x, Precision::interval(bits)).enclose(bits); }
    Interval operator()(const BangModel& b) const {
      if (!b.function) throw std::invalid_argument("Bang model without a function");
      return bang_derivative_enclose(*b.function, n, x);
    }
    Interval operator()(const std::shared_ptr<const PowerSubstitutedModel>& ps) const {
      Rational y = ipow(x, static_cast<long>(ps->p));
      if (n == 0) return model_derivative(ps->inner, 0, y, bits);
      std::vector<Interval> outer;
      for (std::size_t k = 0; k <= n; ++k) outer.push_back(model_derivative(ps->inner, k, y, bits));
      return composite_derivative(outer, Polynomial::monomial(ps->p).jet(x, n), n);
    }
  };
  return std::visit(Visitor{n, x, bits}, model);
}

struct NormEstimate {
  Interval value;  // encloses the sampled maximum; its lower end bounds the true sup from below
  std::size_t n = 0;
  Rational x;
  bool window_relative = true;
};

// max over n <= n_max and grid points x of |f^{(n)}(x)| / (r^n n! M_n). Ties
// within enclosure resolution keep the first sample in (n, x) order.
inline NormEstimate class_norm(const DifferentiableModel& model, const WeightSequence& seq, const Rational& lo,
                               const Rational& hi, const Rational& r, std::size_t n_max, std::size_t grid_points,
                               unsigned bits = default_precision_bits()) {
  if (r <= 0) throw std::domain_error("class norm needs r > 0");
  auto grid = uniform_grid(lo, hi, grid_points);
  unsigned work = bits + 32;
  std::optional<NormEstimate> best;
  for (std::size_t n = 0; n <= n_max; ++n) {
    Interval denom = seq.derived_enclose(n, work) * ipow(r, static_cast<long>(n));
    for (const auto& x : grid) {
      Interval v = abs(model_derivative(model, n, x, work)) / denom;
      if (!best) {
        best = NormEstimate{v, n, x, true};
        continue;
      }
      bool greater = certainly_gt(v, best->value);
      Interval acc = max(best->value, v);
      if (greater) {
        best->n = n;
        best->x = x;
      }
      best->value = std::move(acc);
    }
  }
  return *best;
}

// |f^{(n)}(x)| <= C R^n n! M_n for n <= n_max on a uniform grid of [lo, hi].
inline Verdict envelope_check(const DifferentiableModel& model, const WeightSequence& seq, const GrowthEnvelope& env,
                              std::size_t n_max, std::size_t grid_points, unsigned bits = default_precision_bits()) {
  Window w{0, static_cast<long>(n_max)};
  auto grid = uniform_grid(env.lo, env.hi, grid_points);
  unsigned work = bits + 32;
  for (std::size_t n = 0; n <= n_max; ++n) {
    Interval bound = env.bound(seq, n, work);
    for (const auto& x : grid) {
      Interval v = abs(model_derivative(model, n, x, work));
      if (certainly_le(v, bound)) continue;
      Witness wit{{static_cast<long>(n)}, "|f^(n)(x)| in " + Scalar(v).to_string(20),
                  "C R^n M'_n = " + Scalar(bound).to_string(20), "x = " + to_string(x)};
      if (certainly_gt(v, bound)) return Verdict::failing(w, wit);
      return Verdict::inconclusive(w, std::nullopt, "unresolved at n=" + std::to_string(n) + ", x=" + to_string(x));
    }
  }
  return Verdict::holding(w, "|f^(n)| <= C R^n n! M_n on the grid");
}

}  // namespace carleman
