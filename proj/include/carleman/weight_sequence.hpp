#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "carleman/interval.hpp"
#include "carleman/power_product.hpp"
#include "carleman/rational.hpp"
#include "carleman/scalar.hpp"

namespace carleman {

namespace detail {
struct SequenceNode;
}
using NodePtr = std::shared_ptr<const detail::SequenceNode>;

namespace family {

struct Analytic {};

struct Gevrey {
  Rational order;
};

// M_n = (log^{(k)}(offset + n))^(offset + n) / (log^{(k)} offset)^offset.
struct IteratedLog {
  unsigned k = 1;
  unsigned long offset = 0;
  bool default_offset = true;
};

struct PowerSub {
  NodePtr base;
  unsigned long p = 1;
};

// Greatest log-convex minorant of `base` on [0, window_end]; `vertices` are
// the lower-hull vertices in increasing order, always including 0 and window_end.
struct Regularized {
  NodePtr base;
  std::size_t window_end = 0;
  std::vector<std::size_t> vertices;
};

struct Custom {
  std::string name;
  std::vector<Rational> table;                          // normalized so table[0] == 1
  std::function<PowerProduct(std::size_t)> rule;        // used when table is empty
};

}  // namespace family

using Family = std::variant<family::Analytic, family::Gevrey, family::IteratedLog, family::PowerSub,
                            family::Regularized, family::Custom>;

namespace detail {

struct SequenceNode {
  explicit SequenceNode(Family f) : family(std::move(f)) {}

  Family family;

  mutable std::mutex mu;
  mutable std::map<std::size_t, std::optional<PowerProduct>> exact_cache;
  mutable std::map<std::pair<std::size_t, unsigned>, Interval> log_cache;
};

inline Interval iterated_log(unsigned k, const Interval& x) {
  Interval t = x;
  for (unsigned i = 0; i < k; ++i) t = log(t);
  return t;
}

}  // namespace detail

// e^e^...^e (k levels) and the smallest integer above it. Certified: the
// enclosure is refined until its floor is unambiguous.
inline unsigned long smallest_integer_above_tower(unsigned k) {
  if (k == 0) throw std::domain_error("tower height must be positive");
  if (k >= 4) throw RangeError("e tower of height >= 4 exceeds any representable offset");
  for (unsigned bits = 128; bits <= 4096; bits *= 2) {
    Interval t = Interval::from_long(1, bits);
    for (unsigned i = 0; i < k; ++i) t = exp(t);
    BigFloat flo(bits), fhi(bits);
    mpfr_floor(flo.get(), t.lower().get());
    mpfr_floor(fhi.get(), t.upper().get());
    if (flo == fhi && !(t.lower() == flo)) return mpfr_get_ui(flo.get(), MPFR_RNDN) + 1;
  }
  throw std::runtime_error("could not resolve floor of e tower");
}

class WeightSequence;

// Linear combination  log(exact) + sum_v coeff_v * log(base_v)  of logarithms.
// Lets comparisons between hull interpolants cancel symbolically.
struct LogCombination {
  PowerProduct exact;
  std::map<std::size_t, Rational> terms;
  NodePtr base;

  LogCombination& add(const LogCombination& o, const Rational& scale) {
    exact *= o.exact.pow(scale);
    for (const auto& [v, c] : o.terms) {
      Rational& slot = terms[v];
      slot += c * scale;
      if (slot == 0) terms.erase(v);
    }
    if (!base) base = o.base;
    return *this;
  }
};

class WeightSequence {
 public:
  explicit WeightSequence(NodePtr node) : node_(std::move(node)) {
    if (!node_) throw std::invalid_argument("WeightSequence: null node");
  }

  static WeightSequence analytic() { return make(family::Analytic{}); }

  static WeightSequence gevrey(const Rational& s) {
    if (s < 0) throw std::domain_error("Gevrey order must be nonnegative (weight sequences are increasing)");
    return make(family::Gevrey{s});
  }

  static WeightSequence iterated_log(unsigned k, std::optional<unsigned long> offset = std::nullopt) {
    if (k == 0) throw std::domain_error("iterated logarithm depth k must be >= 1");
    unsigned long n0 = offset ? *offset : smallest_integer_above_tower(k);
    if (n0 == 0) throw std::domain_error("offset must be positive");
    // log^{(k)} must be defined and positive at the first index.
    bool ok = false;
    try {
      ok = detail::iterated_log(k, Interval::from_long(static_cast<long>(n0), 128)).certainly_positive();
    } catch (const std::domain_error&) {
      ok = false;
    }
    if (!ok) {
      throw std::domain_error("offset " + std::to_string(n0) + " leaves log^(" + std::to_string(k) +
                              ") undefined or non-positive at the window start");
    }
    return make(family::IteratedLog{k, n0, !offset.has_value() || *offset == smallest_integer_above_tower(k)});
  }

  // Finite table; values are divided by table[0] so that M_0 = 1.
  static WeightSequence custom(std::vector<Rational> table, std::string name = "custom") {
    if (table.empty()) throw std::invalid_argument("custom table is empty");
    for (const auto& v : table) {
      if (v <= 0) throw std::domain_error("custom table values must be positive");
    }
    Rational m0 = table.front();
    for (auto& v : table) v /= m0;
    return make(family::Custom{std::move(name), std::move(table), {}});
  }

  // Generator rule producing exact values; normalized by rule(0).
  static WeightSequence custom_rule(std::string name, std::function<PowerProduct(std::size_t)> rule) {
    if (!rule) throw std::invalid_argument("custom rule is empty");
    return make(family::Custom{std::move(name), {}, std::move(rule)});
  }

  static WeightSequence power_substituted(const WeightSequence& base, unsigned long p) {
    if (p == 0) throw std::domain_error("power substitution needs p >= 1");
    return make(family::PowerSub{base.node_, p});
  }

  static WeightSequence regularized(const WeightSequence& base, std::size_t window_end,
                                    std::vector<std::size_t> vertices) {
    if (vertices.size() < 2 || vertices.front() != 0 || vertices.back() != window_end) {
      throw std::invalid_argument("regularized: hull vertices must span [0, window_end]");
    }
    return make(family::Regularized{base.node_, window_end, std::move(vertices)});
  }

  const Family& family() const { return node_->family; }
  const NodePtr& node() const { return node_; }

  template <class F>
  const F* as() const {
    return std::get_if<F>(&node_->family);
  }

  // Largest valid index, for sequences defined on a finite range.
  std::optional<std::size_t> last_index() const {
    return std::visit(
        [](const auto& f) -> std::optional<std::size_t> {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, family::PowerSub>) {
            auto b = WeightSequence(f.base).last_index();
            if (!b) return std::nullopt;
            return *b / f.p;
          } else if constexpr (std::is_same_v<T, family::Regularized>) {
            return f.window_end;
          } else if constexpr (std::is_same_v<T, family::Custom>) {
            if (f.table.empty()) return std::nullopt;
            return f.table.size() - 1;
          } else {
            return std::nullopt;
          }
        },
        node_->family);
  }

  void check_index(std::size_t n) const {
    if (auto last = last_index(); last && n > *last) {
      throw std::out_of_range("index " + std::to_string(n) + " beyond the last defined index " +
                              std::to_string(*last) + " of " + describe());
    }
  }

  // Symbolic exact value of M_n when it is algebraic over the rationals.
  std::optional<PowerProduct> exact_form(std::size_t n) const {
    check_index(n);
    {
      std::lock_guard lock(node_->mu);
      if (auto it = node_->exact_cache.find(n); it != node_->exact_cache.end()) return it->second;
    }
    std::optional<PowerProduct> r = compute_exact(n);
    std::lock_guard lock(node_->mu);
    node_->exact_cache.emplace(n, r);
    return r;
  }

  Interval log_enclose(std::size_t n, unsigned bits) const {
    check_index(n);
    {
      std::lock_guard lock(node_->mu);
      if (auto it = node_->log_cache.find({n, bits}); it != node_->log_cache.end()) return it->second;
    }
    Interval r = compute_log(n, bits);
    std::lock_guard lock(node_->mu);
    node_->log_cache.emplace(std::make_pair(n, bits), r);
    return r;
  }

  Interval enclose(std::size_t n, unsigned bits) const {
    if (auto pp = exact_form(n)) return pp->enclose(bits);
    return exp(log_enclose(n, bits + 32));
  }

  std::optional<PowerProduct> derived_exact_form(std::size_t n) const {
    auto pp = exact_form(n);
    if (!pp) return std::nullopt;
    return *pp * PowerProduct(Rational(factorial(n)));
  }

  Interval derived_log_enclose(std::size_t n, unsigned bits) const {
    return log_enclose(n, bits) + log(Interval::exact(Rational(factorial(n)), bits + 32));
  }

  Interval derived_enclose(std::size_t n, unsigned bits) const {
    if (auto pp = derived_exact_form(n)) return pp->enclose(bits);
    return exp(derived_log_enclose(n, bits + 32));
  }

  // log M_n as a symbolic combination, when one exists.
  std::optional<LogCombination> log_combination(std::size_t n) const {
    if (auto pp = exact_form(n)) return LogCombination{*pp, {}, nullptr};
    if (const auto* r = as<family::Regularized>()) {
      LogCombination c;
      c.base = r->base;
      auto [i, j] = bracket(*r, n);
      if (i == j) {
        c.terms[i] = 1;
      } else {
        c.terms[i] = fraction(Integer(static_cast<long>(j - n)), Integer(static_cast<long>(j - i)));
        c.terms[j] = fraction(Integer(static_cast<long>(n - i)), Integer(static_cast<long>(j - i)));
      }
      return c;
    }
    return std::nullopt;
  }

  // Canonical text form, accepted back by parse_sequence.
  std::string describe() const {
    return std::visit(
        [](const auto& f) -> std::string {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, family::Analytic>) {
            return "analytic";
          } else if constexpr (std::is_same_v<T, family::Gevrey>) {
            return "gevrey:" + f.order.get_str();
          } else if constexpr (std::is_same_v<T, family::IteratedLog>) {
            std::string s = "iterated_log:" + std::to_string(f.k);
            if (!f.default_offset) s += ":" + std::to_string(f.offset);
            return s;
          } else if constexpr (std::is_same_v<T, family::PowerSub>) {
            return "powersub:" + std::to_string(f.p) + ":" + WeightSequence(f.base).describe();
          } else if constexpr (std::is_same_v<T, family::Regularized>) {
            return "regularized:" + std::to_string(f.window_end) + ":" + WeightSequence(f.base).describe();
          } else {
            if (f.table.empty()) return "rule:" + f.name;
            std::string s = "custom:";
            for (std::size_t i = 0; i < f.table.size(); ++i) s += (i ? "," : "") + f.table[i].get_str();
            return s;
          }
        },
        node_->family);
  }

  friend bool same_sequence(const WeightSequence& a, const WeightSequence& b) {
    if (a.node_ == b.node_) return true;
    if (a.as<family::Custom>() && a.as<family::Custom>()->table.empty()) return false;
    return a.describe() == b.describe();
  }

 private:
  static WeightSequence make(Family f) { return WeightSequence(std::make_shared<const detail::SequenceNode>(std::move(f))); }

  static std::pair<std::size_t, std::size_t> bracket(const family::Regularized& r, std::size_t n) {
    auto it = std::lower_bound(r.vertices.begin(), r.vertices.end(), n);
    if (*it == n) return {n, n};
    return {*(it - 1), *it};
  }

  std::optional<PowerProduct> compute_exact(std::size_t n) const {
    return std::visit(
        [n](const auto& f) -> std::optional<PowerProduct> {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, family::Analytic>) {
            return PowerProduct{};
          } else if constexpr (std::is_same_v<T, family::Gevrey>) {
            return PowerProduct(Rational(factorial(n)), f.order);
          } else if constexpr (std::is_same_v<T, family::IteratedLog>) {
            if (n == 0) return PowerProduct{};
            return std::nullopt;
          } else if constexpr (std::is_same_v<T, family::PowerSub>) {
            return WeightSequence(f.base).exact_form(f.p * n);
          } else if constexpr (std::is_same_v<T, family::Regularized>) {
            WeightSequence base(f.base);
            auto [i, j] = bracket(f, n);
            auto bi = base.exact_form(i);
            if (i == j || !bi) return bi;
            auto bj = base.exact_form(j);
            if (!bj) return std::nullopt;
            Rational wi = fraction(Integer(static_cast<long>(j - n)), Integer(static_cast<long>(j - i)));
            Rational wj = fraction(Integer(static_cast<long>(n - i)), Integer(static_cast<long>(j - i)));
            return bi->pow(wi) * bj->pow(wj);
          } else {
            if (!f.table.empty()) return PowerProduct(f.table[n]);
            PowerProduct v = f.rule(n);
            if (n == 0) return PowerProduct{};
            return v / f.rule(0);
          }
        },
        node_->family);
  }

  Interval compute_log(std::size_t n, unsigned bits) const {
    if (auto pp = exact_form(n)) return pp->log_enclose(bits);
    return std::visit(
        [n, bits](const auto& f) -> Interval {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, family::IteratedLog>) {
            unsigned work = bits + 32;
            long m = static_cast<long>(f.offset + n);
            long m0 = static_cast<long>(f.offset);
            Interval top = log(detail::iterated_log(f.k, Interval::from_long(m, work))) * Rational(m);
            Interval bottom = log(detail::iterated_log(f.k, Interval::from_long(m0, work))) * Rational(m0);
            return top - bottom;
          } else if constexpr (std::is_same_v<T, family::PowerSub>) {
            return WeightSequence(f.base).log_enclose(f.p * n, bits);
          } else if constexpr (std::is_same_v<T, family::Regularized>) {
            WeightSequence base(f.base);
            auto [i, j] = bracket(f, n);
            if (i == j) return base.log_enclose(i, bits);
            Interval li = base.log_enclose(i, bits + 16), lj = base.log_enclose(j, bits + 16);
            return (li * Rational(static_cast<long>(j - n)) + lj * Rational(static_cast<long>(n - i))) /
                   Rational(static_cast<long>(j - i));
          } else {
            throw std::logic_error("sequence family without a log enclosure");
          }
        },
        node_->family);
  }

  NodePtr node_;
};

// M_n in the requested representation.
inline Scalar value(const WeightSequence& seq, std::size_t n, const Precision& prec = Precision::interval()) {
  unsigned work = prec.mode == Mode::floating ? prec.bits + 32 : prec.bits;
  if (auto pp = seq.exact_form(n)) {
    if (auto q = pp->exact()) return render(*q, prec);
    return render(pp->enclose(work), prec);
  }
  return render(seq.enclose(n, work), prec);
}

// M'_n = n! M_n.
inline Scalar derived_value(const WeightSequence& seq, std::size_t n, const Precision& prec = Precision::interval()) {
  unsigned work = prec.mode == Mode::floating ? prec.bits + 32 : prec.bits;
  if (auto pp = seq.derived_exact_form(n)) {
    if (auto q = pp->exact()) return render(*q, prec);
    return render(pp->enclose(work), prec);
  }
  return render(seq.derived_enclose(n, work), prec);
}

// m_k = M'_{k+1} / M'_k.
inline Scalar ratio(const WeightSequence& seq, std::size_t k, const Precision& prec = Precision::interval()) {
  unsigned work = prec.mode == Mode::floating ? prec.bits + 32 : prec.bits;
  auto a = seq.derived_exact_form(k + 1);
  auto b = a ? seq.derived_exact_form(k) : std::nullopt;
  if (a && b) {
    PowerProduct q = *a / *b;
    if (auto r = q.exact()) return render(*r, prec);
    return render(q.enclose(work), prec);
  }
  return render(exp(seq.derived_log_enclose(k + 1, work + 16) - seq.derived_log_enclose(k, work + 16)), prec);
}

inline Interval ratio_enclose(const WeightSequence& seq, std::size_t k, unsigned bits) {
  return ratio(seq, k, Precision::interval(bits)).interval();
}

}  // namespace carleman
