#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "carleman/scalar.hpp"
#include "carleman/seqcore.hpp"
#include "carleman/weight_sequence.hpp"

namespace carleman {

class RegularizationInconclusive : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// n -> M_{pn}.
inline WeightSequence power_substitution(const WeightSequence& seq, unsigned long p) {
  return WeightSequence::power_substituted(seq, p);
}

// M'_{pn} / n^{(p-1)n}, the derived-sequence form of power substitution.
inline Scalar derived_power_substitution(const WeightSequence& seq, unsigned long p, std::size_t n,
                                         const Precision& prec = Precision::interval()) {
  if (p == 0) throw std::domain_error("power substitution needs p >= 1");
  if (n == 0) return render(Rational(1), prec);
  Rational scale(1);
  scale /= Rational(ipow(Integer(static_cast<unsigned long>(n)), (p - 1) * n));
  unsigned work = prec.mode == Mode::floating ? prec.bits + 32 : prec.bits;
  if (auto pp = seq.derived_exact_form(p * n)) {
    PowerProduct v = *pp * PowerProduct(scale);
    if (auto q = v.exact()) return render(*q, prec);
    return render(v.enclose(work), prec);
  }
  return render(seq.derived_enclose(p * n, work) * scale, prec);
}

// Greatest log-convex minorant on [0, N]: the exponential of the lower convex
// hull of the points (n, log M_n). Collinear points stay on the hull.
inline WeightSequence log_convex_regularization(const WeightSequence& seq, Window window,
                                                unsigned bits = default_precision_bits()) {
  if (window.first != 0) throw std::invalid_argument("regularization window must start at 0");
  if (window.last < 2) throw std::invalid_argument("regularization window needs N >= 2");
  auto n_max = static_cast<std::size_t>(window.last);
  seq.check_index(n_max);

  std::vector<std::size_t> hull;
  for (std::size_t k = 0; k <= n_max; ++k) {
    while (hull.size() >= 2) {
      std::size_t i = hull[hull.size() - 2], j = hull.back();
      // (k-i) log M_j - (k-j) log M_i - (j-i) log M_k <= 0  <=>  j on or below chord i--k.
      auto below = detail::log_relation_nonpositive(
          seq,
          {{j, static_cast<long>(k - i)}, {i, -static_cast<long>(k - j)}, {k, -static_cast<long>(j - i)}},
          Which::base, bits);
      if (!below) {
        throw RegularizationInconclusive("cannot decide hull membership of n=" + std::to_string(j) +
                                         " at maximum precision");
      }
      if (*below) break;
      hull.pop_back();
    }
    hull.push_back(k);
  }
  return WeightSequence::regularized(seq, n_max, std::move(hull));
}

// Parses the text form of a sequence:
//   analytic | gevrey:<s> | iterated_log:<k>[:<offset>] | custom:<v0>,<v1>,...
//   powersub:<p>:<sequence> | regularized:<N>:<sequence>
inline WeightSequence parse_sequence(std::string_view text) {
  std::string s(text);
  auto head_end = s.find(':');
  std::string head = s.substr(0, head_end);
  std::string rest = head_end == std::string::npos ? "" : s.substr(head_end + 1);
  auto need_rest = [&] {
    if (rest.empty()) throw std::invalid_argument("sequence '" + s + "' is missing parameters");
  };
  if (head == "analytic") {
    if (!rest.empty()) throw std::invalid_argument("analytic takes no parameters");
    return WeightSequence::analytic();
  }
  if (head == "gevrey") {
    need_rest();
    return WeightSequence::gevrey(parse_rational(rest));
  }
  if (head == "iterated_log") {
    need_rest();
    auto parts = detail::split(rest, ':');
    if (parts.size() > 2) throw std::invalid_argument("iterated_log takes k and an optional offset");
    auto k = static_cast<unsigned>(detail::parse_count(parts[0], "depth k"));
    std::optional<unsigned long> offset;
    if (parts.size() == 2) offset = detail::parse_count(parts[1], "offset");
    return WeightSequence::iterated_log(k, offset);
  }
  if (head == "custom") {
    need_rest();
    std::vector<Rational> table;
    for (const auto& v : detail::split(rest, ',')) table.push_back(parse_rational(v));
    return WeightSequence::custom(std::move(table));
  }
  if (head == "powersub" || head == "regularized") {
    need_rest();
    auto colon = rest.find(':');
    if (colon == std::string::npos) throw std::invalid_argument(head + " needs <param>:<sequence>");
    unsigned long param = detail::parse_count(rest.substr(0, colon), head == "powersub" ? "p" : "window end");
    WeightSequence inner = parse_sequence(rest.substr(colon + 1));
    if (head == "powersub") return power_substitution(inner, param);
    return log_convex_regularization(inner, Window{0, static_cast<long>(param)});
  }
  throw std::invalid_argument("unknown sequence family '" + head + "'");
}

}  // namespace carleman
