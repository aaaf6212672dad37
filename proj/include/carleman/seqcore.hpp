#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "carleman/scalar.hpp"
#include "carleman/verdict.hpp"
#include "carleman/weight_sequence.hpp"

namespace carleman {

enum class Which { base, derived };

inline WeightSequence build_iterated_log(unsigned k, std::optional<unsigned long> offset = std::nullopt) {
  return WeightSequence::iterated_log(k, offset);
}

namespace oracle {

// Families whose base sequence is log-convex for every index.
inline std::optional<std::string> log_convex_globally(const WeightSequence& seq) {
  if (seq.as<family::Analytic>()) return "constant sequence";
  if (seq.as<family::Gevrey>()) return "(n!)^s is log-convex for s >= 0";
  if (const auto* il = seq.as<family::IteratedLog>()) {
    if (il->default_offset) return "(log^(k) n)^n is log-convex for n >= n_k";
    return std::nullopt;
  }
  if (const auto* ps = seq.as<family::PowerSub>()) {
    auto inner = log_convex_globally(WeightSequence(ps->base));
    if (inner) return "subsequence M_{pn} of a log-convex sequence";
    return std::nullopt;
  }
  return std::nullopt;
}

inline std::optional<std::string> increasing_globally(const WeightSequence& seq) {
  if (seq.as<family::Analytic>()) return "constant sequence";
  if (seq.as<family::Gevrey>()) return "(n!)^s is nondecreasing for s >= 0";
  if (const auto* il = seq.as<family::IteratedLog>()) {
    if (il->default_offset) return "log-convex with M_1 >= M_0";
    return std::nullopt;
  }
  if (const auto* ps = seq.as<family::PowerSub>()) {
    if (increasing_globally(WeightSequence(ps->base))) return "subsequence of a nondecreasing sequence";
  }
  return std::nullopt;
}

}  // namespace oracle

namespace detail {

inline void require_window(const WeightSequence& seq, Window w, std::size_t lookahead) {
  if (w.empty()) throw std::invalid_argument("window is empty");
  if (w.first < 0) throw std::invalid_argument("window starts below 0");
  seq.check_index(static_cast<std::size_t>(w.last) + lookahead);
}

inline LogCombination log_form(const WeightSequence& seq, std::size_t n, Which which) {
  LogCombination c = *seq.log_combination(n);
  if (which == Which::derived) c.exact *= PowerProduct(Rational(factorial(n)));
  return c;
}

// Certified sign decision for a log combination: true if <= 0, false if > 0.
inline std::optional<bool> nonpositive(const LogCombination& c, unsigned bits) {
  if (c.terms.empty()) {
    if (auto cmp = compare(c.exact, PowerProduct{})) return *cmp <= 0;
  }
  return refine(
      [&](unsigned b) -> std::optional<bool> {
        Interval s = c.exact.log_enclose(b);
        if (!c.terms.empty()) {
          WeightSequence base(c.base);
          for (const auto& [v, coeff] : c.terms) s += base.log_enclose(v, b + 16) * coeff;
        }
        if (s.upper().sign() <= 0) return true;
        if (s.lower().sign() > 0) return false;
        return std::nullopt;
      },
      bits);
}

inline Interval log_enclose(const WeightSequence& seq, std::size_t n, Which which, unsigned bits) {
  return which == Which::base ? seq.log_enclose(n, bits) : seq.derived_log_enclose(n, bits);
}

// Decides  sum_i coeff_i * log M_{n_i}  <= 0.
inline std::optional<bool> log_relation_nonpositive(const WeightSequence& seq,
                                                    const std::vector<std::pair<std::size_t, long>>& terms,
                                                    Which which, unsigned bits) {
  bool symbolic = true;
  for (const auto& [n, c] : terms) symbolic = symbolic && seq.log_combination(n).has_value();
  if (symbolic) {
    LogCombination acc;
    for (const auto& [n, c] : terms) acc.add(log_form(seq, n, which), Rational(c));
    return nonpositive(acc, bits);
  }
  return refine(
      [&](unsigned b) -> std::optional<bool> {
        Interval s = Interval::from_long(0, b);
        for (const auto& [n, c] : terms) s += log_enclose(seq, n, which, b) * Rational(c);
        if (s.upper().sign() <= 0) return true;
        if (s.lower().sign() > 0) return false;
        return std::nullopt;
      },
      bits);
}

inline std::string value_string(const WeightSequence& seq, std::size_t n, Which which) {
  Interval v = which == Which::base ? seq.enclose(n, 128) : seq.derived_enclose(n, 128);
  return Scalar(v).to_string(20);
}

}  // namespace detail

// Holds iff M_n <= M_{n+1} for every n in the window.
inline Verdict is_increasing(const WeightSequence& seq, Window window = kDefaultWindow,
                             unsigned bits = default_precision_bits()) {
  detail::require_window(seq, window, 1);
  for (long n = window.first; n <= window.last; ++n) {
    auto i = static_cast<std::size_t>(n);
    auto r = detail::log_relation_nonpositive(seq, {{i, 1}, {i + 1, -1}}, Which::base, bits);
    if (!r) {
      return Verdict::inconclusive(window, std::nullopt,
                                   "comparison at n=" + std::to_string(n) + " unresolved at max precision");
    }
    if (!*r) {
      return Verdict::failing(window, Witness{{n}, "M_" + std::to_string(n) + " = " + detail::value_string(seq, i, Which::base),
                                              "M_" + std::to_string(n + 1) + " = " + detail::value_string(seq, i + 1, Which::base),
                                              "M_n > M_{n+1}"});
    }
  }
  if (auto why = oracle::increasing_globally(seq)) return Verdict::holding(window, *why, true);
  return Verdict::holding(window, "checked on window");
}

// Holds iff M_n^2 <= M_{n-1} M_{n+1} for every n in the window (or the same
// for M'_n = n! M_n when `which` is derived).
inline Verdict is_log_convex(const WeightSequence& seq, Window window = kDefaultWindow, Which which = Which::base,
                             unsigned bits = default_precision_bits()) {
  if (window.first < 1) throw std::invalid_argument("log-convexity window must start at n >= 1");
  detail::require_window(seq, window, 1);
  for (long n = window.first; n <= window.last; ++n) {
    auto i = static_cast<std::size_t>(n);
    auto r = detail::log_relation_nonpositive(seq, {{i, 2}, {i - 1, -1}, {i + 1, -1}}, which, bits);
    if (!r) {
      return Verdict::inconclusive(window, std::nullopt,
                                   "comparison at n=" + std::to_string(n) + " unresolved at max precision");
    }
    if (!*r) {
      std::string sym = which == Which::base ? "M" : "M'";
      return Verdict::failing(
          window,
          Witness{{n}, sym + "_" + std::to_string(n) + "^2 with " + sym + "_n = " + detail::value_string(seq, i, which),
                  sym + "_{n-1} " + sym + "_{n+1} with values " + detail::value_string(seq, i - 1, which) + ", " +
                      detail::value_string(seq, i + 1, which),
                  sym + "_n^2 > " + sym + "_{n-1} " + sym + "_{n+1}"});
    }
  }
  // n! is log-convex, so base log-convexity carries over to the derived sequence.
  if (auto why = oracle::log_convex_globally(seq)) return Verdict::holding(window, *why, true);
  return Verdict::holding(window, "checked on window");
}

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline unsigned long parse_count(std::string_view s, const char* what) {
  std::string t(s);
  if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos) {
    throw std::invalid_argument(std::string("bad ") + what + ": '" + t + "'");
  }
  return std::stoul(t);
}

}  // namespace detail

}  // namespace carleman
