#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "carleman/scalar.hpp"
#include "carleman/seqcore.hpp"
#include "carleman/verdict.hpp"
#include "carleman/weight_sequence.hpp"

namespace carleman {

// sum_{n=0}^{N} M_n / ((n+1) M_{n+1}).
inline Scalar dc_partial_sum(const WeightSequence& seq, std::size_t N, const Precision& prec = Precision::interval()) {
  seq.check_index(N + 1);
  unsigned work = prec.mode == Mode::floating ? prec.bits + 32 : prec.bits + 16;
  std::optional<Rational> exact_sum = Rational(0);
  Interval sum = Interval::from_long(0, work);
  for (std::size_t n = 0; n <= N; ++n) {
    auto a = seq.exact_form(n);
    auto b = a ? seq.exact_form(n + 1) : std::nullopt;
    std::optional<PowerProduct> term_pp;
    if (a && b) term_pp = *a / *b;
    Rational scale(1, static_cast<long>(n + 1));
    if (exact_sum && term_pp) {
      if (auto q = term_pp->exact()) {
        *exact_sum += *q * scale;
        continue;
      }
    }
    if (exact_sum) {
      sum += Interval::exact(*exact_sum, work);
      exact_sum.reset();
    }
    Interval term = term_pp ? term_pp->enclose(work) : exp(seq.log_enclose(n, work) - seq.log_enclose(n + 1, work));
    sum += term * scale;
  }
  if (exact_sum) return render(*exact_sum, prec);
  return render(sum, prec);
}

namespace oracle {

// Global quasianalyticity for built-in families: Holds/Fails with the reason,
// nullopt when no oracle applies.
inline std::optional<std::pair<bool, std::string>> quasianalytic(const WeightSequence& seq) {
  if (seq.as<family::Analytic>()) return std::pair{true, "constant sequence: harmonic series diverges"};
  if (const auto* g = seq.as<family::Gevrey>()) {
    if (g->order == 0) return std::pair{true, "Gevrey order 0 is the analytic class"};
    return std::pair{false, "terms ~ (n+1)^{-1-s}: convergent p-series for s > 0"};
  }
  if (seq.as<family::IteratedLog>()) {
    return std::pair{true, "iterated-log sequence: divergence by Cauchy condensation"};
  }
  if (const auto* ps = seq.as<family::PowerSub>()) {
    WeightSequence base(ps->base);
    if (ps->p == 1) return quasianalytic(base);
    // Flatten nested substitutions: PowerSub(PowerSub(s, p), q) = PowerSub(s, pq).
    if (const auto* inner = base.as<family::PowerSub>()) {
      return quasianalytic(WeightSequence::power_substituted(WeightSequence(inner->base), inner->p * ps->p));
    }
    if (base.as<family::Analytic>()) return quasianalytic(base);
    if (base.as<family::Gevrey>()) return quasianalytic(base);
    if (const auto* il = base.as<family::IteratedLog>()) {
      if (il->k > 1) return std::pair{true, "M_{pn} for iterated logs with k > 1: quasianalytic"};
      return std::pair{false, "M_{pn} for k = 1 and p > 1: not quasianalytic"};
    }
  }
  return std::nullopt;
}

inline std::optional<std::string> derivation_closed(const WeightSequence& seq) {
  if (seq.as<family::Analytic>()) return "ratios identically 1";
  if (seq.as<family::Gevrey>()) return "((n+1)^s)^{1/n} is bounded";
  if (seq.as<family::IteratedLog>()) return "iterated-log sequence is closed under derivatives";
  if (const auto* ps = seq.as<family::PowerSub>()) {
    if (derivation_closed(WeightSequence(ps->base))) return "M_{p(n+1)}/M_{pn} grows subexponentially in n";
  }
  return std::nullopt;
}

}  // namespace oracle

inline constexpr std::size_t kDefaultDcTerms = 64;

// Family oracle where one exists; otherwise Inconclusive with partial-sum
// diagnostics, since divergence cannot be observed on a finite window.
inline Verdict quasianalytic_verdict(const WeightSequence& seq, std::size_t trend_terms = kDefaultDcTerms) {
  if (auto o = oracle::quasianalytic(seq)) {
    Window all{0, -1};
    if (o->first) return Verdict::holding(all, o->second, true);
    Verdict v;
    v.outcome = Outcome::fails;
    v.window = all;
    v.global = true;
    v.provenance = o->second;
    v.witness = Witness{{}, "sum M_n/((n+1)M_{n+1})", "infinity", "series converges"};
    return v;
  }
  std::size_t N = trend_terms;
  if (auto last = seq.last_index()) N = std::min(N, *last == 0 ? 0 : *last - 1);
  std::vector<double> partial;
  double last_term = 0;
  for (std::size_t n = 0; n <= N; ++n) {
    partial.push_back(dc_partial_sum(seq, n, Precision::interval(128)).to_double());
    last_term = partial.size() > 1 ? partial.back() - partial[partial.size() - 2] : partial.back();
  }
  Trend t = make_trend(partial);
  t.last_term = last_term;
  if (N >= 2) {
    std::size_t half = N / 2;
    t.log_slope = (partial[N] - partial[half]) / (std::log(double(N + 1)) - std::log(double(half + 1)));
  }
  return Verdict::inconclusive(Window{0, static_cast<long>(N)}, t, "no family oracle; divergence not finitely observable");
}

struct WindowEstimate {
  Scalar value;   // maximum over the window
  long argmax = 0;
  Verdict verdict;
};

namespace detail {

// (a / b)^{1/n} for exact symbolic a, b.
inline Scalar nth_root_of_quotient(const PowerProduct& a, const PowerProduct& b, long n, unsigned bits) {
  PowerProduct q = (a / b).pow(Rational(1, n));
  if (auto r = q.exact()) return Scalar(*r);
  return Scalar(q.enclose(bits));
}

inline WindowEstimate max_root_over_window(const std::function<Scalar(long)>& root_at, Window window,
                                           const Precision& prec) {
  if (window.empty() || window.first < 1) throw std::invalid_argument("window must be nonempty and start at n >= 1");
  std::vector<Scalar> samples;
  std::vector<double> trace;
  for (long n = window.first; n <= window.last; ++n) {
    samples.push_back(root_at(n));
    trace.push_back(samples.back().to_double());
  }
  bool all_exact = std::all_of(samples.begin(), samples.end(), [](const Scalar& s) { return s.is_exact(); });
  std::size_t best = 0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    bool greater = all_exact ? samples[i].exact() > samples[best].exact()
                             : compare(samples[i].enclose(prec.bits).midpoint(),
                                       samples[best].enclose(prec.bits).midpoint()) > 0;
    if (greater) best = i;
  }
  WindowEstimate est;
  est.argmax = window.first + static_cast<long>(best);
  if (all_exact) {
    est.value = render(samples[best].exact(), prec);
  } else {
    // Encloses the true maximum even when near-ties blur the argmax.
    Interval acc = samples[0].enclose(prec.bits);
    for (const auto& s : samples) acc = max(acc, s.enclose(prec.bits));
    est.value = render(acc, prec);
  }
  est.verdict.trend = make_trend(trace);
  return est;
}

}  // namespace detail

// max over the window of (M_{n+1}/M_n)^{1/n}.
inline WindowEstimate derivation_closure_estimate(const WeightSequence& seq, Window window = kDefaultWindow,
                                                  const Precision& prec = Precision::interval()) {
  seq.check_index(static_cast<std::size_t>(window.last) + 1);
  unsigned bits = prec.bits + 16;
  auto root_at = [&](long n) -> Scalar {
    auto i = static_cast<std::size_t>(n);
    auto a = seq.exact_form(i + 1), b = seq.exact_form(i);
    if (a && b) return detail::nth_root_of_quotient(*a, *b, n, bits);
    return Scalar(exp((seq.log_enclose(i + 1, bits) - seq.log_enclose(i, bits)) / Rational(n)));
  };
  WindowEstimate est = detail::max_root_over_window(root_at, window, prec);
  auto trend = est.verdict.trend;
  if (auto why = oracle::derivation_closed(seq)) {
    est.verdict = Verdict::holding(window, *why, true);
  } else {
    est.verdict = Verdict::inconclusive(window, trend, "bounded on window; no family oracle");
  }
  return est;
}

// max over the window of (M_n/N_n)^{1/n}; bounded iff Q(M) is contained in Q(N).
inline WindowEstimate inclusion_estimate(const WeightSequence& m, const WeightSequence& n_seq,
                                         Window window = kDefaultWindow, const Precision& prec = Precision::interval()) {
  m.check_index(static_cast<std::size_t>(window.last));
  n_seq.check_index(static_cast<std::size_t>(window.last));
  unsigned bits = prec.bits + 16;
  auto root_at = [&](long n) -> Scalar {
    auto i = static_cast<std::size_t>(n);
    auto a = m.exact_form(i), b = n_seq.exact_form(i);
    if (a && b) return detail::nth_root_of_quotient(*a, *b, n, bits);
    return Scalar(exp((m.log_enclose(i, bits) - n_seq.log_enclose(i, bits)) / Rational(n)));
  };
  WindowEstimate est = detail::max_root_over_window(root_at, window, prec);
  auto trend = est.verdict.trend;
  if (same_sequence(m, n_seq)) {
    est.verdict = Verdict::holding(window, "identical sequences", true);
  } else if (m.as<family::Analytic>() && oracle::increasing_globally(n_seq)) {
    est.verdict = Verdict::holding(window, "M_n = 1 <= N_n for nondecreasing N with N_0 = 1", true);
  } else {
    est.verdict = Verdict::inconclusive(window, trend, "no family oracle for this pair");
  }
  return est;
}

}  // namespace carleman
