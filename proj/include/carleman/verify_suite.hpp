#pragma once

#include <mpfr.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "carleman/bang.hpp"
#include "carleman/comb.hpp"
#include "carleman/criteria.hpp"
#include "carleman/report.hpp"
#include "carleman/seqcore.hpp"
#include "carleman/transforms.hpp"

namespace carleman {

// Deterministic draws from a fixed-algorithm engine (the standard
// distributions are implementation-defined, which would break report identity).
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  long integer(long lo, long hi) { return lo + static_cast<long>(rng_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  Rational rational(long num_lo, long num_hi, long den_hi) {
    return fraction(Integer(integer(num_lo, num_hi)), Integer(integer(1, den_hi)));
  }

 private:
  std::mt19937_64 rng_;
};

namespace checks {

inline Verdict composition_sum_equality(unsigned long k_max, unsigned long n_max) {
  Window w{1, static_cast<long>(n_max)};
  for (unsigned long k = 1; k <= std::min(k_max, n_max); ++k) {
    TruncatedPowerSeries c = log_power_coefficients(k, n_max);
    for (unsigned long n = k; n <= n_max; ++n) {
      Rational oracle = composition_sum_oracle(k, n);
      if (c.coefficient(n) != oracle) {
        return Verdict::failing(w, Witness{{static_cast<long>(k), static_cast<long>(n)},
                                           "convolution " + to_string(c.coefficient(n)), "enumeration " + to_string(oracle),
                                           "c_{k,n} mismatch"});
      }
    }
  }
  return Verdict::holding(w, "convolution equals composition enumeration");
}

// a_i from the binomial series against the product formula, and |a_i| <= 1/i.
inline Verdict root_coefficients(const std::vector<unsigned long>& p_set, unsigned long n_max) {
  Window w{1, static_cast<long>(n_max)};
  for (unsigned long p : p_set) {
    TruncatedPowerSeries a = root_series_coefficients(p, n_max);
    for (unsigned long i = 1; i <= n_max; ++i) {
      Rational ai = a.coefficient(i), mag = root_coefficient_magnitude(p, i);
      if (abs(ai) != mag || abs(ai) > Rational(1, i)) {
        return Verdict::failing(w, Witness{{static_cast<long>(p), static_cast<long>(i)}, "a_i = " + to_string(ai),
                                           "magnitude " + to_string(mag) + ", cap 1/" + std::to_string(i), ""});
      }
    }
  }
  return Verdict::holding(w, "|a_i| matches the product formula and is <= 1/i");
}

inline Polynomial random_polynomial(Draw& d, long max_degree) {
  long deg = d.integer(0, max_degree);
  std::vector<Rational> c;
  for (long i = 0; i <= deg; ++i) c.push_back(d.rational(-20, 20, 9));
  return Polynomial(std::move(c));
}

// f^{(n)}(x) recovered from F(xi) = f(xi^p) against direct differentiation.
inline Verdict remainder_identity(std::uint64_t seed, unsigned long cases, long max_degree, unsigned long n_max) {
  Window w{1, static_cast<long>(n_max)};
  Draw d(seed);
  for (unsigned long c = 0; c < cases; ++c) {
    Polynomial f = random_polynomial(d, max_degree);
    unsigned long p = static_cast<unsigned long>(d.integer(2, 3));
    long b = d.integer(2, 16);
    Rational xi = fraction(Integer(d.integer(1, b - 1)), Integer(b));
    auto n = static_cast<std::size_t>(d.integer(1, static_cast<long>(n_max)));
    Rational x = ipow(xi, static_cast<long>(p));
    auto jet0 = f.jet(0, n);
    jet0.resize(n);
    Rational got = taylor_remainder_reconstruct(jet0, f.substitute_power(p).jet(xi, n), p, x, xi);
    Rational want = f.derivative(n)(x);
    if (got != want) {
      return Verdict::failing(w, Witness{{static_cast<long>(c), static_cast<long>(n)}, "reconstructed " + to_string(got),
                                         "direct " + to_string(want), "p = " + std::to_string(p) + ", xi = " + to_string(xi)});
    }
  }
  return Verdict::holding(w, std::to_string(cases) + " randomized cases, exact equality");
}

// Faa di Bruno against exact differentiation of the composed polynomial.
inline Verdict composite_rule(std::uint64_t seed, unsigned long cases, unsigned long n_max) {
  Window w{1, static_cast<long>(n_max)};
  Draw d(seed ^ 0x9e3779b97f4a7c15ULL);
  for (unsigned long c = 0; c < cases; ++c) {
    Polynomial f = random_polynomial(d, 4), g = random_polynomial(d, 4);
    Rational x = d.rational(-8, 8, 8);
    auto n = static_cast<std::size_t>(d.integer(1, static_cast<long>(n_max)));
    Rational got = composite_derivative(f.jet(g(x), n), g.jet(x, n), n);
    Rational want = f.compose(g).derivative(n)(x);
    if (got != want) {
      return Verdict::failing(w, Witness{{static_cast<long>(c), static_cast<long>(n)}, to_string(got), to_string(want),
                                         "x = " + to_string(x)});
    }
  }
  return Verdict::holding(w, std::to_string(cases) + " randomized polynomial compositions");
}

inline WeightSequence random_table(Draw& d, std::size_t length) {
  std::vector<Rational> t{Rational(1)};
  for (std::size_t i = 1; i < length; ++i) t.push_back(d.rational(1, 10000, 100));
  return WeightSequence::custom(std::move(t));
}

inline bool same_value(const WeightSequence& a, const WeightSequence& b, std::size_t n) {
  auto x = a.exact_form(n), y = b.exact_form(n);
  auto c = x && y ? compare(*x, *y) : std::nullopt;
  return c && *c == 0;
}

// Power-substitution identity and composition, and regularization as a
// log-convex, idempotent, monotone minorant, on random positive tables.
inline Verdict transform_laws(std::uint64_t seed, unsigned long cases, unsigned long window_end, unsigned bits) {
  Window w{0, static_cast<long>(window_end)};
  Draw d(seed ^ 0x5851f42d4c957f2dULL);
  auto fail = [&](unsigned long c, long n, const std::string& what) {
    return Verdict::failing(w, Witness{{static_cast<long>(c), n}, what, "", "case " + std::to_string(c)});
  };
  for (unsigned long c = 0; c < cases; ++c) {
    WeightSequence s = random_table(d, window_end + 1);
    WeightSequence id = power_substitution(s, 1);
    for (std::size_t n = 0; n <= window_end; ++n) {
      if (!same_value(id, s, n)) return fail(c, static_cast<long>(n), "PowerSub(s,1) differs from s");
    }
    auto p = static_cast<unsigned long>(d.integer(1, 4)), q = static_cast<unsigned long>(d.integer(1, 4));
    WeightSequence nested = power_substitution(power_substitution(s, p), q), flat = power_substitution(s, p * q);
    for (std::size_t n = 0; n <= window_end / (p * q); ++n) {
      if (!same_value(nested, flat, n)) return fail(c, static_cast<long>(n), "PowerSub(PowerSub(s,p),q) differs from PowerSub(s,pq)");
    }
    Window full{0, static_cast<long>(window_end)};
    WeightSequence r = log_convex_regularization(s, full, bits);
    for (std::size_t n = 0; n <= window_end; ++n) {
      auto cmp = compare(*r.exact_form(n), *s.exact_form(n));
      if (!cmp || *cmp > 0) return fail(c, static_cast<long>(n), "regularization exceeds the input");
    }
    Verdict lc = is_log_convex(r, Window{1, static_cast<long>(window_end) - 1}, Which::base, bits);
    if (!lc.holds()) return fail(c, lc.witness ? lc.witness->at[0] : -1, "regularization is not log-convex");
    WeightSequence rr = log_convex_regularization(r, full, bits);
    for (std::size_t n = 0; n <= window_end; ++n) {
      if (!same_value(rr, r, n)) return fail(c, static_cast<long>(n), "regularization is not idempotent");
    }
    // Raising one entry must not lower the minorant anywhere.
    std::vector<Rational> bumped;
    for (std::size_t n = 0; n <= window_end; ++n) bumped.push_back(*s.exact_form(n)->exact());
    auto at = static_cast<std::size_t>(d.integer(1, static_cast<long>(window_end)));
    bumped[at] *= Rational(1) + d.rational(0, 100, 10);
    WeightSequence rb = log_convex_regularization(WeightSequence::custom(bumped), full, bits);
    for (std::size_t n = 0; n <= window_end; ++n) {
      auto cmp = compare(*rb.exact_form(n), *r.exact_form(n));
      if (!cmp || *cmp < 0) return fail(c, static_cast<long>(n), "regularization is not monotone");
    }
  }
  return Verdict::holding(w, std::to_string(cases) + " randomized tables");
}

}  // namespace checks

namespace detail {

struct SuiteTask {
  std::string id;  // record id used if the task throws
  std::function<std::vector<Record>()> run;
};

inline std::string lower_text(const Interval& x) { return x.lower_string(30); }
inline std::string upper_text(const Interval& x) { return x.upper_string(30); }

inline std::string rational_text(const Rational& q) {
  return Interval::exact(q, 128).lower_string(30);
}

// Smallest |F^{(pn)}(0)| / M'_{pn} over n <= n_max, with the combined verdict.
inline Record lower_bound_record(const std::string& id, const std::string& anchor, const BangFunction& B,
                                 unsigned long n_max) {
  Verdict combined = Verdict::holding(Window{0, static_cast<long>(n_max)}, "");
  std::optional<Interval> worst;
  for (unsigned long n = 0; n <= n_max; ++n) {
    Verdict v = bang_lower_bound_certify(B, n);
    std::size_t order = B.p() * n;
    Interval ratio = abs(detail::bang_partial_sum(B, order, Rational(0))) / B.derived(order);
    if (!worst || compare(ratio.lower(), worst->lower()) < 0) worst = ratio;
    if (!v.holds()) {
      v.window = combined.window;
      combined = v;
      break;
    }
  }
  Record r = make_record(id, anchor, combined);
  if (worst) {
    r.lower = lower_text(*worst);
    r.upper = upper_text(*worst);
  }
  return r;
}

inline Record tail_record(const std::string& id, const BangFunction& B, std::size_t order, unsigned long target_bits) {
  Rational rel = B.relative_tail(order);
  Rational cap = ipow(Rational(2), -static_cast<long>(target_bits));
  Window w{static_cast<long>(order), static_cast<long>(order)};
  Verdict v = rel <= cap ? Verdict::holding(w, "")
                         : Verdict::failing(w, Witness{{static_cast<long>(order)}, "tail/M'_n = " + to_string(rel),
                                                       "2^-" + std::to_string(target_bits), "K = " + std::to_string(B.terms())});
  Record r = make_record(id, "tail <= M'_n 2^(n-K+1) <= 2^-" + std::to_string(target_bits) + " M'_n", v);
  r.lower = rational_text(rel);
  r.upper = rational_text(rel);
  if (!B.tail_global() && v.holds()) r.witness = "tail bound relies on log-convexity checked on [1, K] only";
  return r;
}

}  // namespace detail

inline Report run_verify_suite(const RunConfig& cfg) {
  using Clock = std::chrono::steady_clock;
  auto started = Clock::now();
  Report report;
  report.config = cfg.echo();
  const unsigned bits = cfg.precision;
  std::vector<detail::SuiteTask> tasks;

  auto single = [](std::string id, std::string anchor, std::function<Verdict()> fn) {
    return detail::SuiteTask{id, [id, anchor, fn] { return std::vector<Record>{make_record(id, anchor, fn())}; }};
  };

  unsigned long comp_n = std::min(cfg.capped(cfg.comp_n_max), kCompositionGuard);
  tasks.push_back(single("comb.composition_sum", "sum_{i_1+...+i_k=n} 1/(i_1...i_k) = c_{k,n}",
                         [=] { return checks::composition_sum_equality(cfg.comp_k_max, comp_n); }));
  tasks.push_back(single("comb.coefficient_bound", "c_{k,n} <= (2e)^n k!/n^k",
                         [=] { return lemma1_check(cfg.coeff_bound_k_max, cfg.capped(cfg.coeff_bound_n_max), bits); }));
  tasks.push_back(single("comb.root_coefficients", "|a_i| = (1/i!)(p-1)(2p-1)...((i-1)p-1)/p^i <= 1/i",
                         [=] { return checks::root_coefficients(cfg.p_set, cfg.capped(cfg.b_n_max)); }));
  tasks.push_back(single("comb.b_bound", "|b_n| <= (2e)^n/n^k",
                         [=] { return b_bound_check(cfg.p_set, cfg.capped(cfg.b_n_max), bits); }));
  tasks.push_back(single("comb.alpha_bound", "|alpha_k^(n)(x,x)| <= (2e)^n n^(n-k) x^(-(pn-k)/p)",
                         [=] { return lemma2_check(cfg.p_set, cfg.capped(cfg.alpha_bound_n_max), cfg.x_grid, bits); }));
  tasks.push_back(single("comb.stirling", "1/(pn-k)! <= e^(pn)/n^(pn-k) for all k < pn",
                         [=] { return stirling_sweep(cfg.p_set, cfg.capped(cfg.stirling_n_max), bits); }));
  tasks.push_back(single("comb.remainder_identity", "r_n^(n)(x) = sum_{k=1}^n R_n^(k)(xi) alpha_k^(n)(x,x)", [=] {
    return checks::remainder_identity(cfg.seed, cfg.remainder_cases, static_cast<long>(cfg.remainder_degree),
                                      cfg.capped(cfg.remainder_n_max));
  }));
  tasks.push_back(single("comb.composite_derivative", "(f o g)^(n) = sum_k f^(k)(g) (1/k!) d^n/dX^n (g(X)-g(x))^k", [=] {
    return checks::composite_rule(cfg.seed, cfg.remainder_cases, cfg.capped(cfg.remainder_n_max));
  }));
  tasks.push_back(single("cp.bound", "|C_p^(n)(x)| <= e on [-1,1]", [=] { return cp_bound_check(cfg.cp_p_max, cfg.cp_grid, bits); }));
  tasks.push_back(single("cp.periodicity", "C_p^(pn)(x) = C_p(x)",
                         [=] { return cp_periodicity_check(cfg.cp_p_max, cfg.cp_grid, bits); }));
  tasks.push_back(single("transforms.laws", "M^(1) = M, (M^(p))^(q) = M^(pq), regularization minorant/log-convex/idempotent/monotone", [=] {
    return checks::transform_laws(cfg.seed, cfg.transform_cases, cfg.capped(cfg.transform_window), bits);
  }));
  tasks.push_back(detail::SuiteTask{"criteria.dc.gevrey_1", [=] {
    auto N = static_cast<std::size_t>(cfg.window.last);
    Interval s = dc_partial_sum(WeightSequence::gevrey(1), N, Precision::interval(bits)).enclose(bits);
    Window w{0, static_cast<long>(N)};
    Verdict v = certainly_lt(s, Interval::from_long(2, bits))
                    ? Verdict::holding(w, "")
                    : Verdict::failing(w, Witness{{static_cast<long>(N)}, "partial sum " + Scalar(s).to_string(20), "2", ""});
    Record r = make_record("criteria.dc.gevrey_1", "sum_{n<=N} M_n/((n+1) M_{n+1}) < 2 for M_n = n!", v);
    r.lower = detail::lower_text(s);
    r.upper = detail::upper_text(s);
    return std::vector<Record>{r};
  }});

  struct FamilyClaim {
    std::string id, sequence;
    bool quasianalytic;
  };
  std::vector<FamilyClaim> family_claims = {
      {"analytic", "analytic", true},
      {"iterated_log_1", "iterated_log:1", true},
      {"iterated_log_2", "iterated_log:2", true},
      {"iterated_log_3", "iterated_log:3", true},
      {"powersub_2_iterated_log_2", "powersub:2:iterated_log:2", true},
      {"powersub_3_iterated_log_2", "powersub:3:iterated_log:2", true},
      {"powersub_2_iterated_log_3", "powersub:2:iterated_log:3", true},
      {"gevrey_1", "gevrey:1", false},
      {"powersub_2_iterated_log_1", "powersub:2:iterated_log:1", false},
      {"powersub_3_iterated_log_1", "powersub:3:iterated_log:1", false},
  };
  for (const auto& fc : family_claims) {
    std::string id = std::string(fc.quasianalytic ? "family.quasianalytic." : "family.not_quasianalytic.") + fc.id;
    tasks.push_back(detail::SuiteTask{id, [id, fc] {
      Verdict raw = quasianalytic_verdict(parse_sequence(fc.sequence));
      Outcome want = fc.quasianalytic ? Outcome::holds : Outcome::fails;
      Verdict v = raw;
      if (raw.outcome == want) {
        v = Verdict::holding(raw.window, raw.provenance, true);
      } else if (raw.outcome != Outcome::inconclusive) {
        v = Verdict::failing(raw.window, Witness{{}, "oracle verdict " + std::string(to_string(raw.outcome)),
                                                 "expected " + std::string(to_string(want)), raw.provenance});
      }
      Record r = make_record(id, fc.quasianalytic ? "sum M_n/((n+1) M_{n+1}) = infinity" : "sum M_n/((n+1) M_{n+1}) < infinity", v);
      if (v.holds()) r.witness = raw.provenance;
      return std::vector<Record>{r};
    }});
  }
  for (unsigned k = 1; k <= 3; ++k) {
    std::string name = "iterated_log_" + std::to_string(k);
    tasks.push_back(single("family.log_convex." + name, "(log^(k) n)^n is log-convex (M_n^2 <= M_{n-1} M_{n+1})",
                           [=] { return is_log_convex(WeightSequence::iterated_log(k), cfg.window, Which::base, bits); }));
    tasks.push_back(single("family.increasing." + name, "M_n <= M_{n+1}",
                           [=] { return is_increasing(WeightSequence::iterated_log(k), cfg.window, bits); }));
  }

  // Bang functions are built once and shared read-only by the checks below.
  WeightSequence bang_seq = parse_sequence(cfg.bang_sequence);
  std::map<unsigned long, std::size_t> orders;  // p -> highest derivative order needed
  auto need = [&](unsigned long p, std::size_t order) { orders[p] = std::max(orders[p], order); };
  need(2, std::max<std::size_t>(2 * cfg.capped(cfg.bang_n_max), cfg.capped(cfg.envelope_n_max)));
  need(cfg.cp_variant_p, cfg.cp_variant_p * cfg.capped(cfg.cp_variant_n_max));
  for (unsigned long p : cfg.induced_p_set) need(p, p * cfg.capped(cfg.induced_n_max));
  auto options_for = [&](unsigned long p, bool cosine) {
    BangOptions o;
    o.oscillator = cosine ? Oscillator::cosine : Oscillator::cp;
    o.p = p;
    o.max_order = orders[p];
    o.tail_bits = static_cast<unsigned>(cfg.truncation_bits);
    o.bits = bits;
    return o;
  };
  std::map<std::pair<bool, unsigned long>, std::future<std::shared_ptr<const BangFunction>>> builds;
  auto request = [&](bool cosine, unsigned long p) {
    auto key = std::pair{cosine, p};
    if (builds.count(key)) return;
    BangOptions o = options_for(p, cosine);
    builds[key] = std::async(std::launch::async, [bang_seq, o] {
      return std::make_shared<const BangFunction>(BangFunction::build(bang_seq, o));
    });
  };
  request(true, 2);
  request(false, cfg.cp_variant_p);
  for (unsigned long p : cfg.induced_p_set) request(p == 2, p);
  std::map<std::pair<bool, unsigned long>, std::shared_ptr<const BangFunction>> bang;
  std::optional<Record> gate_failure;
  for (auto& [key, fut] : builds) {
    try {
      bang[key] = fut.get();
    } catch (const BangConstructionError& e) {
      if (!gate_failure) {
        Verdict v = e.gate();
        if (!v.witness) v = Verdict::failing(v.window, Witness{{}, e.what(), "", v.provenance});
        gate_failure = make_record("bang.construction", "M'_n log-convex: (1/m_k)^(k-j) <= M'_j/M'_k", v);
        gate_failure->witness = std::string(e.what()) + "; " + gate_failure->witness;
      }
    }
  }
  if (gate_failure) {
    report.records.push_back(*gate_failure);
  } else {
    auto cosine = bang.at({true, 2});
    Verdict gate_ok = Verdict::holding(Window{1, static_cast<long>(cosine->terms())}, "");
    Record gate = make_record("bang.construction", "M'_n log-convex: (1/m_k)^(k-j) <= M'_j/M'_k", gate_ok);
    gate.witness = cosine->tail_global() ? "log-convexity of M' holds for every index by family oracle"
                                         : "log-convexity of M' checked on [1, K]";
    report.records.push_back(gate);
    unsigned long bn = cfg.capped(cfg.bang_n_max);
    tasks.push_back(detail::SuiteTask{"bang.cosine.lower_bound", [=] {
      return std::vector<Record>{detail::lower_bound_record("bang.cosine.lower_bound", "|F^(2n)(0)| >= M'_2n", *cosine, bn),
                                 detail::tail_record("bang.cosine.tail", *cosine, 2 * bn, cfg.truncation_bits)};
    }});
    auto cpf = bang.at({false, cfg.cp_variant_p});
    unsigned long cn = cfg.capped(cfg.cp_variant_n_max);
    std::string cp_tag = "bang.cp" + std::to_string(cfg.cp_variant_p);
    tasks.push_back(detail::SuiteTask{cp_tag + ".lower_bound", [=] {
      return std::vector<Record>{detail::lower_bound_record(cp_tag + ".lower_bound", "|F^(pn)(0)| >= M'_pn", *cpf, cn),
                                 detail::tail_record(cp_tag + ".tail", *cpf, cfg.cp_variant_p * cn, cfg.truncation_bits)};
    }});
    unsigned long en = cfg.capped(cfg.envelope_n_max);
    tasks.push_back(single("bang.envelope", "|F^(n)(xi)| <= 2^(n+1) M'_n on [-1,1]", [=] {
      return envelope_check(BangModel{cosine}, cosine->sequence(), bang_envelope(), en, cfg.envelope_grid, bits);
    }));
    unsigned long in = cfg.capped(cfg.induced_n_max);
    for (unsigned long p : cfg.induced_p_set) {
      auto B = bang.at({p == 2, p});
      std::string id = "bang.induced.p" + std::to_string(p);
      tasks.push_back(single(id, "|f^(n)(0)| = n!/(pn)! |F^(pn)(0)| >= n! M'_pn/(pn)!", [=] {
        Verdict all = Verdict::holding(Window{0, static_cast<long>(in)}, "");
        for (unsigned long n = 0; n <= in; ++n) {
          auto r = induced_f_derivative(*B, n);
          if (!r.lower_bound.holds()) {
            Verdict v = r.lower_bound;
            v.window = all.window;
            return v;
          }
        }
        return all;
      }));
    }
  }

  std::vector<std::vector<Record>> results(tasks.size());
  std::vector<double> seconds(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      auto t0 = Clock::now();
      try {
        results[i] = tasks[i].run();
      } catch (const std::exception& e) {
        Record r;
        r.id = tasks[i].id;
        r.verdict = Outcome::inconclusive;
        r.witness = std::string("check aborted: ") + e.what();
        results[i] = {r};
      }
      seconds[i] = std::chrono::duration<double>(Clock::now() - t0).count();
    }
  };
  unsigned long jobs = cfg.jobs ? cfg.jobs : std::max(1u, std::thread::hardware_concurrency());
  if (!mpfr_buildopt_tls_p()) jobs = 1;
  jobs = std::min<unsigned long>(jobs, tasks.size());
  std::vector<std::thread> pool;
  for (unsigned long j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < tasks.size(); ++i) {
    for (auto& r : results[i]) {
      if (cfg.timings) r.seconds = seconds[i];
      report.records.push_back(std::move(r));
    }
  }
  report.sort();
  if (cfg.timings) {
    report.metadata["total_seconds"] = std::to_string(std::chrono::duration<double>(Clock::now() - started).count());
  }
  return report;
}

}  // namespace carleman
