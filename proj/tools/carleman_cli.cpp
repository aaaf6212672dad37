// carleman: command-line driver for weight sequences, criteria, the
// combinatorial checks and Bang functions.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "carleman/bang.hpp"
#include "carleman/comb.hpp"
#include "carleman/criteria.hpp"
#include "carleman/report.hpp"
#include "carleman/seqcore.hpp"
#include "carleman/transforms.hpp"
#include "carleman/verify_suite.hpp"

namespace {

using namespace carleman;

struct Globals {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string emit;
  std::string format;
  std::optional<unsigned> precision;
  std::string window;
  std::optional<std::uint64_t> seed;

  RunConfig cfg;

  void resolve() {
    if (!config_path.empty()) cfg = load_config(config_path);
    for (const auto& kv : overrides) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set " + kv, kv, "expected key=value");
      cfg.set(detail::trim(kv.substr(0, eq)), kv.substr(eq + 1), "--set");
    }
    if (precision) cfg.set("precision", std::to_string(*precision), "--precision");
    if (!window.empty()) cfg.set("window", window, "--window");
    if (seed) cfg.set("seed", std::to_string(*seed), "--seed");
    if (!format.empty()) cfg.set("format", format, "--format");
  }

  void write(const std::string& text) const {
    if (emit.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(emit, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + emit);
    out << text;
    if (!out) throw std::runtime_error("write failed for " + emit);
  }

  // Tables default to CSV; --format json switches them.
  int output(const Table& t) const {
    write(t.render(format.empty() ? "csv" : cfg.format));
    return 0;
  }

  int output(Report r) const {
    r.config = cfg.echo();
    r.sort();
    if (emit.empty()) {
      std::cout << render_report(r, cfg.format);
    } else {
      emit_report(r, emit, cfg.format);
      for (const auto& rec : r.records) {
        std::cout << rec.id << ": " << to_string(rec.verdict);
        if (!rec.witness.empty()) std::cout << " (" << rec.witness << ")";
        std::cout << "\n";
      }
    }
    return exit_code(r);
  }

  Precision interval() const { return Precision::interval(cfg.precision); }
};

Mode parse_mode(const std::string& s) {
  if (s == "exact") return Mode::exact;
  if (s == "float") return Mode::floating;
  if (s == "interval") return Mode::interval;
  throw std::invalid_argument("mode must be exact, float or interval");
}

Precision precision_for(Mode m, unsigned bits) {
  switch (m) {
    case Mode::exact: return Precision::exact();
    case Mode::floating: return Precision::floating(bits);
    case Mode::interval: return Precision::interval(bits);
  }
  return Precision::interval(bits);
}

std::string cell(const std::function<Scalar()>& f) {
  try {
    return f().to_string(30);
  } catch (const std::out_of_range&) {
    return "";
  }
}

std::vector<unsigned long> count_list(const std::string& text, const char* what) {
  std::vector<unsigned long> out;
  for (const auto& part : detail::split(text, ',')) out.push_back(detail::parse_count(detail::trim(part), what));
  return out;
}

std::vector<Rational> rational_list(const std::string& text) {
  std::vector<Rational> out;
  for (const auto& part : detail::split(text, ',')) out.push_back(parse_rational(detail::trim(part)));
  return out;
}

Record estimate_record(const std::string& id, const std::string& anchor, const WindowEstimate& est) {
  Record r = make_record(id, anchor, est.verdict);
  Interval v = est.value.enclose(256);
  r.lower = v.lower_string(30);
  r.upper = v.upper_string(30);
  std::string where = "argmax n = " + std::to_string(est.argmax);
  r.witness = r.witness.empty() ? where : where + "; " + r.witness;
  return r;
}

struct BangFlags {
  std::string sequence;
  std::string oscillator;
  unsigned long p = 2;
  std::size_t max_order = 24;
  unsigned tail_bits = 64;
  std::optional<std::size_t> terms;

  void attach(CLI::App* sub) {
    sub->add_option("--sequence", sequence, "weight sequence (default: bang_sequence from config)");
    sub->add_option("--oscillator", oscillator, "cosine or cp (default: cosine for p = 2, cp otherwise)")
        ->check(CLI::IsMember({"cosine", "cp"}));
    sub->add_option("--p", p, "power p")->check(CLI::PositiveNumber);
    sub->add_option("--max-order", max_order, "highest derivative order served at the tail target");
    sub->add_option("--tail-bits", tail_bits, "relative tail target 2^-bits");
    sub->add_option("--terms", terms, "override the truncation K");
  }

  BangOptions options(const RunConfig& cfg) const {
    BangOptions o;
    o.p = p;
    o.oscillator = oscillator.empty() ? (p == 2 ? Oscillator::cosine : Oscillator::cp)
                                      : (oscillator == "cosine" ? Oscillator::cosine : Oscillator::cp);
    o.max_order = max_order;
    o.tail_bits = tail_bits;
    o.terms = terms;
    o.bits = cfg.precision;
    return o;
  }

  WeightSequence seq(const RunConfig& cfg) const { return parse_sequence(sequence.empty() ? cfg.bang_sequence : sequence); }

  std::shared_ptr<const BangFunction> build(const RunConfig& cfg) const {
    return std::make_shared<const BangFunction>(BangFunction::build(seq(cfg), options(cfg)));
  }
};

// bang | cp:<p> | poly:<c0>,<c1>,... | powersub:<p>:<model>
DifferentiableModel parse_model(const std::string& text, const std::function<std::shared_ptr<const BangFunction>()>& bang) {
  auto colon = text.find(':');
  std::string head = text.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "bang") return BangModel{bang()};
  if (head == "cp") return CpModel{detail::parse_count(rest, "p")};
  if (head == "poly") return Polynomial(rational_list(rest));
  if (head == "powersub") {
    auto c = rest.find(':');
    if (c == std::string::npos) throw std::invalid_argument("powersub model needs <p>:<model>");
    return power_substituted_model(parse_model(rest.substr(c + 1), bang), detail::parse_count(rest.substr(0, c), "p"));
  }
  throw std::invalid_argument("unknown model '" + text + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Denjoy-Carleman weight sequences, criteria and Bang functions"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config_path, "flat key=value config file")->check(CLI::ExistingFile);
  app.add_option("--set", g.overrides, "config override key=value (repeatable)")->allow_extra_args(false);
  app.add_option("--emit", g.emit, "write output to this path instead of stdout");
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--precision", g.precision, "mantissa bits (>= 64)");
  app.add_option("--window", g.window, "index window first,last");
  app.add_option("--seed", g.seed, "seed for randomized checks");

  std::function<int()> action;

  // seq
  auto* seq = app.add_subcommand("seq", "inspect a weight sequence")->require_subcommand(1);
  std::string seq_text, mode = "interval";
  std::size_t from = 0, to = 10;
  auto* seq_show = seq->add_subcommand("show", "tabulate M_n, M'_n = n! M_n and m_n = M'_{n+1}/M'_n");
  seq_show->add_option("sequence", seq_text, "sequence, e.g. iterated_log:2")->required();
  seq_show->add_option("--from", from);
  seq_show->add_option("--to", to);
  seq_show->add_option("--mode", mode, "exact, float or interval");
  seq_show->callback([&] {
    action = [&] {
      WeightSequence s = parse_sequence(seq_text);
      Precision prec = precision_for(parse_mode(mode), g.cfg.precision);
      Table t{{"n", "M_n", "M'_n", "m_n"}, {}};
      for (std::size_t n = from; n <= to; ++n) {
        t.rows.push_back({std::to_string(n), cell([&] { return value(s, n, prec); }),
                          cell([&] { return derived_value(s, n, prec); }), cell([&] { return ratio(s, n, prec); })});
      }
      return g.output(t);
    };
  });
  auto* seq_test = seq->add_subcommand("test", "certify monotonicity and log-convexity on the window");
  seq_test->add_option("sequence", seq_text)->required();
  seq_test->callback([&] {
    action = [&] {
      WeightSequence s = parse_sequence(seq_text);
      Window w = g.cfg.window;
      if (auto last = s.last_index()) w.last = std::min<long>(w.last, static_cast<long>(*last) - 1);
      Report r;
      r.records.push_back(make_record("seq.increasing", "M_n <= M_{n+1}", is_increasing(s, w, g.cfg.precision)));
      r.records.push_back(
          make_record("seq.log_convex", "M_n^2 <= M_{n-1} M_{n+1}", is_log_convex(s, w, Which::base, g.cfg.precision)));
      r.records.push_back(make_record("seq.log_convex_derived", "M'_n^2 <= M'_{n-1} M'_{n+1}",
                                      is_log_convex(s, w, Which::derived, g.cfg.precision)));
      return g.output(r);
    };
  });

  // transform
  auto* tr = app.add_subcommand("transform", "power substitution and log-convex regularization")->require_subcommand(1);
  unsigned long tr_p = 2;
  std::size_t tr_n = 0;
  auto* tr_ps = tr->add_subcommand("powersub", "tabulate M_{pn} and M'_{pn}/n^{(p-1)n}");
  tr_ps->add_option("sequence", seq_text)->required();
  tr_ps->add_option("--p", tr_p)->check(CLI::PositiveNumber);
  tr_ps->add_option("--to", to);
  tr_ps->callback([&] {
    action = [&] {
      WeightSequence s = parse_sequence(seq_text);
      WeightSequence ps = power_substitution(s, tr_p);
      Precision prec = g.interval();
      Table t{{"n", "M_n", "M_{pn}", "M'_{pn}/n^{(p-1)n}"}, {}};
      for (std::size_t n = 0; n <= to; ++n) {
        t.rows.push_back({std::to_string(n), cell([&] { return value(s, n, prec); }),
                          cell([&] { return value(ps, n, prec); }),
                          cell([&] { return derived_power_substitution(s, tr_p, n, prec); })});
      }
      return g.output(t);
    };
  });
  auto* tr_reg = tr->add_subcommand("regularize", "greatest log-convex minorant on [0, N]");
  tr_reg->add_option("sequence", seq_text)->required();
  tr_reg->add_option("--N", tr_n, "window end")->required();
  tr_reg->callback([&] {
    action = [&] {
      WeightSequence s = parse_sequence(seq_text);
      WeightSequence reg = log_convex_regularization(s, Window{0, static_cast<long>(tr_n)}, g.cfg.precision);
      Precision prec = g.interval();
      Table t{{"n", "M_n", "regularized"}, {}};
      for (std::size_t n = 0; n <= tr_n; ++n) {
        t.rows.push_back({std::to_string(n), value(s, n, prec).to_string(30), value(reg, n, prec).to_string(30)});
      }
      return g.output(t);
    };
  });

  // criteria
  auto* cr = app.add_subcommand("criteria", "Denjoy-Carleman sum, derivation closure, inclusion")->require_subcommand(1);
  std::size_t dc_n = kDefaultDcTerms;
  std::string other_text;
  auto* cr_dc = cr->add_subcommand("dc", "partial sums of M_n/((n+1) M_{n+1}) as a CSV curve");
  cr_dc->add_option("sequence", seq_text)->required();
  cr_dc->add_option("--N", dc_n, "last partial sum");
  cr_dc->callback([&] {
    action = [&] {
      WeightSequence s = parse_sequence(seq_text);
      Table t{{"N", "lower", "upper"}, {}};
      for (std::size_t n = 0; n <= dc_n; ++n) {
        Interval v = dc_partial_sum(s, n, g.interval()).enclose(g.cfg.precision);
        t.rows.push_back({std::to_string(n), v.lower_string(30), v.upper_string(30)});
      }
      return g.output(t);
    };
  });
  auto* cr_q = cr->add_subcommand("quasianalytic", "decide divergence of the Denjoy-Carleman sum");
  cr_q->add_option("sequence", seq_text)->required();
  cr_q->add_option("--N", dc_n, "partial sums used for the trend when no oracle applies");
  cr_q->callback([&] {
    action = [&] {
      WeightSequence s = parse_sequence(seq_text);
      Report r;
      r.records.push_back(make_record("criteria.quasianalytic", "sum M_n/((n+1) M_{n+1}) = infinity",
                                      quasianalytic_verdict(s, dc_n)));
      return g.output(r);
    };
  });
  auto* cr_cl = cr->add_subcommand("closure", "max over the window of (M_{n+1}/M_n)^{1/n}");
  cr_cl->add_option("sequence", seq_text)->required();
  cr_cl->callback([&] {
    action = [&] {
      WeightSequence s = parse_sequence(seq_text);
      Report r;
      r.records.push_back(estimate_record("criteria.closure", "sup_n (M_{n+1}/M_n)^{1/n} < infinity",
                                          derivation_closure_estimate(s, g.cfg.window, g.interval())));
      return g.output(r);
    };
  });
  auto* cr_in = cr->add_subcommand("inclusion", "max over the window of (M_n/N_n)^{1/n}");
  cr_in->add_option("M", seq_text)->required();
  cr_in->add_option("N", other_text)->required();
  cr_in->callback([&] {
    action = [&] {
      Report r;
      r.records.push_back(estimate_record("criteria.inclusion", "M_n <= C^n N_n",
                                          inclusion_estimate(parse_sequence(seq_text), parse_sequence(other_text),
                                                             g.cfg.window, g.interval())));
      return g.output(r);
    };
  });

  // comb
  auto* cb = app.add_subcommand("comb", "coefficients of log^k(1+u) and the derivative estimates")->require_subcommand(1);
  unsigned long ck = 2, cn = 10, cp = 2;
  std::string p_set_text, x_grid_text, x_text = "1";
  auto* cb_coef = cb->add_subcommand("coefficients", "c_{k,n} = [x^n] (sum x^i/i)^k next to the composition sum");
  cb_coef->add_option("--k", ck)->check(CLI::PositiveNumber);
  cb_coef->add_option("--N", cn, "last coefficient");
  cb_coef->callback([&] {
    action = [&] {
      auto series = log_power_coefficients(ck, cn);
      Table t{{"n", "c_{k,n}", "composition_sum"}, {}};
      for (unsigned long n = ck; n <= cn; ++n) {
        std::string oracle = n <= kCompositionGuard ? to_string(composition_sum_oracle(ck, n)) : "";
        t.rows.push_back({std::to_string(n), to_string(series.coefficient(n)), oracle});
      }
      return g.output(t);
    };
  });
  auto* cb_l1 = cb->add_subcommand("coeff-bound", "c_{k,n} <= (2e)^n k!/n^k");
  cb_l1->add_option("--k-max", ck);
  cb_l1->add_option("--n-max", cn);
  cb_l1->callback([&] {
    action = [&] {
      unsigned long km = cb_l1->count("--k-max") ? ck : g.cfg.coeff_bound_k_max;
      unsigned long nm = cb_l1->count("--n-max") ? cn : g.cfg.coeff_bound_n_max;
      Report r;
      r.records.push_back(make_record("comb.coefficient_bound", "c_{k,n} <= (2e)^n k!/n^k", lemma1_check(km, nm, g.cfg.precision)));
      return g.output(r);
    };
  });
  auto* cb_l2 = cb->add_subcommand("alpha-bound", "|alpha_k^(n)(x,x)| <= (2e)^n n^(n-k) x^(-(pn-k)/p)");
  cb_l2->add_option("--p-set", p_set_text, "comma-separated p values");
  cb_l2->add_option("--n-max", cn);
  cb_l2->add_option("--x-grid", x_grid_text, "comma-separated positive rationals");
  cb_l2->callback([&] {
    action = [&] {
      auto ps = p_set_text.empty() ? g.cfg.p_set : count_list(p_set_text, "p");
      auto xs = x_grid_text.empty() ? g.cfg.x_grid : rational_list(x_grid_text);
      unsigned long nm = cb_l2->count("--n-max") ? cn : g.cfg.alpha_bound_n_max;
      Report r;
      r.records.push_back(make_record("comb.alpha_bound", "|alpha_k^(n)(x,x)| <= (2e)^n n^(n-k) x^(-(pn-k)/p)",
                                      lemma2_check(ps, nm, xs, g.cfg.precision)));
      r.records.push_back(make_record("comb.b_bound", "|b_n| <= (2e)^n/n^k", b_bound_check(ps, nm, g.cfg.precision)));
      return g.output(r);
    };
  });
  auto* cb_st = cb->add_subcommand("stirling", "1/(pn-k)! <= e^(pn)/n^(pn-k) for all k < pn");
  cb_st->add_option("--p-set", p_set_text);
  cb_st->add_option("--n-max", cn);
  cb_st->callback([&] {
    action = [&] {
      auto ps = p_set_text.empty() ? g.cfg.p_set : count_list(p_set_text, "p");
      unsigned long nm = cb_st->count("--n-max") ? cn : g.cfg.stirling_n_max;
      Report r;
      r.records.push_back(make_record("comb.stirling", "1/(pn-k)! <= e^(pn)/n^(pn-k) for all k < pn",
                                      stirling_sweep(ps, nm, g.cfg.precision)));
      return g.output(r);
    };
  });
  auto* cb_root = cb->add_subcommand("root", "coefficients a_i of (1+u)^{1/p} - 1");
  cb_root->add_option("--p", cp)->check(CLI::Range(2UL, 1000000UL));
  cb_root->add_option("--N", cn);
  cb_root->callback([&] {
    action = [&] {
      auto a = root_series_coefficients(cp, cn);
      Table t{{"i", "a_i", "|a_i|"}, {}};
      for (unsigned long i = 1; i <= cn; ++i) {
        t.rows.push_back({std::to_string(i), to_string(a.coefficient(i)), to_string(root_coefficient_magnitude(cp, i))});
      }
      return g.output(t);
    };
  });
  auto* cb_alpha = cb->add_subcommand("alpha", "diagonal derivatives alpha_k^(n)(x,x) for k <= n");
  cb_alpha->add_option("--p", cp)->check(CLI::Range(2UL, 1000000UL));
  cb_alpha->add_option("--n", cn);
  cb_alpha->add_option("--x", x_text, "positive rational");
  cb_alpha->callback([&] {
    action = [&] {
      Rational x = parse_rational(x_text);
      Table t{{"k", "alpha_k^(n)(x,x)"}, {}};
      for (unsigned long k = 1; k <= cn; ++k) {
        t.rows.push_back({std::to_string(k), alpha_diag_derivative(cp, k, cn, x, g.interval()).to_string(30)});
      }
      return g.output(t);
    };
  });

  // bang
  auto* bg = app.add_subcommand("bang", "Bang functions built from a log-convex sequence")->require_subcommand(1);
  BangFlags bf;
  auto bang_record = [&](const std::function<std::vector<Record>(const BangFunction&)>& body) {
    Report r;
    try {
      auto B = bf.build(g.cfg);
      Record c = make_record("bang.construction", "M'_n log-convex, tail <= M'_n 2^(n-K+1)",
                             Verdict::holding(Window{1, static_cast<long>(B->terms())}, ""));
      c.witness = "K = " + std::to_string(B->terms()) + (B->tail_global() ? "" : ", gate checked on [1, K] only");
      r.records.push_back(c);
      for (auto& rec : body(*B)) r.records.push_back(std::move(rec));
    } catch (const BangConstructionError& e) {
      Record c = make_record("bang.construction", "M'_n log-convex", e.gate());
      c.witness = std::string(e.what()) + "; " + c.witness;
      r.records.push_back(c);
    }
    return g.output(r);
  };
  auto* bg_build = bg->add_subcommand("build", "run the log-convexity gate and report the truncation");
  bf.attach(bg_build);
  bg_build->callback([&] {
    action = [&] { return bang_record([](const BangFunction&) { return std::vector<Record>{}; }); };
  });

  std::size_t bn = 0;
  std::string xi_text = "0";
  auto* bg_eval = bg->add_subcommand("eval", "enclose F^(n)(xi) including the truncation tail");
  bf.attach(bg_eval);
  bg_eval->add_option("--n", bn, "derivative order");
  bg_eval->add_option("--xi", xi_text, "rational point in [-1, 1]");
  bg_eval->callback([&] {
    action = [&] {
      auto B = bf.build(g.cfg);
      Rational xi = parse_rational(xi_text);
      Interval v = bang_derivative_enclose(*B, bn, xi);
      Table t{{"n", "xi", "lower", "upper", "relative_tail"}, {}};
      t.rows.push_back({std::to_string(bn), to_string(xi), v.lower_string(30), v.upper_string(30),
                        detail::rational_text(B->relative_tail(bn))});
      return g.output(t);
    };
  });

  std::optional<std::size_t> bounds_n;
  auto* bg_bounds = bg->add_subcommand("bounds", "certify |F^(pn)(0)| >= M'_pn, the tail and the induced germ");
  bf.attach(bg_bounds);
  bg_bounds->add_option("--n-max", bounds_n, "largest n (default bang_n_max, or cp_variant_n_max for p > 2)");
  bg_bounds->callback([&] {
    action = [&] {
      return bang_record([&](const BangFunction& B) {
        std::string tag = std::string(to_string(B.oscillator())) + std::to_string(B.p());
        std::size_t nmax = bounds_n ? *bounds_n : (B.p() == 2 ? g.cfg.bang_n_max : g.cfg.cp_variant_n_max);
        std::vector<Record> out;
        out.push_back(detail::lower_bound_record("bang." + tag + ".lower_bound", "|F^(pn)(0)| >= M'_pn", B, nmax));
        out.push_back(detail::tail_record("bang." + tag + ".tail", B, std::min(B.p() * nmax, B.options().max_order),
                                          g.cfg.truncation_bits));
        Verdict induced = Verdict::holding(Window{0, static_cast<long>(nmax)}, "");
        for (std::size_t n = 0; n <= nmax; ++n) {
          Verdict v = induced_f_derivative(B, n, g.interval()).lower_bound;
          if (!v.holds()) {
            induced = v;
            break;
          }
        }
        out.push_back(make_record("bang." + tag + ".induced", "|f^(n)(0)| >= n! M'_pn/(pn)!", induced));
        return out;
      });
    };
  });

  std::string model_text = "bang", r_text = "2", lo_text = "-1", hi_text = "1";
  std::size_t norm_n = 8, norm_grid = 21;
  auto* bg_norm = bg->add_subcommand("norm", "sampled class norm sup |f^(n)(x)| / (r^n n! M_n)");
  bf.attach(bg_norm);
  bg_norm->add_option("--model", model_text, "bang, cp:<p>, poly:<c0>,<c1>,... or powersub:<p>:<model>");
  bg_norm->add_option("--r", r_text, "norm radius");
  bg_norm->add_option("--n-max", norm_n);
  bg_norm->add_option("--grid", norm_grid, "grid points");
  bg_norm->add_option("--lo", lo_text);
  bg_norm->add_option("--hi", hi_text);
  bg_norm->callback([&] {
    action = [&] {
      auto model = parse_model(model_text, [&] { return bf.build(g.cfg); });
      NormEstimate e = class_norm(model, bf.seq(g.cfg), parse_rational(lo_text), parse_rational(hi_text),
                                  parse_rational(r_text), norm_n, norm_grid, g.cfg.precision);
      Table t{{"lower", "upper", "n", "x", "window_relative"}, {}};
      t.rows.push_back({e.value.lower_string(30), e.value.upper_string(30), std::to_string(e.n), to_string(e.x),
                        e.window_relative ? "true" : "false"});
      return g.output(t);
    };
  });

  // verify
  auto* vf = app.add_subcommand("verify", "run the full verification suite");
  vf->callback([&] { action = [&] { return g.output(run_verify_suite(g.cfg)); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageExit;
  }

  try {
    g.resolve();
    return action();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsageExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageExit;
  }
}
