#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "carleman/rational.hpp"
#include "carleman/scalar.hpp"
#include "carleman/seqcore.hpp"
#include "carleman/transforms.hpp"
#include "carleman/verdict.hpp"

namespace carleman {

inline constexpr const char* kToolName = "carleman";
inline constexpr const char* kToolVersion = "0.1.0";

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& where, const std::string& field, const std::string& message)
      : std::runtime_error(where + ", field '" + field + "': " + message), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct RunConfig {
  unsigned precision = default_precision_bits();
  Window window{1, 64};
  unsigned long comp_k_max = 6;
  unsigned long comp_n_max = 18;
  unsigned long coeff_bound_k_max = 40;
  unsigned long coeff_bound_n_max = 40;
  std::vector<unsigned long> p_set{2, 3, 5};
  unsigned long alpha_bound_n_max = 25;
  std::vector<Rational> x_grid{Rational(1, 4), Rational(1, 2), Rational(1), Rational(2)};
  unsigned long stirling_n_max = 60;
  unsigned long b_n_max = 30;
  std::string bang_sequence = "iterated_log:2";
  unsigned long bang_n_max = 10;
  unsigned long cp_variant_p = 3;
  unsigned long cp_variant_n_max = 6;
  unsigned long envelope_n_max = 12;
  unsigned long envelope_grid = 101;
  unsigned long cp_p_max = 5;
  unsigned long cp_grid = 51;
  std::vector<unsigned long> induced_p_set{2, 3};
  unsigned long induced_n_max = 8;
  unsigned long truncation_bits = 64;
  unsigned long remainder_cases = 200;
  unsigned long remainder_degree = 8;
  unsigned long remainder_n_max = 8;
  unsigned long transform_cases = 1000;
  unsigned long transform_window = 32;
  std::string format = "json";
  std::uint64_t seed = 20240601;
  bool timings = false;
  unsigned long jobs = 0;  // 0: one per hardware thread

  // Sweep bound capped by the window end.
  unsigned long capped(unsigned long bound) const {
    return std::min<unsigned long>(bound, static_cast<unsigned long>(window.last));
  }

  std::vector<std::pair<std::string, std::string>> echo() const;
  void set(const std::string& key, const std::string& value, const std::string& where);
};

namespace detail {

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

template <class T>
std::string join_values(const std::vector<T>& v) {
  std::vector<std::string> parts;
  for (const auto& x : v) {
    if constexpr (std::is_same_v<T, Rational>) {
      parts.push_back(to_string(x));
    } else {
      parts.push_back(std::to_string(x));
    }
  }
  return join(parts, ",");
}

}  // namespace detail

inline std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  return {
      {"b_n_max", std::to_string(b_n_max)},
      {"bang_n_max", std::to_string(bang_n_max)},
      {"bang_sequence", bang_sequence},
      {"comp_k_max", std::to_string(comp_k_max)},
      {"comp_n_max", std::to_string(comp_n_max)},
      {"cp_grid", std::to_string(cp_grid)},
      {"cp_p_max", std::to_string(cp_p_max)},
      {"cp_variant_n_max", std::to_string(cp_variant_n_max)},
      {"cp_variant_p", std::to_string(cp_variant_p)},
      {"envelope_grid", std::to_string(envelope_grid)},
      {"envelope_n_max", std::to_string(envelope_n_max)},
      {"format", format},
      {"induced_n_max", std::to_string(induced_n_max)},
      {"induced_p_set", detail::join_values(induced_p_set)},
      {"jobs", std::to_string(jobs)},
      {"coeff_bound_k_max", std::to_string(coeff_bound_k_max)},
      {"coeff_bound_n_max", std::to_string(coeff_bound_n_max)},
      {"alpha_bound_n_max", std::to_string(alpha_bound_n_max)},
      {"p_set", detail::join_values(p_set)},
      {"precision", std::to_string(precision)},
      {"remainder_cases", std::to_string(remainder_cases)},
      {"remainder_degree", std::to_string(remainder_degree)},
      {"remainder_n_max", std::to_string(remainder_n_max)},
      {"seed", std::to_string(seed)},
      {"stirling_n_max", std::to_string(stirling_n_max)},
      {"timings", timings ? "true" : "false"},
      {"transform_cases", std::to_string(transform_cases)},
      {"transform_window", std::to_string(transform_window)},
      {"truncation_bits", std::to_string(truncation_bits)},
      {"window", std::to_string(window.first) + "," + std::to_string(window.last)},
      {"x_grid", detail::join_values(x_grid)},
  };
}

inline void RunConfig::set(const std::string& key, const std::string& raw, const std::string& where) {
  std::string value = detail::trim(raw);
  auto fail = [&](const std::string& msg) { throw ConfigError(where, key, msg); };
  auto count = [&](unsigned long min) -> unsigned long {
    unsigned long v = 0;
    try {
      v = detail::parse_count(value, key.c_str());
    } catch (const std::exception&) {
      fail("expected a nonnegative integer, got '" + value + "'");
    }
    if (v < min) fail("must be >= " + std::to_string(min));
    return v;
  };
  auto count_list = [&](unsigned long min) {
    std::vector<unsigned long> out;
    for (const auto& part : detail::split(value, ',')) {
      std::string t = detail::trim(part);
      try {
        out.push_back(detail::parse_count(t, key.c_str()));
      } catch (const std::exception&) {
        fail("expected a comma-separated list of integers, got '" + value + "'");
      }
      if (out.back() < min) fail("entries must be >= " + std::to_string(min));
    }
    return out;
  };
  std::map<std::string, std::function<void()>> setters = {
      {"precision", [&] { precision = static_cast<unsigned>(count(64)); }},
      {"window",
       [&] {
         auto parts = count_list(0);
         if (parts.size() != 2) fail("expected 'first,last'");
         if (parts[0] < 1) fail("window must start at n >= 1");
         if (parts[1] < parts[0]) fail("window is empty");
         window = Window{static_cast<long>(parts[0]), static_cast<long>(parts[1])};
       }},
      {"comp_k_max", [&] { comp_k_max = count(1); }},
      {"comp_n_max",
       [&] {
         comp_n_max = count(1);
         if (comp_n_max > 25) fail("composition enumeration is limited to n <= 25");
       }},
      {"coeff_bound_k_max", [&] { coeff_bound_k_max = count(1); }},
      {"coeff_bound_n_max", [&] { coeff_bound_n_max = count(1); }},
      {"p_set", [&] { p_set = count_list(2); }},
      {"alpha_bound_n_max", [&] { alpha_bound_n_max = count(1); }},
      {"x_grid",
       [&] {
         x_grid.clear();
         for (const auto& part : detail::split(value, ',')) {
           Rational x;
           try {
             x = parse_rational(detail::trim(part));
           } catch (const std::exception&) {
             fail("bad rational '" + part + "'");
           }
           if (x <= 0) fail("grid values must be positive");
           x_grid.push_back(x);
         }
       }},
      {"stirling_n_max", [&] { stirling_n_max = count(1); }},
      {"b_n_max", [&] { b_n_max = count(1); }},
      {"bang_sequence",
       [&] {
         try {
           parse_sequence(value);
         } catch (const std::exception& e) {
           fail(e.what());
         }
         bang_sequence = value;
       }},
      {"bang_n_max", [&] { bang_n_max = count(0); }},
      {"cp_variant_p", [&] { cp_variant_p = count(1); }},
      {"cp_variant_n_max", [&] { cp_variant_n_max = count(0); }},
      {"envelope_n_max", [&] { envelope_n_max = count(0); }},
      {"envelope_grid", [&] { envelope_grid = count(1); }},
      {"cp_p_max", [&] { cp_p_max = count(1); }},
      {"cp_grid", [&] { cp_grid = count(1); }},
      {"induced_p_set", [&] { induced_p_set = count_list(1); }},
      {"induced_n_max", [&] { induced_n_max = count(0); }},
      {"truncation_bits", [&] { truncation_bits = count(1); }},
      {"remainder_cases", [&] { remainder_cases = count(0); }},
      {"remainder_degree", [&] { remainder_degree = count(0); }},
      {"remainder_n_max", [&] { remainder_n_max = count(1); }},
      {"transform_cases", [&] { transform_cases = count(0); }},
      {"transform_window", [&] { transform_window = count(2); }},
      {"format",
       [&] {
         if (value != "json" && value != "csv") fail("expected json or csv");
         format = value;
       }},
      {"seed",
       [&] {
         try {
           seed = std::stoull(value);
         } catch (const std::exception&) {
           fail("expected an unsigned integer");
         }
       }},
      {"timings",
       [&] {
         if (value != "true" && value != "false") fail("expected true or false");
         timings = value == "true";
       }},
      {"jobs", [&] { jobs = count(0); }},
  };
  auto it = setters.find(key);
  if (it == setters.end()) fail("unknown key");
  it->second();
}

// Flat key = value lines; '#' starts a comment.
inline RunConfig parse_config(std::istream& in, RunConfig cfg = {}) {
  std::string line;
  std::map<std::string, int> seen;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    std::string where = "config line " + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where, line, "expected key = value");
    std::string key = detail::trim(line.substr(0, eq));
    if (seen.count(key)) throw ConfigError(where, key, "duplicate key (first set on line " + std::to_string(seen[key]) + ")");
    seen[key] = lineno;
    cfg.set(key, line.substr(eq + 1), where);
  }
  return cfg;
}

inline RunConfig load_config(const std::string& path, RunConfig cfg = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file " + path, "path", "cannot open");
  return parse_config(in, std::move(cfg));
}

struct Record {
  std::string id;
  std::string anchor;  // the inequality or identity under test
  Outcome verdict = Outcome::inconclusive;
  std::string witness;
  std::string lower;
  std::string upper;
  std::optional<double> seconds;

  friend bool operator==(const Record&, const Record&) = default;
};

struct Report {
  std::string tool = kToolName;
  std::string version = kToolVersion;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<Record> records;
  std::map<std::string, std::string> metadata;  // non-deterministic data such as wall time

  void sort() {
    std::stable_sort(records.begin(), records.end(), [](const Record& a, const Record& b) { return a.id < b.id; });
  }

  friend bool operator==(const Report&, const Report&) = default;
};

inline std::string format_witness(const Witness& w) {
  std::vector<std::string> at;
  for (long i : w.at) at.push_back(std::to_string(i));
  std::string s = "at (" + detail::join(at, ",") + "): " + w.lhs + " vs " + w.rhs;
  if (!w.detail.empty()) s += " [" + w.detail + "]";
  return s;
}

inline std::string format_trend(const Trend& t) {
  std::ostringstream os;
  os.precision(12);
  os << "trend " << t.direction << ", growth ratio " << t.growth_ratio << ", last term " << t.last_term;
  return os.str();
}

// Witness column text for a verdict: the witness for Fails, trend or reason for
// Inconclusive, empty for Holds.
inline std::string witness_text(const Verdict& v) {
  if (v.witness) return format_witness(*v.witness);
  if (v.outcome == Outcome::inconclusive) {
    std::string s = v.provenance;
    if (v.trend) s += (s.empty() ? "" : "; ") + format_trend(*v.trend);
    return s;
  }
  return "";
}

// Exit status: 0 all Holds, 1 any Fails, 2 any Inconclusive (and no Fails).
inline int exit_code(const Report& r) {
  bool any_inconclusive = false;
  for (const auto& rec : r.records) {
    if (rec.verdict == Outcome::fails) return 1;
    if (rec.verdict == Outcome::inconclusive) any_inconclusive = true;
  }
  return any_inconclusive ? 2 : 0;
}

inline constexpr int kUsageExit = 3;

inline nlohmann::ordered_json to_json(const Report& r) {
  nlohmann::ordered_json j;
  j["tool"] = r.tool;
  j["version"] = r.version;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.config) cfg[k] = v;
  j["config"] = cfg;
  nlohmann::ordered_json recs = nlohmann::ordered_json::array();
  for (const auto& rec : r.records) {
    nlohmann::ordered_json o;
    o["id"] = rec.id;
    o["anchor"] = rec.anchor;
    o["verdict"] = to_string(rec.verdict);
    o["witness"] = rec.witness;
    o["lower"] = rec.lower;
    o["upper"] = rec.upper;
    o["seconds"] = rec.seconds ? nlohmann::ordered_json(*rec.seconds) : nlohmann::ordered_json(nullptr);
    recs.push_back(std::move(o));
  }
  j["records"] = recs;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.metadata) meta[k] = v;
  j["metadata"] = meta;
  return j;
}

inline Report report_from_json(const std::string& text) {
  auto j = nlohmann::ordered_json::parse(text);
  Report r;
  r.tool = j.at("tool").get<std::string>();
  r.version = j.at("version").get<std::string>();
  for (const auto& [k, v] : j.at("config").items()) r.config.emplace_back(k, v.get<std::string>());
  for (const auto& o : j.at("records")) {
    Record rec;
    rec.id = o.at("id").get<std::string>();
    rec.anchor = o.at("anchor").get<std::string>();
    auto outcome = parse_outcome(o.at("verdict").get<std::string>());
    if (!outcome) throw std::invalid_argument("bad verdict in report: " + o.at("verdict").dump());
    rec.verdict = *outcome;
    rec.witness = o.at("witness").get<std::string>();
    rec.lower = o.at("lower").get<std::string>();
    rec.upper = o.at("upper").get<std::string>();
    if (!o.at("seconds").is_null()) rec.seconds = o.at("seconds").get<double>();
    r.records.push_back(std::move(rec));
  }
  if (j.contains("metadata")) {
    for (const auto& [k, v] : j.at("metadata").items()) r.metadata[k] = v.get<std::string>();
  }
  return r;
}

// RFC 4180: quote fields containing separators, quotes or line breaks; double inner quotes.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string seconds_text(const std::optional<double>& s) {
  if (!s) return "";
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << *s;
  return os.str();
}

inline std::string to_csv(const Report& r) {
  std::string out = "id,anchor,verdict,witness,lower,upper,seconds\r\n";
  for (const auto& rec : r.records) {
    out += csv_field(rec.id) + "," + csv_field(rec.anchor) + "," + to_string(rec.verdict) + "," +
           csv_field(rec.witness) + "," + csv_field(rec.lower) + "," + csv_field(rec.upper) + "," +
           seconds_text(rec.seconds) + "\r\n";
  }
  return out;
}

inline std::string render_report(const Report& r, const std::string& format) {
  if (format == "csv") return to_csv(r);
  if (format == "json") return to_json(r).dump(2) + "\n";
  throw std::invalid_argument("unknown report format '" + format + "'");
}

inline void emit_report(const Report& r, const std::string& path, const std::string& format) {
  std::string text = render_report(r, format);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write report to " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

// Plain data output (sequence values, partial-sum curves, coefficients).
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const {
    auto line = [](const std::vector<std::string>& cells) {
      std::string out;
      for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + csv_field(cells[i]);
      return out + "\r\n";
    };
    std::string out = line(columns);
    for (const auto& r : rows) out += line(r);
    return out;
  }

  std::string to_json() const {
    nlohmann::ordered_json j;
    j["columns"] = columns;
    j["rows"] = rows;
    return j.dump(2) + "\n";
  }

  std::string render(const std::string& format) const { return format == "json" ? to_json() : to_csv(); }
};

inline Record make_record(std::string id, std::string anchor, const Verdict& v) {
  Record r;
  r.id = std::move(id);
  r.anchor = std::move(anchor);
  r.verdict = v.outcome;
  r.witness = witness_text(v);
  return r;
}

}  // namespace carleman
