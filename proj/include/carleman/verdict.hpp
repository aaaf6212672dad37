#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "carleman/interval.hpp"

namespace carleman {

enum class Outcome { holds, fails, inconclusive };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::holds: return "Holds";
    case Outcome::fails: return "Fails";
    case Outcome::inconclusive: return "Inconclusive";
  }
  return "?";
}

inline std::optional<Outcome> parse_outcome(const std::string& s) {
  if (s == "Holds") return Outcome::holds;
  if (s == "Fails") return Outcome::fails;
  if (s == "Inconclusive") return Outcome::inconclusive;
  return std::nullopt;
}

struct Window {
  long first = 1;
  long last = 64;

  bool empty() const { return last < first; }
  long size() const { return empty() ? 0 : last - first + 1; }
  friend bool operator==(const Window&, const Window&) = default;
};

inline constexpr Window kDefaultWindow{1, 64};

// Where and how a claim was refuted. `at` holds the index tuple, e.g. {n} or {k, n}.
struct Witness {
  std::vector<long> at;
  std::string lhs;
  std::string rhs;
  std::string detail;
};

// Diagnostics for claims that finite evidence cannot settle.
struct Trend {
  std::vector<double> tail;  // last few observed values
  double growth_ratio = 0;   // last / first value of the tail
  std::string direction;     // "increasing", "decreasing", "flat"
  double last_term = 0;      // last summand, for partial-sum trends
  double log_slope = 0;      // d(partial sum) / d(log N) over the second half
};

struct Verdict {
  Outcome outcome = Outcome::inconclusive;
  Window window{};
  // True when the claim is settled for every index, not just the window.
  bool global = false;
  std::string provenance;
  std::optional<Witness> witness;
  std::optional<Trend> trend;

  bool holds() const { return outcome == Outcome::holds; }
  bool fails() const { return outcome == Outcome::fails; }

  static Verdict holding(Window w, std::string provenance = {}, bool global = false) {
    Verdict v;
    v.outcome = Outcome::holds;
    v.window = w;
    v.global = global;
    v.provenance = std::move(provenance);
    return v;
  }
  static Verdict failing(Window w, Witness witness, std::string provenance = {}) {
    Verdict v;
    v.outcome = Outcome::fails;
    v.window = w;
    v.witness = std::move(witness);
    v.provenance = std::move(provenance);
    return v;
  }
  static Verdict inconclusive(Window w, std::optional<Trend> trend = {}, std::string provenance = {}) {
    Verdict v;
    v.outcome = Outcome::inconclusive;
    v.window = w;
    v.trend = std::move(trend);
    v.provenance = std::move(provenance);
    return v;
  }
};

inline Trend make_trend(const std::vector<double>& values, std::size_t tail = 8) {
  Trend t;
  std::size_t start = values.size() > tail ? values.size() - tail : 0;
  t.tail.assign(values.begin() + static_cast<long>(start), values.end());
  if (t.tail.empty()) {
    t.direction = "flat";
    return t;
  }
  double first = t.tail.front(), last = t.tail.back();
  t.growth_ratio = first != 0 ? last / first : 0;
  double rel = first != 0 ? (last - first) / std::abs(first) : last - first;
  if (rel > 1e-9) {
    t.direction = "increasing";
  } else if (rel < -1e-9) {
    t.direction = "decreasing";
  } else {
    t.direction = "flat";
  }
  return t;
}

// Precision schedule for certified comparisons: start at `bits`, double up to
// `max_bits`. `attempt(bits)` returns an outcome or nullopt when unresolved.
inline constexpr unsigned kMaxRefinementBits = 8192;

inline std::optional<bool> refine(const std::function<std::optional<bool>(unsigned)>& attempt, unsigned bits,
                                  unsigned max_bits = kMaxRefinementBits) {
  for (unsigned b = bits; b <= max_bits; b *= 2) {
    if (auto r = attempt(b)) return r;
  }
  return std::nullopt;
}

// Sound three-way comparison of two quantities given as enclosure builders:
// true if lhs <= rhs is certified, false if lhs > rhs is certified.
inline std::optional<bool> certify_le(const std::function<Interval(unsigned)>& lhs,
                                      const std::function<Interval(unsigned)>& rhs, unsigned bits,
                                      unsigned max_bits = kMaxRefinementBits) {
  return refine(
      [&](unsigned b) -> std::optional<bool> {
        Interval l = lhs(b), r = rhs(b);
        if (certainly_le(l, r)) return true;
        if (certainly_gt(l, r)) return false;
        return std::nullopt;
      },
      bits, max_bits);
}

}  // namespace carleman
