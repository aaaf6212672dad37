#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "carleman/report.hpp"
#include "carleman/verify_suite.hpp"

using namespace carleman;

namespace {

Record sample_record() {
  Record r;
  r.id = "comb.sample";
  r.anchor = "c_{k,n} <= (2e)^n k!/n^k";
  r.verdict = Outcome::fails;
  r.witness = "at (2,3): \"quoted\"\nsecond line";
  r.lower = "1.5e+00";
  r.upper = "2.5e+00";
  r.seconds = 0.25;
  return r;
}

// A small sweep that still touches every task of the suite.
RunConfig small_config() {
  RunConfig cfg;
  std::istringstream in(
      "window = 1,4\n"
      "coeff_bound_k_max = 4\n"
      "remainder_cases = 10\n"
      "transform_cases = 10\n"
      "transform_window = 8\n"
      "envelope_grid = 11\n"
      "envelope_n_max = 4\n"
      "cp_grid = 11\n"
      "cp_p_max = 3\n"
      "bang_n_max = 2\n"
      "cp_variant_n_max = 2\n"
      "induced_n_max = 2\n");
  return parse_config(in, cfg);
}

}  // namespace

TEST(ReportCsv, EmptyReportIsHeaderOnly) {
  EXPECT_EQ(to_csv(Report{}), "id,anchor,verdict,witness,lower,upper,seconds\r\n");
}

TEST(ReportCsv, SingleHoldsRecordIsOneRow) {
  Report r;
  r.records.push_back(make_record("a.b", "x <= y", Verdict::holding(Window{1, 2})));
  EXPECT_EQ(to_csv(r), "id,anchor,verdict,witness,lower,upper,seconds\r\na.b,x <= y,Holds,,,,\r\n");
}

TEST(ReportCsv, QuotesSpecialFields) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_field("two\nlines"), "\"two\nlines\"");
}

TEST(ReportJson, RoundTrip) {
  Report r;
  r.config = RunConfig{}.echo();
  r.records.push_back(sample_record());
  Record held = make_record("z.last", "a = b", Verdict::holding(Window{0, 1}));
  r.records.push_back(held);
  r.metadata["total_seconds"] = "1.000000";
  Report back = report_from_json(to_json(r).dump(2));
  EXPECT_EQ(back, r);
  EXPECT_FALSE(back.records[1].seconds.has_value());
}

TEST(ReportJson, FieldOrderAndNullSeconds) {
  Report r;
  r.records.push_back(make_record("x", "y", Verdict::holding(Window{0, 0})));
  auto j = to_json(r);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.at("records")[0].items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"id", "anchor", "verdict", "witness", "lower", "upper", "seconds"}));
  EXPECT_TRUE(j.at("records")[0].at("seconds").is_null());
}

TEST(ReportEmit, WritesFileAndSurfacesPathErrors) {
  Report r;
  r.records.push_back(sample_record());
  std::string path = ::testing::TempDir() + "carleman_emit.csv";
  emit_report(r, path, "csv");
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), to_csv(r));
  std::remove(path.c_str());
  try {
    emit_report(r, "/nonexistent-dir/x.csv", "csv");
    FAIL() << "expected an I/O error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent-dir/x.csv"), std::string::npos);
  }
  EXPECT_THROW(render_report(r, "xml"), std::invalid_argument);
}

TEST(ExitCode, Contract) {
  Report r;
  EXPECT_EQ(exit_code(r), 0);
  r.records.push_back(make_record("a", "", Verdict::holding(Window{0, 0})));
  EXPECT_EQ(exit_code(r), 0);
  r.records.push_back(make_record("b", "", Verdict::inconclusive(Window{0, 0})));
  EXPECT_EQ(exit_code(r), 2);
  r.records.push_back(make_record("c", "", Verdict::failing(Window{0, 0}, Witness{})));
  EXPECT_EQ(exit_code(r), 1);
  EXPECT_GT(kUsageExit, 2);
}

TEST(Config, ParsesKeysCommentsAndLists) {
  std::istringstream in("# comment\nprecision = 128\np_set = 2, 7\nx_grid = 1/3, 2\nwindow=2,9 # trailing\ntimings = true\n");
  RunConfig cfg = parse_config(in);
  EXPECT_EQ(cfg.precision, 128U);
  EXPECT_EQ(cfg.p_set, (std::vector<unsigned long>{2, 7}));
  EXPECT_EQ(cfg.x_grid, (std::vector<Rational>{Rational(1, 3), Rational(2)}));
  EXPECT_EQ(cfg.window.first, 2);
  EXPECT_EQ(cfg.window.last, 9);
  EXPECT_TRUE(cfg.timings);
  EXPECT_EQ(cfg.capped(40), 9UL);
}

TEST(Config, ErrorsNameLineAndField) {
  auto error_of = [](const std::string& text) -> std::string {
    std::istringstream in(text);
    try {
      parse_config(in);
    } catch (const ConfigError& e) {
      return e.what();
    }
    return "";
  };
  EXPECT_NE(error_of("precision = 128\nprecision = 256\n").find("line 2"), std::string::npos);
  EXPECT_NE(error_of("\nbogus = 1\n").find("'bogus'"), std::string::npos);
  EXPECT_NE(error_of("precision = 32\n").find("'precision'"), std::string::npos);
  EXPECT_NE(error_of("window = 5,2\n").find("'window'"), std::string::npos);
  EXPECT_NE(error_of("window = 0,4\n").find("'window'"), std::string::npos);
  EXPECT_NE(error_of("x_grid = 1,-2\n").find("'x_grid'"), std::string::npos);
  EXPECT_NE(error_of("comp_n_max = 26\n").find("'comp_n_max'"), std::string::npos);
  EXPECT_NE(error_of("no equals sign\n").find("line 1"), std::string::npos);
  EXPECT_THROW(load_config("/nonexistent/config.cfg"), ConfigError);
}

TEST(VerifySuite, SmallWindowAllHoldsAndIsDeterministic) {
  RunConfig cfg = small_config();
  Report a = run_verify_suite(cfg);
  Report b = run_verify_suite(cfg);
  ASSERT_FALSE(a.records.empty());
  for (const auto& rec : a.records) EXPECT_EQ(rec.verdict, Outcome::holds) << rec.id << ": " << rec.witness;
  EXPECT_EQ(to_csv(a), to_csv(b));
  EXPECT_EQ(exit_code(a), 0);
  EXPECT_TRUE(std::is_sorted(a.records.begin(), a.records.end(),
                             [](const Record& x, const Record& y) { return x.id < y.id; }));
  for (const auto& rec : a.records) {
    EXPECT_FALSE(rec.anchor.empty()) << rec.id;
    EXPECT_FALSE(rec.seconds.has_value());
  }
}

TEST(VerifySuite, TimingsGoToSecondsAndMetadata) {
  RunConfig cfg = small_config();
  cfg.set("timings", "true", "test");
  Report r = run_verify_suite(cfg);
  EXPECT_TRUE(r.metadata.count("total_seconds"));
  for (const auto& rec : r.records) {
    if (rec.id != "bang.construction") EXPECT_TRUE(rec.seconds.has_value()) << rec.id;
  }
}

TEST(VerifySuite, NonLogConvexBangSequenceGivesGateRecord) {
  RunConfig cfg = small_config();
  cfg.set("bang_sequence", "custom:1,2,1.5,5", "test");
  Report r = run_verify_suite(cfg);
  auto it = std::find_if(r.records.begin(), r.records.end(), [](const Record& x) { return x.id == "bang.construction"; });
  ASSERT_NE(it, r.records.end());
  EXPECT_EQ(it->verdict, Outcome::fails);
  EXPECT_FALSE(it->witness.empty());
  EXPECT_EQ(exit_code(r), 1);
  for (const auto& rec : r.records) {
    if (rec.id != "bang.construction") EXPECT_NE(rec.id.rfind("bang.", 0), 0U) << rec.id;
  }
}
