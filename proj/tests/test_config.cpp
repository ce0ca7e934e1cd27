#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <limits>

#include "nlspec/config.hpp"
#include "nlspec/csv.hpp"
#include "nlspec/errors.hpp"
#include "nlspec/report.hpp"
#include "support.hpp"

namespace nlspec {
namespace {

using nlohmann::json;

json default_doc() {
  std::ifstream in(test::config_path("default.json"));
  return json::parse(in);
}

TEST(Config, DefaultParses) {
  const ExperimentConfig c = load_config(test::config_path("default.json"));
  EXPECT_EQ(c.beta, 2.0);
  EXPECT_EQ(c.curve.family, "ellipse");
  EXPECT_EQ(c.lambda_list, (std::vector<double>{0.2, 0.1, 0.05}));
  EXPECT_TRUE(c.wants(1));
  EXPECT_TRUE(c.wants(12));
  EXPECT_EQ(c.tolerance("conjugacy"), 1e-8);
  EXPECT_FALSE(c.hash.empty());
}

TEST(Config, HashTracksContent) {
  json a = default_doc(), b = default_doc();
  EXPECT_EQ(parse_config(a).hash, parse_config(b).hash);
  b["d0"] = 0.14;
  EXPECT_NE(parse_config(a).hash, parse_config(b).hash);
}

TEST(Config, Rejections) {
  auto rejects = [](const std::function<void(json&)>& edit) {
    json d = default_doc();
    edit(d);
    EXPECT_THROW(parse_config(d), ConfigError) << d.dump();
  };
  rejects([](json& d) { d["beta"] = 1.0; });
  rejects([](json& d) { d["beta"] = 0.5; });
  rejects([](json& d) { d.erase("d0"); });
  rejects([](json& d) { d["d0"] = -0.1; });
  rejects([](json& d) { d["d0"] = 0.3; });  // sup|k| d0 = 0.6
  rejects([](json& d) { d["D0_factor"] = 2.0; });
  rejects([](json& d) { d["unknown"] = 1; });
  rejects([](json& d) { d["kernel"]["family"] = "gaussian"; });
  rejects([](json& d) { d["curve"]["family"] = "square"; });
  rejects([](json& d) { d["lambda_list"] = json::array(); });
  rejects([](json& d) { d["lambda_list"] = {0.1, -0.2}; });
  rejects([](json& d) { d["refinement_n"] = {801}; });
  rejects([](json& d) { d["tolerances"] = {{"no_such_tolerance", 1.0}}; });
  rejects([](json& d) { d["criteria"] = {14}; });
  rejects([](json& d) { d["spectrum"] = {{"which", "nope"}}; });
  rejects([](json& d) { d["grid"] = {{"profile_n", 1600}}; });
  rejects([](json& d) { d["s_samples"] = "many"; });
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, TolerancesAndCriteriaOverride) {
  json d = default_doc();
  d["tolerances"] = {{"conjugacy", 1e-6}};
  d["criteria"] = {2, 5};
  const ExperimentConfig c = parse_config(d);
  EXPECT_EQ(c.tolerance("conjugacy"), 1e-6);
  EXPECT_EQ(c.tolerance("symmetry"), default_tolerances().at("symmetry"));
  EXPECT_TRUE(c.wants(5));
  EXPECT_FALSE(c.wants(1));
  EXPECT_THROW(c.tolerance("nope"), std::logic_error);
}

TEST(Config, CircleCurve) {
  json d = default_doc();
  d["curve"] = {{"family", "circle"}, {"R", 1.5}};
  const ExperimentConfig c = parse_config(d);
  EXPECT_NEAR(make_curve(c.curve).length(), 3 * test::kPi, 1e-10);
}

TEST(Fnv, KnownValues) {
  EXPECT_EQ(fnv1a(""), 14695981039346656037ull);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cull);
}

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("nlspec_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::string path(const std::string& f) const { return (dir_ / f).string(); }
  std::filesystem::path dir_;
};

TEST_F(IoTest, CsvRoundTripIsExact) {
  const std::vector<std::vector<double>> rows{{0.1, -1.0 / 3.0}, {1e-300, 6.02214076e23}};
  write_csv(path("a.csv"), {"x", "y"}, rows);
  EXPECT_EQ(read_csv(path("a.csv")), rows);
  std::ifstream in(path("a.csv"));
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  EXPECT_EQ(header, "x,y");
  EXPECT_EQ(first, "1.0000000000000001e-01,-3.3333333333333331e-01");
}

TEST_F(IoTest, CsvRejectsRaggedRows) {
  EXPECT_THROW(write_csv(path("b.csv"), {"x", "y"}, {{1.0}}), std::exception);
}

TEST_F(IoTest, SpectrumCsvWithLabels) {
  Vector v(2);
  v << 0.5, 1.5;
  const std::vector<double> k{0.0, 2.0};
  write_spectrum_csv(path("s.csv"), v, &k);
  const auto rows = read_csv(path("s.csv"));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1], (std::vector<double>{1, 1.5, 2.0}));
}

TEST(ReportTest, CriteriaAggregation) {
  Report r;
  r.checks.push_back({.criterion = 1, .name = "a", .pass = true});
  r.checks.push_back({.criterion = 1, .name = "b", .pass = false});
  r.checks.push_back({.criterion = 2, .name = "c", .pass = true});
  EXPECT_EQ(r.failures(), 1);
  EXPECT_FALSE(r.all_pass());
  const auto c = r.criteria();
  EXPECT_FALSE(c.at(1));
  EXPECT_TRUE(c.at(2));
}

TEST(ReportTest, JsonKeepsNonfiniteValues) {
  Report r;
  CheckResult c{.criterion = 3, .name = "x", .pass = true};
  c.values["nan"] = std::numeric_limits<double>::quiet_NaN();
  c.values["inf"] = std::numeric_limits<double>::infinity();
  c.values["one"] = 1.0;
  r.checks.push_back(c);
  const std::string s = dump_json(to_json(r));
  const json j = json::parse(s);
  EXPECT_EQ(s, dump_json(to_json(r)));
  const json& v = j["checks"][0]["values"];
  EXPECT_EQ(v["nan"], "nan");
  EXPECT_EQ(v["inf"], "inf");
  EXPECT_EQ(v["one"], 1.0);
  EXPECT_NE(to_text(r).find("x"), std::string::npos);
}

}  // namespace
}  // namespace nlspec
