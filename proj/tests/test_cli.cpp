#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "commands.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("nlspec_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    std::ifstream in(std::string(NLSPEC_SOURCE_DIR) + "/configs/default.json");
    doc_ = json::parse(in);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write_config(const json& d, const std::string& name = "cfg.json") const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << d.dump(2);
    return p.string();
  }
  int run(std::vector<std::string> args) const {
    args.insert(args.begin(), "nlspec");
    return nlspec::cli::run(args);
  }

  fs::path dir_;
  json doc_;
};

TEST_F(Cli, ProfileIsByteIdentical) {
  const std::string cfg = write_config(doc_);
  const fs::path a = dir_ / "a", b = dir_ / "b";
  ASSERT_EQ(run({"profile", "--config", cfg, "--out", a.string()}), nlspec::cli::kPass);
  ASSERT_EQ(run({"profile", "--config", cfg, "--out", b.string(), "--jobs", "3"}), nlspec::cli::kPass);
  for (const auto& f : fs::directory_iterator(a)) {
    ASSERT_TRUE(fs::exists(b / f.path().filename())) << f.path();
    EXPECT_EQ(slurp(f.path()), slurp(b / f.path().filename())) << f.path().filename();
  }
  EXPECT_TRUE(fs::exists(a / "profile.csv"));
  EXPECT_TRUE(fs::exists(a / "manifest.json"));
  const json m = json::parse(slurp(a / "manifest.json"));
  EXPECT_EQ(m["subcommand"], "profile");
  EXPECT_EQ(m["exit_code"], 0);
}

TEST_F(Cli, OutputDirectoryPrecedence) {
  json d = doc_;
  d["output_dir"] = (dir_ / "from_config").string();
  const std::string cfg = write_config(d);
  ASSERT_EQ(run({"spectrum", "--config", cfg, "--which", "L0", "--lambda", "0.2"}), 0);
  EXPECT_TRUE(fs::exists(dir_ / "from_config" / "manifest.json"));
  ::setenv(nlspec::cli::kOutDirEnv, (dir_ / "from_env").c_str(), 1);
  ASSERT_EQ(run({"spectrum", "--config", cfg, "--which", "L0", "--lambda", "0.2"}), 0);
  ASSERT_EQ(run({"spectrum", "--config", cfg, "--which", "L0", "--lambda", "0.2", "--out", (dir_ / "flag").string()}), 0);
  ::unsetenv(nlspec::cli::kOutDirEnv);
  EXPECT_TRUE(fs::exists(dir_ / "from_env" / "manifest.json"));
  EXPECT_TRUE(fs::exists(dir_ / "flag" / "manifest.json"));
  EXPECT_EQ(slurp(dir_ / "from_env" / "manifest.json"), slurp(dir_ / "flag" / "manifest.json"));
}

TEST_F(Cli, ZeroFrequencySliceSpectrumEqualsL0) {
  const std::string cfg = write_config(doc_);
  ASSERT_EQ(run({"spectrum", "--config", cfg, "--which", "L0", "--lambda", "0.2", "--out", (dir_ / "a").string()}), 0);
  ASSERT_EQ(run({"spectrum", "--config", cfg, "--which", "Lh", "--lambda", "0.2", "--freq", "0", "--out",
                 (dir_ / "b").string()}),
            0);
  fs::path fa, fb;
  for (const auto& f : fs::directory_iterator(dir_ / "a"))
    if (f.path().filename().string().rfind("spectrum_", 0) == 0) fa = f.path();
  for (const auto& f : fs::directory_iterator(dir_ / "b"))
    if (f.path().filename().string().rfind("spectrum_", 0) == 0) fb = f.path();
  ASSERT_FALSE(fa.empty());
  ASSERT_FALSE(fb.empty());
  EXPECT_EQ(slurp(fa), slurp(fb));
}

TEST_F(Cli, ExitCodes) {
  const fs::path out = dir_ / "o";
  EXPECT_EQ(run({"verify"}), nlspec::cli::kConfigError);
  EXPECT_EQ(run({"profile", "--config", (dir_ / "missing.json").string()}), nlspec::cli::kConfigError);
  {
    std::ofstream(dir_ / "broken.json") << "{ not json";
    EXPECT_EQ(run({"profile", "--config", (dir_ / "broken.json").string()}), nlspec::cli::kConfigError);
  }
  {
    json d = doc_;
    d["beta"] = 1.0;
    EXPECT_EQ(run({"profile", "--config", write_config(d, "b.json"), "--out", out.string()}), nlspec::cli::kConfigError);
  }
  {
    const std::string cfg = write_config(doc_);
    EXPECT_EQ(run({"spectrum", "--config", cfg, "--which", "nope", "--out", out.string()}), nlspec::cli::kConfigError);
  }
  {
    json d = doc_;
    d["profile"] = {{"max_iters", 3}};
    EXPECT_EQ(run({"profile", "--config", write_config(d, "n.json"), "--out", out.string()}),
              nlspec::cli::kNumericalFailure);
  }
  {
    json d = doc_;
    d["criteria"] = {2};
    EXPECT_EQ(run({"verify", "--config", write_config(d, "v.json"), "--out", out.string()}), nlspec::cli::kPass);
    d["tolerances"] = {{"kernel_mass", -1.0}};
    EXPECT_EQ(run({"verify", "--config", write_config(d, "t.json"), "--out", out.string()}),
              nlspec::cli::kVerificationFailure);
    const json r = json::parse(slurp(out / "report.json"));
    EXPECT_EQ(r["criteria"]["2"], "fail");
  }
}

TEST_F(Cli, VerifySubsetDeterministicAcrossJobs) {
  json d = doc_;
  d["criteria"] = {1, 4};
  const std::string cfg = write_config(d);
  ASSERT_EQ(run({"verify", "--config", cfg, "--out", (dir_ / "a").string(), "--jobs", "1"}), 0);
  ASSERT_EQ(run({"verify", "--config", cfg, "--out", (dir_ / "b").string(), "--jobs", "4"}), 0);
  EXPECT_EQ(slurp(dir_ / "a" / "report.json"), slurp(dir_ / "b" / "report.json"));
  EXPECT_EQ(slurp(dir_ / "a" / "manifest.json"), slurp(dir_ / "b" / "manifest.json"));
}

}  // namespace
