// Runs the verification suite twice and prints one line per acceptance criterion.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "nlspec/verify.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int verify(const std::string& config, const fs::path& out, const std::string& jobs) {
  return nlspec::cli::run(std::vector<std::string>{"nlspec", "verify", "--config", config, "--out", out.string(),
                                                   "--jobs", jobs});
}

}  // namespace

int main(int argc, char** argv) {
  const std::string config = argc > 1 ? argv[1] : std::string(NLSPEC_SOURCE_DIR) + "/configs/default.json";
  const fs::path root = argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path() / "nlspec_acceptance";
  fs::remove_all(root);
  const fs::path a = root / "run1", b = root / "run2";

  const int code_a = verify(config, a, "1");
  const int code_b = verify(config, b, "4");
  std::map<int, bool> result;
  if (fs::exists(a / "report.json")) {
    const nlohmann::json r = nlohmann::json::parse(slurp(a / "report.json"));
    for (auto it = r["criteria"].begin(); it != r["criteria"].end(); ++it)
      result[std::stoi(it.key())] = it.value() == "pass";
  }
  const bool same = code_a == code_b && fs::exists(a / "report.json") &&
                    slurp(a / "report.json") == slurp(b / "report.json") &&
                    slurp(a / "manifest.json") == slurp(b / "manifest.json");
  result[13] = same;

  bool all = true;
  for (int c = 1; c <= 13; ++c) {
    const bool pass = result.count(c) && result[c];
    all = all && pass;
    std::printf("criterion %d: %s %s\n", c, pass ? "PASS" : "FAIL", nlspec::criterion_title(c).c_str());
  }
  std::printf("%s\n", all ? "all criteria passed" : "some criteria failed");
  return all ? 0 : 1;
}
