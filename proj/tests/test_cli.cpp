#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mann/cli.hpp"

using namespace mann;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("mann_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

fs::path write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p;
}

const char* kShort = R"({
  "scenario": {"events": [{"t": 1, "level": "all", "kind": "scale", "coefficient": 20}]},
  "run": {"T": 3}
})";

}  // namespace

TEST_CASE("run writes a trajectory and per-event metrics") {
  TempDir tmp;
  const auto cfg = write(tmp.path / "c.json", kShort);
  std::ostringstream out, err;
  cli::RunOptions opts;
  opts.config = cfg;
  opts.mode = Mode::Mann;
  opts.out_dir = tmp.path / "out";
  CHECK(cli::cmd_run(opts, out, err) == cli::kExitOk);
  CHECK(fs::exists(opts.out_dir / "trajectory.csv"));
  CHECK(fs::exists(opts.out_dir / "metrics.csv"));
}

TEST_CASE("run rejects a non-positive step") {
  TempDir tmp;
  const auto cfg = write(tmp.path / "c.json", R"({"run": {"h": 0}})");
  std::ostringstream out, err;
  cli::RunOptions opts;
  opts.config = cfg;
  CHECK(cli::cmd_run(opts, out, err) == cli::kExitConfig);
  CHECK_FALSE(err.str().empty());
}

TEST_CASE("run rejects a sign-changing gain") {
  TempDir tmp;
  const auto cfg = write(tmp.path / "c.json", R"({"system": {"name": "bad", "levels": [
      {"f": [], "g": [{"coefficient": 1, "powers": [1]}], "g_bound": [{"coefficient": 2}], "g_lower": 0.5}]},
      "command": {"constant": 0.1}, "run": {"T": 1}})");
  std::ostringstream out, err;
  cli::RunOptions opts;
  opts.config = cfg;
  opts.out_dir = tmp.path;
  CHECK(cli::cmd_run(opts, out, err) == cli::kExitConfig);
  CHECK(err.str().find("gain assumption") != std::string::npos);
}

TEST_CASE("run reports divergence with its own exit code") {
  TempDir tmp;
  const auto cfg = write(tmp.path / "c.json", R"({"run": {"T": 1, "blowup_guard": 0.01}})");
  std::ostringstream out, err;
  cli::RunOptions opts;
  opts.config = cfg;
  opts.out_dir = tmp.path;
  CHECK(cli::cmd_run(opts, out, err) == cli::kExitDiverged);
}

TEST_CASE("compare writes all three trajectories and a summary") {
  TempDir tmp;
  const auto cfg = write(tmp.path / "c.json", kShort);
  std::ostringstream out, err;
  cli::CompareOptions opts;
  opts.config = cfg;
  opts.out_dir = tmp.path / "cmp";
  CHECK(cli::cmd_compare(opts, out, err) == cli::kExitOk);
  for (const char* f : {"trajectory_nn.csv", "trajectory_mann.csv", "trajectory_mann_frozen.csv", "comparison.csv",
                        "summary.txt"}) {
    CHECK(fs::exists(opts.out_dir / f));
  }
  const std::string s = out.str();
  CHECK(s.find("nn ") != std::string::npos);
  CHECK(s.find("mann ") != std::string::npos);
  CHECK(s.find("mann-frozen") != std::string::npos);
  CHECK(s.find("reduction mann") != std::string::npos);
}

TEST_CASE("validate") {
  TempDir tmp;
  std::ostringstream out, err;
  CHECK(cli::cmd_validate(write(tmp.path / "ok.json", kShort), out, err) == cli::kExitOk);
  CHECK(cli::cmd_validate(write(tmp.path / "bad.json", "{ not json"), out, err) == cli::kExitConfig);
  CHECK(cli::cmd_validate(write(tmp.path / "order.json", R"({"scenario": {"events": [
      {"t": 5, "kind": "scale", "coefficient": 2}, {"t": 3, "kind": "scale", "coefficient": 2}]}})"),
                          out, err) == cli::kExitConfig);
}

TEST_CASE("shipped configs validate") {
  for (const char* name : {"example1_scenario1.json", "example1_scenario2.json", "example1_scenario3.json"}) {
    std::ostringstream out, err;
    CHECK(cli::cmd_validate(fs::path(MANN_CONFIG_DIR) / name, out, err) == cli::kExitOk);
  }
}

TEST_CASE("command line parsing") {
  TempDir tmp;
  const auto cfg = write(tmp.path / "c.json", kShort).string();
  const std::string out_dir = (tmp.path / "o").string();
  std::vector<std::string> args{"mannsim", "run", cfg, "--mode", "mann-frozen", "--out", out_dir, "--seed", "4"};
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  CHECK(cli::main(static_cast<int>(argv.size()), argv.data()) == cli::kExitOk);
  CHECK(fs::exists(tmp.path / "o" / "trajectory.csv"));

  std::vector<std::string> bad{"mannsim", "run", cfg, "--mode", "frozen"};
  std::vector<char*> bargv;
  for (auto& a : bad) bargv.push_back(a.data());
  CHECK(cli::main(static_cast<int>(bargv.size()), bargv.data()) == cli::kExitConfig);
}
