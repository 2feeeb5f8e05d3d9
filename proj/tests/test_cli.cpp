#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + ENTLAB_CLI + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run("fig2 --points 10") == 0);
  CHECK(run("bound --kind sample --entropy 1 --eps 0.6 --delta 0.1") == 0);
  CHECK(run("no-such-command") == 2);
  CHECK(run("bound --kind sample --entropy 1 --eps 1.5 --delta 0.1") == 2);
  CHECK(run("fig2 --points 1") == 2);
  CHECK(run("gap-sim --config /nonexistent/cfg.json") == 2);

  const auto dir = fs::temp_directory_path() / "entlab_cli_test";
  fs::create_directories(dir);
  std::ofstream(dir / "bad.json") << R"({"distribution": {"type": "hteld", "gamma": 2, "eps": 0.1}, "n_list": [10],
    "eps": 0.1, "trials": 2, "unknown": 1})";
  CHECK(run("gap-sim --config \"" + (dir / "bad.json").string() + "\"") == 2);
  std::ofstream(dir / "implicit.json") << R"({"distribution": {"type": "hteld", "gamma": 1, "eps": 0.01},
    "n_list": [10], "eps": 0.1, "trials": 2})";
  CHECK(run("gap-sim --config \"" + (dir / "implicit.json").string() + "\"") == 2);
  fs::remove_all(dir);
}
