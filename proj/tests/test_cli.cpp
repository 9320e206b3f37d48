#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
#ifdef QSP_CLI_PATH
  return QSP_CLI_PATH;
#else
  const char* p = std::getenv("QSP_CLI_PATH");
  REQUIRE_MESSAGE(p != nullptr, "QSP_CLI_PATH must point at the qsp binary");
  return p;
#endif
}

int run(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write(const fs::path& p, const std::string& content) {
  std::ofstream os(p);
  os << content;
}

}  // namespace

TEST_CASE("grape not-gate run succeeds and is reproducible") {
  TempDir dir("qsp_cli_not");
  const fs::path cfg = dir.path / "not.cfg";
  write(cfg, "# minimal single-qubit inversion synthesis\n"
             "preset = not\n"
             "seed = 7\n");
  const fs::path out1 = dir.path / "run1";
  const fs::path out2 = dir.path / "run2";
  CHECK(run("grape --config " + cfg.string() + " --out " + out1.string()) == 0);
  CHECK(fs::exists(out1 / "control_field.csv"));
  CHECK(fs::exists(out1 / "summary.json"));
  CHECK(fs::exists(out1 / "manifest.json"));
  const std::string manifest = slurp(out1 / "manifest.json");
  CHECK(manifest.find("\"seed\": 7") != std::string::npos);
  CHECK(manifest.find("\"wall_time_s\"") != std::string::npos);

  // Second run with the same seed: data files byte-identical.
  CHECK(run("grape --config " + cfg.string() + " --out " + out2.string()) == 0);
  CHECK(slurp(out1 / "control_field.csv") == slurp(out2 / "control_field.csv"));
  CHECK(slurp(out1 / "summary.json") == slurp(out2 / "summary.json"));
}

TEST_CASE("seed flag overrides the config seed") {
  TempDir dir("qsp_cli_seed");
  const fs::path cfg = dir.path / "not.cfg";
  write(cfg, "preset = not\nseed = 7\n");
  const fs::path out_a = dir.path / "a";
  const fs::path out_b = dir.path / "b";
  CHECK(run("grape --config " + cfg.string() + " --seed 8 --out " + out_a.string()) == 0);
  CHECK(run("grape --config " + cfg.string() + " --seed 7 --out " + out_b.string()) == 0);
  CHECK(slurp(out_a / "manifest.json").find("\"seed\": 8") != std::string::npos);
  CHECK(slurp(out_a / "control_field.csv") != slurp(out_b / "control_field.csv"));
}

TEST_CASE("config errors exit with code 2") {
  TempDir dir("qsp_cli_err");
  const fs::path out = dir.path / "out";

  const fs::path unknown_key = dir.path / "unknown.cfg";
  write(unknown_key, "preset = not\nseed = 1\nno_such_option = 3\n");
  CHECK(run("grape --config " + unknown_key.string() + " --out " + out.string()) == 2);

  const fs::path bad_value = dir.path / "bad.cfg";
  write(bad_value, "preset = not\nseed = 1\nmax_iter = banana\n");
  CHECK(run("grape --config " + bad_value.string() + " --out " + out.string()) == 2);

  const fs::path no_seed = dir.path / "no_seed.cfg";
  write(no_seed, "preset = not\n");
  CHECK(run("grape --config " + no_seed.string() + " --out " + out.string()) == 2);

  const fs::path malformed = dir.path / "malformed.cfg";
  write(malformed, "preset not\n");
  CHECK(run("grape --config " + malformed.string() + " --out " + out.string()) == 2);

  CHECK(run("grape --config " + dir.path.string() + "/missing.cfg --out " +
            out.string()) == 2);
  CHECK(run("no_such_experiment --config " + no_seed.string()) == 2);
}

TEST_CASE("convergence failure exits with code 3") {
  TempDir dir("qsp_cli_conv");
  const fs::path cfg = dir.path / "hard.cfg";
  write(cfg, "preset = not\nseed = 1\nmax_iter = 1\ntol = 1e-9\n");
  CHECK(run("grape --config " + cfg.string() + " --out " + (dir.path / "out").string()) ==
        3);
  // The partial result is still written for inspection.
  CHECK(fs::exists(dir.path / "out" / "summary.json"));
}

TEST_CASE("csv output uses lf newlines and a header row") {
  TempDir dir("qsp_cli_csv");
  const fs::path cfg = dir.path / "not.cfg";
  write(cfg, "preset = not\nseed = 3\n");
  const fs::path out = dir.path / "out";
  REQUIRE(run("grape --config " + cfg.string() + " --out " + out.string()) == 0);
  const std::string csv = slurp(out / "control_field.csv");
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(csv.find("step,u_1") != std::string::npos);
  CHECK(csv.back() == '\n');
}
