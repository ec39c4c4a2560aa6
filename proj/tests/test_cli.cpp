// End-to-end checks of the command-line binary: subcommand output formats,
// exit codes, the batch runner's CSV/manifest pair, and rerun determinism.
#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "annealsim/csvio.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr merged
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(ANNEALSIM_CLI_PATH) + " " + args + " 2>&1";
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) r.output += buf;
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("annealsim_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  f << text;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("version flag exits cleanly") {
  const auto r = run_cli("--version");
  CHECK(r.exit_code == 0);
  CHECK(!r.output.empty());
}

TEST_CASE("bound subcommand prints the overlap ceiling") {
  auto r = run_cli("bound --n 4 --state 0b0001");
  CHECK(r.exit_code == 0);
  CHECK(std::stod(r.output) == doctest::Approx(0.25).epsilon(1e-9));

  r = run_cli("bound --n 4 --state 0b0011");
  CHECK(r.exit_code == 0);
  CHECK(std::stod(r.output) == doctest::Approx(1.0 / 6.0).epsilon(1e-9));

  r = run_cli("bound --n 8 --state 0b00000001");
  CHECK(r.exit_code == 0);
  CHECK(std::stod(r.output) == doctest::Approx(0.125).epsilon(1e-9));
}

TEST_CASE("bound rejects a state wider than n") {
  const auto r = run_cli("bound --n 2 --state 0b0101");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("error:") != std::string::npos);
}

TEST_CASE("spectrum subcommand reports the minimum gap") {
  TempDir tmp;
  const fs::path csv = tmp.path / "gap.csv";
  const auto r = run_cli("spectrum --n 4 --csv " + csv.string());
  CHECK(r.exit_code == 0);

  // line format: n=4 s_delta=0.#### gap_radns=... gap_ghz=...
  double s_delta = 0.0, gap_ghz = 0.0;
  int n = 0;
  const auto pos = r.output.find("gap_radns=");
  REQUIRE(pos != std::string::npos);
  REQUIRE(std::sscanf(r.output.c_str(), "n=%d s_delta=%lf", &n, &s_delta) == 2);
  REQUIRE(std::sscanf(r.output.c_str() + r.output.find("gap_ghz="),
                      "gap_ghz=%lf", &gap_ghz) == 1);
  CHECK(n == 4);
  CHECK(s_delta == doctest::Approx(0.4458).epsilon(5e-3));
  CHECK(gap_ghz == doctest::Approx(4.48092).epsilon(1e-3));

  const std::string profile = slurp(csv);
  CHECK(profile.rfind("s,gap_radns", 0) == 0);
}

TEST_CASE("run dry-run reports the sweep size without writing") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "sweep.conf";
  const fs::path out = tmp.path / "rows.csv";
  write_file(cfg,
             "model = closed\n"
             "[problem]\n"
             "n = 2\n"
             "initial = 0b01\n"
             "[protocol]\n"
             "s_inv = [0.3, 0.5]\n"
             "tau_ns = [1, 5]\n");
  const auto r =
      run_cli("run " + cfg.string() + " --dry-run --output " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("sweep points: 4") != std::string::npos);
  CHECK(!fs::exists(out));
}

TEST_CASE("run rejects a config with an unknown key") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "bad.conf";
  write_file(cfg, "model = closed\nfrobnicate = 7\n");
  const auto r = run_cli("run " + cfg.string());
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("error:") != std::string::npos);
  CHECK(r.output.find("frobnicate") != std::string::npos);
}

TEST_CASE("run rejects a missing config file") {
  const auto r = run_cli("run /nonexistent/path.conf");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("error:") != std::string::npos);
}

TEST_CASE("batch run writes a result CSV and a manifest") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "small.conf";
  const fs::path out = tmp.path / "small.csv";
  write_file(cfg,
             "model = closed\n"
             "[problem]\n"
             "n = 2\n"
             "initial = 0b01\n"
             "[protocol]\n"
             "s_inv = 0.4\n"
             "tau_ns = 5\n");
  const auto r = run_cli("run " + cfg.string() + " --output " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("wrote 1 rows") != std::string::npos);

  const std::string body = slurp(out);
  CHECK(body.rfind(annealsim::result_csv_header, 0) == 0);
  CHECK(std::count(body.begin(), body.end(), '\n') == 2);  // header + 1 row

  const fs::path man = tmp.path / "small.manifest.json";
  REQUIRE(fs::exists(man));
  const auto j = nlohmann::json::parse(slurp(man));
  CHECK(j.at("tool") == "annealsim");
  CHECK(j.at("rows") == 1);
  CHECK(j.at("rows_written") == 1);
  CHECK(j.contains("version"));
  CHECK(j.contains("config"));
}

TEST_CASE("reruns of the same config are byte-identical") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "det.conf";
  write_file(cfg,
             "model = svmc\n"
             "[problem]\n"
             "n = 3\n"
             "initial = 0b001\n"
             "[protocol]\n"
             "s_inv = [0.4, 0.6]\n"
             "tau_ns = 20\n"
             "[svmc]\n"
             "variant = tf\n"
             "sweeps_tau = 50\n"
             "samples = 64\n"
             "seed = 7\n");
  const fs::path out1 = tmp.path / "one.csv";
  const fs::path out2 = tmp.path / "two.csv";
  CHECK(run_cli("run " + cfg.string() + " --output " + out1.string())
            .exit_code == 0);
  CHECK(run_cli("run " + cfg.string() + " --output " + out2.string())
            .exit_code == 0);
  CHECK(slurp(out1) == slurp(out2));
}

}  // TEST_SUITE("cli")
