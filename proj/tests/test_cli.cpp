#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dmnls/cli.hpp"
#include "dmnls/io_report.hpp"

using namespace dmnls;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "dmnls");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "dmnls_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RunRecord load(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return parse_report(s.str());
}

}  // namespace

TEST_CASE("config text") {
  CliConfig cfg;
  apply_config_text(cfg, "# comment\n n = 64\nlength=30.5  # trailing\n\np = 4\nseed = 9\nthreads = 2\n");
  CHECK(cfg.n == 64);
  CHECK(cfg.length == 30.5);
  CHECK(cfg.model.p == 4.0);
  CHECK(cfg.solver.seed == 9);
  CHECK(cfg.threads == 2);
  CHECK_THROWS_AS(apply_config_text(cfg, "colour = blue\n"), std::invalid_argument);
  CHECK_THROWS_AS(apply_config_text(cfg, "n = 6x\n"), std::invalid_argument);
  CHECK_THROWS_AS(apply_config_text(cfg, "just words\n"), std::invalid_argument);
  CHECK_THROWS_AS(apply_config_entry(cfg, "seed", "-1"), std::invalid_argument);
}

TEST_CASE("oracle prints the Gaussian window norm first") {
  const fs::path dir = temp_dir("oracle");
  const Result r = run({"oracle", "--sigma0", "1", "--q", "4", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(std::stod(r.out.substr(0, r.out.find('\n'))) == doctest::Approx(0.2603237).epsilon(1e-6));
  CHECK(fs::exists(dir / "oracle.json"));
}

TEST_CASE("energy of the mass-1 Gaussian") {
  const fs::path dir = temp_dir("energy");
  const Result r = run({"energy", "--gaussian", "sigma0=1", "--p", "3", "--dav", "1", "--lambda", "1",
                        "--n", "256", "--out", dir.string()});
  REQUIRE(r.code == 0);
  const RunRecord rec = load(dir / "energy.json");
  CHECK(rec.energy.total == doctest::Approx(0.973622).epsilon(1e-5));
  CHECK(rec.grid_n == 256);
  CHECK(rec.command == "energy");
  CHECK(run({"energy", "--out", dir.string()}).code == 1);
  CHECK(run({"energy", "--gaussian", "width=1", "--out", dir.string()}).code == 1);
}

TEST_CASE("usage errors exit with 1") {
  CHECK(run({}).code == 1);
  CHECK(run({"bogus"}).code == 1);
  CHECK(run({"oracle", "--n", "12"}).code == 1);
  CHECK(run({"oracle", "--p", "0.5"}).code == 1);
  CHECK(run({"oracle", "--config", "/nonexistent/dmnls.cfg"}).code == 1);
  CHECK(run({"supercritical-scan", "--p", "5"}).code == 1);
  CHECK(run({"critical-scan", "--out", temp_dir("crit_err").string()}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("flags override the config file") {
  const fs::path dir = temp_dir("merge");
  const fs::path cfg = dir / "run.cfg";
  std::ofstream(cfg) << "p = 4\nlambda = 2\nn = 64\nout = " << dir.string() << "\n";
  REQUIRE(run({"energy", "--config", cfg.string(), "--gaussian", "sigma0=1", "--p", "3"}).code == 0);
  const RunRecord rec = load(dir / "energy.json");
  CHECK(rec.p == 3.0);
  CHECK(rec.lambda == 2.0);
  CHECK(rec.grid_n == 64);
}

TEST_CASE("DMNLS_THREADS is a fallback for --threads") {
  const fs::path dir = temp_dir("threads");
  setenv("DMNLS_THREADS", "bad", 1);
  CHECK(run({"oracle", "--out", dir.string()}).code == 1);
  CHECK(run({"oracle", "--threads", "2", "--out", dir.string()}).code == 0);
  setenv("DMNLS_THREADS", "1", 1);
  CHECK(run({"oracle", "--out", dir.string()}).code == 0);
  unsetenv("DMNLS_THREADS");
}

TEST_CASE("fixed seed and config reproduce the results") {
  const fs::path a = temp_dir("repro_a"), b = temp_dir("repro_b");
  const std::vector<std::string> common{"minimize", "--p", "2", "--lambda", "4", "--n", "64", "--length", "40",
                                        "--seed", "5"};
  auto with_out = [&](const fs::path& d) {
    auto v = common;
    v.push_back("--out");
    v.push_back(d.string());
    return v;
  };
  REQUIRE(run(with_out(a)).code == 0);
  REQUIRE(run(with_out(b)).code == 0);
  RunRecord ra = load(a / "minimize.json"), rb = load(b / "minimize.json");
  CHECK(ra.status == "converged");
  ra.timings.clear();
  rb.timings.clear();
  ra.timestamp = rb.timestamp = "";
  CHECK(ra == rb);
  std::ifstream fa(a / "minimize.dmnlsf", std::ios::binary), fb(b / "minimize.dmnlsf", std::ios::binary);
  CHECK(std::string(std::istreambuf_iterator<char>(fa), {}) == std::string(std::istreambuf_iterator<char>(fb), {}));
  // The written field can be evaluated again.
  const Result e = run({"energy", "--field", (a / "minimize.dmnlsf").string(), "--p", "2", "--lambda", "4",
                        "--out", a.string()});
  CHECK(e.code == 0);
  CHECK(load(a / "energy.json").energy.total == doctest::Approx(ra.energy.total).epsilon(1e-10));
}

TEST_CASE("scans write series") {
  const fs::path dir = temp_dir("scans");
  REQUIRE(run({"supercritical-scan", "--p", "6", "--sigma0s", "1,0.1", "--out", dir.string()}).code == 0);
  std::ifstream csv(dir / "supercritical-scan.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "sigma0,energy");
  REQUIRE(run({"critical-scan", "--gaussian-surrogate", "--lambda", "10", "--betas", "1,2", "--out",
               dir.string()}).code == 0);
  const RunRecord rec = load(dir / "critical-scan.json");
  CHECK(rec.series.size() == 2);
  CHECK(rec.values.at("gaussian_surrogate") == 1.0);
}

TEST_CASE("verify passes on a fresh build") {
  const Result r = run({"verify", "--out", temp_dir("verify").string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
}
