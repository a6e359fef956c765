#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

namespace {

struct RunResult {
  int code;
  std::string out;
};

std::string cli_path() {
  const char* p = std::getenv("TMSVBELL_CLI");
  REQUIRE(p != nullptr);
  return p;
}

RunResult run_cli(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("sweep emits the documented CSV", "[cli]") {
  const RunResult r =
      run_cli("sweep --zeta-min 0 --zeta-max 1 --steps 5 --configs number");
  CHECK(r.code == 0);
  REQUIRE(r.out.rfind("zeta,config,F,bell_value,dim,condition15\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 6);  // header + 5 rows
  // the zeta = 0 row: no correlation, no violation, two levels
  CHECK(r.out.find("\n0,number,0,2,2,true\n") != std::string::npos);
}

TEST_CASE("sweep output is byte-stable", "[cli]") {
  const std::string args =
      "sweep --zeta-min 0 --zeta-max 1.2 --steps 7 --configs "
      "number,position,alt-phase";
  const RunResult a = run_cli(args);
  const RunResult b = run_cli(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 1 + 7 * 3);
}

TEST_CASE("sweep --json wraps rows with the manifest", "[cli]") {
  const RunResult r = run_cli(
      "sweep --zeta-min 0 --zeta-max 0.5 --steps 3 --configs number --json");
  CHECK(r.code == 0);
  CHECK(r.out.find("\"manifest\"") != std::string::npos);
  CHECK(r.out.find("\"rows\":[") != std::string::npos);
  CHECK(r.out.find("\"timestamp\"") == std::string::npos);  // byte stability
}

TEST_CASE("sweep writes file plus manifest sidecar", "[cli]") {
  namespace fs = std::filesystem;
  const fs::path dir =
      fs::temp_directory_path() / ("tmsvbell_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path csv = dir / "sweep.csv";
  const std::string args = "sweep --zeta-min 0 --zeta-max 1 --steps 4 "
                           "--configs number --out " + csv.string();
  CHECK(run_cli(args).code == 0);
  const std::string first = slurp(csv);
  CHECK(run_cli(args).code == 0);
  CHECK(slurp(csv) == first);
  CHECK(fs::exists(dir / "sweep.csv.manifest.json"));
  const std::string manifest = slurp(dir / "sweep.csv.manifest.json");
  CHECK(manifest.find("\"timestamp\"") != std::string::npos);
  CHECK(manifest.find("\"version\"") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("bell reports all routes in agreement", "[cli]") {
  const RunResult r = run_cli("bell --zeta 0.5 --configs number");
  CHECK(r.code == 0);
  CHECK(r.out.find("\"direct\":") != std::string::npos);
  CHECK(r.out.find("\"trace\":") != std::string::npos);
  CHECK(r.out.find("\"closed_form\":") != std::string::npos);
  CHECK(r.out.find("\"horodecki\":") != std::string::npos);
  CHECK(r.out.find("\"all\":true") != std::string::npos);
  CHECK(r.out.find("\"violation\":true") != std::string::npos);

  const RunResult pos = run_cli("bell --zeta 0.5 --configs position");
  CHECK(pos.code == 0);
  CHECK(pos.out.find("\"integral\":") != std::string::npos);
  CHECK(pos.out.find("\"all\":true") != std::string::npos);
}

TEST_CASE("bell flags the vacuum as non-violating", "[cli]") {
  const RunResult r = run_cli("bell --zeta 0 --configs number");
  CHECK(r.code == 0);
  CHECK(r.out.find("\"violation\":false") != std::string::npos);
  CHECK(r.out.find("no violation") != std::string::npos);
  // the two-level truncation at zeta = 0 must not trip the position gate
  const RunResult pos = run_cli("bell --zeta 0 --configs position");
  CHECK(pos.code == 0);
  CHECK(pos.out.find("\"violation\":false") != std::string::npos);
}

TEST_CASE("verify passes at defaults and fails at 1e-16", "[cli]") {
  const RunResult ok = run_cli("verify --zeta 0.5 --dim 32");
  CHECK(ok.code == 0);
  CHECK(ok.out.find("\"all_pass\":true") != std::string::npos);

  const RunResult bad = run_cli("verify --zeta 0.5 --dim 32 --tol 1e-16");
  CHECK(bad.code == 1);
  CHECK(bad.out.find("\"pass\":false") != std::string::npos);
  CHECK(bad.out.find("quadrature-gram") != std::string::npos);
}

TEST_CASE("verify reports one fidelity entry per zeta", "[cli]") {
  const RunResult r = run_cli("verify --zeta 0.5,1.0,1.5 --dim 32");
  CHECK(r.code == 0);
  std::size_t count = 0, pos = 0;
  while ((pos = r.out.find("oracle/fidelity-deficit", pos)) !=
         std::string::npos) {
    ++count;
    ++pos;
  }
  CHECK(count == 3);
  CHECK(r.out.find("\"all_pass\":true") != std::string::npos);
}

TEST_CASE("sweep honors the truncation override", "[cli]") {
  const RunResult r = run_cli(
      "sweep --zeta-min 0.2 --zeta-max 0.4 --steps 2 --configs number --dim 16");
  CHECK(r.code == 0);
  CHECK(r.out.find(",16,") != std::string::npos);
  CHECK(run_cli("sweep --steps 3 --dim 7").code == 2);  // odd override
  CHECK(run_cli("sweep --zeta-min 1 --zeta-max 0.5 --steps 3").code == 2);
}

TEST_CASE("sweep rows carry the closed-form values", "[cli]") {
  const RunResult r = run_cli(
      "sweep --zeta-min 0.5 --zeta-max 0.5 --steps 2 --configs number,position");
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);  // header
  int seen = 0;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string zeta, config, f, bell;
    std::getline(row, zeta, ',');
    std::getline(row, config, ',');
    std::getline(row, f, ',');
    std::getline(row, bell, ',');
    const double fv = std::stod(f);
    const double bv = std::stod(bell);
    const double expected = config == "number"
                                ? std::tanh(1.0)
                                : 2.0 / M_PI * std::atan(std::sinh(1.0));
    CHECK(std::abs(fv - expected) < 1e-7);
    CHECK(std::abs(bv - 2.0 * std::sqrt(1.0 + fv * fv)) < 1e-11);
    ++seen;
  }
  CHECK(seen == 4);
}

TEST_CASE("every JSON surface parses", "[cli]") {
  for (const std::string args :
       {std::string("bell --zeta 0.5 --configs position"),
        std::string("verify --zeta 0.5 --dim 16"),
        std::string("optimize --zeta 0.5 --family diagonal-phase"),
        std::string("sweep --zeta-min 0 --zeta-max 0.5 --steps 3 "
                    "--configs number --json")}) {
    const RunResult r = run_cli(args);
    INFO(args);
    CHECK(r.code == 0);
    CHECK_NOTHROW(nlohmann::json::parse(r.out));
  }
}

TEST_CASE("sweep accepts a pinned custom config", "[cli]") {
  namespace fs = std::filesystem;
  const fs::path dir =
      fs::temp_directory_path() / ("tmsvbell_sw_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path file = dir / "swap.json";
  std::ofstream(file) << R"({"re":[[0,1],[1,0]]})";
  const RunResult r =
      run_cli("sweep --zeta-min 0.1 --zeta-max 0.3 --steps 3 --dim 4 "
              "--configs custom --config-file " + file.string());
  CHECK(r.code == 0);
  CHECK(r.out.find("custom") != std::string::npos);
  // without --dim the adaptive truncation cannot match a fixed matrix
  CHECK(run_cli("sweep --zeta-min 0.1 --zeta-max 0.3 --steps 3 "
                "--configs custom --config-file " + file.string()).code == 2);
  fs::remove_all(dir);
}

TEST_CASE("optimize families", "[cli]") {
  const RunResult d = run_cli("optimize --zeta 0.5 --family diagonal-phase");
  CHECK(d.code == 0);
  CHECK(d.out.find("\"within_bound\":true") != std::string::npos);

  const std::string args =
      "optimize --zeta 0.8 --family random-unitary --trials 50 --seed 7";
  const RunResult a = run_cli(args);
  const RunResult b = run_cli(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);

  CHECK(run_cli("optimize --zeta 0 --family diagonal-phase").code == 0);
}

TEST_CASE("exit codes", "[cli]") {
  SECTION("usage errors exit 2") {
    CHECK(run_cli("frobnicate").code == 2);
    CHECK(run_cli("sweep --steps 1").code == 2);
    CHECK(run_cli("sweep --steps 5 --configs bogus").code == 2);
    CHECK(run_cli("bell").code == 2);  // --zeta required
    CHECK(run_cli("optimize --zeta 0.5 --family random-unitary").code == 2);
    CHECK(run_cli("optimize --zeta 0.5 --family mystery").code == 2);
    CHECK(run_cli("sweep --zeta-min -0.5 --steps 5").code == 2);
    CHECK(run_cli("sweep --steps 5 --configs custom").code == 2);
    CHECK(run_cli("verify --dim 2").code == 2);  // needs two level pairs
  }
  SECTION("capacity errors exit 3") {
    CHECK(run_cli("bell --zeta 4").code == 3);
    CHECK(run_cli("sweep --zeta-min 0 --zeta-max 5 --steps 5").code == 3);
  }
  SECTION("help exits 0") {
    CHECK(run_cli("--help").code == 0);
    CHECK(run_cli("sweep --help").code == 0);
  }
}

TEST_CASE("custom config files", "[cli]") {
  namespace fs = std::filesystem;
  const fs::path dir =
      fs::temp_directory_path() / ("tmsvbell_cfg_" + std::to_string(::getpid()));
  fs::create_directories(dir);

  SECTION("a valid unitary is accepted") {
    const fs::path file = dir / "swap.json";
    std::ofstream(file) << R"({"re":[[0,1],[1,0]],"im":[[0,0],[0,0]]})";
    const RunResult r = run_cli("bell --zeta 0.3 --dim 4 --configs custom "
                                "--config-file " + file.string());
    CHECK(r.code == 0);
    CHECK(r.out.find("\"config1\":\"custom\"") != std::string::npos);
  }

  SECTION("a non-unitary matrix is rejected as usage error") {
    const fs::path file = dir / "bad.json";
    std::ofstream(file) << R"({"re":[[1,0],[0,2]]})";
    CHECK(run_cli("bell --zeta 0.3 --dim 4 --configs custom --config-file " +
                  file.string()).code == 2);
  }

  SECTION("malformed JSON is a usage error") {
    const fs::path file = dir / "broken.json";
    std::ofstream(file) << "{not json";
    CHECK(run_cli("bell --zeta 0.3 --dim 4 --configs custom --config-file " +
                  file.string()).code == 2);
  }
  fs::remove_all(dir);
}
