#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"

namespace {

namespace fs = std::filesystem;

const char* kCli = BLOCKAGE_CLI_PATH;

fs::path work_dir() {
    const fs::path dir = fs::temp_directory_path() / "blockage_cli_test";
    fs::create_directories(dir);
    return dir;
}

int run(const std::string& command) {
    const int status = std::system(command.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path write_small_config() {
    const fs::path path = work_dir() / "small.json";
    std::ofstream out(path);
    out << R"({
      "cell": {"relay_count": 0},
      "quadrature": {"nodes_l": 6, "nodes_w": 6, "nodes_h": 4, "nodes_theta": 8},
      "mc": {"trials": 4000, "seed": 3},
      "sweeps": {"distance_m": {"start": 0, "stop": 200, "step": 100},
                 "lambdas_per_m2": [1e-4],
                 "hmax_m": [30]}
    })";
    return path;
}

}  // namespace

TEST_CASE("single command writes a deterministic CSV") {
    const fs::path cfg = write_small_config();
    const fs::path out1 = work_dir() / "single1.csv";
    const fs::path out2 = work_dir() / "single2.csv";
    const std::string base = std::string(kCli) + " single --config " +
                             cfg.string() + " --out ";
    REQUIRE(run(base + out1.string() + " >/dev/null 2>&1") == 0);
    // a different worker count must not change a single byte
    REQUIRE(run("BLOCKAGE_THREADS=1 " + base + out2.string() +
                " >/dev/null 2>&1") == 0);
    const std::string text1 = slurp(out1);
    CHECK(text1 == slurp(out2));
    CHECK(text1.rfind("d_m,p_analytic,p_mc,mc_stderr,lambda_per_m2\n", 0) == 0);
    // three distances for one density -> header plus 3 rows
    CHECK(std::count(text1.begin(), text1.end(), '\n') == 4);
}

TEST_CASE("density command emits matching closed-form and quadrature means") {
    const fs::path cfg = write_small_config();
    const fs::path out = work_dir() / "density.csv";
    REQUIRE(run(std::string(kCli) + " density --config " + cfg.string() +
                " --out " + out.string() + " >/dev/null 2>&1") == 0);
    std::ifstream in(out);
    std::string header, row;
    std::getline(in, header);
    CHECK(header == "lambda,hmax_m,mean_p_closed_form,mean_p_quadrature");
    REQUIRE(std::getline(in, row));
    double lambda, hmax, closed, quad;
    char comma;
    std::istringstream(row) >> lambda >> comma >> hmax >> comma >> closed >>
        comma >> quad;
    CHECK(std::abs(closed - quad) <= 1e-6);
}

TEST_CASE("exit codes: config errors are 2, validation failures are 3") {
    const fs::path bad = work_dir() / "bad.json";
    std::ofstream(bad) << R"({"cell": {"raduis_m": 300}})";
    CHECK(run(std::string(kCli) + " single --config " + bad.string() +
              " >/dev/null 2>&1") == 2);
    CHECK(run(std::string(kCli) + " single --config /nonexistent.json"
              " >/dev/null 2>&1") == 2);

    const fs::path cfg = write_small_config();
    const fs::path report = work_dir() / "report.json";
    CHECK(run(std::string(kCli) + " validate --config " + cfg.string() +
              " --out " + report.string() + " >/dev/null 2>&1") == 0);
    CHECK(slurp(report).find("\"all_pass\": true") != std::string::npos);

    // negative control: a corrupted height factor must fail loudly
    CHECK(run("BLOCKAGE_DEBUG_ETA_SCALE=2 " + std::string(kCli) +
              " validate --config " + cfg.string() + " >/dev/null 2>&1") == 3);
}

TEST_CASE("validate passes trivially with no blockers") {
    const fs::path cfg = work_dir() / "empty.json";
    std::ofstream(cfg) << R"({
      "cell": {"relay_count": 0},
      "blockers": {"density_per_m2": 0.0},
      "mc": {"trials": 500, "seed": 1},
      "sweeps": {"distance_m": {"start": 0, "stop": 300, "step": 150},
                 "lambdas_per_m2": [0.0]}
    })";
    CHECK(run(std::string(kCli) + " validate --config " + cfg.string() +
              " >/dev/null 2>&1") == 0);
}
