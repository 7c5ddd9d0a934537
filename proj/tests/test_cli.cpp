// End-to-end checks of the command-line tool: exit codes, output schemas,
// determinism and sample round-trips. The binary path comes from the build.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/stat.h>
#include <vector>

#include "json.hpp"
#include "kernsel/io.hpp"

namespace {

const std::string cli = KERNSEL_CLI_PATH;

struct TempDir {
    std::string path;
    explicit TempDir(const std::string& name) : path("cli_test_" + name) {
        std::string cmd = "rm -rf " + path + " && mkdir -p " + path;
        REQUIRE(std::system(cmd.c_str()) == 0);
    }
    ~TempDir() {
        const int rc = std::system(("rm -rf " + path).c_str());
        (void)rc;
    }
};

int run(const std::string& args) {
    const std::string cmd = cli + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int count_data_rows(const std::string& csv) {
    std::istringstream ss(csv);
    std::string line;
    int rows = 0;
    while (std::getline(ss, line)) {
        if (!line.empty() && line[0] != '#' && line.find(',') != std::string::npos) ++rows;
    }
    return rows - 1;  // header
}

}  // namespace

TEST_CASE("sample + select: reference bandwidth grid end to end") {
    TempDir dir("select");
    REQUIRE(run("sample --density std-gaussian --n 100 --seed 7 --output x.txt --out-dir " +
                dir.path) == 0);
    REQUIRE(run("select --family parzen --a 0 --h-grid paper --penalty optimal --input " +
                dir.path + "/x.txt --out-dir " + dir.path) == 0);

    const std::string csv = slurp(dir.path + "/selection.csv");
    CHECK(csv.rfind("# manifest: selection.manifest.json\n"
                    "kernel_index,family_params,contrast,penalty,criterion,complexity,"
                    "selected_flag\n",
                    0) == 0);
    CHECK(count_data_rows(csv) == 50);

    struct stat st {};
    CHECK(stat((dir.path + "/selection.manifest.json").c_str(), &st) == 0);
}

TEST_CASE("penalty spellings parse") {
    TempDir dir("penalty");
    REQUIRE(run("sample --density triangular --n 50 --seed 3 --output t.txt --out-dir " +
                dir.path) == 0);
    const std::string base = "select --family histogram --d-max 20 --input " + dir.path +
                             "/t.txt --out-dir " + dir.path + " --penalty ";
    CHECK(run(base + "kappa:0.5") == 0);
    CHECK(run(base + "minimal") == 0);
    CHECK(run(base + "empirical") == 0);
    CHECK(run(base + "none") == 0);
    CHECK(run(base + "bogus") == 2);
}

TEST_CASE("kappa penalty value reaches the criterion") {
    TempDir dir("kappaval");
    REQUIRE(run("sample --density uniform --n 25 --seed 9 --output u.txt --out-dir " +
                dir.path) == 0);
    REQUIRE(run("select --family histogram --d-max 4 --penalty kappa:0.5 --input " +
                dir.path + "/u.txt --out-dir " + dir.path) == 0);
    // pen(D) = (1 + kappa) D / n = 1.5 D / 25
    std::istringstream ss(slurp(dir.path + "/selection.csv"));
    std::string line;
    std::getline(ss, line);  // comment
    std::getline(ss, line);  // header
    int d = 1;
    while (std::getline(ss, line)) {
        const auto first = line.find(',');
        const auto second = line.find(',', first + 1);
        const auto third = line.find(',', second + 1);
        const auto fourth = line.find(',', third + 1);
        const double pen = std::stod(line.substr(third + 1, fourth - third - 1));
        CHECK(pen == Catch::Approx(1.5 * d / 25.0).margin(1e-15));
        ++d;
    }
    CHECK(d == 5);
}

TEST_CASE("no subcommand is a usage error") {
    CHECK(run("") == 2);
    CHECK(run("frobnicate") == 2);
}

TEST_CASE("diagnose runs the Parzen oracle path") {
    TempDir dir("diagparzen");
    REQUIRE(run("sample --density std-gaussian --n 20 --seed 4 --output g.txt --out-dir " +
                dir.path) == 0);
    REQUIRE(run("diagnose --family parzen --a 1.5 --h-grid 0.4,0.2 --input " + dir.path +
                "/g.txt --density std-gaussian --out-dir " + dir.path) == 0);
    const auto doc = nlohmann::json::parse(slurp(dir.path + "/diagnostics.json"));
    REQUIRE(doc.at("kernels").size() == 2);
    for (const auto& k : doc.at("kernels")) {
        CHECK(std::abs(k.at("ustat_residual").get<double>()) <= 1e-6);
        CHECK(k.at("true_risk").get<double>() >= -1e-10);
        CHECK(k.at("bias").get<double>() >= -1e-10);
    }
    CHECK(doc.at("upsilon_report").at("upsilon_lower").get<double>() >= 1.0);
}

TEST_CASE("malformed input exits 3") {
    TempDir dir("bad");
    std::ofstream(dir.path + "/bad.txt") << "0.5\noops\n0.25\n";
    CHECK(run("select --family histogram --d-max 5 --input " + dir.path +
              "/bad.txt --out-dir " + dir.path) == 3);
    CHECK(run("select --family histogram --d-max 5 --input " + dir.path +
              "/missing.txt --out-dir " + dir.path) == 3);
}

TEST_CASE("sweep rows, rerun determinism, manifest") {
    TempDir dir("sweep");
    const std::string cmd =
        "sweep --scenario parzen --a 2 --n 40 --reps 5 --seed 7 --kappa-grid " +
        std::string("-1:1:5 --h-grid 0.05:0.5:10 --out-dir ") + dir.path;
    REQUIRE(run(cmd) == 0);
    const std::string first = slurp(dir.path + "/sweep.csv");
    const std::string first_summary = slurp(dir.path + "/sweep_summary.csv");
    CHECK(count_data_rows(first) == 5 * 5);

    REQUIRE(run(cmd) == 0);
    CHECK(slurp(dir.path + "/sweep.csv") == first);
    CHECK(slurp(dir.path + "/sweep_summary.csv") == first_summary);

    // a different seed must change the rows
    REQUIRE(run("sweep --scenario parzen --a 2 --n 40 --reps 5 --seed 8 --kappa-grid "
                "-1:1:5 --h-grid 0.05:0.5:10 --out-dir " +
                dir.path) == 0);
    CHECK(slurp(dir.path + "/sweep.csv") != first);
}

TEST_CASE("KERNSEL_SEED is the fallback master seed") {
    TempDir dir("envseed");
    const std::string base = "sweep --scenario histogram --d-max 10 --n 30 --reps 3 "
                             "--kappa-grid 0:1:2 --out-dir " +
                             dir.path;
    REQUIRE(std::system(("KERNSEL_SEED=99 " + cli + " " + base + " >/dev/null 2>&1").c_str()) ==
            0);
    const std::string env_run = slurp(dir.path + "/sweep.csv");
    REQUIRE(run(base + " --seed 99") == 0);
    CHECK(slurp(dir.path + "/sweep.csv") == env_run);
}

TEST_CASE("bias-dominant validation exits 2") {
    TempDir dir("beta");
    CHECK(run("sweep --scenario bias-dominant --beta 0.4 --out-dir " + dir.path) == 2);
    CHECK(run("sweep --scenario bias-dominant --beta 0.3 --n 50 --reps 3 --seed 5 "
              "--out-dir " +
              dir.path) == 0);
}

TEST_CASE("diagnose requires a density and a matching domain") {
    TempDir dir("diag");
    REQUIRE(run("sample --density uniform --n 25 --seed 11 --output u.txt --out-dir " +
                dir.path) == 0);
    const std::string input = dir.path + "/u.txt";
    CHECK(run("diagnose --family histogram --d-max 3 --input " + input + " --out-dir " +
              dir.path) == 2);  // no --density
    CHECK(run("diagnose --family histogram --d-max 3 --input " + input +
              " --density std-gaussian --out-dir " + dir.path) == 2);  // domain mismatch
    REQUIRE(run("diagnose --family histogram --d-max 3 --input " + input +
                " --density uniform --out-dir " + dir.path) == 0);

    const std::string doc = slurp(dir.path + "/diagnostics.json");
    for (const char* key : {"\"bias\"", "\"variance_term\"", "\"true_risk\"",
                            "\"ideal_penalty\"", "\"ustat_residual\"", "\"gamma_report\"",
                            "\"upsilon_report\"", "\"not certified\""}) {
        CHECK(doc.find(key) != std::string::npos);
    }

    // the one-bin histogram reproduces the uniform density exactly, and the
    // decomposition residual stays at quadrature scale for every kernel
    const auto parsed = nlohmann::json::parse(doc);
    CHECK(parsed.at("kernels").at(0).at("true_risk").get<double>() <= 1e-8);
    for (const auto& k : parsed.at("kernels")) {
        CHECK(std::abs(k.at("ustat_residual").get<double>()) <= 1e-6);
    }
}

TEST_CASE("sampled files re-ingest to identical vectors") {
    TempDir dir("roundtrip");
    REQUIRE(run("sample --density triangular --n 64 --seed 21 --output s.txt --out-dir " +
                dir.path) == 0);
    const auto disk = kernsel::read_sample_file(dir.path + "/s.txt");
    const auto direct = kernsel::KnownDensity::triangular2x().sample_n(21, 64);
    REQUIRE(disk.size() == direct.size());
    for (std::size_t i = 0; i < disk.size(); ++i) REQUIRE(disk[i] == direct[i]);
}

TEST_CASE("config file values are overridden by flags") {
    TempDir dir("config");
    std::ofstream(dir.path + "/cfg.json")
        << "{\"n\": 30, \"replications\": 4, \"master_seed\": 12}\n";
    const std::string base = "sweep --scenario histogram --d-max 8 --kappa-grid 0:1:2 "
                             "--config " +
                             dir.path + "/cfg.json --out-dir " + dir.path;
    REQUIRE(run(base) == 0);
    CHECK(count_data_rows(slurp(dir.path + "/sweep.csv")) == 2 * 4);

    REQUIRE(run(base + " --reps 2") == 0);  // flag beats config
    CHECK(count_data_rows(slurp(dir.path + "/sweep.csv")) == 2 * 2);
}
