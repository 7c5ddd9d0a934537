#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "kernsel/io.hpp"
#include "kernsel/rng.hpp"

using namespace kernsel;

namespace {

std::string temp_path(const std::string& name) {
    return std::string("kernsel_io_test_") + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct FileGuard {
    std::string path;
    ~FileGuard() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("g17 formatting round-trips doubles exactly") {
    SplitMix64 rng(5);
    for (int i = 0; i < 2000; ++i) {
        const double v = (rng.uniform01() - 0.5) * std::pow(10.0, (i % 61) - 30);
        CHECK(std::stod(format_g17(v)) == v);
    }
    CHECK(std::stod(format_g17(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("sample files round-trip and skip comments") {
    const std::string path = temp_path("roundtrip.txt");
    FileGuard guard{path};
    const auto values = KnownDensity::std_gaussian().sample_n(99, 200);
    write_sample_file(path, values, "sample.manifest.json");
    const auto back = read_sample_file(path);
    REQUIRE(back.size() == values.size());
    for (std::size_t i = 0; i < values.size(); ++i) REQUIRE(back[i] == values[i]);
}

TEST_CASE("malformed numbers report the line") {
    const std::string path = temp_path("bad.txt");
    FileGuard guard{path};
    std::ofstream(path) << "# header\n0.25\nnot-a-number\n0.5\n";
    try {
        read_sample_file(path);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("csv column extraction") {
    const std::string path = temp_path("cols.csv");
    FileGuard guard{path};
    std::ofstream(path) << "# comment\n1.5,2.5,3.5\n4.5,5.5,6.5\n";
    const auto col1 = read_sample_file(path, 1);
    REQUIRE(col1 == std::vector<double>{2.5, 5.5});
    CHECK_THROWS_AS(read_sample_file(path, 7), DataError);
}

TEST_CASE("missing sample file is a data error") {
    CHECK_THROWS_AS(read_sample_file("no_such_file_1234.txt"), DataError);
}

TEST_CASE("csv writers pin their headers") {
    const std::string sel_path = temp_path("selection.csv");
    FileGuard g1{sel_path};
    std::vector<KernelModel> fam = {KernelModel::projection(RegularHistogram{2})};
    Sample s(KnownDensity::uniform01().sample_n(1, 10));
    const auto res = select(fam, s, PenaltyRule::optimal_theoretical());
    write_selection_csv(sel_path, fam, res, "m.json");
    const std::string sel = slurp(sel_path);
    CHECK(sel.rfind("# manifest: m.json\n"
                    "kernel_index,family_params,contrast,penalty,criterion,complexity,"
                    "selected_flag\n",
                    0) == 0);

    ExperimentConfig cfg;
    cfg.scenario = Scenario::histogram_kappa_sweep;
    cfg.density = KnownDensity::triangular2x();
    cfg.n = 30;
    cfg.dimension_max = 5;
    cfg.kappa_grid = {0.0, 1.0};
    cfg.replications = 2;
    const auto sweep = run_histogram_sweep(cfg);

    const std::string sw_path = temp_path("sweep.csv");
    const std::string sum_path = temp_path("sweep_summary.csv");
    FileGuard g2{sw_path}, g3{sum_path};
    write_sweep_csv(sw_path, sweep, "m.json");
    write_sweep_summary_csv(sum_path, sweep, "m.json");
    CHECK(slurp(sw_path).rfind("# manifest: m.json\n"
                               "kappa,replication,selected_param,complexity,risk,oracle_"
                               "risk\n",
                               0) == 0);
    CHECK(slurp(sum_path).rfind("# manifest: m.json\n"
                                "kappa,median_complexity,median_risk_ratio\n",
                                0) == 0);

    // identical runs serialize to identical bytes
    const std::string sw2_path = temp_path("sweep2.csv");
    FileGuard g4{sw2_path};
    write_sweep_csv(sw2_path, run_histogram_sweep(cfg), "m.json");
    CHECK(slurp(sw_path) == slurp(sw2_path));
}
