#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ttedopa/run.hpp"

using namespace ttedopa;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("ttedopa_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

RunConfig tiny_config(const TempDir& dir) {
    RunConfig cfg;
    cfg.preset = "dephasing-wscp";
    cfg.temperatures = {300.0};
    cfg.evolution.dt = 5e-4;
    cfg.evolution.t_max = 0.02;
    cfg.evolution.chi_max = 16;
    cfg.evolution.observables = {"coherence", "occupation:0"};
    cfg.evolution.sampling_stride = 10;
    cfg.auto_estimate = false;
    cfg.chain_length = 6;
    cfg.d_max = 6;
    cfg.output = dir.file("run.csv");
    return cfg;
}

}  // namespace

TEST_CASE("run config validation") {
    RunConfig cfg;
    cfg.temperatures = {};
    REQUIRE_THROWS_AS(cfg.validate(), validation_error);
    cfg.temperatures = {-5.0};
    REQUIRE_THROWS_AS(cfg.validate(), validation_error);
    cfg.temperatures = {300.0};
    cfg.auto_estimate = true;
    cfg.chain_length = 10;
    REQUIRE_THROWS_AS(cfg.validate(), validation_error);
    cfg.chain_length = 0;
    REQUIRE_NOTHROW(cfg.validate());
}

TEST_CASE("T = 0 run pipeline emits the unthermalized coefficients") {
    TempDir dir;
    auto cfg = tiny_config(dir);
    cfg.temperatures = {0.0};
    auto art = run_single(cfg, 0.0, false);
    auto direct = recurrence_coefficients(SpectralDensity::wscp(), 6);
    direct.measure = "";
    auto checksum = art.manifest.at("results").at("coefficient_checksums")[0].get<std::string>();
    // compare against a recomputation through the thermalized path
    auto frozen = recurrence_coefficients(thermalize(SpectralDensity::wscp(), 0.0), 6);
    frozen.omegas.resize(6);
    frozen.kappas.resize(6);
    for (std::size_t i = 0; i < 6; ++i) {
        REQUIRE(frozen.omegas[i] == Catch::Approx(direct.omegas[i]).margin(1e-9));
        REQUIRE(frozen.kappas[i] == Catch::Approx(direct.kappas[i]).margin(1e-9));
    }
    REQUIRE(checksum == coefficients_checksum(frozen));
}

TEST_CASE("dimer preset manifest records lambda and identical coefficient sets") {
    TempDir dir;
    auto cfg = tiny_config(dir);
    cfg.preset = "dimer-wscp";
    cfg.evolution.observables = {"P_plus"};
    cfg.chain_length = 4;
    cfg.d_max = 4;
    auto art = run_single(cfg, 300.0, false);
    const auto& res = art.manifest.at("results");
    REQUIRE(res.at("lambda").get<double>() == 69.0);
    auto sums = res.at("coefficient_checksums");
    REQUIRE(sums.size() == 2);
    REQUIRE(sums[0] == sums[1]);
    REQUIRE(art.series.column("P_plus")[0] == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("manifest re-run reproduces every observable column") {
    TempDir dir;
    auto cfg = tiny_config(dir);
    auto outcome = run(cfg);
    REQUIRE(outcome.exit_status == 0);
    auto manifest = nlohmann::json::parse(std::ifstream(dir.file("run.csv.manifest.json")));
    REQUIRE(manifest.at("schema_version").get<int>() == kManifestSchemaVersion);

    auto cfg2 = RunConfig::from_json(manifest);
    cfg2.output = dir.file("rerun.csv");
    auto outcome2 = run(cfg2);
    REQUIRE(outcome2.exit_status == 0);

    auto a = TimeSeries::read_csv_file(dir.file("run.csv"));
    auto b = TimeSeries::read_csv_file(dir.file("rerun.csv"));
    for (const auto& col : a.columns)
        REQUIRE(compare_series(a, b, col).max_abs_diff <= 1e-12);

    // k-thread rerun stays within 1e-9
    auto cfg4 = cfg2;
    cfg4.output = dir.file("rerun4.csv");
    cfg4.threads = 4;
    REQUIRE(run(cfg4).exit_status == 0);
    auto c = TimeSeries::read_csv_file(dir.file("rerun4.csv"));
    for (const auto& col : a.columns)
        REQUIRE(compare_series(a, c, col).max_abs_diff <= 1e-9);
}

TEST_CASE("per-temperature errors do not stop other temperatures") {
    TempDir dir;
    auto cfg = tiny_config(dir);
    // second temperature invalid for the estimator-free small chain:
    // force a numerical error by requesting more sites than coefficients
    cfg.temperatures = {300.0, 150.0};
    cfg.auto_estimate = true;
    cfg.chain_length = 0;
    cfg.coefficient_reserve = 4;  // walk probe needs 2M > 4 immediately
    auto outcome = run(cfg);
    REQUIRE(outcome.exit_status == 3);
    REQUIRE(outcome.errors.size() == 2);  // both fail the same way here
    for (const auto& e : outcome.errors)
        REQUIRE(e.find("coefficient table exhausted") != std::string::npos);
}

TEST_CASE("csv output parses back losslessly") {
    TempDir dir;
    auto cfg = tiny_config(dir);
    auto art = run_single(cfg, 300.0, false);
    art.series.write_csv_file(dir.file("x.csv"));
    auto back = TimeSeries::read_csv_file(dir.file("x.csv"));
    REQUIRE(back.n_samples() == art.series.n_samples());
    for (std::size_t i = 0; i < back.n_samples(); ++i) {
        REQUIRE(back.t_ps[i] == art.series.t_ps[i]);
        for (std::size_t c = 0; c < back.columns.size(); ++c)
            REQUIRE(back.values[c][i] == art.series.values[c][i]);
    }
    auto self = compare_series(back, back, "coherence");
    REQUIRE(self.max_abs_diff == 0.0);
}

TEST_CASE("compare rejects mismatched grids") {
    TimeSeries a, b;
    a.t_ps = {0.0, 0.1};
    a.columns = {"x"};
    a.values = {{1.0, 2.0}};
    a.discarded_weight = {0, 0};
    a.max_bond_dim = {1, 1};
    b = a;
    b.t_ps[1] = 0.1 + 1e-9;
    REQUIRE_THROWS_AS(compare_series(a, b, "x"), validation_error);
}
