#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ttedopa/diagnostics.hpp"
#include "ttedopa/oracle.hpp"
#include "ttedopa/tebd.hpp"

using namespace ttedopa;

namespace {

struct SmallInstance {
    ChainHamiltonian ham;
    EvolutionConfig cfg;
};

// TLS + 3 oscillators with d = 4, the dense-oracle-comparable instance
SmallInstance make_small(double temperature = 0.0, double dt = 1e-4) {
    auto c = recurrence_coefficients(thermalize(SpectralDensity::wscp(), temperature), 3);
    SmallInstance s{assemble_chain(ModelSpec::dephasing_wscp(temperature), {c}, {{4, 4, 4}}), {}};
    s.cfg.dt = dt;
    s.cfg.t_max = 0.1;
    s.cfg.chi_max = 4096;
    s.cfg.svd_cutoff = 0.0;
    s.cfg.observables = {"coherence", "sigma_x", "sigma_y", "sigma_z",
                         "occupation:0", "occupation:1", "occupation:2"};
    s.cfg.sampling_stride = 100;
    return s;
}

double worst_column_diff(const TimeSeries& a, const TimeSeries& b) {
    double worst = 0.0;
    for (const auto& col : a.columns)
        worst = std::max(worst, compare_series(a, b, col).max_abs_diff);
    return worst;
}

}  // namespace

TEST_CASE("gates are unitary") {
    auto s = make_small();
    TrotterGates gates(s.ham, 2.5e-4);
    REQUIRE(gates.unitarity_residual() < 1e-12);
}

TEST_CASE("decoupled system: constant coherence under kappa_0 = 0") {
    auto c = recurrence_coefficients(SpectralDensity::wscp(), 3);
    c.kappas[0] = 0.0;
    ModelSpec model = ModelSpec::dephasing_wscp(0.0);
    model.epsilon = 120.0;  // free evolution still rotates the phase
    auto ham = assemble_chain(model, {c}, {{3, 3, 3}});
    auto psi = init_vacuum(ham);
    EvolutionConfig cfg;
    cfg.dt = 2e-4;
    cfg.t_max = 0.05;
    cfg.observables = {"coherence", "sigma_z", "occupation:1"};
    cfg.sampling_stride = 50;
    auto ts = tebd_evolve(psi, ham, cfg);
    for (double v : ts.column("coherence")) REQUIRE(v == Catch::Approx(0.5).margin(1e-12));
    for (double v : ts.column("sigma_z")) REQUIRE(v == Catch::Approx(0.0).margin(1e-12));
    for (double v : ts.column("occupation:1")) REQUIRE(v == Catch::Approx(0.0).margin(1e-12));
    // the free phase actually moves: sigma_x oscillates as cos(epsilon t)
    auto psi2 = init_vacuum(ham);
    cfg.observables = {"sigma_x"};
    auto ts2 = tebd_evolve(psi2, ham, cfg);
    double t_end = ts2.t_ps.back();
    REQUIRE(ts2.column("sigma_x").back() ==
            Catch::Approx(std::cos(120.0 * units::rad_per_ps * t_end)).margin(1e-8));
}

TEST_CASE("TEBD matches exact diagonalization to 1e-6 and is second order") {
    auto s = make_small();
    auto psi = init_vacuum(s.ham);
    auto ts = tebd_evolve(psi, s.ham, s.cfg);
    auto ed = ed_evolve(s.ham, s.cfg);
    double gap = worst_column_diff(ts, ed);
    REQUIRE(gap < 1e-6);

    auto cfg2 = s.cfg;
    cfg2.dt = 0.5e-4;
    cfg2.sampling_stride = 200;
    auto psi2 = init_vacuum(s.ham);
    auto ts2 = tebd_evolve(psi2, s.ham, cfg2);
    auto ed2 = ed_evolve(s.ham, cfg2);
    double gap2 = worst_column_diff(ts2, ed2);
    double ratio = gap / gap2;
    REQUIRE(ratio > 2.5);
    REQUIRE(ratio < 6.0);
}

TEST_CASE("norm drift stays within the discarded-weight budget") {
    auto s = make_small(300.0);
    auto psi = init_vacuum(s.ham);
    auto cfg = s.cfg;
    cfg.chi_max = 8;
    cfg.svd_cutoff = 1e-12;
    auto ts = tebd_evolve(psi, s.ham, cfg);
    const double sweeps = 3.0 * cfg.t_max / cfg.dt;
    double budget = ts.discarded_weight.back() +
                    10.0 * double(s.ham.n_sites()) * 2.22e-16 * sweeps;
    REQUIRE(std::abs(1.0 - psi.norm_squared()) <= budget);
}

TEST_CASE("energy drift is bounded on the dense-comparable instance") {
    auto s = make_small();
    auto psi = init_vacuum(s.ham);
    TrotterGates gates(s.ham, s.cfg.dt);
    double e0 = measure_energy(psi, gates);
    auto cfg = s.cfg;
    cfg.observables = {};
    tebd_evolve(psi, s.ham, cfg);
    double e1 = measure_energy(psi, gates);
    // second-order splitting: drift ~ O(dt^2) * energy scale * t
    double scale = std::abs(e0) + 350.0;
    REQUIRE(std::abs(e1 - e0) < 1e-4 * scale);
}

TEST_CASE("parallel layer schedule is independent of thread count") {
    auto s = make_small(300.0);
    auto cfg = s.cfg;
    cfg.t_max = 0.02;
    cfg.sampling_stride = 20;
    cfg.threads = 1;
    auto psi1 = init_vacuum(s.ham);
    auto ts1 = tebd_evolve(psi1, s.ham, cfg);
    cfg.threads = 4;
    auto psi4 = init_vacuum(s.ham);
    auto ts4 = tebd_evolve(psi4, s.ham, cfg);
    REQUIRE(worst_column_diff(ts1, ts4) <= 1e-12);
}

TEST_CASE("discard budget warning is recorded, not fatal") {
    auto s = make_small(300.0);
    auto cfg = s.cfg;
    cfg.chi_max = 2;
    cfg.svd_cutoff = 1e-3;
    cfg.discard_budget = 1e-12;
    cfg.t_max = 0.01;
    auto psi = init_vacuum(s.ham);
    auto ts = tebd_evolve(psi, s.ham, cfg);
    REQUIRE_FALSE(ts.warnings.empty());
}

TEST_CASE("excitation stays concentrated near the system at 300 K") {
    // jagged thermal coefficients back-scatter the injected excitation, so
    // the time-averaged occupation of site 0 exceeds that of site 20
    auto tsd = thermalize(SpectralDensity::wscp(), 300.0);
    auto c = recurrence_coefficients(tsd, 26);
    auto ham = assemble_chain(ModelSpec::dephasing_wscp(300.0), {c},
                              {local_dimension_schedule(8, 26)});
    auto psi = init_vacuum(ham);
    EvolutionConfig cfg;
    cfg.dt = 5e-4;
    cfg.t_max = 0.35;
    cfg.chi_max = 24;
    cfg.svd_cutoff = 1e-9;
    cfg.observables = {"occupation:0", "occupation:20"};
    cfg.sampling_stride = 10;
    cfg.threads = 2;
    auto ts = tebd_evolve(psi, ham, cfg);
    auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / double(v.size());
    };
    double site0 = mean(ts.column("occupation:0"));
    double site20 = mean(ts.column("occupation:20"));
    REQUIRE(site0 > site20);
    REQUIRE(site20 >= 0.0);
}

TEST_CASE("observable parsing errors") {
    auto s = make_small();
    REQUIRE_THROWS_AS(Observable::parse("P_plus", s.ham), validation_error);
    REQUIRE_THROWS_AS(Observable::parse("occupation:99", s.ham), validation_error);
    REQUIRE_THROWS_AS(Observable::parse("bogus", s.ham), unsupported_error);
}

TEST_CASE("config validation") {
    EvolutionConfig cfg;
    cfg.dt = 0.0;
    REQUIRE_THROWS_AS(cfg.validate(), validation_error);
    cfg = {};
    cfg.svd_cutoff = 1.5;
    REQUIRE_THROWS_AS(cfg.validate(), validation_error);
    cfg = {};
    auto j = cfg.to_json();
    REQUIRE(j.at("dt").get<double>() == cfg.dt);
    auto back = EvolutionConfig::from_json(j);
    REQUIRE(back.chi_max == cfg.chi_max);
}
