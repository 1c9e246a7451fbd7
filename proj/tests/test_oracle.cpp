#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ttedopa/oracle.hpp"

using namespace ttedopa;

TEST_CASE("decoherence curve basics") {
    auto jw = SpectralDensity::wscp();
    std::vector<double> times{0.0, 0.02, 0.1, 0.5, 1.0, 1.4};
    for (double T : {0.0, 77.0, 300.0}) {
        auto c = dephasing_coherence(jw, T, times);
        REQUIRE(c.gamma[0] == 0.0);
        REQUIRE(c.theta[0] == 0.5);
        for (std::size_t i = 0; i < times.size(); ++i) {
            REQUIRE(c.gamma[i] >= 0.0);
            REQUIRE(c.theta[i] <= 0.5);
        }
    }
    REQUIRE_THROWS_AS(dephasing_coherence(jw, -1.0, times), std::domain_error);
    REQUIRE_THROWS_AS(dephasing_coherence(jw, 10.0, {-0.5}), std::domain_error);
}

TEST_CASE("decoherence value against a 40-digit reference") {
    // gamma(0.1 ps, 300 K) for the full pigment-protein density
    auto jw = SpectralDensity::wscp();
    auto c = dephasing_coherence(jw, 300.0, {0.1});
    REQUIRE(c.gamma[0] == Catch::Approx(2.9868571876996955).epsilon(1e-11));
    REQUIRE(c.theta[0] == Catch::Approx(0.025222864654964868).epsilon(1e-10));
}

TEST_CASE("decoherence: refined quadrature agrees within the error estimate") {
    auto jw = SpectralDensity::wscp();
    for (double t : {0.1, 0.7, 1.4}) {
        auto coarse = dephasing_coherence(jw, 300.0, {t}, 1e-9, 15);
        auto fine = dephasing_coherence(jw, 300.0, {t}, 1e-11, 25);
        REQUIRE(std::abs(coarse.gamma[0] - fine.gamma[0]) < 1e-8);
    }
}

TEST_CASE("decoherence: T -> 0 continuity") {
    auto jw = SpectralDensity::wscp();
    std::vector<double> times{0.05, 0.3, 1.0};
    auto zero = dephasing_coherence(jw, 0.0, times);
    auto tiny = dephasing_coherence(jw, 1e-6, times);
    for (std::size_t i = 0; i < times.size(); ++i)
        REQUIRE(zero.gamma[i] == Catch::Approx(tiny.gamma[i]).margin(1e-8));
}

TEST_CASE("ED: norm and energy are conserved exactly") {
    auto c = recurrence_coefficients(thermalize(SpectralDensity::wscp(), 300.0), 3);
    auto ham = assemble_chain(ModelSpec::dephasing_wscp(300.0), {c}, {{4, 4, 4}});
    EDInstance ed(ham);
    double e0 = ed.energy(ed.initial());
    for (double t : {0.01, 0.05, 0.2}) {
        auto psi = ed.state_at(t);
        REQUIRE(psi.norm() == Catch::Approx(1.0).margin(1e-10));
        REQUIRE(ed.energy(psi) == Catch::Approx(e0).margin(1e-10 * (1.0 + std::abs(e0))));
    }
}

TEST_CASE("ED: free system under kappa_0 = 0 and system-only instance") {
    auto c = recurrence_coefficients(SpectralDensity::wscp(), 2);
    c.kappas[0] = 0.0;
    auto ham = assemble_chain(ModelSpec::dephasing_wscp(0.0), {c}, {{3, 3}});
    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_max = 0.1;
    cfg.observables = {"coherence", "occupation:0"};
    cfg.sampling_stride = 20;
    auto ts = ed_evolve(ham, cfg);
    for (double v : ts.column("coherence")) REQUIRE(v == Catch::Approx(0.5).margin(1e-12));
    for (double v : ts.column("occupation:0")) REQUIRE(v == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("ED: dimension cap refusal names the dimension") {
    auto c = recurrence_coefficients(SpectralDensity::wscp(), 7);
    auto ham = assemble_chain(ModelSpec::dephasing_wscp(0.0), {c},
                              {std::vector<int>(7, 4)});
    try {
        EDInstance ed(ham);
        FAIL("expected a refusal");
    } catch (const validation_error& e) {
        REQUIRE(std::string(e.what()).find("exceeds cap") != std::string::npos);
    }
}

TEST_CASE("ED: self-consistency of the two sampling paths") {
    // the eigendecomposition path must not depend on dt used for sampling
    auto c = recurrence_coefficients(thermalize(SpectralDensity::wscp(), 77.0), 2);
    auto ham = assemble_chain(ModelSpec::dephasing_wscp(77.0), {c}, {{4, 4}});
    EvolutionConfig a;
    a.dt = 1e-3;
    a.t_max = 0.05;
    a.observables = {"coherence"};
    a.sampling_stride = 50;  // samples at 0, 0.05
    EvolutionConfig b = a;
    b.dt = 0.5e-3;
    b.sampling_stride = 100;
    auto ta = ed_evolve(ham, a);
    auto tb = ed_evolve(ham, b);
    REQUIRE(ta.column("coherence").back() ==
            Catch::Approx(tb.column("coherence").back()).margin(1e-13));
}
