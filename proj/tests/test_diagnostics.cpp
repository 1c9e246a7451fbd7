#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "ttedopa/diagnostics.hpp"
#include "ttedopa/units.hpp"

using namespace ttedopa;

namespace {

ChainCoefficients homogeneous(std::size_t n, double omega, double kappa, double kappa0 = 1.0) {
    ChainCoefficients c;
    c.omegas.assign(n, omega);
    c.kappas.assign(n, kappa);
    c.kappas[0] = kappa0;
    return c;
}

}  // namespace

TEST_CASE("thermal occupation: vacuum at T = 0") {
    auto c = recurrence_coefficients(SpectralDensity::wscp(), 20);
    auto prof = thermal_occupation(c, 0.0, 20);
    for (double o : prof.occupations) REQUIRE(o == 0.0);
}

TEST_CASE("thermal occupation: single site is plain Bose-Einstein") {
    ChainCoefficients c;
    c.omegas = {200.0};
    c.kappas = {50.0};
    auto prof = thermal_occupation(c, 300.0, 1);
    // frozen: 1/(exp(200/(0.6950348*300)) - 1)
    REQUIRE(prof.occupations[0] == Catch::Approx(0.62128482287255092).epsilon(1e-13));
}

TEST_CASE("thermal occupation: matches the Gaussian covariance for small chains") {
    auto c = recurrence_coefficients(SpectralDensity::wscp(), 6);
    for (double T : {77.0, 300.0}) {
        auto prof = thermal_occupation(c, T, 6);
        // brute force: diag((e^{beta A} - 1)^{-1}) via scaling-and-squaring expm
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(6, 6);
        for (int i = 0; i < 6; ++i) a(i, i) = c.omegas[i];
        for (int i = 0; i + 1 < 6; ++i) a(i, i + 1) = a(i + 1, i) = c.kappas[i + 1];
        double beta = units::inverse_temperature(T);
        Eigen::MatrixXd num = ((beta * a).exp() - Eigen::MatrixXd::Identity(6, 6)).inverse();
        for (int i = 0; i < 6; ++i)
            REQUIRE(prof.occupations[i] == Catch::Approx(num(i, i)).margin(1e-10));
    }
}

TEST_CASE("thermal occupation: N = 50 standard-mapping profile shape") {
    auto c = recurrence_coefficients(SpectralDensity::wscp(), 50);
    auto p300 = thermal_occupation(c, 300.0, 50);
    auto p77 = thermal_occupation(c, 77.0, 50);
    auto p0 = thermal_occupation(c, 0.0, 50);

    auto peak = [](const OccupationProfile& p) {
        std::size_t arg = 0;
        for (std::size_t i = 0; i < p.occupations.size(); ++i)
            if (p.occupations[i] > p.occupations[arg]) arg = i;
        return arg;
    };
    double m300 = p300.occupations[peak(p300)];
    double m77 = p77.occupations[peak(p77)];
    double m0 = 0.0;
    for (double o : p0.occupations) m0 = std::max(m0, o);
    REQUIRE(m300 > m77);
    REQUIRE(m77 > m0);
    REQUIRE(m0 == 0.0);

    // broad interior maximum at 300 K
    std::size_t arg = peak(p300);
    REQUIRE(arg > 5);
    REQUIRE(arg < 45);
    REQUIRE(p300.occupations[arg - 5] > 0.5 * m300);
    REQUIRE(p300.occupations[arg + 5] > 0.5 * m300);
}

TEST_CASE("thermal occupation: negative normal modes are an error at T > 0") {
    // thermalized measure has support on negative frequencies
    auto th = thermalize(SpectralDensity::wscp(), 300.0);
    auto c = recurrence_coefficients(th, 30);
    REQUIRE_THROWS_AS(thermal_occupation(c, 300.0, 30), std::domain_error);
    REQUIRE_THROWS_AS(thermal_occupation(c, -5.0, 30), std::domain_error);
}

TEST_CASE("suggested dimensions from occupations") {
    OccupationProfile prof;
    prof.occupations = {2.3, 0.4, 0.0};
    auto dims = suggested_local_dims(prof);
    REQUIRE(dims == (std::vector<int>{11, 3, 2}));
}

TEST_CASE("quantum walk conserves probability") {
    auto th = thermalize(SpectralDensity::wscp(), 300.0);
    auto c = recurrence_coefficients(th, 60);
    std::vector<double> times;
    for (int i = 0; i <= 50; ++i) times.push_back(0.5 * i / 50.0);
    auto walk = quantum_walk(c, 60, times);
    for (std::size_t it = 0; it < times.size(); ++it)
        REQUIRE(walk.norm_at(it) == Catch::Approx(1.0).margin(1e-8));
    REQUIRE(walk.prob[0][0] == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("chain length estimate: trivial horizon and validation") {
    auto c = homogeneous(100, 0.0, 100.0);
    REQUIRE(estimate_chain_length(c, 0.0, {}) == 2);
    ChainLengthOptions bad;
    bad.return_threshold = 2.0;
    REQUIRE_THROWS_AS(estimate_chain_length(c, 0.1, bad), validation_error);
    REQUIRE_THROWS_AS(estimate_chain_length(c, -1.0, {}), validation_error);
}

TEST_CASE("chain length estimate: ballistic scaling on a homogeneous chain") {
    const double kappa = 100.0;
    auto c = homogeneous(1200, 0.0, kappa);
    ChainLengthOptions opt;
    opt.cap = 500;
    double t1 = 0.25, t2 = 0.5;
    auto n1 = estimate_chain_length(c, t1, opt);
    auto n2 = estimate_chain_length(c, t2, opt);
    // front at ~2 kappa sites per unit phase time
    double front1 = 2.0 * kappa * units::rad_per_ps * t1;
    REQUIRE(double(n1) > front1);
    REQUIRE(double(n1) < 2.2 * front1);
    double ratio = double(n2) / double(n1);
    REQUIRE(ratio > 1.5);
    REQUIRE(ratio < 2.5);
}

TEST_CASE("chain length estimate: monotone in horizon, errors when exhausted") {
    auto th = thermalize(SpectralDensity::wscp(), 300.0);
    auto c = recurrence_coefficients(th, 120);
    std::size_t prev = 0;
    for (double t : {0.05, 0.1, 0.2, 0.3}) {
        auto n = estimate_chain_length(c, t, {});
        REQUIRE(n >= prev);
        prev = n;
    }
    REQUIRE_THROWS_AS(estimate_chain_length(c, 50.0, {}), numerical_error);
}

TEST_CASE("local dimension schedule") {
    REQUIRE(schedule_value(12, 60, 0) == 12);
    REQUIRE(schedule_value(12, 60, 60) == 2);
    REQUIRE(schedule_value(12, 60, 30) == 7);
    auto dims = local_dimension_schedule(12, 60);
    REQUIRE(dims.size() == 60);
    REQUIRE(dims.front() == 12);
    for (std::size_t i = 1; i < dims.size(); ++i) REQUIRE(dims[i] <= dims[i - 1]);
    for (int d : dims) REQUIRE(d >= 2);
    REQUIRE_THROWS_AS(schedule_value(1, 10, 0), validation_error);
    REQUIRE_THROWS_AS(schedule_value(4, 0, 0), validation_error);
}
