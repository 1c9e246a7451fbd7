#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "ttedopa/tridiag.hpp"

using namespace ttedopa;

TEST_CASE("tridiagonal eigendecomposition matches dense solver") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int n : {1, 2, 3, 8, 40, 120}) {
        std::vector<double> d(n), e(std::max(0, n - 1));
        for (auto& x : d) x = u(rng);
        for (auto& x : e) x = u(rng);
        auto eig = tridiag_eigen(d, e);

        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) a(i, i) = d[i];
        for (int i = 0; i + 1 < n; ++i) a(i, i + 1) = a(i + 1, i) = e[i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(a);

        for (int k = 0; k < n; ++k)
            REQUIRE(eig.values[k] == Catch::Approx(ref.eigenvalues()(k)).margin(1e-11));

        // residual and orthonormality
        for (int k = 0; k < n; ++k) {
            Eigen::VectorXd v(n);
            for (int i = 0; i < n; ++i) v(i) = eig.vec(i, k);
            REQUIRE((a * v - eig.values[k] * v).norm() < 1e-10 * (1.0 + std::abs(eig.values[k])));
            REQUIRE(v.norm() == Catch::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("degenerate and trivial cases") {
    auto eig = tridiag_eigen({3.0}, {});
    REQUIRE(eig.values[0] == 3.0);
    REQUIRE(eig.vec(0, 0) == 1.0);

    // repeated eigenvalues: decoupled identical blocks
    auto e2 = tridiag_eigen({1.0, 1.0, 1.0}, {0.0, 0.0});
    for (double v : e2.values) REQUIRE(v == Catch::Approx(1.0));

    REQUIRE_THROWS_AS(tridiag_eigen({}, {}), validation_error);
    REQUIRE_THROWS_AS(tridiag_eigen({1.0, 2.0}, {}), validation_error);
}
