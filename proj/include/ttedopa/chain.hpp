// chain.hpp — Orthogonal-polynomial chain mapping of a spectral measure
//
// Computes the Jacobi (three-term recurrence) coefficients of polynomials
// orthogonal with respect to dmu(w) = J(w) dw via the Lanczos procedure on
// a discretized measure, with full reorthogonalization. Site energies are
// the diagonal recurrence coefficients, couplings the square roots of the
// off-diagonal ones; kappa_0 = sqrt(total mass) couples system to chain.

#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ttedopa/errors.hpp"
#include "ttedopa/quadrature.hpp"
#include "ttedopa/spectral.hpp"

namespace ttedopa {

struct ChainCoefficients {
    std::vector<double> omegas;  // site energies, cm^-1
    std::vector<double> kappas;  // kappas[0] = system coupling; kappas[n>=1] = hops
    std::string measure;         // descriptor of the source density
    double temperature = 0.0;    // Kelvin; 0 also covers plain (unthermalized) measures

    std::size_t size() const { return omegas.size(); }

    nlohmann::json to_json() const {
        return {{"omegas", omegas},
                {"kappas", kappas},
                {"measure", measure},
                {"temperature", temperature}};
    }

    static ChainCoefficients from_json(const nlohmann::json& j) {
        ChainCoefficients c;
        c.omegas = j.at("omegas").get<std::vector<double>>();
        c.kappas = j.at("kappas").get<std::vector<double>>();
        c.measure = j.value("measure", "");
        c.temperature = j.value("temperature", 0.0);
        if (c.kappas.size() != c.omegas.size())
            throw validation_error("ChainCoefficients: omegas and kappas must have equal length");
        return c;
    }

    // CSV with header `n, omega_n, kappa_n`
    void write_csv(std::ostream& os) const {
        os << "n, omega_n, kappa_n\n";
        os.precision(17);
        for (std::size_t n = 0; n < size(); ++n)
            os << n << ", " << omegas[n] << ", " << kappas[n] << "\n";
    }
};

// Lanczos tridiagonalization of the discrete measure {(x_i, w_i)}:
// starting vector sqrt(w_i / sum w), matrix diag(x). Full
// reorthogonalization keeps the recurrence stable at binary64.
inline ChainCoefficients recurrence_from_discrete(const quad::DiscreteMeasure& m, std::size_t n_coeffs,
                                                  std::string descriptor = "", double temperature = 0.0) {
    const std::size_t npts = m.nodes.size();
    if (n_coeffs < 1) throw validation_error("recurrence coefficients: need N >= 1");
    if (npts == 0) throw std::domain_error("recurrence coefficients: empty measure");

    double mass = 0.0;
    for (double w : m.weights) mass += w;
    if (!(mass > 0.0) || !std::isfinite(mass))
        throw std::domain_error("recurrence coefficients: measure has non-positive total mass");
    if (npts < n_coeffs)
        throw validation_error("recurrence coefficients: discretization has fewer nodes than requested coefficients");

    // rounding floor for couplings: measure width below ~64 ulp of the
    // support span cannot be resolved and only produces noise
    double lo = m.nodes.front(), hi = m.nodes.front();
    for (double x : m.nodes) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    const double span = std::max(hi - lo, std::abs(hi) + std::abs(lo));
    const double beta_floor = std::pow(64.0 * 2.22e-16 * span, 2);

    ChainCoefficients out;
    out.measure = std::move(descriptor);
    out.temperature = temperature;
    out.omegas.resize(n_coeffs);
    out.kappas.resize(n_coeffs);
    out.kappas[0] = std::sqrt(mass);

    std::vector<std::vector<double>> basis;  // Lanczos vectors
    basis.reserve(n_coeffs);
    std::vector<double> v(npts), next(npts);
    for (std::size_t i = 0; i < npts; ++i) v[i] = std::sqrt(std::max(m.weights[i], 0.0) / mass);
    basis.push_back(v);

    double beta_prev = 0.0;
    std::vector<double>* prev = nullptr;
    for (std::size_t n = 0; n < n_coeffs; ++n) {
        const std::vector<double>& cur = basis.back();
        double alpha = 0.0;
        for (std::size_t i = 0; i < npts; ++i) alpha += m.nodes[i] * cur[i] * cur[i];
        out.omegas[n] = alpha;
        if (n + 1 == n_coeffs) break;

        for (std::size_t i = 0; i < npts; ++i) {
            next[i] = (m.nodes[i] - alpha) * cur[i];
            if (prev) next[i] -= std::sqrt(beta_prev) * (*prev)[i];
        }
        // full reorthogonalization, twice
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& b : basis) {
                double proj = 0.0;
                for (std::size_t i = 0; i < npts; ++i) proj += b[i] * next[i];
                for (std::size_t i = 0; i < npts; ++i) next[i] -= proj * b[i];
            }
        }
        double beta = 0.0;
        for (std::size_t i = 0; i < npts; ++i) beta += next[i] * next[i];
        if (!(beta > 0.0) || !std::isfinite(beta) || beta < beta_floor)
            throw numerical_error("recurrence coefficients: lost positivity at index " + std::to_string(n + 1) +
                                  " (beta = " + std::to_string(beta) + "); measure is numerically degenerate");
        out.kappas[n + 1] = std::sqrt(beta);
        double inv = 1.0 / std::sqrt(beta);
        for (std::size_t i = 0; i < npts; ++i) next[i] *= inv;
        basis.push_back(next);
        prev = &basis[basis.size() - 2];
        beta_prev = beta;
    }
    return out;
}

namespace detail {

// Panels for measure discretization: density breakpoints, subdivided so the
// composite rule resolves polynomials up to degree ~2N across the support.
inline std::vector<double> measure_panels(const std::vector<double>& bps, std::size_t n_coeffs) {
    double span = bps.back() - bps.front();
    double max_width = span / std::max<std::size_t>(8, n_coeffs / 4);
    return quad::subdivide(bps, max_width);
}

template <class Density>
ChainCoefficients recurrence_refined(const Density& density, const std::vector<double>& bps,
                                     std::size_t n_coeffs, const std::string& descriptor,
                                     double temperature) {
    std::vector<double> panels = measure_panels(bps, n_coeffs);
    int order = std::max<int>(24, static_cast<int>(20 * n_coeffs / panels.size()) + 1);

    auto compute = [&](int ord) {
        auto dm = quad::discretize(density, panels, ord);
        return recurrence_from_discrete(dm, n_coeffs, descriptor, temperature);
    };

    ChainCoefficients coarse = compute(order);
    for (int round = 0; round < 5; ++round) {
        ChainCoefficients fine = compute(order * 2);
        double worst = 0.0;
        for (std::size_t n = 0; n < n_coeffs; ++n) {
            double scale = std::abs(fine.kappas[n]) + 1e-30;
            worst = std::max(worst, std::abs(fine.omegas[n] - coarse.omegas[n]) / scale);
            worst = std::max(worst, std::abs(fine.kappas[n] - coarse.kappas[n]) / scale);
        }
        if (worst < 1e-11) return fine;
        coarse = std::move(fine);
        order *= 2;
    }
    throw numerical_error("recurrence coefficients: discretization did not converge for N = " +
                          std::to_string(n_coeffs));
}

}  // namespace detail

// Chain coefficients for the measure J(w) dw on (0, cutoff].
inline ChainCoefficients recurrence_coefficients(const SpectralDensity& sd, std::size_t n_coeffs,
                                                 std::string descriptor = "spectral-density") {
    return detail::recurrence_refined([&](double w) { return sd(w); }, sd.breakpoints(), n_coeffs,
                                      descriptor, 0.0);
}

// Chain coefficients for the thermalized measure J_beta(w) dw on its support.
inline ChainCoefficients recurrence_coefficients(const ThermalizedSD& tsd, std::size_t n_coeffs,
                                                 std::string descriptor = "thermalized-density") {
    return detail::recurrence_refined([&](double w) { return tsd(w); }, tsd.breakpoints(), n_coeffs,
                                      descriptor, tsd.temperature());
}

}  // namespace ttedopa
